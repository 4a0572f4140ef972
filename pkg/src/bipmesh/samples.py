"""Deterministic sample meshes.

===============  ======  ===================================================
name             param   mesh
===============  ======  ===================================================
``fan``          ``j``   ``j`` triangles around one interior vertex
``strip``        ``n``   ``n`` triangles in a zig-zag row (no interior vertex)
``square-grid``  ``n``   unit square, ``n x n`` cells, one diagonal each
``l-shape``      ``n``   three unit squares in an L, ``n x n`` cells each
``tent``         ``j``   ``j`` tetrahedra around one interior edge
``cube5``                unit cube in 5 tetrahedra
``cube6``                unit cube in 6 tetrahedra around its main diagonal
``tet``                  the unit corner tetrahedron
===============  ======  ===================================================
"""

import math
from itertools import permutations

import numpy as np

from .errors import InvalidParam
from .mesh import build_tet_mesh, build_tri_mesh

DEFAULTS = {
    "fan": {"j": 6},
    "strip": {"n": 4},
    "square-grid": {"n": 2},
    "l-shape": {"n": 1},
    "tent": {"j": 4},
    "cube5": {},
    "cube6": {},
    "tet": {},
}

NAMES = tuple(DEFAULTS)


def _ring(j):
    angles = 2.0 * math.pi * np.arange(j) / j
    return np.column_stack([np.cos(angles), np.sin(angles)])


def fan(j):
    """Radial triangulation: vertex 0 at the origin, ``j`` rim points on the unit circle."""
    if j < 3:
        raise InvalidParam(f"a fan needs at least 3 triangles, got j={j}")
    points = np.vstack([[0.0, 0.0], _ring(j)])
    cells = [(0, 1 + k, 1 + (k + 1) % j) for k in range(j)]
    return build_tri_mesh(points, cells)


def strip(n):
    if n < 1:
        raise InvalidParam(f"a strip needs at least 1 triangle, got n={n}")
    points = [(0.5 * i, float(i % 2)) for i in range(n + 2)]
    return build_tri_mesh(points, [(i, i + 1, i + 2) for i in range(n)])


def _grid(n, keep):
    """Triangulate the cells ``(i, j)`` of a lattice with spacing ``1/n`` kept by ``keep``."""
    squares = [(i, j) for j in range(2 * n) for i in range(2 * n) if keep(i, j)]
    corners = sorted(
        {(i + di, j + dj) for i, j in squares for di in (0, 1) for dj in (0, 1)},
        key=lambda ij: (ij[1], ij[0]),
    )
    index = {c: k for k, c in enumerate(corners)}
    points = np.array(corners, dtype=float) / n
    cells = []
    for i, j in squares:
        a, b, c, d = index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]
        cells.append((a, b, c))
        cells.append((a, c, d))
    return build_tri_mesh(points, cells)


def square_grid(n):
    if n < 1:
        raise InvalidParam(f"square-grid needs n >= 1, got n={n}")
    return _grid(n, lambda i, j: i < n and j < n)


def l_shape(n):
    """``[0, 2]^2`` minus ``[1, 2]^2``."""
    if n < 1:
        raise InvalidParam(f"l-shape needs n >= 1, got n={n}")
    return _grid(n, lambda i, j: not (i >= n and j >= n))


def tent(j):
    """``j`` tetrahedra sharing the pole edge from the origin to ``(0, 0, 1)``.

    The fan of ``j`` triangles in the plane ``z = 0`` is lifted by joining
    every triangle to the apex, so the pole is the only interior edge.
    """
    if j < 3:
        raise InvalidParam(f"a tent needs at least 3 tetrahedra, got j={j}")
    ring = np.column_stack([_ring(j), np.zeros(j)])
    points = np.vstack([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], ring])
    cells = [(0, 2 + k, 2 + (k + 1) % j, 1) for k in range(j)]
    return build_tet_mesh(points, cells)


def _cube_points():
    # vertex index = x + 2y + 4z
    return np.array([(i & 1, (i >> 1) & 1, (i >> 2) & 1) for i in range(8)], dtype=float)


def cube5():
    cells = [(0, 3, 5, 6), (1, 0, 3, 5), (2, 0, 3, 6), (4, 0, 5, 6), (7, 3, 5, 6)]
    return build_tet_mesh(_cube_points(), cells)


def cube6():
    cells = []
    for axes in permutations(range(3)):
        a, b = 1 << axes[0], 1 << axes[1]
        cells.append((0, a, a | b, 7))
    return build_tet_mesh(_cube_points(), cells)


def unit_tet():
    return build_tet_mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])


_BUILDERS = {
    "fan": lambda p: fan(p["j"]),
    "strip": lambda p: strip(p["n"]),
    "square-grid": lambda p: square_grid(p["n"]),
    "l-shape": lambda p: l_shape(p["n"]),
    "tent": lambda p: tent(p["j"]),
    "cube5": lambda p: cube5(),
    "cube6": lambda p: cube6(),
    "tet": lambda p: unit_tet(),
}


def sample_mesh(name, **params):
    """Build a named sample mesh, e.g. ``sample_mesh("fan", j=3)``.

    Raises
    ------
    InvalidParam
        Unknown name, unknown parameter or out-of-range value.
    """
    key = name.replace("_", "-").lower()
    if key not in DEFAULTS:
        raise InvalidParam(f"unknown sample {name!r}; choose from {', '.join(NAMES)}")
    unknown = set(params) - set(DEFAULTS[key])
    if unknown:
        raise InvalidParam(f"sample {key!r} takes no parameter(s) {sorted(unknown)}")
    merged = dict(DEFAULTS[key], **params)
    for k, v in merged.items():
        if isinstance(v, bool) or int(v) != v:
            raise InvalidParam(f"parameter {k} must be an integer, got {v!r}")
        merged[k] = int(v)
    return _BUILDERS[key](merged)
