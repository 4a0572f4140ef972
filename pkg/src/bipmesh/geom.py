"""Coordinate-level primitives for triangles and tetrahedra.

Every function takes the simplex as an array-like of vertex coordinates,
shape ``(3, d)`` for a triangle (``d`` = 2 or 3) and ``(4, 3)`` for a
tetrahedron, and is pure.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateElement

#: Relative degeneracy threshold. A triangle needs ``|area| > EPS * h**2``,
#: a tetrahedron ``|volume| > EPS * h**3``, with ``h`` the longest edge.
EPS_DEGENERATE = 1e-12


@dataclass(frozen=True)
class TriangleMeasures:
    area: float
    diameter: float
    inradius: float
    circumradius: float


@dataclass(frozen=True)
class TetMeasures:
    volume: float
    diameter: float
    inradius: float
    circumradius: float
    edge_sq_sum: float


def _simplex(vertices, n_vertices):
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] != n_vertices:
        raise ValueError(f"expected {n_vertices} vertices, got array of shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DegenerateElement("non-finite vertex coordinate")
    return v


def edge_lengths(vertices):
    """Lengths of all vertex pairs, in ``itertools.combinations`` order."""
    v = np.asarray(vertices, dtype=float)
    return np.array([np.linalg.norm(v[i] - v[j]) for i, j in combinations(range(len(v)), 2)])


def diameter(vertices):
    """Longest edge; this is the exact diameter of a simplex."""
    return float(edge_lengths(vertices).max())


def signed_area(tri):
    """Signed area of a planar triangle, positive for counter-clockwise order."""
    (x0, y0), (x1, y1), (x2, y2) = np.asarray(tri, dtype=float)[:, :2]
    return float(0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)))


def triangle_area(tri):
    v = np.asarray(tri, dtype=float)
    if v.shape[1] == 2:
        return float(abs(signed_area(v)))
    return 0.5 * float(np.linalg.norm(np.cross(v[1] - v[0], v[2] - v[0])))


def signed_volume(tet):
    """Signed volume, positive when ``(v1-v0, v2-v0, v3-v0)`` is right-handed."""
    v = np.asarray(tet, dtype=float)
    return float(np.linalg.det(v[1:] - v[0])) / 6.0


def is_degenerate(vertices):
    """True if the triangle/tetrahedron fails the relative measure threshold."""
    v = np.asarray(vertices, dtype=float)
    if not np.all(np.isfinite(v)):
        return True
    h = diameter(v)
    if h == 0.0:
        return True
    if len(v) == 3:
        return triangle_area(v) <= EPS_DEGENERATE * h**2
    if len(v) == 4:
        return abs(signed_volume(v)) <= EPS_DEGENERATE * h**3
    raise ValueError(f"not a triangle or tetrahedron: {len(v)} vertices")


def degenerate_mask(simplices):
    """Vectorised :func:`is_degenerate` over an ``(m, k, d)`` stack of simplices."""
    x = np.asarray(simplices, dtype=float)
    m, k = x.shape[:2]
    if m == 0:
        return np.zeros(0, dtype=bool)
    pairs = list(combinations(range(k), 2))
    diffs = np.stack([x[:, i] - x[:, j] for i, j in pairs], axis=1)
    h = np.sqrt(np.einsum("mpd,mpd->mp", diffs, diffs).max(axis=1))
    d = x[:, 1:] - x[:, :1]
    if k == 3:
        if x.shape[2] == 2:
            measure = 0.5 * np.abs(d[:, 0, 0] * d[:, 1, 1] - d[:, 1, 0] * d[:, 0, 1])
        else:
            measure = 0.5 * np.linalg.norm(np.cross(d[:, 0], d[:, 1]), axis=1)
        threshold = EPS_DEGENERATE * h**2
    else:
        measure = np.abs(np.linalg.det(d)) / 6.0
        threshold = EPS_DEGENERATE * h**3
    finite = np.all(np.isfinite(x), axis=(1, 2))
    with np.errstate(invalid="ignore"):
        return ~finite | (h == 0.0) | ~(measure > threshold)


def _require_nondegenerate(v):
    if is_degenerate(v):
        raise DegenerateElement(f"degenerate {'triangle' if len(v) == 3 else 'tetrahedron'}")


def barycenter(vertices):
    """Arithmetic mean of the vertices of a non-degenerate triangle or tetrahedron.

    >>> barycenter([(0, 0), (1, 0), (0, 1)]).tolist()
    [0.3333333333333333, 0.3333333333333333]
    """
    v = np.asarray(vertices, dtype=float)
    v = _simplex(v, len(v))
    _require_nondegenerate(v)
    return v.mean(axis=0)


def incenter(tri):
    """Incenter of a triangle: vertices weighted by the opposite edge lengths."""
    v = _simplex(tri, 3)
    _require_nondegenerate(v)
    a = np.linalg.norm(v[1] - v[2])
    b = np.linalg.norm(v[2] - v[0])
    c = np.linalg.norm(v[0] - v[1])
    return (a * v[0] + b * v[1] + c * v[2]) / (a + b + c)


def triangle_measures(tri):
    """Area, diameter, inradius and circumradius of a triangle.

    Parameters
    ----------
    tri : (3, d) array_like
        Vertex coordinates, ``d`` = 2 or 3.

    Returns
    -------
    TriangleMeasures

    Raises
    ------
    DegenerateElement
        If the triangle is degenerate.
    """
    v = _simplex(tri, 3)
    _require_nondegenerate(v)
    a, b, c = edge_lengths(v).tolist()
    area = float(triangle_area(v))
    return TriangleMeasures(
        area=area,
        diameter=float(max(a, b, c)),
        inradius=area / (0.5 * (a + b + c)),
        circumradius=a * b * c / (4.0 * area),
    )


def circumcenter_tet(tet):
    v = _simplex(tet, 4)
    _require_nondegenerate(v)
    d = v[1:] - v[0]
    try:
        x = np.linalg.solve(2.0 * d, np.einsum("ij,ij->i", d, d))
    except np.linalg.LinAlgError as exc:
        raise DegenerateElement("circumsphere system is singular") from exc
    if not np.all(np.isfinite(x)):
        raise DegenerateElement("circumsphere system is singular")
    return v[0] + x


def tet_measures(tet):
    """Volume, diameter, inradius, circumradius and squared-edge sum of a tetrahedron.

    The inradius is ``3 * volume / surface_area``; the circumradius comes from
    solving the circumcenter linear system.
    """
    v = _simplex(tet, 4)
    _require_nondegenerate(v)
    lengths = edge_lengths(v)
    volume = abs(signed_volume(v))
    surface = sum(triangle_area(v[list(f)]) for f in combinations(range(4), 3))
    center = circumcenter_tet(v)
    return TetMeasures(
        volume=volume,
        diameter=float(lengths.max()),
        inradius=3.0 * volume / surface,
        circumradius=float(np.linalg.norm(center - v[0])),
        edge_sq_sum=float(np.sum(lengths**2)),
    )
