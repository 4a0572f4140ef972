"""Test-only mesh factories and independent oracles."""

from itertools import combinations, product

import numpy as np
from scipy.spatial import Delaunay
from scipy.spatial.transform import Rotation

from bipmesh.errors import MeshError
from bipmesh.mesh import build_tet_mesh, build_tri_mesh

REGULAR_TET = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
UNIT_TET = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
EQUILATERAL = np.array([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])


def random_delaunay_2d(rng, n_points):
    """Delaunay triangulation of random points in the unit square, or None."""
    pts = rng.random((n_points, 2))
    try:
        tri = Delaunay(pts)
        return build_tri_mesh(pts, tri.simplices)
    except (MeshError, ValueError, RuntimeError):
        return None


def random_delaunay_3d(rng, n_points):
    pts = rng.random((n_points, 3))
    try:
        tri = Delaunay(pts)
        return build_tet_mesh(pts, tri.simplices)
    except (MeshError, ValueError, RuntimeError):
        return None


def random_tet(rng):
    """Vertices uniform in the unit cube, resampled until clearly non-degenerate."""
    while True:
        t = rng.random((4, 3))
        h = max(np.linalg.norm(t[i] - t[j]) for i, j in combinations(range(4), 2))
        if abs(np.linalg.det(t[1:] - t[0])) / 6 > 1e-9 * h**3:
            return t


def random_similarity(rng, dim):
    """Random rotation (possibly with reflection), scale and shift as a callable."""
    if dim == 2:
        a = rng.uniform(0, 2 * np.pi)
        rot = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
    else:
        rot = Rotation.random(random_state=rng).as_matrix()
    if rng.random() < 0.5:
        rot = rot @ np.diag([-1.0] + [1.0] * (dim - 1))
    scale = float(rng.uniform(0.1, 10.0))
    shift = rng.uniform(-5, 5, size=dim)
    return scale, lambda x: scale * np.asarray(x) @ rot.T + shift


def brute_force_bipartite(n, arcs):
    """Exhaustive search over all 2**n colorings; only for small graphs."""
    for bits in product((0, 1), repeat=n):
        if all(bits[a] != bits[b] for a, b in arcs):
            return True
    return False


def enumerate_entities(mesh):
    """Vertex, edge, face and cell sets by brute enumeration of sub-simplices."""
    cells = [frozenset(c) for c in mesh.cells.tolist()]
    out = {}
    for size in range(1, mesh.corners + 1):
        out[size] = {frozenset(s) for c in cells for s in combinations(sorted(c), size)}
    return out


def point_in_simplex(simplex, p, tol=1e-12):
    """Barycentric containment test with a small tolerance."""
    s = np.asarray(simplex, dtype=float)
    a = np.vstack([s.T, np.ones(len(s))])
    lam = np.linalg.solve(a, np.append(p, 1.0))
    return bool(np.all(lam >= -tol))
