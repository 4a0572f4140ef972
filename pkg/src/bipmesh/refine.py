"""Bipartite gridding and red refinement.

New vertices are identified combinatorially. Every refined vertex carries a
:class:`ProvenanceKey` naming the input-mesh vertices it averages, so a
midpoint or barycenter shared by neighbouring parents is created exactly once
and no floating-point coordinate matching is involved.

Output ordering is deterministic: input vertices keep their indices, new
vertices are appended in order of first use while parents are visited in
order, and children of one parent are contiguous.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import geom
from .mesh import build_tet_mesh, build_tri_mesh

ORIGINAL_VERTEX = "original-vertex"
EDGE_MIDPOINT = "edge-midpoint"
FACE_BARYCENTER = "face-barycenter"
CELL_CENTROID = "cell-centroid"
# experimental 2-D variant; not an average of its parents
TRIANGLE_INCENTER = "triangle-incenter"


@dataclass(frozen=True, order=True)
class ProvenanceKey:
    kind: str
    parent_ids: tuple

    def to_dict(self):
        return {"kind": self.kind, "parents": list(self.parent_ids)}


_KIND_BY_SIZE = {1: ORIGINAL_VERTEX, 2: EDGE_MIDPOINT, 3: FACE_BARYCENTER, 4: CELL_CENTROID}


@dataclass(frozen=True)
class RefinementRecord:
    """Parent -> children map plus provenance of every output vertex.

    ``children[p]`` lists the output elements tiling input element ``p``.
    ``provenance[v]`` describes output vertex ``v`` in terms of the vertex
    indices of the mesh fed to the last refinement step.
    """

    children: tuple
    provenance: tuple
    levels: int = 1

    def compose(self, later):
        """Record of applying ``self`` and then ``later``."""
        children = tuple(
            tuple(g for c in kids for g in later.children[c]) for kids in self.children
        )
        return RefinementRecord(children, later.provenance, self.levels + later.levels)


class _VertexTable:
    """Output point list with provenance-keyed deduplication."""

    def __init__(self, points):
        self.points = [np.asarray(p, dtype=float) for p in points]
        self.keys = [ProvenanceKey(ORIGINAL_VERTEX, (i,)) for i in range(len(points))]
        self._index = {k: i for i, k in enumerate(self.keys)}
        self._source = np.asarray(points, dtype=float)

    def average(self, ids):
        ids = tuple(sorted(ids))
        key = ProvenanceKey(_KIND_BY_SIZE[len(ids)], ids)
        idx = self._index.get(key)
        if idx is None:
            idx = self._add(key, self._source[list(ids)].mean(axis=0))
        return idx

    def special(self, key, point):
        idx = self._index.get(key)
        if idx is None:
            idx = self._add(key, point)
        return idx

    def _add(self, key, point):
        idx = len(self.points)
        self.points.append(point)
        self.keys.append(key)
        self._index[key] = idx
        return idx


def _check_center(center):
    if center not in ("barycenter", "incenter"):
        raise ValueError(f"center must be 'barycenter' or 'incenter', got {center!r}")


def bipartite_grid_triangle(tri, center="barycenter"):
    """Split a triangle into six children along its three medians.

    Children are ``(v_i, m_i, b)`` and ``(m_i, v_{i+1}, b)`` for ``i = 0, 1, 2``,
    where ``m_i`` is the midpoint of edge ``v_i v_{i+1}`` and ``b`` the
    barycenter, so they are listed counter-clockwise around ``b`` for a
    counter-clockwise parent. Each child has one sixth of the parent's area.

    Parameters
    ----------
    tri : (3, d) array_like
    center : {'barycenter', 'incenter'}
        ``'incenter'`` replaces the barycenter with the incenter and joins it
        to the edge midpoints (experimental: equal areas no longer hold).

    Returns
    -------
    ndarray, shape (6, 3, d)
    """
    _check_center(center)
    v = np.asarray(tri, dtype=float)
    b = geom.barycenter(v) if center == "barycenter" else geom.incenter(v)
    out = []
    for i in range(3):
        a, c = v[i], v[(i + 1) % 3]
        m = 0.5 * (a + c)
        out.append((a, m, b))
        out.append((m, c, b))
    return np.array(out)


def _tri_children(i, j, k, table, center_idx):
    m_ij = table.average((i, j))
    m_jk = table.average((j, k))
    m_ki = table.average((k, i))
    return [
        (i, m_ij, center_idx),
        (m_ij, j, center_idx),
        (j, m_jk, center_idx),
        (m_jk, k, center_idx),
        (k, m_ki, center_idx),
        (m_ki, i, center_idx),
    ]


def bipartite_refine_2d(mesh, center="barycenter"):
    """Apply bipartite gridding to every triangle of ``mesh``.

    The result has six times as many triangles and its element graph is
    bipartite. Around each interior vertex of the result the triangle count
    is 6 (new centers), 4 (midpoints of interior edges) or twice the old
    count (old interior vertices).

    Returns
    -------
    (TriMesh, RefinementRecord)
    """
    _check_center(center)
    table = _VertexTable(mesh.points)
    cells = []
    children = []
    for p, (i, j, k) in enumerate(mesh.cells.tolist()):
        if center == "barycenter":
            c = table.average((i, j, k))
        else:
            c = table.special(
                ProvenanceKey(TRIANGLE_INCENTER, tuple(sorted((i, j, k)))),
                geom.incenter(mesh.points[[i, j, k]]),
            )
        first = len(cells)
        cells.extend(_tri_children(i, j, k, table, c))
        children.append(tuple(range(first, len(cells))))
    refined = build_tri_mesh(np.array(table.points).reshape(-1, 2), cells)
    return refined, RefinementRecord(tuple(children), tuple(table.keys))


def _red_step(mesh):
    table = _VertexTable(mesh.points)
    cells = []
    children = []
    for i, j, k in mesh.cells.tolist():
        m_ij = table.average((i, j))
        m_jk = table.average((j, k))
        m_ki = table.average((k, i))
        first = len(cells)
        cells.extend([(i, m_ij, m_ki), (m_ij, j, m_jk), (m_ki, m_jk, k), (m_jk, m_ki, m_ij)])
        children.append(tuple(range(first, len(cells))))
    refined = build_tri_mesh(np.array(table.points).reshape(-1, 2), cells)
    return refined, RefinementRecord(tuple(children), tuple(table.keys))


def red_refine_2d(mesh, levels=1):
    """Red (self-similar) refinement repeated ``levels`` times.

    Each level splits every triangle into four similar triangles through its
    edge midpoints: the mesh size halves and the regularity is unchanged.
    Only triangle meshes are supported.
    """
    if mesh.dim != 2:
        raise TypeError("red refinement is only defined for triangle meshes")
    if int(levels) != levels or levels < 1:
        raise ValueError(f"levels must be a positive integer, got {levels!r}")
    mesh, record = _red_step(mesh)
    for _ in range(int(levels) - 1):
        mesh, nxt = _red_step(mesh)
        record = record.compose(nxt)
    return mesh, record


def _tet_children(cell, table):
    out = []
    for perm in permutations(range(4)):
        ids = [cell[p] for p in perm]
        out.append((
            ids[0],
            table.average(ids[:2]),
            table.average(ids[:3]),
            table.average(ids),
        ))
    return out


def bipartite_grid_tet(tet):
    """The 24 children of a tetrahedron, one per vertex permutation.

    The child for permutation ``p`` is spanned by vertex ``p[0]``, the midpoint
    of edge ``p[0]p[1]``, the barycenter of face ``p[0]p[1]p[2]`` and the
    centroid. Permutations are taken in lexicographic order. Every child has
    volume ``|tet| / 24``; orientation is not normalised here.

    Returns
    -------
    ndarray, shape (24, 4, 3)
    """
    v = np.asarray(tet, dtype=float)
    geom.barycenter(v)  # raises on degenerate input
    out = []
    for perm in permutations(range(4)):
        w = v[list(perm)]
        out.append([w[0], w[:2].mean(axis=0), w[:3].mean(axis=0), w.mean(axis=0)])
    return np.array(out)


def bipartite_refine_3d(mesh):
    """Apply the 24-way bipartite gridding to every tetrahedron of ``mesh``.

    Children are reoriented to positive volume (odd permutations produce
    negatively oriented vertex lists).

    Returns
    -------
    (TetMesh, RefinementRecord)
    """
    table = _VertexTable(mesh.points)
    cells = []
    children = []
    for cell in mesh.cells.tolist():
        first = len(cells)
        cells.extend(_tet_children(cell, table))
        children.append(tuple(range(first, len(cells))))
    refined = build_tet_mesh(np.array(table.points).reshape(-1, 3), cells)
    return refined, RefinementRecord(tuple(children), tuple(table.keys))


def bipartite_refine(mesh, center="barycenter"):
    """Dimension-dispatching bipartite refinement."""
    if mesh.dim == 2:
        return bipartite_refine_2d(mesh, center=center)
    if center != "barycenter":
        raise ValueError("the incenter variant exists only for triangle meshes")
    return bipartite_refine_3d(mesh)


def bipartite_then_red(mesh, levels, center="barycenter"):
    """Bipartite gridding followed by ``levels`` red refinements (2-D only)."""
    mesh, record = bipartite_refine_2d(mesh, center=center)
    if levels:
        mesh, later = red_refine_2d(mesh, levels)
        record = record.compose(later)
    return mesh, record
