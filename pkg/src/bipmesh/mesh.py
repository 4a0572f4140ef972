"""Indexed triangle and tetrahedral meshes.

A mesh is a point array plus an element connectivity array. Edge and face
tables are derived lazily and keyed by sorted vertex-index tuples, so keys are
canonical and hashable. Boundary detection is purely combinatorial: a side
(edge in 2-D, face in 3-D) is exterior iff exactly one element owns it.

Meshes built through :func:`build_tri_mesh` / :func:`build_tet_mesh` are
validated and positively oriented. The bare constructors skip validation so
that :func:`check_conformity` can inspect arbitrary input.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import geom
from .errors import DegenerateElement, DuplicateElement, NonConforming, OutOfRangeIndex


class _SimplexMesh:
    dim = 0
    corners = 0

    def __init__(self, points, cells):
        points = np.array(points, dtype=float).reshape(-1, self.dim)
        cells = np.array(cells, dtype=np.int64).reshape(-1, self.corners)
        points.flags.writeable = False
        cells.flags.writeable = False
        self.points = points
        self.cells = cells

    @property
    def n_points(self):
        return len(self.points)

    @property
    def n_cells(self):
        return len(self.cells)

    def __len__(self):
        return len(self.cells)

    def element(self, i):
        """Coordinates of element ``i``, shape ``(corners, dim)``."""
        return self.points[self.cells[i]]

    def elements(self):
        return self.points[self.cells]

    def _table(self, size):
        table = defaultdict(list)
        for k, cell in enumerate(self.cells.tolist()):
            for sub in combinations(sorted(cell), size):
                table[sub].append(k)
        return dict(table)

    @cached_property
    def edges(self):
        """Sorted vertex pair -> list of incident element indices."""
        return self._table(2)

    @property
    def sides(self):
        """The codimension-1 table that defines element adjacency."""
        raise NotImplementedError

    @cached_property
    def vertex_star(self):
        """Vertex index -> list of incident element indices."""
        star = defaultdict(list)
        for k, cell in enumerate(self.cells.tolist()):
            for v in cell:
                star[v].append(k)
        return dict(star)

    def used_vertices(self):
        return sorted(self.vertex_star)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.points.shape == other.points.shape
            and self.cells.shape == other.cells.shape
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(n_points={self.n_points}, n_cells={self.n_cells})"


class TriMesh(_SimplexMesh):
    """Triangulation of a planar domain."""

    dim = 2
    corners = 3

    @property
    def sides(self):
        return self.edges


class TetMesh(_SimplexMesh):
    """Tetrahedral mesh of a 3-D domain."""

    dim = 3
    corners = 4

    @cached_property
    def faces(self):
        """Sorted vertex triple -> list of incident tetrahedron indices."""
        return self._table(3)

    @property
    def sides(self):
        return self.faces


@dataclass(frozen=True)
class Classification:
    """Interior/exterior partition of every entity kind of a mesh.

    Edge and face entries are sorted vertex-index tuples. The face sets are
    ``None`` for triangle meshes.
    """

    exterior_vertices: frozenset
    interior_vertices: frozenset
    exterior_edges: frozenset
    interior_edges: frozenset
    exterior_elements: frozenset
    interior_elements: frozenset
    exterior_faces: frozenset = None
    interior_faces: frozenset = None


@dataclass(frozen=True)
class Violation:
    kind: str
    entity: tuple
    detail: str

    def to_dict(self):
        return {"kind": self.kind, "entity": list(self.entity), "detail": self.detail}


@dataclass
class ConformityReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def by_kind(self, kind):
        return [v for v in self.violations if v.kind == kind]

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _orientations(mesh):
    x = mesh.elements()
    d = x[:, 1:] - x[:, :1]
    if mesh.dim == 2:
        return d[:, 0, 0] * d[:, 1, 1] - d[:, 1, 0] * d[:, 0, 1]
    return np.linalg.det(d)


def _degenerate_cells(mesh):
    s = np.sort(mesh.cells, axis=1)
    repeated = np.any(s[:, 1:] == s[:, :-1], axis=1)
    return repeated | geom.degenerate_mask(mesh.elements())


def _range_violations(mesh):
    out = []
    n = mesh.n_points
    for k, cell in enumerate(mesh.cells.tolist()):
        bad = [v for v in cell if v < 0 or v >= n]
        if bad:
            out.append(Violation("out-of-range", (k,), f"vertex indices {bad} not in [0, {n})"))
    return out


def _ring_is_single_cycle(mesh, star, hinge):
    """Whether the elements around ``hinge`` form one face-connected ring.

    ``hinge`` is an interior vertex (2-D) or interior edge (3-D). Two elements
    of the star are linked when they share a side containing the hinge.
    """
    members = set(star)
    links = defaultdict(set)
    hinge = set(hinge)
    sides = mesh.sides
    for k in star:
        for side in combinations(sorted(mesh.cells[k].tolist()), mesh.corners - 1):
            if hinge <= set(side):
                for n in sides[side]:
                    if n != k:
                        links[k].add(n)
    start = star[0]
    seen = {start}
    todo = [start]
    while todo:
        k = todo.pop()
        for n in links[k]:
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(members) and all(len(links[k]) == 2 for k in members)


def check_conformity(mesh):
    """Collect every conformity violation of ``mesh`` without raising.

    Checks, in order: vertex indices in range, non-degenerate elements,
    duplicate elements, sides owned by more than two elements, and that the
    elements around each interior vertex (2-D) or interior edge (3-D) form a
    single closed ring.

    Returns
    -------
    ConformityReport
    """
    report = ConformityReport(_range_violations(mesh))
    if not report.ok:
        return report

    for k in np.flatnonzero(_degenerate_cells(mesh)).tolist():
        report.violations.append(Violation("degenerate", (k,), "element has no positive measure"))

    seen = {}
    for k, cell in enumerate(mesh.cells.tolist()):
        key = tuple(sorted(cell))
        if key in seen:
            report.violations.append(
                Violation("duplicate", (seen[key], k), f"elements {seen[key]} and {k} share vertex set {key}")
            )
        else:
            seen[key] = k

    sides = mesh.sides
    for side, owners in sides.items():
        if len(owners) > 2:
            report.violations.append(
                Violation("non-manifold", side, f"side shared by {len(owners)} elements {owners}")
            )
    if not report.ok:
        return report

    cls = classify(mesh)
    if mesh.dim == 2:
        for v in sorted(cls.interior_vertices):
            if not _ring_is_single_cycle(mesh, mesh.vertex_star[v], (v,)):
                report.violations.append(
                    Violation("link-not-cycle", (v,), "triangles around interior vertex are not one ring")
                )
    else:
        for e in sorted(cls.interior_edges):
            if not _ring_is_single_cycle(mesh, mesh.edges[e], e):
                report.violations.append(
                    Violation("link-not-cycle", e, "tetrahedra around interior edge are not one ring")
                )
    return report


def _build(cls, points, cells):
    mesh = cls(points, cells)
    if not np.all(np.isfinite(mesh.points)):
        raise DegenerateElement("non-finite point coordinate")
    bad = _range_violations(mesh)
    if bad:
        raise OutOfRangeIndex(bad[0].detail + f" (element {bad[0].entity[0]})")
    bad = np.flatnonzero(_degenerate_cells(mesh))
    if len(bad):
        k = int(bad[0])
        raise DegenerateElement(f"element {k} {mesh.cells[k].tolist()} is degenerate")
    cells = mesh.cells.copy()
    flip = _orientations(mesh) < 0
    cells[flip, 1], cells[flip, 2] = mesh.cells[flip, 2], mesh.cells[flip, 1]
    mesh = cls(mesh.points, cells)
    report = check_conformity(mesh)
    for v in report.violations:
        if v.kind == "duplicate":
            raise DuplicateElement(v.detail)
        if v.kind == "non-manifold":
            raise NonConforming(f"side {v.entity}: {v.detail}")
    return mesh


def build_tri_mesh(points, triangles):
    """Validate and build a triangle mesh.

    Triangles are stored counter-clockwise; clockwise input is reoriented.

    Raises
    ------
    OutOfRangeIndex, DegenerateElement, DuplicateElement, NonConforming
    """
    return _build(TriMesh, points, triangles)


def build_tet_mesh(points, tets):
    """Validate and build a tetrahedral mesh with positively oriented tets."""
    return _build(TetMesh, points, tets)


def classify(mesh):
    """Interior/exterior classification of vertices, edges, faces and elements.

    2-D: an edge is exterior iff one triangle owns it, a vertex iff it ends an
    exterior edge. 3-D: a face is exterior iff one tetrahedron owns it, and
    edges and vertices are exterior iff they lie on an exterior face. In both
    cases an element is exterior iff it owns an exterior side.
    """
    sides = mesh.sides
    ext_sides = {s for s, owners in sides.items() if len(owners) == 1}
    ext_elements = {owners[0] for s, owners in sides.items() if len(owners) == 1}
    all_vertices = set(mesh.vertex_star)
    ext_vertices = {v for s in ext_sides for v in s}
    if mesh.dim == 2:
        ext_edges = ext_sides
    else:
        ext_edges = {e for f in ext_sides for e in combinations(f, 2)}
    all_edges = set(mesh.edges)
    all_elements = set(range(mesh.n_cells))
    result = dict(
        exterior_vertices=frozenset(ext_vertices),
        interior_vertices=frozenset(all_vertices - ext_vertices),
        exterior_edges=frozenset(ext_edges),
        interior_edges=frozenset(all_edges - ext_edges),
        exterior_elements=frozenset(ext_elements),
        interior_elements=frozenset(all_elements - ext_elements),
    )
    if mesh.dim == 3:
        result["exterior_faces"] = frozenset(ext_sides)
        result["interior_faces"] = frozenset(set(sides) - ext_sides)
    return Classification(**result)


def euler_characteristic(mesh):
    """``V - E + F`` in 2-D and ``V - E + F - T`` in 3-D over used vertices."""
    v = len(mesh.vertex_star)
    e = len(mesh.edges)
    if mesh.dim == 2:
        return v - e + mesh.n_cells
    return v - e + len(mesh.faces) - mesh.n_cells


def incidence_counts(mesh):
    """Number of elements around each interior hinge.

    The hinge is an interior vertex for triangle meshes and an interior edge
    for tetrahedral meshes. Keys are vertex indices / sorted edge tuples.
    """
    cls = classify(mesh)
    if mesh.dim == 2:
        return {v: len(mesh.vertex_star[v]) for v in sorted(cls.interior_vertices)}
    return {e: len(mesh.edges[e]) for e in sorted(cls.interior_edges)}
