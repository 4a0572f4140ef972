import numpy as np
import pytest

from bipmesh import geom
from bipmesh.errors import DegenerateElement, DuplicateElement, NonConforming, OutOfRangeIndex
from bipmesh.mesh import (
    TetMesh,
    TriMesh,
    build_tet_mesh,
    build_tri_mesh,
    check_conformity,
    classify,
    euler_characteristic,
    incidence_counts,
)
from bipmesh.samples import sample_mesh
from helpers import enumerate_entities, random_delaunay_2d, random_delaunay_3d

SQUARE = ([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1, 2), (0, 2, 3)])


def pinched_double_tent():
    """Six tets around edge (0, 1) forming two separate rings of three."""
    pts = [(0, 0, 0), (0, 0, 1)]
    for k in range(3):
        a = 2 * np.pi * k / 3
        pts.append((np.cos(a), np.sin(a), 0.3))
    for k in range(3):
        a = 2 * np.pi * k / 3 + 0.5
        pts.append((2 * np.cos(a), 2 * np.sin(a), 0.6))
    cells = [(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 2), (0, 1, 5, 6), (0, 1, 6, 7), (0, 1, 7, 5)]
    return build_tet_mesh(pts, cells)


class TestBuildTriMesh:
    def test_unit_square(self):
        m = build_tri_mesh(*SQUARE)
        assert len(m.edges) == 5
        assert m.edges[(0, 2)] == [0, 1]
        assert sum(len(v) == 1 for v in m.edges.values()) == 4

    def test_single_triangle(self):
        m = build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
        assert len(m.edges) == 3
        assert all(len(v) == 1 for v in m.edges.values())

    def test_reorients_clockwise(self):
        m = build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 2, 1)])
        assert geom.signed_area(m.element(0)) > 0
        assert sorted(m.cells[0].tolist()) == [0, 1, 2]

    def test_three_triangles_on_one_edge(self):
        pts = [(0, 0), (1, 0), (0.5, 1), (0.5, -1), (0.5, 2)]
        with pytest.raises(NonConforming):
            build_tri_mesh(pts, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])

    def test_errors(self):
        with pytest.raises(OutOfRangeIndex):
            build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 3)])
        with pytest.raises(DegenerateElement):
            build_tri_mesh([(0, 0), (1, 0), (2, 0)], [(0, 1, 2)])
        with pytest.raises(DegenerateElement):
            build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 1)])
        with pytest.raises(DuplicateElement):
            build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2), (2, 0, 1)])

    def test_empty_mesh_allowed(self):
        m = build_tri_mesh(np.zeros((0, 2)), np.zeros((0, 3), dtype=int))
        assert m.n_cells == 0 and euler_characteristic(m) == 0

    def test_immutable(self):
        m = build_tri_mesh(*SQUARE)
        with pytest.raises(ValueError):
            m.points[0, 0] = 5.0


class TestBuildTetMesh:
    def test_single(self):
        m = sample_mesh("tet")
        assert len(m.faces) == 4
        assert all(len(v) == 1 for v in m.faces.values())
        assert geom.signed_volume(m.element(0)) > 0

    def test_reorients(self):
        m = build_tet_mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 2, 1, 3)])
        assert geom.signed_volume(m.element(0)) > 0

    def test_cube5_faces_by_enumeration(self):
        m = sample_mesh("cube5")
        ent = enumerate_entities(m)
        assert len(ent[3]) == len(m.faces) == 16
        cls = classify(m)
        assert len(cls.exterior_faces) == 12
        assert len(cls.interior_faces) == 4
        assert len(ent[2]) == 18

    def test_edge_sharing_only(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0.5), (0, -1, 0.5), (0.5, 1, -1), (0.5, -1, -1)]
        m = build_tet_mesh(pts, [(0, 1, 2, 4), (0, 1, 3, 5)])
        assert m.edges[(0, 1)] == [0, 1]
        assert all(len(v) == 1 for v in m.faces.values())
        assert check_conformity(m).ok

    def test_non_manifold_face(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1), (1, 1, 1)]
        with pytest.raises(NonConforming):
            build_tet_mesh(pts, [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)])


class TestClassify:
    def test_fan4(self):
        cls = classify(sample_mesh("fan", j=4))
        assert cls.interior_vertices == {0}
        assert len(cls.interior_edges) == 4
        assert cls.exterior_elements == {0, 1, 2, 3}

    def test_tent4_single_interior_edge(self):
        cls = classify(sample_mesh("tent", j=4))
        assert cls.interior_edges == {(0, 1)}
        assert cls.interior_vertices == frozenset()

    def test_single_triangle(self):
        cls = classify(build_tri_mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)]))
        assert not cls.interior_vertices and not cls.interior_edges and not cls.interior_elements

    def test_square_grid_interior(self):
        cls = classify(sample_mesh("square-grid", n=3))
        assert len(cls.interior_vertices) == 4
        m = sample_mesh("square-grid", n=3)

        def on_boundary(a, b):
            pa, pb = m.points[a], m.points[b]
            return any(pa[d] == pb[d] and pa[d] in (0.0, 1.0) for d in range(2))

        geometric = {
            k for k, c in enumerate(m.cells.tolist())
            if any(on_boundary(c[i], c[(i + 1) % 3]) for i in range(3))
        }
        assert cls.exterior_elements == geometric
        assert len(cls.interior_elements) == 8

    @pytest.mark.parametrize("seed", range(5))
    def test_partition_and_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        for m in (random_delaunay_2d(rng, 25), random_delaunay_3d(rng, 15)):
            cls = classify(m)
            ent = enumerate_entities(m)
            assert len(cls.interior_vertices) + len(cls.exterior_vertices) == len(ent[1])
            assert len(cls.interior_edges) + len(cls.exterior_edges) == len(ent[2])
            assert len(cls.interior_elements) + len(cls.exterior_elements) == m.n_cells
            if m.dim == 3:
                assert len(cls.interior_faces) + len(cls.exterior_faces) == len(ent[3])
                for f in cls.exterior_faces:
                    assert {(f[0], f[1]), (f[0], f[2]), (f[1], f[2])} <= cls.exterior_edges
            perm = rng.permutation(m.n_cells)
            m2 = type(m)(m.points, m.cells[perm])
            cls2 = classify(m2)
            assert cls2.interior_vertices == cls.interior_vertices
            assert cls2.interior_edges == cls.interior_edges
            assert {int(perm[k]) for k in cls2.interior_elements} == set(cls.interior_elements)
            assert classify(m) == cls

    def test_incidence_counts(self):
        assert incidence_counts(sample_mesh("fan", j=5)) == {0: 5}
        assert incidence_counts(sample_mesh("tent", j=7)) == {(0, 1): 7}
        assert incidence_counts(sample_mesh("cube6")) == {(0, 7): 6}


class TestConformity:
    def test_tent3_ok(self):
        assert check_conformity(sample_mesh("tent", j=3)).ok

    def test_open_tent_pole_is_exterior(self):
        full = sample_mesh("tent", j=6)
        opened = build_tet_mesh(full.points, full.cells[:5])
        assert (0, 1) in classify(opened).exterior_edges
        assert check_conformity(opened).ok

    def test_pinched_interior_edge(self):
        m = pinched_double_tent()
        assert (0, 1) in classify(m).interior_edges
        report = check_conformity(m)
        assert [v.entity for v in report.by_kind("link-not-cycle")] == [(0, 1)]

    def test_pinched_interior_vertex_2d(self):
        # two separate rings of 3 triangles around vertex 0
        pts = [(0, 0), (1, 0), (-0.5, 0.8), (-0.5, -0.8), (2, 0.1), (-1, 1.7), (-1, -1.7)]
        cells = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (0, 4, 5), (0, 5, 6), (0, 6, 4)]
        m = TriMesh(pts, cells)
        report = check_conformity(m)
        assert [v.entity for v in report.by_kind("link-not-cycle")] == [(0,)]

    def test_reports_without_raising(self):
        m = TriMesh([(0, 0), (1, 0), (2, 0), (0, 1)], [(0, 1, 2), (0, 1, 3), (0, 1, 3), (0, 1, 5)])
        assert check_conformity(m).by_kind("out-of-range")
        m = TriMesh([(0, 0), (1, 0), (2, 0), (0, 1)], [(0, 1, 2), (0, 1, 3), (1, 3, 0)])
        kinds = {v.kind for v in check_conformity(m).violations}
        assert kinds == {"degenerate", "duplicate", "non-manifold"}

    def test_samples_clean(self):
        for name, p in [("fan", {"j": 7}), ("strip", {"n": 9}), ("square-grid", {"n": 4}),
                        ("l-shape", {"n": 3}), ("tent", {"j": 5}), ("cube5", {}), ("cube6", {}), ("tet", {})]:
            assert check_conformity(sample_mesh(name, **p)).ok


class TestEuler:
    def test_square(self):
        assert euler_characteristic(build_tri_mesh(*SQUARE)) == 1

    def test_cube5_by_enumeration(self):
        m = sample_mesh("cube5")
        ent = enumerate_entities(m)
        chi = len(ent[1]) - len(ent[2]) + len(ent[3]) - len(ent[4])
        assert chi == 1 == euler_characteristic(m)

    def test_two_disjoint_triangles(self):
        m = build_tri_mesh([(0, 0), (1, 0), (0, 1), (5, 5), (6, 5), (5, 6)], [(0, 1, 2), (3, 4, 5)])
        assert euler_characteristic(m) == 2

    def test_annulus(self):
        # square ring of 8 quads -> 16 triangles around a hole
        outer = [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (0, 3), (0, 2), (0, 1)]
        inner = [(1, 1), (2, 1), (2, 2), (1, 2)]
        pts = outer + inner
        o = lambda x, y: pts.index((x, y))
        cells = []
        for x in range(3):
            for y in range(3):
                if (x, y) == (1, 1):
                    continue
                a, b, c, d = o(x, y), o(x + 1, y), o(x + 1, y + 1), o(x, y + 1)
                cells += [(a, b, c), (a, c, d)]
        m = build_tri_mesh(pts, cells)
        assert euler_characteristic(m) == 0

    @pytest.mark.parametrize("seed", range(3))
    def test_random_by_enumeration(self, seed):
        rng = np.random.default_rng(100 + seed)
        for m in (random_delaunay_2d(rng, 30), random_delaunay_3d(rng, 14)):
            ent = enumerate_entities(m)
            chi = sum((-1) ** (k - 1) * len(ent[k]) for k in ent)
            assert euler_characteristic(m) == chi == 1


def test_bare_constructor_equality():
    a = TetMesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])
    assert a == sample_mesh("tet")
    assert a != TriMesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
