"""Exact geometry kernel: hulls, faces, measures, lattice operations."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tfk import exactgeom as eg
from tfk.errors import EmptyInput, MixedDimensions, ZeroNormal, ZeroVector

from conftest import shoelace_area, shoelace_centroid, random_unimodular

DIAMOND = [(-1, 0), (1, 0), (0, -1), (0, 1)]


class TestHull:
    def test_diamond_with_interior_point(self):
        p = eg.hull(DIAMOND + [(0, 0)])
        assert p.vertices == tuple(sorted(map(eg.as_vec, DIAMOND)))

    def test_single_point(self):
        p = eg.hull([(0, 0)])
        assert p.affine_hull_dim == 0
        assert p.vertices == (eg.as_vec((0, 0)),)

    def test_unit_square_has_four_facets(self):
        p = eg.hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert len(p.inequalities) == 4
        assert all(v in p.vertices for v in map(eg.as_vec, [(0, 0), (1, 0), (0, 1), (1, 1)]))

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            eg.hull([])

    def test_mixed_dimensions(self):
        with pytest.raises(MixedDimensions):
            eg.hull([(0,), (0, 1)])

    def test_representations_regenerate_each_other(self):
        p = eg.hull(DIAMOND)
        assert eg.from_halfspaces(p.halfspaces, 2) == p
        assert eg.hull(p.vertices) == p


class TestFace:
    def test_vertex_minimizer(self):
        f = eg.face(eg.hull(DIAMOND), (0, 1))
        assert f.vertices == (eg.as_vec((0, -1)),)

    def test_edge_minimizer(self):
        f = eg.face(eg.hull(DIAMOND), (1, 1))
        assert f.vertices == tuple(sorted(map(eg.as_vec, [(0, -1), (-1, 0)])))

    def test_zero_functional_returns_whole_polytope(self):
        p = eg.hull(DIAMOND)
        assert eg.face(p, (0, 0)) == p

    def test_face_contains_only_minimizers(self):
        p = eg.hull(DIAMOND)
        u = (2, 1)
        f = eg.face(p, u)
        best = min(eg.dot(eg.as_vec(u), v) for v in p.vertices)
        assert all(eg.dot(eg.as_vec(u), v) == best for v in f.vertices)


class TestTriangulate:
    def test_diamond_two_triangles(self):
        tris = eg.triangulate(eg.hull(DIAMOND))
        assert len(tris) == 2
        assert all(eg.simplex_volume(s) == 1 for s in tris)

    def test_simplex_is_itself(self):
        s = eg.hull([(0, 0), (1, 0), (0, 1)])
        tris = eg.triangulate(s)
        assert len(tris) == 1
        assert set(tris[0].points) == set(s.vertices)

    def test_unit_square_two_triangles(self):
        tris = eg.triangulate(eg.hull([(0, 0), (1, 0), (0, 1), (1, 1)]))
        assert len(tris) == 2
        assert sum(eg.simplex_volume(s) for s in tris) == 1

    def test_volume_equals_sum_over_triangulation(self):
        p = eg.hull([(-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, 1), (0, 0, -2)])
        assert eg.volume(p) == sum(eg.simplex_volume(s) for s in eg.triangulate(p))


class TestMeasures:
    def test_diamond_volume(self):
        assert eg.volume(eg.hull(DIAMOND)) == 2

    def test_unit_interval(self):
        assert eg.volume(eg.hull([(0,), (1,)])) == 1

    def test_quadrilateral_volume_and_barycenter_vs_shoelace(self):
        pts = [(-1, 1), (0, 1), (1, 0), (0, -1)]
        p = eg.hull(pts)
        assert eg.volume(p) == shoelace_area(pts) == 2
        assert eg.barycenter(p) == shoelace_centroid(pts) == (0, F(1, 6))

    def test_diamond_barycenter(self):
        assert eg.barycenter(eg.hull(DIAMOND)) == (0, 0)

    def test_triangle_barycenter(self):
        assert eg.barycenter(eg.hull([(-1, 1), (1, 1), (0, -1)])) == (0, F(1, 3))

    def test_barycenter_times_volume_matches_triangulation(self):
        p = eg.hull([(-2, 0), (0, 3), (1, 0), (0, -1)])
        total = eg.volume(p)
        acc = (F(0), F(0))
        for s in eg.triangulate(p):
            w = eg.simplex_volume(s)
            acc = eg.vadd(acc, eg.vscale(w, s.centroid()))
        assert eg.vscale(1 / total, acc) == eg.barycenter(p)

    def test_lattice_normalized_length(self):
        assert eg.volume(eg.hull([(0, 0), (2, 2)])) == 2

    def test_moment_against_direct_formulas(self):
        sq = eg.hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert eg.moment(sq, (1, 0)) == F(1, 2)
        assert eg.moment(sq, (1, 1)) == F(1, 4)
        assert eg.moment(sq, (2, 0)) == F(1, 3)


class TestLattice:
    def test_lattice_distance_examples(self):
        assert eg.lattice_distance((1, 0), 1) == 1
        assert eg.lattice_distance((2, 2), 2) == 1
        assert eg.lattice_distance((-1, 2), 2) == 2

    def test_zero_normal(self):
        with pytest.raises(ZeroNormal):
            eg.lattice_distance((0, 0), 1)

    def test_primitive_examples(self):
        assert eg.primitive((F(-1, 2), 0)) == ((-1, 0), 2)
        assert eg.primitive((1, 1)) == ((1, 1), 1)
        assert eg.primitive((F(2, 3), F(-1, 3))) == ((2, -1), 3)

    def test_primitive_zero_vector(self):
        with pytest.raises(ZeroVector):
            eg.primitive((0, 0))

    def test_primitive_minimality(self):
        vec = (F(3, 4), F(-5, 6))
        prim, mu = eg.primitive(vec)
        assert mu == 12
        assert all((mu * x).denominator == 1 for x in vec)
        for k in range(1, mu):
            assert any((k * x).denominator != 1 for x in vec)

    def test_interior_lattice_points(self):
        assert eg.interior_lattice_points(eg.hull(DIAMOND)) == [eg.as_vec((0, 0))]
        p = eg.hull([(-1, -1), (0, 0), (1, 0), (0, -2)])
        assert eg.interior_lattice_points(p) == [eg.as_vec((0, -1))]
        assert eg.interior_lattice_points(eg.hull([(0, 0), (1, 0), (0, 1), (1, 1)])) == []


class TestUnimodularEquivariance:
    def test_volume_and_barycenter(self, rng):
        p = eg.hull([(-1, 2), (0, 1), (2, 0), (1, -1), (-1, -1)])
        for _ in range(10):
            u = random_unimodular(rng, 2)
            q = eg.transform(p, u)
            assert eg.volume(q) == eg.volume(p)
            assert eg.barycenter(q) == eg.mat_vec(u, eg.barycenter(p))


coords = st.integers(min_value=-4, max_value=4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=8))
def test_hull_round_trip_2d(pts):
    p = eg.hull(pts)
    assert eg.from_halfspaces(p.halfspaces, 2) == p
    for x in pts:
        assert p.contains(x)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=1, max_size=8))
def test_hull_round_trip_3d(pts):
    p = eg.hull(pts)
    assert eg.from_halfspaces(p.halfspaces, 3) == p
    if p.is_full_dimensional:
        assert eg.volume(p) == sum(eg.simplex_volume(s) for s in eg.triangulate(p))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=7))
def test_volume_matches_shoelace(pts):
    p = eg.hull(pts)
    if p.is_full_dimensional:
        assert eg.volume(p) == shoelace_area(p.vertices)
        assert eg.barycenter(p) == shoelace_centroid(p.vertices)
