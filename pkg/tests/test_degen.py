"""Degeneration candidates: fiber polytopes, distinguished points, normality."""

from fractions import Fraction as F

import pytest

from tfk import degen as dg
from tfk import divpol as dp
from tfk import exactgeom as eg
from tfk.errors import InteriorPointMismatch, NotFano, UnknownPoint

from conftest import random_valid_divpol

P0, P1, PI = dp.ProjPoint.of(0), dp.ProjPoint.of(1), dp.INF


class TestFiberPolytopes:
    def test_dp4_delta_inf(self, dp4_cert):
        delta = dg.special_fiber_polytope(dp4_cert, PI)
        assert delta.vertices == tuple(sorted(map(eg.as_vec, [(-1, 0), (1, 0), (0, -1), (0, 1)])))

    def test_dp4_delta_0(self, dp4_cert):
        delta = dg.special_fiber_polytope(dp4_cert, P0)
        assert delta.vertices == tuple(sorted(map(eg.as_vec, [(-1, 1), (0, 1), (1, 0), (0, -1)])))

    def test_dp4_delta_generic(self, dp4_cert):
        delta = dg.special_fiber_polytope(dp4_cert, dp.GENERIC)
        assert delta.vertices == tuple(sorted(map(eg.as_vec, [(-1, 0), (1, 0), (0, -2)])))

    def test_generic_upper_bound_is_zero_and_lower_is_degree(self, dp4_cert):
        psi = dp4_cert.divpol
        delta = dg.special_fiber_polytope(dp4_cert, dp.GENERIC)
        deg = dp.degree_function(psi)
        for u in dp.refinement_vertices(psi):
            top = max((a for (uu, a) in [(v[:-1], v[-1]) for v in delta.vertices] if uu == u),
                      default=None)
            assert delta.contains(tuple(u) + (F(0),)) or dp.evaluate(deg, u) == 0
            assert delta.contains(tuple(u) + (-dp.evaluate(deg, u),))

    def test_unknown_point(self, dp4_cert):
        with pytest.raises(UnknownPoint):
            dg.special_fiber_polytope(dp4_cert, dp.ProjPoint.of(17))


class TestDistinguishedPoint:
    def test_examples(self, dp4_cert):
        assert dg.distinguished_point(dp4_cert, PI) == eg.as_vec((0, 0))
        assert dg.distinguished_point(dp4_cert, P1) == eg.as_vec((0, -1))
        assert dg.distinguished_point(dp4_cert, dp.GENERIC) == eg.as_vec((0, -1))

    def test_mismatch_raises(self, mm321_cert):
        # the generic fiber of mm-3.21 is non-normal and its polytope has
        # three interior lattice points, so the uniqueness check must fire
        with pytest.raises(InteriorPointMismatch):
            dg.distinguished_point(mm321_cert, dp.GENERIC)


class TestNormality:
    def test_dp4_all_normal(self, dp4_cert):
        for q in list(dp.support(dp4_cert.divpol)) + [dp.GENERIC]:
            assert dg.is_normal_fiber(dp4_cert, q)

    def test_mm321_pattern(self, mm321_cert):
        assert dg.is_normal_fiber(mm321_cert, P0)
        assert dg.is_normal_fiber(mm321_cert, PI)
        assert not dg.is_normal_fiber(mm321_cert, P1)
        assert not dg.is_normal_fiber(mm321_cert, dp.GENERIC)

    def test_two_offenders_q_among_them(self, stable_cert):
        # synthetic-stable has fractional slopes at 1 and inf; excluding one
        # of them leaves a single offender, so those fibers are normal
        assert dg.is_normal_fiber(stable_cert, P1)
        assert dg.is_normal_fiber(stable_cert, PI)
        assert not dg.is_normal_fiber(stable_cert, P0)

    def test_wall_touching_offenders_detected(self):
        # two entries whose fractional-slope regions meet only at u = 0:
        # chamber interiors never see both offenders, the shared wall does
        box = eg.hull([(-2,), (2,)])
        psi = dp.divisorial_polytope(box, [
            (P0, dp.plconcave(box, [((F(1, 2),), 0), ((0,), 0)])),
            (P1, dp.plconcave(box, [((0,), 2)])),
            (PI, dp.plconcave(box, [((F(-1, 2),), 0), ((0,), 0)])),
        ])
        assert dp.validate(psi).ok
        assert not dg.is_normal_fiber(psi, P1)


class TestEnumerate:
    def test_dp4_candidates(self, dp4_cert):
        cands = dg.enumerate_candidates(dp4_cert)
        assert [str(c.q) for c in cands] == ["0", "1", "inf", "generic"]
        assert all(c.normal for c in cands)

    def test_single_support(self, tents_cert):
        cands = dg.enumerate_candidates(tents_cert)
        assert [str(c.q) for c in cands] == ["0", "inf", "generic"]

    def test_mm321_candidates(self, mm321_cert):
        cands = dg.enumerate_candidates(mm321_cert)
        assert {str(c.q): c.normal for c in cands} == {
            "0": True, "inf": True, "1": False, "generic": False}

    def test_delta0_is_translate(self, dp4_cert):
        for c in dg.enumerate_candidates(dp4_cert):
            assert c.delta0 == eg.translate(c.delta, eg.vneg(c.u_q))

    def test_normal_candidates_have_unique_interior_point(self, dp4_cert, mm321_cert, stable_cert):
        for cert in (dp4_cert, mm321_cert, stable_cert):
            for c in dg.enumerate_candidates(cert):
                if c.normal:
                    assert eg.interior_lattice_points(c.delta) == [c.u_q]
                    assert c.delta.contains_in_interior(c.u_q)

    def test_requires_certificate(self, dp4_cert):
        uncertified = dp.divisorial_polytope(
            dp4_cert.divpol.box, dp4_cert.divpol.entries)
        with pytest.raises(NotFano):
            dg.enumerate_candidates(uncertified)


class TestProjectionIdentity:
    def test_catalog_inputs(self, dp4_cert, mm321_cert):
        for cert in (dp4_cert, mm321_cert):
            psi = cert.divpol
            d = psi.dim
            monomials = [(0,) * d] + [tuple(int(i == j) for i in range(d)) for j in range(d)]
            for q in list(dp.support(psi)) + [dp.GENERIC]:
                for alpha in monomials:
                    assert dg.fiber_moment(psi, q, alpha) == dg.weighted_box_moment(psi, alpha)

    def test_first_coordinate_consistency(self, dp4_cert, mm321_cert, halfslope_cert):
        for cert in (dp4_cert, mm321_cert, halfslope_cert):
            cands = dg.enumerate_candidates(cert)
            firsts = {eg.barycenter(c.delta0)[:-1] for c in cands}
            assert len(firsts) == 1

    def test_random_valid_inputs(self, rng):
        for _ in range(4):
            psi = random_valid_divpol(rng, rng.choice([1, 2]))
            d = psi.dim
            monomials = [(0,) * d] + [tuple(int(i == j) for i in range(d)) for j in range(d)]
            for q in list(dp.support(psi)) + [dp.GENERIC]:
                for alpha in monomials:
                    assert dg.fiber_moment(psi, q, alpha) == dg.weighted_box_moment(psi, alpha)
