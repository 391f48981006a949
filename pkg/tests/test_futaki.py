"""Invariants, quadrature, verdicts, the soliton solver, and the oracle."""

import random
from fractions import Fraction as F

import pytest
from mpmath import mp, mpf

from tfk import degen as dg
from tfk import divpol as dp
from tfk import exactgeom as eg
from tfk import futaki as fk
from tfk.errors import NonNormalFiber

from conftest import random_symmetric_divpol

P0, P1, PI = dp.ProjPoint.of(0), dp.ProjPoint.of(1), dp.INF


def _cand(cert, q):
    return next(c for c in dg.enumerate_candidates(cert) if c.q == q)


class TestDividedDifferences:
    def test_repeated_nodes_give_derivatives(self):
        with mp.workdps(60):
            assert abs(fk.exp_divided_difference([mpf(0), mpf(0)], 50) - 1) < mpf(10) ** -48
            val = fk.exp_divided_difference([mpf(1)] * 4, 50)
            assert abs(val - mp.e / 6) < mpf(10) ** -45

    def test_recurrence_matches_matrix_branch(self):
        rnd = random.Random(3)
        with mp.workdps(60):
            for _ in range(25):
                n = rnd.randint(1, 5)
                nodes = [mpf(rnd.randint(-30, 30)) / 7 for _ in range(n + 1)]
                a = fk.exp_divided_difference(nodes, 50)
                b = fk._exp_dd_matrix(sorted(nodes), 50)
                assert abs(a - b) <= abs(b) * mpf(10) ** -45 + mpf(10) ** -60

    def test_near_coincident_nodes_are_snapped(self):
        with mp.workdps(60):
            eps = mpf(10) ** -58
            a = fk.exp_divided_difference([mpf(1), mpf(1) + eps, mpf(2)], 50)
            b = fk.exp_divided_difference([mpf(1), mpf(1), mpf(2)], 50)
            assert abs(a - b) < mpf(10) ** -50


class TestExpMoment:
    def test_unit_interval_identity_functional(self):
        seg = eg.hull([(0,), (1,)])
        assert fk.exp_moment(seg, (1,), ()) == mpf("0.5")

    def test_x_ex_closed_form(self):
        seg = eg.hull([(0,), (1,)])
        val = fk.exp_moment(seg, (1,), (1,))
        assert abs(val - 1) < mpf(10) ** -20

    def test_diamond_odd_functional_vanishes(self):
        diamond = eg.hull([(-1, 0), (1, 0), (0, -1), (0, 1)])
        assert abs(fk.exp_moment(diamond, (0, 1), ())) < mpf(10) ** -45

    def test_matches_exact_moments_at_zero_field(self, rng):
        for _ in range(20):
            d = rng.choice([1, 2, 3])
            while True:
                pts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(d + 1)]
                p = eg.hull(pts)
                if p.is_full_dimensional:
                    break
            w = tuple(rng.randint(-2, 2) for _ in range(d))
            exact = fk.exact_linear_moment(p, w)
            approx = fk.exp_moment(p, w, ())
            with mp.workdps(60):
                assert abs(approx - mpf(exact.numerator) / exact.denominator) < mpf(10) ** -48

    def test_mass_selector(self):
        seg = eg.hull([(0,), (2,)])
        assert abs(fk.exp_mass(seg, ()) - 2) < mpf(10) ** -48


class TestDfInvariant:
    def test_dp4_inf_vanishes_for_all_directions(self, dp4_cert):
        c = _cand(dp4_cert, PI)
        for v in [(0,), (1,), (-3,)]:
            for m in (1, 2, 5):
                assert fk.df_invariant(c, v, m) == 0

    def test_dp4_zero_fiber(self, dp4_cert):
        assert fk.df_invariant(_cand(dp4_cert, P0), (0,), 1) == F(1, 6)

    def test_bilinearity(self, dp4_cert):
        c = _cand(dp4_cert, P0)
        assert fk.df_invariant(c, (2,), 6) == 6 * fk.df_invariant(c, (2,), 1)
        assert fk.df_invariant(c, (3,), 1) + fk.df_invariant(c, (-1,), 1) \
            == fk.df_invariant(c, (2,), 1) + fk.df_invariant(c, (0,), 1)

    def test_non_normal_rejected(self, mm321_cert):
        c = _cand(mm321_cert, P1)
        with pytest.raises(NonNormalFiber):
            fk.df_invariant(c, (0, 0), 1)
        with pytest.raises(NonNormalFiber):
            fk.modified_df(c, (0, 0), 1, ())


class TestModifiedDf:
    def test_zero_field_reduces_to_plain(self, dp4_cert):
        # at a vanishing field the weighted formula collapses to the exact
        # pairing: (m/vol) * integral of <., (-v, 1)> equals <b, (-mv, m)>
        c = _cand(dp4_cert, P0)
        exact = fk.df_invariant(c, (2,), 1)
        got = fk.modified_df(c, (2,), 1, ())
        with mp.workdps(60):
            assert abs(got - mpf(exact.numerator) / exact.denominator) < mpf(10) ** -45

    def test_dp4_inf_zero(self, dp4_cert):
        c = _cand(dp4_cert, PI)
        assert abs(fk.modified_df(c, (1,), 1, ())) < mpf(10) ** -20

    def test_m_scaling(self, dp4_cert):
        c = _cand(dp4_cert, P0)
        one = fk.modified_df(c, (1,), 1, (F(1, 3),))
        two = fk.modified_df(c, (1,), 2, (F(1, 3),))
        with mp.workdps(60):
            assert abs(two - 2 * one) < abs(one) * mpf(10) ** -40


class TestKStability:
    def test_dp4_semistable(self, dp4_cert):
        v = fk.kstability_verdict(dp4_cert)
        assert v.status is fk.Stability.SEMISTABLE
        assert [(str(q), b) for q, b in v.witnesses] == [("inf", (F(0), F(0)))]
        assert v.futaki_linear_form == (F(0),)

    def test_tents_semistable_zero_barycenter(self, tents_cert):
        v = fk.kstability_verdict(tents_cert)
        assert v.status is fk.Stability.SEMISTABLE
        assert ("0", (F(0), F(0))) in [(str(q), b) for q, b in v.witnesses]

    def test_mm321_not_stable(self, mm321_cert):
        v = fk.kstability_verdict(mm321_cert)
        assert v.status is not fk.Stability.EQUIVARIANTLY_K_STABLE
        assert v.futaki_linear_form != (F(0), F(0))

    def test_halfslope_unstable_by_futaki_form(self, halfslope_cert):
        v = fk.kstability_verdict(halfslope_cert)
        assert v.status is fk.Stability.UNSTABLE
        assert v.futaki_linear_form == (F(1, 6),)

    def test_stable_example(self, stable_cert):
        v = fk.kstability_verdict(stable_cert)
        assert v.status is fk.Stability.EQUIVARIANTLY_K_STABLE
        assert v.witnesses == ()


class TestSolitonSolver:
    def test_dp4_trivial_field(self, dp4_cert):
        field = fk.solve_soliton_field(dp4_cert)
        assert all(x == 0 for x in field.xi)
        assert field.residual <= mpf(10) ** -30

    def test_box_weight_one_instance(self):
        seg = eg.hull([(-1,), (2,)])
        field = fk.solve_vanishing_moment(seg, 1)
        with mp.workdps(60):
            x = field.xi[0]
            assert abs((2 * x - 1) * mp.e ** (3 * x) + x + 1) < mpf(10) ** -40
            assert abs(x - mpf("-0.716375266635688")) < mpf(10) ** -3

    def test_mm321_nontrivial_field(self, mm321_cert):
        field = fk.solve_soliton_field(mm321_cert)
        assert field.norm > mpf(10) ** -6
        assert field.residual <= mpf(10) ** -38

    def test_symmetric_inputs_give_zero(self, rng):
        for _ in range(3):
            psi = random_symmetric_divpol(rng, rng.choice([1, 2]))
            field = fk.solve_soliton_field(psi)
            assert field.norm == 0
            assert field.residual <= mpf(10) ** -30

    def test_first_factor_moments_vanish_at_solution(self, mm321_cert):
        field = fk.solve_soliton_field(mm321_cert)
        with mp.workdps(60):
            for c in dg.enumerate_candidates(mm321_cert):
                if not c.normal:
                    continue
                mass = fk.exp_mass(c.delta0, field.xi)
                for i in range(2):
                    w = tuple(F(int(i == j)) for j in range(3))
                    moment = fk.exp_moment(c.delta0, w, field.xi)
                    assert abs(moment / mass) <= mpf(10) ** -50


class TestSolitonVerdict:
    def test_dp4_no_soliton(self, dp4_cert):
        v = fk.soliton_verdict(dp4_cert)
        assert not v.exists
        assert [str(q) for q in v.indeterminate] == ["inf"]
        assert all(x == 0 for x in v.xi.xi)

    def test_mm321_soliton(self, mm321_cert):
        v = fk.soliton_verdict(mm321_cert)
        assert v.exists
        assert v.xi.norm > mpf(10) ** -6
        assert v.margin > 0

    def test_stable_implies_soliton_with_zero_field(self, stable_cert):
        v = fk.soliton_verdict(stable_cert)
        assert v.exists
        assert v.xi.norm == 0

    def test_verdict_coherence(self, dp4_cert, mm321_cert, tents_cert,
                               halfslope_cert, stable_cert):
        tol = mpf(10) ** -38
        for cert in (dp4_cert, mm321_cert, tents_cert, halfslope_cert, stable_cert):
            stable = fk.kstability_verdict(cert).status is fk.Stability.EQUIVARIANTLY_K_STABLE
            sv = fk.soliton_verdict(cert)
            assert stable == (sv.exists and sv.xi.norm <= tol)


class TestOracle:
    def test_symmetric_interval_all_zero(self):
        seg = eg.hull([(-1,), (1,)])
        assert all(x == 0 for x in fk.futaki_oracle_lattice_count(seg, (1,), (), 12))

    def test_diamond_tends_to_zero(self):
        diamond = eg.hull([(-1, 0), (1, 0), (0, -1), (0, 1)])
        seq = fk.futaki_oracle_lattice_count(diamond, (0, 1), (), 12)
        assert all(x == 0 for x in seq)

    def test_triangle_converges_to_barycenter_pairing(self):
        tri = eg.hull([(-1, 1), (1, 1), (0, -1)])
        seq = fk.futaki_oracle_lattice_count(tri, (0, 1), (), 20)
        assert abs(abs(seq[-1]) - F(1, 3)) < mpf("0.1")
        errs = [abs(abs(x) - F(1, 3)) for x in seq]
        violations = sum(1 for i in range(5, len(errs)) if errs[i] > errs[i - 1])
        assert violations <= 2

    def test_fractional_vertices_use_cartier_index(self):
        # vertices at halves: ell = 2 clears them; sequence still converges
        tri = eg.hull([(F(-1, 2), F(1, 2)), (F(1, 2), F(1, 2)), (0, F(-1, 2))])
        seq = fk.futaki_oracle_lattice_count(tri, (0, 1), (), 8)
        b = eg.barycenter(tri)
        assert abs(abs(seq[-1]) - abs(b[1])) < mpf("0.1")

    def test_budget(self):
        seg = eg.hull([(-1,), (1,)])
        with pytest.raises(fk.TooManyLatticePoints):
            fk.futaki_oracle_lattice_count(seg, (1,), (), 10, budget=3)
