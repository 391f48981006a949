"""Equivariant degeneration candidates and their fiber polytopes.

Finitely many toric degenerations exhaust the testing problem: one per
support point of the divisorial polytope, plus a single generic candidate
standing for every point off the support.  Each candidate carries the fiber
polytope Delta_Q (the region between the graph of the chosen entry and the
negated sum of the others), its distinguished interior lattice point
u_Q = (0, -a_Q - 1), the shifted polytope Delta_Q^0, and a normality flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import divpol as dp
from . import exactgeom as eg
from .divpol import DivisorialPolytope, FanoCertificate, ProjPoint
from .errors import (
    InteriorPointMismatch,
    InvalidDivpol,
    NotFano,
    UnknownPoint,
)
from .exactgeom import Polytope, Vec


@dataclass(frozen=True)
class DegenerationCandidate:
    """One equivariant degeneration, collapsed over the choice of (v, m)."""

    q: ProjPoint
    delta: Polytope
    u_q: Vec
    delta0: Polytope
    normal: bool


def _require_valid(psi: DivisorialPolytope) -> None:
    rep = dp.validate(psi)
    if not rep.ok:
        raise InvalidDivpol(f"invalid divisorial polytope: {rep.failures[0].message}")


def _as_certified(psi) -> DivisorialPolytope:
    if isinstance(psi, FanoCertificate):
        return psi.divpol
    if isinstance(psi, DivisorialPolytope):
        if psi.kdiv is None:
            raise NotFano("a Fano certificate is required (run fano_check first)")
        return psi
    raise TypeError(f"expected a divisorial polytope or certificate, got {type(psi)}")


def special_fiber_polytope(psi, q: ProjPoint) -> Polytope:
    """The moment polytope Delta_Q of the degeneration at q.

    Delta_Q = {(u, a) : u in box, -sum_{P != q} psi_P(u) <= a <= psi_q(u)};
    for the generic point the upper bound is a <= 0 and the lower bound is
    the negated degree.  Assembled directly as a halfspace description: the
    upper envelope is concave and the lower one convex, so the region is an
    intersection of halfspaces.
    """
    if isinstance(psi, FanoCertificate):
        psi = psi.divpol
    _require_valid(psi)
    if not q.is_generic and q not in dp.support(psi):
        raise UnknownPoint(f"{q} is neither a support point nor the generic point")
    d = psi.dim
    upper = dp.canonicalize(psi.entry(q)) if not q.is_generic else dp.zero_function(psi.box)
    lower_sum = dp.partial_degree_function(psi, q)
    hs = [(tuple(n) + (0,), c) for n, c in psi.box.halfspaces]
    for p in upper.pieces:
        hs.append((tuple(p.slope) + (-1,), -p.constant))
    for p in lower_sum.pieces:
        hs.append((tuple(p.slope) + (1,), -p.constant))
    delta = eg.from_halfspaces(hs, d + 1)
    assert delta.is_full_dimensional, "positive degree forces a full-dimensional fiber polytope"
    return delta


def distinguished_point(psi, q: ProjPoint) -> Vec:
    """The point u_Q = (0, ..., 0, -a_Q - 1), verified to be the unique
    interior lattice point of Delta_Q."""
    cert = _as_certified(psi)
    a_q = 0 if q.is_generic else cert.a_coefficient(q)
    u_q = eg.zero_vec(cert.dim) + (Fraction(-a_q - 1),)
    delta = special_fiber_polytope(cert, q)
    pts = eg.interior_lattice_points(delta)
    if pts != [u_q]:
        raise InteriorPointMismatch(
            f"interior lattice points of Delta_{q} are {pts}, expected exactly {u_q}")
    return u_q


def _offender_cells(psi: DivisorialPolytope, p: ProjPoint):
    """Closed linearity cells of the entry at p whose slope is non-integral."""
    cells = []
    for cell, pc in dp.linearity_cells(psi.entry(p)):
        if not eg.is_zero_vec(pc.slope) and eg.primitive(pc.slope)[1] > 1:
            cells.append(cell)
    return cells


def is_normal_fiber(psi, q: ProjPoint) -> bool:
    """Whether the special fiber of the degeneration at q is normal.

    General test: no point of the box may lie in the non-integral-slope
    region of two different entries other than q; regions are closed, so the
    test intersects closed cells pairwise.  On Fano-certified input the
    value-at-zero shortcut (at most one P != q with psi_P(0) non-integral)
    is computed as well and must agree.
    """
    if isinstance(psi, FanoCertificate):
        psi = psi.divpol
    _require_valid(psi)
    points = [p for p in dp.support(psi) if p != q]
    regions = {p: _offender_cells(psi, p) for p in points}
    offenders = [p for p in points if regions[p]]
    normal = True
    for i in range(len(offenders)):
        for j in range(i + 1, len(offenders)):
            for ca in regions[offenders[i]]:
                for cb in regions[offenders[j]]:
                    if not eg.intersect(ca, cb).is_empty:
                        normal = False
    if psi.kdiv is not None:
        origin = eg.zero_vec(psi.dim)
        shortcut = sum(
            1 for p in points if dp.evaluate(psi.entry(p), origin).denominator != 1
        ) <= 1
        if shortcut != normal:
            raise AssertionError(
                f"normality shortcut disagrees with the general test at q={q}")
    return normal


def enumerate_candidates(psi) -> list[DegenerationCandidate]:
    """All degeneration candidates: one per support point plus the generic one.

    Uniqueness of the interior lattice point u_Q is verified for normal
    candidates (non-normal fibers need not contain a unique one and are
    excluded from every verdict anyway).
    """
    return list(_enumerate_candidates_cached(_as_certified(psi)))


@lru_cache(maxsize=None)
def _enumerate_candidates_cached(cert: DivisorialPolytope):
    out = []
    for q in list(dp.support(cert)) + [dp.GENERIC]:
        delta = special_fiber_polytope(cert, q)
        a_q = 0 if q.is_generic else cert.a_coefficient(q)
        u_q = eg.zero_vec(cert.dim) + (Fraction(-a_q - 1),)
        delta0 = eg.translate(delta, eg.vneg(u_q))
        normal = is_normal_fiber(cert, q)
        if normal:
            pts = eg.interior_lattice_points(delta)
            if pts != [u_q]:
                raise InteriorPointMismatch(
                    f"inconsistent certificate: interior lattice points of Delta_{q} "
                    f"are {pts}, expected {u_q}")
        out.append(DegenerationCandidate(q, delta, u_q, delta0, normal))
    return tuple(out)


# ---------------------------------------------------------------------------
# exact moment identities (used by verdicts and by the test oracles)
# ---------------------------------------------------------------------------

def fiber_moment(psi, q: ProjPoint, alpha) -> Fraction:
    """Exact integral of u^alpha over Delta_Q (alpha on the first factor)."""
    delta = special_fiber_polytope(psi, q)
    return eg.moment(delta, tuple(alpha) + (0,))


def weighted_box_moment(psi: DivisorialPolytope, alpha) -> Fraction:
    """Exact integral of u^alpha * deg psi(u) over the box.

    Computed chamber by chamber, where the degree is a single affine piece.
    """
    if isinstance(psi, FanoCertificate):
        psi = psi.divpol
    alpha = tuple(alpha)
    total = Fraction(0)
    for chamber, active in dp.common_refinement(psi):
        slope = eg.zero_vec(psi.dim)
        const = Fraction(0)
        for p, _ in psi.entries:
            pc = active[p]
            slope = eg.vadd(slope, pc.slope)
            const += pc.constant
        for s in eg.triangulate(chamber):
            total += const * eg.simplex_moment(s, alpha)
            for i, w in enumerate(slope):
                if w != 0:
                    bumped = tuple(a + (1 if j == i else 0) for j, a in enumerate(alpha))
                    total += w * eg.simplex_moment(s, bumped)
    return total
