"""Donaldson-Futaki invariants, soliton fields, and stability verdicts.

Sign decisions are exact: the plain invariant of a candidate is the pairing
of the barycenter of Delta_Q^0 with (-m v, m), evaluated in rational
arithmetic.  The exponentially weighted quantities (modified invariants,
soliton vector field, weighted moments) use arbitrary-precision floats from
mpmath: each simplex of an exact triangulation contributes a closed form in
confluent divided differences of exp at the vertex exponents, with a
Taylor/matrix branch replacing the recurrence when exponents cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm

from mpmath import mp, mpf, matrix, lu_solve

from . import degen as dg
from . import divpol as dp
from . import exactgeom as eg
from .degen import DegenerationCandidate
from .divpol import DivisorialPolytope, FanoCertificate, ProjPoint
from .errors import (
    NonConvergence,
    NonNormalFiber,
    PrecisionLoss,
    TooManyLatticePoints,
    ZeroVolume,
)
from .exactgeom import Polytope, Vec

DEFAULT_PRECISION = 50

_MAX_WORK_DPS = 20000


def _to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


# ---------------------------------------------------------------------------
# divided differences of exp
# ---------------------------------------------------------------------------

def exp_divided_difference(nodes, dps: int) -> mpf:
    """Confluent divided difference of exp at the given nodes, to ~dps digits.

    Nodes are sorted (the value is symmetric), exact repetitions are handled
    by the osculating rule exp(x)/m!, and distinct nodes use the classical
    recurrence with enough guard digits to absorb the cancellation.  Nodes
    that are distinct but cluster below the separation threshold switch to a
    Taylor branch (the exponential of the upper bidiagonal node matrix),
    which is cancellation-free because every entry is itself a positive
    divided difference.
    """
    xs = sorted(nodes)
    n = len(xs) - 1
    if n == 0:
        with mp.workdps(dps + 10):
            return mp.exp(xs[0])
    # nodes agreeing to within the target accuracy are the same node; snapping
    # them avoids spurious ulp-sized gaps (the perturbation is below 10^-dps)
    snap = mpf(10) ** (-(dps + 5))
    for i in range(n):
        if xs[i + 1] != xs[i] and abs(xs[i + 1] - xs[i]) <= snap * max(1, abs(xs[i])):
            xs[i + 1] = xs[i]
    nonzero_gaps = [b - a for a, b in zip(xs, xs[1:]) if b != a]
    if not nonzero_gaps:
        with mp.workdps(dps + 10):
            return mp.exp(xs[0]) / _fact(n)
    min_gap = min(nonzero_gaps)
    threshold = mpf(10) ** (-(dps // 2))
    if min_gap < threshold:
        return _exp_dd_matrix(xs, dps)
    extra = 0
    if min_gap < 1:
        extra = n * int(mp.ceil(-mp.log10(min_gap)))
    wp = dps + 10 + extra
    if wp > _MAX_WORK_DPS:
        raise PrecisionLoss(f"divided difference would need {wp} working digits")
    with mp.workdps(wp):
        exps = [mp.exp(x) for x in xs]
        vals = list(exps)
        for level in range(1, n + 1):
            vals = [
                (vals[i + 1] - vals[i]) / (xs[i + level] - xs[i])
                if xs[i + level] != xs[i]
                else exps[i] / _fact(level)
                for i in range(len(vals) - 1)
            ]
        return vals[0]


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _exp_dd_matrix(nodes, dps: int) -> mpf:
    """Divided difference via exp of the bidiagonal node matrix (Opitz)."""
    n = len(nodes) - 1
    mean = sum(nodes) / (n + 1)
    spread = max(abs(x - mean) for x in nodes)
    scalings = max(0, int(mp.ceil(mp.log(spread + 1, 2)))) if spread > 0 else 0
    wp = dps + 30 + 2 * scalings
    if wp > _MAX_WORK_DPS:
        raise PrecisionLoss(f"divided difference would need {wp} working digits")
    with mp.workdps(wp):
        m_ = n + 1
        scale = mpf(2) ** (-scalings)
        a = [[mpf(0)] * m_ for _ in range(m_)]
        for i in range(m_):
            a[i][i] = (nodes[i] - mean) * scale
            if i + 1 < m_:
                a[i][i + 1] = scale
        # Taylor series of exp(A); A is upper triangular with small norm
        result = [[mpf(1) if i == j else mpf(0) for j in range(m_)] for i in range(m_)]
        term = [row[:] for row in result]
        tol = mpf(10) ** (-(wp + 5))
        for k in range(1, 400):
            term = _upper_tri_mul(term, a, m_)
            term = [[x / k for x in row] for row in term]
            result = [[r + t for r, t in zip(rr, tt)] for rr, tt in zip(result, term)]
            if max(abs(x) for row in term for x in row) < tol:
                break
        else:
            raise PrecisionLoss("Taylor branch of the divided difference did not settle")
        for _ in range(scalings):
            result = _upper_tri_mul(result, result, m_)
        return mp.exp(mean) * result[0][m_ - 1]


def _upper_tri_mul(a, b, m_):
    out = [[mpf(0)] * m_ for _ in range(m_)]
    for i in range(m_):
        for j in range(i, m_):
            out[i][j] = sum(a[i][k] * b[k][j] for k in range(i, j + 1))
    return out


# ---------------------------------------------------------------------------
# exponential moments over polytopes
# ---------------------------------------------------------------------------

class _SimplexExp:
    """Closed-form exponential integrals over one full-order simplex."""

    def __init__(self, simplex: eg.Simplex, xi, dps: int):
        self.points = simplex.points
        self.dps = dps
        self.detfac = abs(eg.det_frac(
            [eg.vsub(q, self.points[0]) for q in self.points[1:]]))
        self.nodes = [
            sum((_to_mpf(c) * x for c, x in zip(p, xi)), mpf(0)) for p in self.points
        ]
        self._cache: dict[tuple, mpf] = {}

    def _dd(self, extra=()) -> mpf:
        key = tuple(sorted(extra))
        if key not in self._cache:
            self._cache[key] = exp_divided_difference(
                self.nodes + [self.nodes[i] for i in extra], self.dps)
        return self._cache[key]

    def mass(self) -> mpf:
        return _to_mpf(self.detfac) * self._dd()

    def linear(self, w) -> mpf:
        """Integral of <x, w> e^{<x, xi>} over the simplex."""
        v0 = self.points[0]
        w0 = _to_mpf(eg.dot(w, v0))
        acc = w0 * self._dd()
        for i, q in enumerate(self.points[1:], start=1):
            dw = _to_mpf(eg.dot(w, eg.vsub(q, v0)))
            if dw != 0:
                acc += dw * self._dd((i,))
        return _to_mpf(self.detfac) * acc

    def quadratic(self, p: int, q: int) -> mpf:
        """Integral of x_p x_q e^{<x, xi>} over the simplex."""
        v0 = self.points[0]
        deltas = [eg.vsub(pt, v0) for pt in self.points[1:]]
        acc = _to_mpf(v0[p] * v0[q]) * self._dd()
        for i, d in enumerate(deltas, start=1):
            coef = v0[p] * d[q] + v0[q] * d[p]
            if coef != 0:
                acc += _to_mpf(coef) * self._dd((i,))
        for i, di in enumerate(deltas, start=1):
            for j, dj in enumerate(deltas, start=1):
                coef = di[p] * dj[q]
                if coef != 0:
                    mult = 2 if i == j else 1
                    acc += mult * _to_mpf(coef) * self._dd((i, j))
        return _to_mpf(self.detfac) * acc


def _pad_xi(xi, dim: int):
    xi = [_to_mpf(x) for x in xi]
    if len(xi) > dim:
        raise ZeroVolume(f"weight vector longer than the ambient dimension {dim}")
    return xi + [mpf(0)] * (dim - len(xi))


def exp_moment(p: Polytope, w, xi, precision: int = DEFAULT_PRECISION) -> mpf:
    """High-precision integral of <x, w> e^{<x, xi>} over a full-dimensional
    polytope; with w=None, the plain mass integral of e^{<x, xi>}.

    xi may be shorter than the ambient dimension; missing trailing
    coordinates act as zero (the toral field never pairs with the last
    factor).
    """
    if not p.is_full_dimensional:
        raise ZeroVolume("exponential moment over a non-full-dimensional polytope")
    xi_full = _pad_xi(xi, p.dim)
    with mp.workdps(precision + 10):
        total = mpf(0)
        for s in eg.triangulate(p):
            cell = _SimplexExp(s, xi_full, precision)
            total += cell.mass() if w is None else cell.linear(eg.as_vec(w))
        return total


def exp_mass(p: Polytope, xi, precision: int = DEFAULT_PRECISION) -> mpf:
    return exp_moment(p, None, xi, precision)


def exact_linear_moment(p: Polytope, w) -> Fraction:
    """Exact rational counterpart of exp_moment at xi = 0."""
    w = eg.as_vec(w)
    total = Fraction(0)
    for i, wi in enumerate(w):
        if wi != 0:
            total += wi * eg.moment(p, tuple(1 if j == i else 0 for j in range(p.dim)))
    return total


# ---------------------------------------------------------------------------
# Donaldson-Futaki invariants
# ---------------------------------------------------------------------------

def df_invariant(c: DegenerationCandidate, v, m: int) -> Fraction:
    """Exact invariant <b_Q, (-m v, m)> of the degeneration (c, v, m)."""
    if not c.normal:
        raise NonNormalFiber(f"candidate {c.q} has a non-normal special fiber")
    v = eg.as_vec(v)
    b = eg.barycenter(c.delta0)
    return m * (b[-1] - eg.dot(v, b[:-1]))


def modified_df(c: DegenerationCandidate, v, m: int, xi,
                precision: int = DEFAULT_PRECISION) -> mpf:
    """Exponentially weighted invariant
    (m / vol) * integral of <., (-v, 1)> e^{<., xi>} over Delta_Q^0."""
    if not c.normal:
        raise NonNormalFiber(f"candidate {c.q} has a non-normal special fiber")
    v = eg.as_vec(v)
    w = tuple(-x for x in v) + (Fraction(1),)
    xi_vec = xi.xi if isinstance(xi, SolitonField) else xi
    with mp.workdps(precision + 10):
        vol = _to_mpf(eg.volume(c.delta0))
        return m * exp_moment(c.delta0, w, xi_vec, precision) / vol


# ---------------------------------------------------------------------------
# stability verdict
# ---------------------------------------------------------------------------

class Stability(Enum):
    EQUIVARIANTLY_K_STABLE = "EquivariantlyKStable"
    SEMISTABLE = "Semistable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    status: Stability
    witnesses: tuple[tuple[ProjPoint, Vec], ...]
    futaki_linear_form: Vec

    @property
    def stable(self) -> bool:
        return self.status is Stability.EQUIVARIANTLY_K_STABLE


def kstability_verdict(cert, candidates=None) -> StabilityVerdict:
    """Exact equivariant K-stability decision over all normal candidates.

    Stable iff every normal candidate has barycenter in {0} x R^+; a zero
    second component (with vanishing toral part) is only semistable; a
    negative second component or a nonzero toral part is unstable.
    """
    cert = _as_cert(cert)
    if candidates is None:
        candidates = dg.enumerate_candidates(cert)
    normal = [c for c in candidates if c.normal]
    assert normal, "the generic candidate can only be non-normal if some Q is normal"
    barys = [(c.q, eg.barycenter(c.delta0)) for c in normal]
    p1s = {b[:-1] for _, b in barys}
    assert len(p1s) == 1, "toral barycenter must agree across candidates (flatness)"
    p1 = p1s.pop()
    unstable = [(q, b) for q, b in barys if b[-1] < 0]
    if not eg.is_zero_vec(p1):
        return StabilityVerdict(Stability.UNSTABLE, tuple(barys), p1)
    if unstable:
        return StabilityVerdict(Stability.UNSTABLE, tuple(unstable), p1)
    zero = [(q, b) for q, b in barys if b[-1] == 0]
    if zero:
        return StabilityVerdict(Stability.SEMISTABLE, tuple(zero), p1)
    return StabilityVerdict(Stability.EQUIVARIANTLY_K_STABLE, (), p1)


def _as_cert(cert) -> DivisorialPolytope:
    if isinstance(cert, FanoCertificate):
        return cert
    raise_if = not isinstance(cert, DivisorialPolytope) or cert.kdiv is None
    if raise_if:
        from .errors import NotFano
        raise NotFano("a Fano certificate is required")
    return cert


# ---------------------------------------------------------------------------
# soliton vector field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolitonField:
    """Toral vector field making the weighted Futaki character vanish."""

    xi: tuple
    residual: object
    precision: int

    @property
    def norm(self):
        return max((abs(x) for x in self.xi), default=mpf(0))


def solve_vanishing_moment(p: Polytope, act_dim: int,
                           precision: int = DEFAULT_PRECISION) -> SolitonField:
    """Find xi in R^act_dim with vanishing weighted first moments over p.

    Minimizes the strictly convex map xi -> log integral of e^{<x, xi>} by
    damped Newton iteration from 0; the gradient is the weighted barycenter
    restricted to the acting coordinates, and the residual is its max-norm
    relative to the mass.
    """
    if not p.is_full_dimensional:
        raise ZeroVolume("soliton solve over a non-full-dimensional polytope")
    tol = mpf(10) ** (12 - precision)
    simplices = eg.triangulate(p)
    with mp.workdps(precision + 15):
        xi = [mpf(0)] * act_dim

        def _unit(i, dim):
            return tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))

        def moments(x):
            xi_full = _pad_xi(x, p.dim)
            mass = mpf(0)
            first = [mpf(0)] * act_dim
            second = [[mpf(0)] * act_dim for _ in range(act_dim)]
            for s in simplices:
                cell = _SimplexExp(s, xi_full, precision)
                mass += cell.mass()
                for i in range(act_dim):
                    first[i] += cell.linear(_unit(i, p.dim))
                for i in range(act_dim):
                    for j in range(i, act_dim):
                        second[i][j] += cell.quadratic(i, j)
            return mass, first, second

        def mass_at(x):
            xi_full = _pad_xi(x, p.dim)
            return sum(
                (_SimplexExp(s, xi_full, precision).mass() for s in simplices), mpf(0)
            )

        for _ in range(201):
            mass, first, second = moments(xi)
            grad = [f / mass for f in first]
            residual = max(abs(g) for g in grad) if grad else mpf(0)
            hess = matrix(act_dim, act_dim)
            for i in range(act_dim):
                for j in range(i, act_dim):
                    h = second[i][j] / mass - grad[i] * grad[j]
                    hess[i, j] = h
                    hess[j, i] = h
            if residual <= tol:
                if residual <= mpf(10) ** (-precision):
                    # already at working precision (e.g. an exactly symmetric
                    # integrand at the zero field); polishing would only add
                    # rounding noise
                    return SolitonField(tuple(xi), residual, precision)
                # one undamped polish step: quadratic convergence pushes the
                # residual to working precision, keeping downstream moments
                # reproducible far below the stopping threshold
                step = lu_solve(hess, matrix([-g for g in grad]))
                trial = [x + step[i] for i, x in enumerate(xi)]
                t_mass, t_first, _ = moments(trial)
                t_res = max(abs(f / t_mass) for f in t_first)
                if t_res < residual:
                    return SolitonField(tuple(trial), t_res, precision)
                return SolitonField(tuple(xi), residual, precision)
            step = lu_solve(hess, matrix([-g for g in grad]))
            f0 = mp.log(mass)
            t = mpf(1)
            while t > mpf(2) ** (-80):
                trial = [x + t * step[i] for i, x in enumerate(xi)]
                if mp.log(mass_at(trial)) < f0:
                    xi = trial
                    break
                t /= 2
            else:
                raise NonConvergence("damped Newton step failed to decrease the log-mass")
        raise NonConvergence("soliton solve did not converge within 200 iterations")


def solve_soliton_field(psi, precision: int = DEFAULT_PRECISION) -> SolitonField:
    """The unique toral field with vanishing weighted Futaki character.

    The defining moments live on the degree-weighted box; equivalently (and
    implemented here) on the generic fiber polytope, whose first-factor
    pushforward has density deg psi.
    """
    base = psi.divpol if isinstance(psi, FanoCertificate) else psi
    return _solve_soliton_cached(base, precision)


@lru_cache(maxsize=None)
def _solve_soliton_cached(base: DivisorialPolytope, precision: int) -> SolitonField:
    delta = dg.special_fiber_polytope(base, dp.GENERIC)
    return solve_vanishing_moment(delta, base.dim, precision)


@dataclass(frozen=True)
class SolitonVerdict:
    exists: bool
    xi: SolitonField
    weighted_moments: tuple[tuple[ProjPoint, object], ...]
    margin: object
    indeterminate: tuple[ProjPoint, ...] = ()


def soliton_verdict(cert, precision: int = DEFAULT_PRECISION,
                    candidates=None) -> SolitonVerdict:
    """Existence of a Kaehler-Ricci soliton via weighted positivity.

    At the solved field xi the toral moments vanish, so each normal
    candidate is decided by its second-coordinate weighted moment
    W(Q) = integral of a e^{<u, xi>} over Delta_Q^0; existence requires all
    of them strictly positive.  Moments within the positivity tolerance of
    zero are reported indeterminate and count as failures, never as silent
    successes.
    """
    cert = _as_cert(cert)
    field = solve_soliton_field(cert, precision)
    if candidates is None:
        candidates = dg.enumerate_candidates(cert)
    tol = mpf(10) ** (6 - precision)
    moments = []
    indeterminate = []
    with mp.workdps(precision + 10):
        for c in candidates:
            if not c.normal:
                continue
            w = eg.zero_vec(c.delta0.dim - 1) + (Fraction(1),)
            val = exp_moment(c.delta0, w, field.xi, precision)
            moments.append((c.q, val))
            if abs(val) <= tol:
                indeterminate.append(c.q)
    margin = min((v for _, v in moments), default=mpf(0))
    exists = bool(moments) and all(v > tol for _, v in moments)
    return SolitonVerdict(exists, field, tuple(moments), margin, tuple(indeterminate))


# ---------------------------------------------------------------------------
# the limit-formula oracle
# ---------------------------------------------------------------------------

def futaki_oracle_lattice_count(p: Polytope, v, xi, k_max: int,
                                precision: int = DEFAULT_PRECISION,
                                budget: int = 2_000_000):
    """Finite-k approximations of the Futaki pairing by lattice-point sums.

    With ell clearing the vertex denominators of p, the k-th term sums
    <u, v> e^{<u, xi>/k} over the lattice points of (k ell) p, normalized by
    -1/(k * count * ell).  The sequence converges to minus the barycenter
    pairing; callers compare magnitudes (the limit formula and the
    barycenter normalization differ by an overall sign).
    """
    v = eg.as_vec(v)
    ell = lcm(*(x.denominator for vert in p.vertices for x in vert))
    xi_full = _pad_xi(xi, p.dim)
    out = []
    with mp.workdps(precision + 10):
        for k in range(1, k_max + 1):
            scaled = eg.scale_polytope(p, k * ell)
            lo, hi = eg.bounding_box(scaled)
            est = 1
            for a, b in zip(lo, hi):
                est *= int(b - a) + 1
            if est > budget:
                raise TooManyLatticePoints(f"k={k} needs ~{est} candidate points")
            pts = eg.lattice_points(scaled)
            l_k = len(pts)
            w_k = mpf(0)
            for u in pts:
                pairing = sum(int(a) * wv for a, wv in zip(u, v))
                if pairing != 0:
                    weight = mp.exp(sum(_to_mpf(a) * x for a, x in zip(u, xi_full)) / k)
                    w_k += _to_mpf(pairing) * weight
            out.append(-w_k / (k * l_k * ell))
    return out
