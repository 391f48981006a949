"""Combinatorial automorphisms and the sufficient soliton criteria.

An automorphism pair consists of a Moebius map permuting the marked points
of P^1 and a unimodular box symmetry, subject to the exact matching
equation: composing an entry with the box symmetry may change it only by an
integral affine shift, the shifts must telescope consistently along the
permutation, and both shift families must sum to zero.  Three sufficient
soliton criteria are decided from the accepted pairs: three points with
fractional slopes, a symmetry swapping two such points, or a common-fixed-
point-free collection of realizing Moebius maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from . import degen as dg
from . import divpol as dp
from . import exactgeom as eg
from .divpol import DivisorialPolytope, FanoCertificate, ProjPoint
from .errors import DuplicateSourcePoints, GenericPointNotAllowed
from .exactgeom import Vec, dot, rat

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# exact Moebius transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mobius:
    """x -> (a x + b) / (c x + d) with exact rational, canonically scaled
    coefficients and nonzero determinant."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @property
    def determinant(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def apply(self, x: ProjPoint) -> ProjPoint:
        if x.is_generic:
            raise GenericPointNotAllowed("Moebius maps act on concrete points")
        if x.is_infinity:
            if self.c == 0:
                return ProjPoint.infinity()
            return ProjPoint.of(self.a / self.c)
        denom = self.c * x.value + self.d
        if denom == 0:
            return ProjPoint.infinity()
        return ProjPoint.of((self.a * x.value + self.b) / denom)

    def compose(self, other: "Mobius") -> "Mobius":
        """self after other: (self o other)(x) = self(other(x))."""
        return mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return mobius(self.d, -self.b, -self.c, self.a)

    def fixed_point_tags(self) -> frozenset:
        """The fixed-point set on the complex projective line, exactly.

        Rational fixed points are tagged individually; an irrational
        (possibly complex) pair is tagged by its normalized quadratic data
        (u, w, m) with roots u +- w sqrt(m), m squarefree.  Conjugate pairs
        are atomic: a rational map fixing one root fixes both.
        """
        if self.is_identity:
            raise ValueError("the identity fixes every point")
        a, b, c, d = self.a, self.b, self.c, self.d
        if c == 0:
            if a == d:
                return frozenset({("inf",)})
            return frozenset({("inf",), ("rat", b / (d - a))})
        disc = (d - a) ** 2 + 4 * b * c
        center = (a - d) / (2 * c)
        if disc == 0:
            return frozenset({("rat", center)})
        root = _rational_sqrt(disc)
        if root is not None:
            h = root / (2 * c)
            return frozenset({("rat", center + h), ("rat", center - h)})
        w, m = _normalize_surd(disc)
        return frozenset({("quad", center, abs(w / (2 * c)), m)})

    def __str__(self):
        return f"x -> ({self.a}x + {self.b})/({self.c}x + {self.d})"


def mobius(a, b, c, d) -> Mobius:
    """Canonical form: integer coprime coefficients, first nonzero positive."""
    coeffs = [rat(a), rat(b), rat(c), rat(d)]
    if coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2] == 0:
        raise ValueError("Moebius map with zero determinant")
    from math import lcm
    den = lcm(*(x.denominator for x in coeffs))
    ints = [int(x * den) for x in coeffs]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return Mobius(*(Fraction(x) for x in ints))


MOBIUS_IDENTITY = mobius(1, 0, 0, 1)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree (sign carried by m)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s = 1
    m = 1
    d = 2
    while d * d <= n:
        exp = 0
        while n % d == 0:
            n //= d
            exp += 1
        s *= d ** (exp // 2)
        if exp % 2:
            m *= d
        d += 1
    return s, sign * m * n


def _normalize_surd(q: Fraction) -> tuple[Fraction, int]:
    """sqrt(q) = w * sqrt(m) with w rational > 0 and m squarefree."""
    inner = q.numerator * q.denominator
    s, m = _squarefree_decompose(inner)
    return Fraction(s, q.denominator), m


def _to_01inf(z1: ProjPoint, z2: ProjPoint, z3: ProjPoint) -> Mobius:
    """The unique Moebius map sending (z1, z2, z3) to (0, 1, inf)."""
    if z1.is_infinity:
        return mobius(0, z2.value - z3.value, 1, -z3.value)
    if z2.is_infinity:
        return mobius(1, -z1.value, 1, -z3.value)
    if z3.is_infinity:
        return mobius(1, -z1.value, 0, z2.value - z1.value)
    return mobius(
        z2.value - z3.value,
        -z1.value * (z2.value - z3.value),
        z2.value - z1.value,
        -z3.value * (z2.value - z1.value),
    )


def _canonical_padding(used):
    seq = [ProjPoint.of(0), ProjPoint.of(1), ProjPoint.infinity()]
    k = 2
    while True:
        for p in seq:
            if p not in used:
                yield p
        seq = [ProjPoint.of(k)]
        k += 1


def mobius_from_pairs(pairs) -> Mobius | None:
    """The Moebius map through the given (source, target) pairs, or None.

    Three pairs determine the map; extra pairs are verified (a cross-ratio
    mismatch yields None).  Fewer than three pairs are completed
    deterministically with fixed points 0, 1, inf, 2, ... not already
    involved, so the result is canonical.
    """
    pairs = list(pairs)
    sources = [p for p, _ in pairs]
    targets = [q for _, q in pairs]
    if len(set(sources)) != len(sources):
        raise DuplicateSourcePoints(f"duplicate source points in {pairs}")
    if len(set(targets)) != len(targets):
        return None
    if len(pairs) < 3:
        used = set(sources) | set(targets)
        pad = _canonical_padding(used)
        while len(pairs) < 3:
            p = next(pad)
            pairs.append((p, p))
            sources.append(p)
            targets.append(p)
    mz = _to_01inf(*[p for p, _ in pairs[:3]])
    mw = _to_01inf(*[q for _, q in pairs[:3]])
    psi = mw.inverse().compose(mz)
    for src, dst in pairs[3:]:
        if psi.apply(src) != dst:
            return None
    return psi


# ---------------------------------------------------------------------------
# box symmetries
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def box_lattice_automorphisms(box: eg.Polytope) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All unimodular integer matrices mapping the vertex set onto itself.

    Found by mapping one linearly independent vertex tuple to every candidate
    image tuple and verifying; the identity comes first, the rest follow in
    lexicographic order.
    """
    d = box.dim
    verts = box.vertices
    base = next(
        c for c in itertools.combinations(verts, d)
        if eg.det_frac(c) != 0
    )
    w_cols = tuple(zip(*base))  # matrix with the base vertices as columns
    w_inv = eg.mat_inv(w_cols)
    vert_set = set(verts)
    found = set()
    for image in itertools.permutations(verts, d):
        z_cols = tuple(zip(*image))
        u = eg.mat_mul(z_cols, w_inv)
        flat = [x for row in u for x in row]
        if any(x.denominator != 1 for x in flat):
            continue
        if abs(eg.det_frac(u)) != 1:
            continue
        if {eg.mat_vec(u, v) for v in verts} != vert_set:
            continue
        found.add(tuple(tuple(int(x) for x in row) for row in u))
    identity = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    rest = sorted(found - {identity})
    return (identity,) + tuple(rest)


# ---------------------------------------------------------------------------
# automorphism pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AutomorphismPair:
    """A Moebius map and a box symmetry satisfying the matching equation
    psi_P(F* u) + <u, v_P> + b_P = psi_{sigma(P)}(u) + b_{sigma(P)}."""

    psi: Mobius
    fstar: tuple[tuple[int, ...], ...]
    shifts: tuple[tuple[ProjPoint, tuple[tuple[int, ...], int]], ...]

    def v_of(self, p: ProjPoint) -> tuple[int, ...]:
        for q, (v, _) in self.shifts:
            if q == p:
                return v
        return (0,) * len(self.fstar)

    def b_of(self, p: ProjPoint) -> int:
        for q, (_, b) in self.shifts:
            if q == p:
                return b
        return 0

    @property
    def is_identity(self) -> bool:
        d = len(self.fstar)
        return self.psi.is_identity and self.fstar == tuple(
            tuple(1 if i == j else 0 for j in range(d)) for i in range(d)
        )


def _affine_difference(f_target: dp.PLConcave, f_source: dp.PLConcave):
    """If f_target - f_source is affine, return (slope, constant), else None.

    Both functions are PL on the same box; the difference is affine iff the
    per-chamber representations agree across the common refinement.
    """
    reps = set()
    for cell_t, piece_t in dp.linearity_cells(f_target):
        for cell_s, piece_s in dp.linearity_cells(f_source):
            inter = eg.intersect(cell_t, cell_s)
            if inter.affine_hull_dim == f_target.box.dim:
                reps.add((eg.vsub(piece_t.slope, piece_s.slope),
                          piece_t.constant - piece_s.constant))
            if len(reps) > 1:
                return None
    assert reps, "common refinements always share a full-dimensional chamber"
    return reps.pop()


def _integer_cycle_shifts(cycles, betas):
    """Integer b_P with b_P - b_{sigma(P)} = beta_P and total sum zero, or None.

    Cycle sums of beta must vanish; the per-cycle base values then form a
    linear Diophantine problem solved by iterated extended gcd, preferring
    the all-zero solution when possible.
    """
    partial = []
    for cycle in cycles:
        acc = 0
        values = []
        for p in cycle:
            values.append(acc)
            acc -= betas[p]
        if acc != 0:
            return None  # beta does not telescope around the cycle
        partial.append(values)
    lengths = [len(c) for c in cycles]
    target = -sum(sum(v) for v in partial)
    if target == 0:
        ts = [0] * len(cycles)
    else:
        ts = _solve_linear_diophantine(lengths, target)
        if ts is None:
            return None
    out = {}
    for cycle, values, t in zip(cycles, partial, ts):
        for p, v in zip(cycle, values):
            out[p] = v + t
    return out


def _solve_linear_diophantine(coeffs, target):
    """Integer solution of sum coeffs_i * t_i = target, or None."""
    g = 0
    bezout = []
    for k in coeffs:
        old = g
        g2, x, y = _ext_gcd(g, k)
        bezout.append((x, y, old))
        g = g2
    if g == 0 or target % g != 0:
        return None
    scale = target // g
    ts = [0] * len(coeffs)
    carry = scale
    for i in range(len(coeffs) - 1, -1, -1):
        x, y, _ = bezout[i]
        ts[i] = y * carry
        carry = x * carry
    return ts


def _ext_gcd(a, b):
    if a == 0:
        return abs(b), 0, (0 if b == 0 else (1 if b > 0 else -1))
    g, x, y = _ext_gcd(b % a, a)
    return g, y - (b // a) * x, x


def _permutation_cycles(points, images):
    mapping = dict(zip(points, images))
    seen = set()
    cycles = []
    for p in points:
        if p in seen:
            continue
        cycle = [p]
        seen.add(p)
        q = mapping[p]
        while q != p:
            cycle.append(q)
            seen.add(q)
            q = mapping[q]
        cycles.append(cycle)
    return cycles


def find_automorphism_pairs(cert) -> list[AutomorphismPair]:
    """Exhaustive search for automorphism pairs of a Fano divisorial polytope.

    Ranges over all box symmetries and all Moebius-realizable permutations of
    the support; a pair is accepted iff every entry matches its image up to
    an integral affine shift and the shifts admit integer telescoping
    constants with zero total sum.  The identity pair is always present.
    """
    psi_data = dg._as_certified(cert)
    return list(_find_pairs_cached(psi_data))


@lru_cache(maxsize=None)
def _find_pairs_cached(psi_data: DivisorialPolytope):
    supp = dp.support(psi_data)
    auts = box_lattice_automorphisms(psi_data.box)
    accepted = []
    for fstar in auts:
        composed = {
            p: dp.compose_linear(psi_data.entry(p), fstar) for p in supp
        }
        for image in itertools.permutations(supp):
            psi_map = mobius_from_pairs(list(zip(supp, image)))
            if psi_map is None:
                continue
            shifts_v = {}
            betas = {}
            ok = True
            for p, q in zip(supp, image):
                diff = _affine_difference(psi_data.entry(q), composed[p])
                if diff is None:
                    ok = False
                    break
                slope, const = diff
                if not eg.is_integral_vec(slope) or const.denominator != 1:
                    ok = False
                    break
                shifts_v[p] = tuple(int(x) for x in slope)
                betas[p] = int(const)
            if not ok:
                continue
            if any(sum(v[i] for v in shifts_v.values()) != 0
                   for i in range(psi_data.dim)):
                continue
            cycles = _permutation_cycles(supp, image)
            bs = _integer_cycle_shifts(cycles, betas)
            if bs is None:
                continue
            shifts = tuple(
                (p, (shifts_v[p], bs[p])) for p in supp
            )
            accepted.append(AutomorphismPair(psi_map, fstar, shifts))
    return tuple(accepted)


# ---------------------------------------------------------------------------
# sufficient soliton criteria
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriteriaReport:
    c1: bool
    c2: bool
    c3: bool
    high_mu_points: tuple[ProjPoint, ...]
    swap_witness: tuple[ProjPoint, ProjPoint] | None
    note: str

    @property
    def any(self) -> bool:
        return self.c1 or self.c2 or self.c3


def relabel_points(psi: DivisorialPolytope, m: Mobius) -> DivisorialPolytope:
    """Move every entry from P to m(P), leaving the functions untouched."""
    entries = [(m.apply(p), f) for p, f in psi.entries]
    kdiv = None
    if psi.kdiv is not None:
        kdiv = {m.apply(p): a for p, a in psi.kdiv}
    return dp.divisorial_polytope(psi.box, entries, kdiv)


def soliton_criteria(cert) -> CriteriaReport:
    """The three sufficient conditions for soliton existence.

    c1: at least three points with slope denominator above one.  c2: two
    such points swapped by an accepted pair.  c3: the found Moebius maps
    have no common fixed point on the complex projective line.  c3 = False
    is inconclusive (the true automorphism group may be larger than the
    combinatorially found one); c3 = True is a proof.
    """
    if isinstance(cert, FanoCertificate):
        mus = {p: cert.mu_of(p) for p in dp.support(cert.divpol)}
        base = cert.divpol
    else:
        base = dg._as_certified(cert)
        mus = {p: dp.mu_of_point(base, p) for p in dp.support(base)}
    high = tuple(p for p, m in sorted(mus.items()) if m > 1)
    c1 = len(high) >= 3
    pairs = find_automorphism_pairs(base)
    swap_witness = None
    for pair in pairs:
        for p1, p2 in itertools.combinations(high, 2):
            if pair.psi.apply(p1) == p2 and pair.psi.apply(p2) == p1:
                swap_witness = (p1, p2)
                break
        if swap_witness:
            break
    c2 = swap_witness is not None
    generators = [pair.psi for pair in pairs if not pair.psi.is_identity]
    if generators:
        common = generators[0].fixed_point_tags()
        for g in generators[1:]:
            common = common & g.fixed_point_tags()
        c3 = not common
    else:
        c3 = False
    note = ("c3=False is inconclusive: only combinatorially found symmetries "
            "were examined")
    return CriteriaReport(c1, c2, c3, high, swap_witness, note)
