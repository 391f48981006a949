"""Divisorial polytopes: piecewise-linear concave data over a lattice polytope.

A divisorial polytope assigns to finitely many points of the projective line
a concave piecewise affine function on a common lattice polytope (the box),
subject to positivity of the pointwise degree on the interior and
integrality of all graph vertices.  The Fano condition additionally forces a
canonical coefficient a_P per point, computed here from the piece data:
every active piece (v, c) of an entry must satisfy c = 1/mu(v) - a_P - 1 for
one integer a_P, the coefficients must sum to -2, and box facets supporting
positive degree must lie at lattice distance one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache, total_ordering

from . import exactgeom as eg
from .errors import (
    EmptyPieces,
    GenericPointNotAllowed,
    InvalidDivpol,
    OutsideDomain,
)
from .exactgeom import Polytope, Vec, dot, rat, vec

_ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# points of the projective line
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1: an exact rational, infinity, or the generic point.

    The generic point stands for any point outside the support of a
    divisorial polytope; it never appears as a key of the support map.
    """

    kind: int  # 0 = rational, 1 = infinity, 2 = generic
    value: Fraction = _ZERO

    @staticmethod
    def of(q) -> "ProjPoint":
        return ProjPoint(0, rat(q))

    @staticmethod
    def infinity() -> "ProjPoint":
        return ProjPoint(1)

    @staticmethod
    def generic() -> "ProjPoint":
        return ProjPoint(2)

    @staticmethod
    def parse(text: str) -> "ProjPoint":
        s = text.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return ProjPoint.infinity()
        if s == "generic":
            return ProjPoint.generic()
        return ProjPoint.of(Fraction(s))

    @property
    def is_infinity(self) -> bool:
        return self.kind == 1

    @property
    def is_generic(self) -> bool:
        return self.kind == 2

    def __lt__(self, other):
        return (self.kind, self.value) < (other.kind, other.value)

    def __str__(self):
        if self.kind == 1:
            return "inf"
        if self.kind == 2:
            return "generic"
        return str(self.value)

    def __repr__(self):
        return f"ProjPoint({self})"


GENERIC = ProjPoint.generic()
INF = ProjPoint.infinity()


# ---------------------------------------------------------------------------
# piecewise linear concave functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffinePiece:
    """One affine piece u -> <u, slope> + constant of a PL function."""

    slope: Vec
    constant: Fraction

    def value(self, u) -> Fraction:
        return dot(self.slope, u) + self.constant

    def __repr__(self):
        return f"AffinePiece({tuple(map(str, self.slope))}, {self.constant})"


def piece(slope, constant) -> AffinePiece:
    return AffinePiece(eg.as_vec(slope), rat(constant))


@dataclass(frozen=True)
class PLConcave:
    """Concave PL function on a box, stored as a minimum of affine pieces.

    Concavity is structural: any list of pieces yields a concave function.
    """

    box: Polytope
    pieces: tuple[AffinePiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise EmptyPieces("PL function with no pieces")

    @property
    def dim(self) -> int:
        return self.box.dim


def plconcave(box: Polytope, pieces) -> PLConcave:
    ps = tuple(
        sorted({AffinePiece(eg.as_vec(s), rat(c)) for s, c in pieces},
               key=lambda p: (p.slope, p.constant))
    )
    return PLConcave(box, ps)


def zero_function(box: Polytope) -> PLConcave:
    return PLConcave(box, (AffinePiece(eg.zero_vec(box.dim), _ZERO),))


def evaluate(f: PLConcave, u) -> Fraction:
    """Exact value min over pieces; u must lie in the box."""
    u = eg.as_vec(u)
    if not f.box.contains(u):
        raise OutsideDomain(f"{u} is outside the box")
    return min(p.value(u) for p in f.pieces)


def _piece_cell(f: PLConcave, i: int) -> Polytope:
    """Closed region of the box where piece i attains the minimum."""
    pi = f.pieces[i]
    extra = []
    for j, pj in enumerate(f.pieces):
        if j == i:
            continue
        # <u, s_i> + c_i <= <u, s_j> + c_j
        extra.append((eg.vsub(pj.slope, pi.slope), pi.constant - pj.constant))
    return eg.clip(f.box, extra)


@lru_cache(maxsize=None)
def canonicalize(f: PLConcave) -> PLConcave:
    """Drop pieces that are nowhere active on a full-dimensional cell.

    The value function is unchanged pointwise; the surviving pieces are in
    bijection with the maximal linearity cells.
    """
    keep = []
    for i in range(len(f.pieces)):
        if _piece_cell(f, i).affine_hull_dim == f.box.affine_hull_dim:
            keep.append(f.pieces[i])
    assert keep, "a PL function always has at least one maximal cell"
    return PLConcave(f.box, tuple(sorted(set(keep), key=lambda p: (p.slope, p.constant))))


@lru_cache(maxsize=None)
def linearity_cells(f: PLConcave) -> tuple[tuple[Polytope, AffinePiece], ...]:
    """Full-dimensional cells covering the box, each with its active piece."""
    g = canonicalize(f)
    return tuple((_piece_cell(g, i), g.pieces[i]) for i in range(len(g.pieces)))


def is_zero_function(f: PLConcave) -> bool:
    g = canonicalize(f)
    return len(g.pieces) == 1 and eg.is_zero_vec(g.pieces[0].slope) and g.pieces[0].constant == 0


def compose_linear(f: PLConcave, mat) -> PLConcave:
    """The PL function u -> f(M u) on the box M^{-1}(box).

    Slopes transform by the transpose: <Mu, s> = <u, M^T s>.  Used with box
    automorphisms, where the domain stays the box itself.
    """
    inv = eg.mat_inv(tuple(tuple(rat(x) for x in row) for row in mat))
    if inv is None:
        raise InvalidDivpol("composition with a singular matrix")
    new_box = eg.transform(f.box, inv)
    cols = list(zip(*mat))
    return plconcave(new_box,
                     [(tuple(dot(col, p.slope) for col in cols), p.constant)
                      for p in f.pieces])


def transform_divpol(psi: "DivisorialPolytope", mat) -> "DivisorialPolytope":
    """Recoordinatize by an invertible integer matrix: the box maps forward,
    entries compose with the inverse, so values at corresponding points agree."""
    inv = eg.mat_inv(tuple(tuple(rat(x) for x in row) for row in mat))
    if inv is None:
        raise InvalidDivpol("recoordinatization by a singular matrix")
    entries = [(p, compose_linear(f, inv)) for p, f in psi.entries]
    new_box = eg.transform(psi.box, mat)
    return divisorial_polytope(new_box, entries, None if psi.kdiv is None else dict(psi.kdiv))


def graph_polytope(f: PLConcave) -> Polytope:
    """The region between the graph of f and its minimum value, as a polytope.

    Its upper vertices are exactly the vertices of the graph of f.
    """
    d = f.dim
    m0 = min(evaluate(f, v) for v in f.box.vertices)
    hs = [(tuple(n) + (0,), c) for n, c in f.box.halfspaces]
    hs.append(((0,) * d + (1,), m0))
    for p in f.pieces:
        hs.append((tuple(p.slope) + (-1,), -p.constant))
    return eg.from_halfspaces(hs, d + 1)


# ---------------------------------------------------------------------------
# divisorial polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorialPolytope:
    """A box plus finitely many PL concave entries indexed by points of P^1."""

    box: Polytope
    entries: tuple[tuple[ProjPoint, PLConcave], ...]
    kdiv: tuple[tuple[ProjPoint, int], ...] | None = None

    def entry(self, p: ProjPoint) -> PLConcave:
        for q, f in self.entries:
            if q == p:
                return f
        return zero_function(self.box)

    @property
    def dim(self) -> int:
        return self.box.dim

    def a_coefficient(self, p: ProjPoint) -> int:
        """Canonical-divisor coefficient from kdiv; 0 off its support."""
        if self.kdiv is None:
            raise InvalidDivpol("no canonical coefficients attached (run fano_check)")
        for q, a in self.kdiv:
            if q == p:
                return a
        return 0


def divisorial_polytope(box: Polytope, entries, kdiv=None) -> DivisorialPolytope:
    """Build and structurally check a divisorial polytope.

    entries: mapping or iterable of (ProjPoint, PLConcave).  Entries are
    canonicalized; their boxes must equal the given box; Generic is not a
    legal key.  Supported ranks are 1 <= dim <= 3.
    """
    if not 1 <= box.dim <= 3:
        raise InvalidDivpol(f"rank {box.dim} is not supported (need 1 <= d <= 3)")
    items = sorted(entries.items() if hasattr(entries, "items") else entries)
    seen = set()
    canon = []
    for p, f in items:
        if p.is_generic:
            raise InvalidDivpol("the generic point cannot index an entry")
        if p in seen:
            raise InvalidDivpol(f"duplicate entry for point {p}")
        seen.add(p)
        if f.box != box:
            raise InvalidDivpol(f"entry at {p} lives on a different box")
        canon.append((p, canonicalize(f)))
    kd = None
    if kdiv is not None:
        kd = tuple(sorted((p, int(a)) for p, a in (kdiv.items() if hasattr(kdiv, "items") else kdiv)))
        for p, _ in kd:
            if p.is_generic:
                raise InvalidDivpol("the generic point cannot carry a canonical coefficient")
    return DivisorialPolytope(box, tuple(canon), kd)


def support(psi: DivisorialPolytope) -> tuple[ProjPoint, ...]:
    """The points whose entry is not identically zero, in canonical order."""
    return tuple(p for p, f in psi.entries if not is_zero_function(f))


@lru_cache(maxsize=None)
def common_refinement(psi: DivisorialPolytope):
    """Chambers of the common refinement of all entries' linearity cells.

    Returns a tuple of (chamber, active) with active mapping each entry point
    to its unique active piece on that chamber.
    """
    chambers = [(psi.box, ())]
    for p, f in psi.entries:
        new = []
        for chamber, active in chambers:
            for cell, pc in linearity_cells(f):
                c = eg.intersect(chamber, cell)
                if c.affine_hull_dim == psi.box.dim:
                    new.append((c, active + ((p, pc),)))
        chambers = new
    return tuple((c, dict(a)) for c, a in chambers)


@lru_cache(maxsize=None)
def refinement_vertices(psi: DivisorialPolytope) -> tuple[Vec, ...]:
    verts = set()
    for chamber, _ in common_refinement(psi):
        verts.update(chamber.vertices)
    return tuple(sorted(verts))


@lru_cache(maxsize=None)
def degree_function(psi: DivisorialPolytope) -> PLConcave:
    """The pointwise sum of all entries, as a canonical PL concave function."""
    pieces = set()
    for chamber, active in common_refinement(psi):
        slope = eg.zero_vec(psi.box.dim)
        const = _ZERO
        for p, _ in psi.entries:
            pc = active[p]
            slope = eg.vadd(slope, pc.slope)
            const += pc.constant
        pieces.add((slope, const))
    return canonicalize(plconcave(psi.box, pieces))


def partial_degree_function(psi: DivisorialPolytope, excluded: ProjPoint) -> PLConcave:
    """Sum of all entries except the one at ``excluded`` (Generic excludes none)."""
    pieces = set()
    for chamber, active in common_refinement(psi):
        slope = eg.zero_vec(psi.box.dim)
        const = _ZERO
        for p, _ in psi.entries:
            if p == excluded:
                continue
            pc = active[p]
            slope = eg.vadd(slope, pc.slope)
            const += pc.constant
        pieces.add((slope, const))
    return canonicalize(plconcave(psi.box, pieces))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationFailure:
    code: str
    witness: object
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[ValidationFailure, ...]

    def __bool__(self):
        return self.ok


@lru_cache(maxsize=None)
def validate(psi: DivisorialPolytope) -> ValidationReport:
    """Check the defining conditions of a divisorial polytope.

    Box: full-dimensional with lattice vertices.  Degree: positive on the
    interior of the box; by concavity this is equivalent to nonnegativity at
    every refinement vertex together with strict positivity at the box
    barycenter (interior refinement vertices are reported individually when
    they fail).  Graph: for every support entry, all vertices of the graph
    polytope are lattice points.
    """
    failures = []
    box = psi.box
    if not box.is_full_dimensional:
        failures.append(ValidationFailure("box-dimension", box, "box is not full-dimensional"))
        return ValidationReport(False, tuple(failures))
    for v in box.vertices:
        if not eg.is_integral_vec(v):
            failures.append(ValidationFailure("box-lattice", v, f"box vertex {v} is not a lattice point"))
    deg = degree_function(psi)
    for v in refinement_vertices(psi):
        val = evaluate(deg, v)
        if box.contains_in_interior(v):
            if val <= 0:
                failures.append(ValidationFailure(
                    "degree-positivity", v, f"deg at interior vertex {v} is {val} <= 0"))
        elif val < 0:
            failures.append(ValidationFailure(
                "degree-positivity", v, f"deg at boundary vertex {v} is {val} < 0"))
    center = eg.barycenter(box)
    if evaluate(deg, center) <= 0:
        failures.append(ValidationFailure(
            "degree-positivity", center, f"deg at {center} is {evaluate(deg, center)} <= 0"))
    for p, f in psi.entries:
        if is_zero_function(f):
            continue
        g = graph_polytope(f)
        for v in g.vertices:
            if not eg.is_integral_vec(v):
                failures.append(ValidationFailure(
                    "graph-integrality", (p, v), f"graph vertex {v} of entry {p} is not integral"))
    return ValidationReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# slope denominators and the Fano condition
# ---------------------------------------------------------------------------

def _mu_slope(slope: Vec) -> int:
    if eg.is_zero_vec(slope):
        return 1
    return eg.primitive(slope)[1]


def mu_of_point(psi: DivisorialPolytope, p: ProjPoint) -> int:
    """Maximal slope denominator of the entry at p (1 off the support)."""
    if p.is_generic:
        raise GenericPointNotAllowed("mu is defined for concrete points only")
    f = canonicalize(psi.entry(p))
    return max(_mu_slope(pc.slope) for pc in f.pieces)


@dataclass(frozen=True)
class FanoFailure:
    clause: str
    witness: object
    message: str

    @property
    def ok(self) -> bool:
        return False

    def __bool__(self):
        return False


@dataclass(frozen=True)
class FanoCertificate:
    """Witness that a divisorial polytope is Fano, with the forced data."""

    divpol: DivisorialPolytope  # carries the canonical coefficients as kdiv
    a: tuple[tuple[ProjPoint, int], ...]
    mu: tuple[tuple[ProjPoint, int], ...]

    @property
    def ok(self) -> bool:
        return True

    def __bool__(self):
        return True

    def a_of(self, p: ProjPoint) -> int:
        for q, v in self.a:
            if q == p:
                return v
        return 0

    def mu_of(self, p: ProjPoint) -> int:
        for q, v in self.mu:
            if q == p:
                return v
        return 1


def fano_check(psi: DivisorialPolytope):
    """Decide the Fano condition and force the canonical coefficients.

    Per support point, every canonical piece (v, c) yields the candidate
    a_P = 1/mu(v) - c - 1; all candidates must agree on one integer, the
    entry value at the origin must satisfy psi_P(0) + a_P + 1 > 0, the
    coefficients must sum to -2 (off-support points are forced to 0), and
    every box facet carrying nonzero degree must have lattice distance 1.
    Returns a FanoCertificate on success, a FanoFailure naming the violated
    clause otherwise.
    """
    rep = validate(psi)
    if not rep.ok:
        raise InvalidDivpol(f"fano_check on an invalid divisorial polytope: {rep.failures[0].message}")
    origin = eg.zero_vec(psi.dim)
    if not psi.box.contains_in_interior(origin):
        return FanoFailure("origin-interior", psi.box, "the origin is not interior to the box")
    a_map: dict[ProjPoint, int] = {}
    mu_map: dict[ProjPoint, int] = {}
    for p in support(psi):
        f = canonicalize(psi.entry(p))
        cands = []
        for pc in f.pieces:
            mu = _mu_slope(pc.slope)
            cands.append((Fraction(1, mu) - pc.constant - 1, pc))
        values = {c for c, _ in cands}
        if len(values) != 1:
            return FanoFailure("vertical-distance", (p, tuple(values)),
                               f"entry {p}: pieces force conflicting coefficients {sorted(values)}")
        a_val = values.pop()
        if a_val.denominator != 1:
            return FanoFailure("vertical-distance", (p, a_val),
                               f"entry {p}: forced coefficient {a_val} is not an integer")
        a_p = int(a_val)
        if evaluate(f, origin) + a_p + 1 <= 0:
            return FanoFailure("vertical-positivity", (p, a_p),
                               f"entry {p}: value at 0 plus {a_p} + 1 is not positive")
        a_map[p] = a_p
        mu_map[p] = mu_of_point(psi, p)
    total = sum(a_map.values())
    if total != -2:
        return FanoFailure("degree-sum", total,
                           f"canonical coefficients sum to {total}, expected -2")
    deg = degree_function(psi)
    for n, c in psi.box.inequalities:
        tight = [v for v in psi.box.vertices if dot(n, v) == c]
        fpoly = eg.hull(tight)
        if evaluate(deg, eg.barycenter(fpoly)) != 0:
            if eg.lattice_distance(n, c) != 1:
                return FanoFailure("horizontal-distance", (n, c),
                                   f"facet <{n}, u> >= {c} has lattice distance "
                                   f"{eg.lattice_distance(n, c)} but carries nonzero degree")
    if psi.kdiv is not None:
        declared = dict(psi.kdiv)
        for p in set(declared) | set(a_map):
            if declared.get(p, 0) != a_map.get(p, 0):
                return FanoFailure("kdiv-mismatch", p,
                                   f"declared coefficient at {p} is {declared.get(p, 0)}, "
                                   f"forced value is {a_map.get(p, 0)}")
    certified = replace(psi, kdiv=tuple(sorted(a_map.items())))
    return FanoCertificate(certified, tuple(sorted(a_map.items())), tuple(sorted(mu_map.items())))
