"""Polyhedral divisors on the projective line.

A polyhedral divisor assigns to finitely many points a rational polyhedron
with one common pointed recession (tail) cone.  Evaluation produces the
per-point support minima, the degree is the Minkowski sum of the
coefficients, properness is strict containment of the degree in the tail
cone, and admissibility bounds the number of non-lattice minimizing faces.
The duality with divisorial polytopes identifies each canonical piece
(v, c) of an entry with the coefficient vertex (v, c) one dimension up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import divpol as dp
from . import exactgeom as eg
from .divpol import DivisorialPolytope, ProjPoint
from .errors import InvalidDivpol, MismatchedTails, OutsideDualCone
from .exactgeom import Vec, dot

_ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# pointed rational cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with canonical dual representations.

    ``rays`` are the primitive extreme ray generators (empty for the zero
    cone); ``halfspaces`` are primitive inward normals, with the linear span
    cut out by opposite pairs when the cone is not full-dimensional.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    halfspaces: tuple[tuple[int, ...], ...]

    def contains(self, x) -> bool:
        x = eg.as_vec(x)
        return all(dot(n, x) >= 0 for n in self.halfspaces)

    def dual_contains(self, u) -> bool:
        """Membership in the dual cone {u : <u, x> >= 0 on the cone}."""
        u = eg.as_vec(u)
        return all(dot(u, r) >= 0 for r in self.rays) if self.rays else True

    @property
    def is_pointed(self) -> bool:
        return all(
            not self.contains(tuple(-x for x in r)) for r in self.rays
        )

    def __repr__(self):
        return f"Cone(dim={self.dim}, rays={self.rays})"


def _box_halfspaces(dim):
    out = []
    for i in range(dim):
        e = tuple(1 if j == i else 0 for j in range(dim))
        out.append((e, Fraction(-1)))
        out.append((tuple(-x for x in e), Fraction(-1)))
    return out


def _extreme_directions(normals, dim):
    """Extreme rays of {x : <n, x> >= 0 for n in normals} (must be pointed)."""
    hs = [(n, _ZERO) for n in normals] + _box_halfspaces(dim)
    clipped = eg.from_halfspaces(hs, dim)
    rays = set()
    for v in clipped.vertices:
        if eg.is_zero_vec(v):
            continue
        tight = [n for n in normals if dot(n, v) == 0]
        rank_tight = len(eg.rref(tight)[1]) if tight else 0
        if rank_tight == dim - 1:
            rays.add(eg.primitive(v)[0])
    return tuple(sorted(rays))


def cone_from_rays(rays, dim: int) -> Cone:
    """Canonical cone generated by the given ray directions."""
    prim = sorted({eg.primitive(r)[0] for r in (eg.as_vec(r) for r in rays)
                   if not eg.is_zero_vec(r)})
    if not prim:
        ident = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
        hs = tuple(ident) + tuple(tuple(-x for x in e) for e in ident)
        return Cone(dim, (), tuple(sorted(hs)))
    span_basis, pivots = eg.rref(prim)
    rank = len(span_basis)
    equations = []
    if rank < dim:
        free = [c for c in range(dim) if c not in pivots]
        for f in free:
            e = [_ZERO] * dim
            e[f] = Fraction(1)
            for i, b in enumerate(span_basis):
                e[pivots[i]] = -b[f]
            n = eg.primitive(tuple(e))[0]
            equations.append(n)
            equations.append(tuple(-x for x in n))
    # facets inside the span: dual-ray enumeration in span coordinates
    span_rays = [tuple(eg.as_vec(r)[j] for j in pivots) for r in prim]
    dual_rays = _extreme_directions(tuple(span_rays), rank) if rank > 0 else ()
    facets = set()
    for m in dual_rays:
        n = [_ZERO] * dim
        for i, j in enumerate(pivots):
            n[j] = Fraction(m[i])
        facets.add(eg.primitive(tuple(n))[0])
    halfspaces = tuple(sorted(set(equations) | facets))
    # keep only the extreme input rays
    rays_out = []
    for r in prim:
        tight = [n for n in halfspaces if dot(n, r) == 0]
        rank_tight = len(eg.rref(tight)[1]) if tight else 0
        if rank_tight >= dim - 1:
            rays_out.append(r)
    return Cone(dim, tuple(sorted(rays_out)), halfspaces)


def cone_from_halfspaces(normals, dim: int) -> Cone:
    """Canonical pointed cone {x : <n, x> >= 0}; rays are re-derived."""
    prim = sorted({eg.primitive_halfspace(n, 0)[0] for n in normals})
    rays = _extreme_directions(tuple(prim), dim)
    return cone_from_rays(rays, dim)


# ---------------------------------------------------------------------------
# polyhedra with a tail cone
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailedPolyhedron:
    """conv(vertices) + tail, with a minimal vertex part."""

    vertices: tuple[Vec, ...]
    tail: Cone

    @property
    def dim(self) -> int:
        return self.tail.dim

    def support_value(self, u) -> Fraction:
        """min <v, u> over the polyhedron; finite only on the dual cone."""
        u = eg.as_vec(u)
        if not self.tail.dual_contains(u):
            raise OutsideDualCone(f"{u} is outside the dual of the tail cone")
        return min(dot(v, u) for v in self.vertices)

    def is_lattice(self) -> bool:
        return all(eg.is_integral_vec(v) for v in self.vertices)

    def contains(self, x) -> bool:
        """Membership in conv(vertices) + tail."""
        x = eg.as_vec(x)
        base = eg.hull(self.vertices)
        shifted = [(tuple(-a for a in n), -dot(n, x)) for n in self.tail.halfspaces]
        return not eg.clip(base, shifted).is_empty

    def vertex_normal_cone(self, v) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Halfspace normals of {u : v minimizes <., u>} (a subcone of the dual)."""
        normals = [eg.vsub(w, v) for w in self.vertices if w != v]
        normals += [eg.as_vec(r) for r in self.tail.rays]
        return tuple(normals)


def tailed_polyhedron(vertices, tail: Cone) -> TailedPolyhedron:
    """Build with vertex minimalization: drop v lying in conv(rest) + tail."""
    verts = sorted({eg.as_vec(v) for v in vertices})
    if not verts:
        raise InvalidDivpol("a polyhedral coefficient needs at least one vertex")
    keep = []
    for i, v in enumerate(verts):
        rest = verts[:i] + verts[i + 1:]
        if not rest:
            keep.append(v)
            continue
        base = eg.hull(rest)
        # v in conv(rest) + tail  iff  conv(rest) meets v - tail
        shifted = [(tuple(-a for a in n), -dot(n, v)) for n in tail.halfspaces]
        if eg.clip(base, shifted).is_empty:
            keep.append(v)
    return TailedPolyhedron(tuple(keep), tail)


# ---------------------------------------------------------------------------
# polyhedral divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PDivisor:
    """Finite formal sum of tailed polyhedra over points of P^1."""

    tail: Cone
    coeffs: tuple[tuple[ProjPoint, TailedPolyhedron], ...]

    @property
    def dim(self) -> int:
        return self.tail.dim

    def coefficient(self, p: ProjPoint) -> TailedPolyhedron:
        for q, c in self.coeffs:
            if q == p:
                return c
        return TailedPolyhedron((eg.zero_vec(self.dim),), self.tail)


def pdivisor(tail: Cone, coeffs) -> PDivisor:
    items = sorted(coeffs.items() if hasattr(coeffs, "items") else coeffs)
    for p, c in items:
        if p.is_generic:
            raise InvalidDivpol("the generic point cannot carry a coefficient")
        if c.tail != tail:
            raise MismatchedTails(f"coefficient at {p} has a different tail cone")
    if not tail.is_pointed:
        raise InvalidDivpol("the tail cone must be pointed")
    return PDivisor(tail, tuple(items))


def eval_pdiv(d: PDivisor, u) -> dict[ProjPoint, Fraction]:
    """Per-point support minima at u (u must lie in the dual of the tail)."""
    u = eg.as_vec(u)
    if not d.tail.dual_contains(u):
        raise OutsideDualCone(f"{u} is outside the dual of the tail cone")
    return {p: c.support_value(u) for p, c in d.coeffs}


def degree(d: PDivisor) -> TailedPolyhedron:
    """Minkowski sum of all coefficients (the tail itself when there are none)."""
    if not d.coeffs:
        return TailedPolyhedron((eg.zero_vec(d.dim),), d.tail)
    sums = [eg.zero_vec(d.dim)]
    for _, c in d.coeffs:
        sums = [eg.vadd(s, v) for s in sums for v in c.vertices]
    return tailed_polyhedron(sums, d.tail)


def is_proper(d: PDivisor) -> bool:
    """Strict containment of the degree in the tail cone.

    For polyhedra with the tail as recession cone this is equivalent to:
    every degree vertex lies in the cone, and the origin does not lie in the
    degree (otherwise the degree would be the whole cone).
    """
    deg = degree(d)
    if not all(d.tail.contains(v) for v in deg.vertices):
        return False
    return not deg.contains(eg.zero_vec(d.dim))


def is_admissible(coeffs) -> bool:
    """At most one coefficient has a non-lattice minimizing face, for every
    nonzero functional in the dual of the common tail.

    Tested exactly through normal cones: the collection fails iff the normal
    cones of non-lattice vertices of two different coefficients share a
    nonzero vector.
    """
    coeffs = list(coeffs)
    if not coeffs:
        return True
    tail = coeffs[0].tail
    if any(c.tail != tail for c in coeffs):
        raise MismatchedTails("admissibility needs a common tail cone")
    offender_cones = []
    for idx, c in enumerate(coeffs):
        for v in c.vertices:
            if not eg.is_integral_vec(v):
                offender_cones.append((idx, c.vertex_normal_cone(v)))
    for (i, ca), (j, cb) in itertools.combinations(offender_cones, 2):
        if i == j:
            continue
        if _cones_share_nonzero(ca + cb, tail.dim):
            return False
    return True


def _cones_share_nonzero(normals, dim: int) -> bool:
    hs = [(n, _ZERO) for n in normals] + _box_halfspaces(dim)
    clipped = eg.from_halfspaces(hs, dim)
    return any(not eg.is_zero_vec(v) for v in clipped.vertices)


# ---------------------------------------------------------------------------
# duality with divisorial polytopes
# ---------------------------------------------------------------------------

def section_ring_tail(psi: DivisorialPolytope) -> Cone:
    """The tail cone dual to the cone over box x {1}."""
    normals = [tuple(v) + (Fraction(1),) for v in psi.box.vertices]
    return cone_from_halfspaces(normals, psi.dim + 1)


def from_divpol(psi: DivisorialPolytope) -> PDivisor:
    """The polyhedral divisor of the section ring, one dimension up.

    Every canonical piece (v, c) of the entry at p becomes the coefficient
    vertex (v, c); evaluating the result at (u, 1) recovers the entry values.
    """
    rep = dp.validate(psi)
    if not rep.ok:
        raise InvalidDivpol(f"invalid divisorial polytope: {rep.failures[0].message}")
    tail = section_ring_tail(psi)
    coeffs = {}
    for p in dp.support(psi):
        f = dp.canonicalize(psi.entry(p))
        verts = [tuple(pc.slope) + (pc.constant,) for pc in f.pieces]
        coeffs[p] = tailed_polyhedron(verts, tail)
    return pdivisor(tail, coeffs)
