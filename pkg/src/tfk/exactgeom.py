"""Exact rational convex-polytope kernel for ambient dimension <= 4.

Everything here is pure fraction arithmetic: no floating point enters any
computation.  Polytopes carry both a minimal vertex set and a canonical
halfspace description (primitive integer normals), and the two
representations regenerate each other bit-exactly.  Vertex enumeration works
by solving square subsystems of tight constraints, which is exact and fast
enough in these dimensions; facet enumeration uses a monotone chain in the
plane and polar duality above it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm, ceil, floor, factorial

from .errors import (
    EmptyInput,
    MixedDimensions,
    NotFullDimensional,
    ZeroNormal,
    ZeroVector,
    ZeroVolume,
)

Rat = Fraction
Vec = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, Fractions and exact strings ('1/3', '0.5') to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def vec(*coords) -> Vec:
    return tuple(rat(c) for c in coords)


def as_vec(xs) -> Vec:
    return tuple(rat(c) for c in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), _ZERO)


def vadd(a, b) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a, b) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a) -> Vec:
    return tuple(-x for x in a)


def vscale(c, a) -> Vec:
    c = rat(c)
    return tuple(c * x for x in a)


def zero_vec(dim: int) -> Vec:
    return (_ZERO,) * dim


def is_zero_vec(a) -> bool:
    return all(x == 0 for x in a)


def is_integral_vec(a) -> bool:
    return all(x.denominator == 1 for x in a)


# ---------------------------------------------------------------------------
# small exact linear algebra
# ---------------------------------------------------------------------------

def det_int(rows) -> int:
    """Determinant of a small square integer matrix (Bareiss)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_frac(rows) -> Fraction:
    n = len(rows)
    scaled = []
    factor = _ONE
    for row in rows:
        d = lcm(*(rat(x).denominator for x in row)) if row else 1
        factor *= d
        scaled.append(tuple(int(rat(x) * d) for x in row))
    return Fraction(det_int(scaled), 1) / factor


def solve_square(rows, rhs):
    """Solve A x = b exactly by Cramer's rule; None if A is singular."""
    n = len(rows)
    scaled_rows = []
    scaled_rhs = []
    for row, b in zip(rows, rhs):
        entries = [rat(x) for x in row] + [rat(b)]
        d = lcm(*(e.denominator for e in entries))
        scaled_rows.append(tuple(int(e * d) for e in entries[:-1]))
        scaled_rhs.append(int(entries[-1] * d))
    d0 = det_int(scaled_rows)
    if d0 == 0:
        return None
    sol = []
    for j in range(n):
        mod = [r[:j] + (scaled_rhs[i],) + r[j + 1:] for i, r in enumerate(scaled_rows)]
        sol.append(Fraction(det_int(mod), d0))
    return tuple(sol)


def rref(rows):
    """Reduced row echelon form over Q: returns (rows, pivot_columns)."""
    m = [list(map(rat, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def mat_vec(mat, v) -> Vec:
    return tuple(dot(row, v) for row in mat)


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_inv(mat):
    """Exact inverse of a small square rational matrix; None if singular."""
    n = len(mat)
    cols = []
    for j in range(n):
        e = [_ONE if i == j else _ZERO for i in range(n)]
        col = solve_square(mat, e)
        if col is None:
            return None
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def int_kernel_basis(eq_rows, dim: int):
    """Basis of the saturated integer kernel {x in Z^dim : E x = 0}.

    Column-style Hermite reduction: find unimodular U with E U = [H | 0];
    the trailing columns of U form a basis of the kernel lattice.
    """
    u = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    e = [list(r) for r in eq_rows]
    row = 0
    col = 0
    while row < len(e) and col < dim:
        piv = next((j for j in range(col, dim) if e[row][j] != 0), None)
        if piv is None:
            row += 1
            continue
        for i in range(len(e)):
            e[i][col], e[i][piv] = e[i][piv], e[i][col]
        for i in range(dim):
            u[i][col], u[i][piv] = u[i][piv], u[i][col]
        for j in range(col + 1, dim):
            while e[row][j] != 0:
                q = e[row][col] // e[row][j]
                for i in range(len(e)):
                    e[i][col] -= q * e[i][j]
                for i in range(dim):
                    u[i][col] -= q * u[i][j]
                for i in range(len(e)):
                    e[i][col], e[i][j] = e[i][j], e[i][col]
                for i in range(dim):
                    u[i][col], u[i][j] = u[i][j], u[i][col]
        row += 1
        col += 1
    kernel = []
    for j in range(dim):
        if all(e[i][j] == 0 for i in range(len(e))):
            kernel.append(tuple(Fraction(u[i][j]) for i in range(dim)))
    return kernel


# ---------------------------------------------------------------------------
# primitive vectors and halfspaces
# ---------------------------------------------------------------------------

def primitive(v) -> tuple[tuple[int, ...], int]:
    """Primitive integer direction of v plus mu(v), the least k with k*v integral."""
    v = as_vec(v)
    if is_zero_vec(v):
        raise ZeroVector("primitive() of the zero vector")
    mu = lcm(*(x.denominator for x in v))
    w = [int(x * mu) for x in v]
    g = gcd(*w)
    return tuple(x // g for x in w), mu


def primitive_halfspace(normal, offset) -> tuple[tuple[int, ...], Fraction]:
    """Rescale <normal, x> >= offset so the normal is primitive integral."""
    normal = as_vec(normal)
    if is_zero_vec(normal):
        raise ZeroNormal("halfspace with zero normal")
    mu = lcm(*(x.denominator for x in normal))
    w = [int(x * mu) for x in normal]
    g = gcd(*w)
    return tuple(x // g for x in w), rat(offset) * Fraction(mu, g)


def lattice_distance(normal, offset) -> Fraction:
    """Lattice distance of the hyperplane <normal, x> = offset from the origin."""
    _, off = primitive_halfspace(normal, offset)
    return abs(off)


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polytope:
    """Convex rational polytope with dual exact representations.

    ``inequalities`` are the facet halfspaces <n, x> >= c of the polytope
    inside its affine hull; ``equations`` cut out the affine hull itself.
    Both carry primitive integer normals.  ``halfspaces`` flattens the two,
    emitting each equation as an opposite pair of inequalities, so that
    rebuilding from halfspaces alone reproduces the polytope bit-exactly.
    """

    dim: int
    vertices: tuple[Vec, ...]
    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]
    equations: tuple[tuple[tuple[int, ...], Fraction], ...]
    affine_hull_dim: int

    @property
    def halfspaces(self):
        pairs = []
        for n, c in self.equations:
            pairs.append((n, c))
            pairs.append((vneg(n), -c))
        return tuple(pairs) + self.inequalities

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_hull_dim == self.dim

    def contains(self, x) -> bool:
        x = as_vec(x)
        if len(x) != self.dim:
            raise MixedDimensions("point/polytope dimension mismatch")
        if self.is_empty:
            return False
        return all(dot(n, x) == c for n, c in self.equations) and all(
            dot(n, x) >= c for n, c in self.inequalities
        )

    def contains_in_interior(self, x) -> bool:
        """Strict interior test (ambient interior; False unless full-dimensional)."""
        x = as_vec(x)
        if not self.is_full_dimensional:
            return False
        return all(dot(n, x) > c for n, c in self.inequalities)

    def contains_in_relative_interior(self, x) -> bool:
        x = as_vec(x)
        if self.is_empty:
            return False
        return all(dot(n, x) == c for n, c in self.equations) and all(
            dot(n, x) > c for n, c in self.inequalities
        )

    def __repr__(self):
        return f"Polytope(dim={self.dim}, verts={len(self.vertices)}, affdim={self.affine_hull_dim})"


def empty_polytope(dim: int) -> Polytope:
    return Polytope(dim, (), (), (), -1)


def _affine_hull(points):
    """Return (rank, rref direction basis, pivot cols, equations) of aff(points)."""
    v0 = points[0]
    dim = len(v0)
    dirs = [vsub(p, v0) for p in points[1:]]
    basis, pivots = rref(dirs)
    rank = len(basis)
    equations = []
    if rank < dim:
        # nullspace of the direction span: free-variable parametrization of
        # {e : <e, b> = 0 for all basis b}
        free = [c for c in range(dim) if c not in pivots]
        for f in free:
            e = [_ZERO] * dim
            e[f] = _ONE
            for i, b in enumerate(basis):
                e[pivots[i]] = -b[f]
            n, c = primitive_halfspace(tuple(e), dot(e, v0))
            equations.append(_canonical_equation(n, c))
    equations = sorted(set(equations))
    return rank, basis, pivots, tuple(equations)


def _canonical_equation(n, c):
    lead = next(x for x in n if x != 0)
    if lead < 0:
        return vneg(n), -c
    return tuple(n), c


def _hull_coords(points, v0, pivots):
    return [tuple(vsub(p, v0)[j] for j in pivots) for p in points]


def _lift_halfspace(m, c, v0, pivots, dim):
    n = [_ZERO] * dim
    for i, j in enumerate(pivots):
        n[j] = rat(m[i])
    return primitive_halfspace(tuple(n), rat(c) + dot(n, v0))


def _monotone_chain(points):
    """Vertices of a 2-D hull in counterclockwise order, given >= 1 points."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _enumerate_vertices(ineqs, dim):
    """All vertices of {x : <n_i, x> >= c_i}; the system must be bounded."""
    verts = set()
    idx = range(len(ineqs))
    for subset in itertools.combinations(idx, dim):
        sol = solve_square([ineqs[i][0] for i in subset], [ineqs[i][1] for i in subset])
        if sol is None:
            continue
        if all(dot(n, sol) >= c for n, c in ineqs):
            verts.add(sol)
    return sorted(verts)


def _facets_full_dim(points, k):
    """Facet halfspaces of a full-dimensional hull in R^k (k >= 1)."""
    if k == 1:
        xs = [p[0] for p in points]
        return [((1,), min(xs)), ((-1,), -max(xs))]
    if k == 2:
        cyc = _monotone_chain(points)
        if len(cyc) < 3:
            raise AssertionError("degenerate 2-D hull in full-dim path")
        facets = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            d = vsub(b, a)
            n = (-d[1], d[0])
            facets.append(primitive_halfspace(n, dot(n, a)))
        return sorted(set(facets))
    # polar duality around an interior point; a point at the center is never
    # a vertex and would give a vacuous dual halfspace
    center = vscale(Fraction(1, len(points)), tuple(map(sum, zip(*points))))
    dual_ineqs = sorted({primitive_halfspace(vsub(center, p), Fraction(-1))
                         for p in points if p != center})
    facets = set()
    for y in _enumerate_vertices(dual_ineqs, k):
        facets.add(primitive_halfspace(vneg(y), -1 - dot(y, center)))
    return sorted(facets)


def _build_from_vertex_candidates(points, dim) -> Polytope:
    """Canonical polytope from a set of (possibly redundant) points."""
    pts = sorted(set(points))
    if not pts:
        return empty_polytope(dim)
    rank, basis, pivots, equations = _affine_hull(pts)
    if rank == 0:
        return Polytope(dim, (pts[0],), (), equations, 0)
    hull_pts = _hull_coords(pts, pts[0], pivots)
    facets_h = _facets_full_dim(hull_pts, rank)
    ineqs = sorted(
        {_lift_halfspace(m, c, pts[0], pivots, dim) for m, c in facets_h}
    )
    verts = []
    for p, hp in zip(pts, hull_pts):
        tight = [m for m, c in facets_h if dot(m, hp) == c]
        if tight and len(rref(tight)[1]) == rank:
            verts.append(p)
    return Polytope(dim, tuple(verts), tuple(ineqs), equations, rank)


def hull(points) -> Polytope:
    """Convex hull of exact rational points (minimal V- and H-representation)."""
    pts = [as_vec(p) for p in points]
    if not pts:
        raise EmptyInput("hull of no points")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise MixedDimensions(f"points of mixed dimensions {sorted(dims)}")
    return _build_from_vertex_candidates(pts, dims.pop())


def from_halfspaces(halfspaces, dim: int) -> Polytope:
    """Polytope cut out by halfspaces (<n, x> >= c).  Must be bounded.

    Zero normals are interpreted literally: 0 >= c is vacuous for c <= 0 and
    infeasible otherwise.
    """
    ineqs = set()
    for n, c in halfspaces:
        n = as_vec(n)
        c = rat(c)
        if is_zero_vec(n):
            if c > 0:
                return empty_polytope(dim)
            continue
        ineqs.add(primitive_halfspace(n, c))
    verts = _enumerate_vertices(sorted(ineqs), dim)
    return _build_from_vertex_candidates(verts, dim)


def clip(p: Polytope, extra_halfspaces) -> Polytope:
    return from_halfspaces(tuple(p.halfspaces) + tuple(extra_halfspaces), p.dim)


def intersect(p: Polytope, q: Polytope) -> Polytope:
    if p.dim != q.dim:
        raise MixedDimensions("intersect() of polytopes in different ambient spaces")
    return clip(p, q.halfspaces)


def translate(p: Polytope, t) -> Polytope:
    t = as_vec(t)
    if p.is_empty:
        return p
    return Polytope(
        p.dim,
        tuple(sorted(vadd(v, t) for v in p.vertices)),
        tuple((n, c + dot(n, t)) for n, c in p.inequalities),
        tuple(_canonical_equation(n, c + dot(n, t)) for n, c in p.equations),
        p.affine_hull_dim,
    )


def transform(p: Polytope, mat) -> Polytope:
    """Image of p under an invertible linear map (rows of ``mat``)."""
    if p.is_empty:
        return p
    return hull([mat_vec(mat, v) for v in p.vertices])


def face(p: Polytope, u) -> Polytope:
    """The face of p on which the linear form u is minimized."""
    u = as_vec(u)
    if len(u) != p.dim:
        raise MixedDimensions("face(): functional dimension mismatch")
    if p.is_empty:
        return p
    best = min(dot(u, v) for v in p.vertices)
    arg = [v for v in p.vertices if dot(u, v) == best]
    if len(arg) == len(p.vertices):
        return p
    return _build_from_vertex_candidates(arg, p.dim)


def facet_subpolytopes(p: Polytope):
    """The facets of p as polytopes, in the canonical inequality order."""
    out = []
    for n, c in p.inequalities:
        tight = [v for v in p.vertices if dot(n, v) == c]
        out.append(_build_from_vertex_candidates(tight, p.dim))
    return out


# ---------------------------------------------------------------------------
# simplices, triangulation, measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Simplex:
    """Affinely independent points spanning a k-simplex in ambient space."""

    points: tuple[Vec, ...]

    @property
    def order(self) -> int:
        return len(self.points) - 1

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def centroid(self) -> Vec:
        return vscale(Fraction(1, len(self.points)), tuple(map(sum, zip(*self.points))))


def _direction_lattice_basis(p: Polytope):
    """Basis of (linear span of p's directions) intersected with Z^dim."""
    eq_rows = [tuple(int(x) for x in n) for n, _ in p.equations]
    return int_kernel_basis(eq_rows, p.dim)


def _coords_in_basis(basis, w):
    """Solve sum_i t_i basis_i = w exactly (basis has full column rank)."""
    k = len(basis)
    rows_all = list(zip(*basis))  # dim x k
    for subset in itertools.combinations(range(len(rows_all)), k):
        sol = solve_square([rows_all[i] for i in subset], [w[i] for i in subset])
        if sol is not None:
            return sol
    raise AssertionError("direction basis is rank deficient")


@lru_cache(maxsize=None)
def triangulate(p: Polytope) -> tuple[Simplex, ...]:
    """Fan triangulation from the lexicographically smallest vertex.

    Covers p exactly with simplices whose vertices are vertices of p; facets
    are processed in canonical order, so the output is deterministic.
    """
    if p.is_empty:
        return ()
    if p.affine_hull_dim == 0:
        return (Simplex((p.vertices[0],)),)
    if p.affine_hull_dim == 1:
        return (Simplex((p.vertices[0], p.vertices[-1])),)
    apex = p.vertices[0]
    simplices = []
    for f in facet_subpolytopes(p):
        if f.contains(apex):
            continue
        for s in triangulate(f):
            simplices.append(Simplex(s.points + (apex,)))
    return tuple(simplices)


def simplex_volume(s: Simplex, lattice_basis=None) -> Fraction:
    """Euclidean volume of a full-order simplex, or lattice-normalized volume
    inside its affine hull when it is lower-dimensional."""
    k = s.order
    if k == 0:
        return _ONE
    edges = [vsub(q, s.points[0]) for q in s.points[1:]]
    if k == s.dim:
        return abs(det_frac(edges)) / factorial(k)
    if lattice_basis is None:
        poly = _build_from_vertex_candidates(list(s.points), s.dim)
        lattice_basis = _direction_lattice_basis(poly)
    coords = [_coords_in_basis(lattice_basis, e) for e in edges]
    return abs(det_frac(coords)) / factorial(k)


@lru_cache(maxsize=None)
def volume(p: Polytope) -> Fraction:
    """Measure of p inside its affine hull, exactly.

    Full-dimensional polytopes get the Lebesgue measure; lower-dimensional
    ones are measured against the lattice induced on their direction space,
    so a primitive lattice segment has length 1.  The empty polytope has
    volume 0; ambient-dimension measure of a lower-dimensional polytope is 0
    by definition and not what this returns.
    """
    if p.is_empty:
        return _ZERO
    if p.affine_hull_dim == 0:
        return _ONE
    basis = None if p.is_full_dimensional else _direction_lattice_basis(p)
    return sum((simplex_volume(s, basis) for s in triangulate(p)), _ZERO)


@lru_cache(maxsize=None)
def barycenter(p: Polytope) -> Vec:
    """Exact rational centroid (volume-weighted over the fan triangulation)."""
    if p.is_empty:
        raise ZeroVolume("barycenter of the empty polytope")
    if p.affine_hull_dim == 0:
        return p.vertices[0]
    basis = None if p.is_full_dimensional else _direction_lattice_basis(p)
    total = _ZERO
    acc = zero_vec(p.dim)
    for s in triangulate(p):
        w = simplex_volume(s, basis)
        total += w
        acc = vadd(acc, vscale(w, s.centroid()))
    if total == 0:
        raise ZeroVolume("barycenter of a zero-volume polytope")
    return vscale(1 / total, acc)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, _ZERO) + ca * cb
    return out


def _std_simplex_moment(beta, k) -> Fraction:
    """Integral of prod t_i^beta_i over the standard k-simplex."""
    num = 1
    for b in beta:
        num *= factorial(b)
    return Fraction(num, factorial(k + sum(beta)))


def simplex_moment(s: Simplex, alpha) -> Fraction:
    """Exact integral of the monomial x^alpha over a full-order simplex."""
    k = s.order
    if k != s.dim:
        raise NotFullDimensional("simplex_moment needs a full-dimensional simplex")
    v0 = s.points[0]
    edges = [vsub(q, v0) for q in s.points[1:]]
    scale = abs(det_frac(edges))
    poly = {(0,) * k: _ONE}
    for i, a in enumerate(alpha):
        lin = {(0,) * k: v0[i]}
        for j in range(k):
            e = tuple(1 if jj == j else 0 for jj in range(k))
            lin[e] = edges[j][i]
        for _ in range(a):
            poly = _poly_mul(poly, lin)
    return scale * sum(
        (c * _std_simplex_moment(beta, k) for beta, c in poly.items()), _ZERO
    )


def moment(p: Polytope, alpha) -> Fraction:
    """Exact integral of the monomial x^alpha over a full-dimensional polytope."""
    if not p.is_full_dimensional:
        raise NotFullDimensional("moment() needs a full-dimensional polytope")
    return sum((simplex_moment(s, alpha) for s in triangulate(p)), _ZERO)


# ---------------------------------------------------------------------------
# lattice point scans
# ---------------------------------------------------------------------------

def bounding_box(p: Polytope):
    lo = [min(v[i] for v in p.vertices) for i in range(p.dim)]
    hi = [max(v[i] for v in p.vertices) for i in range(p.dim)]
    return lo, hi


def _grid(lo, hi):
    ranges = [range(ceil(a), floor(b) + 1) for a, b in zip(lo, hi)]
    return itertools.product(*ranges)


def interior_lattice_points(p: Polytope) -> list[Vec]:
    """All lattice points strictly inside a full-dimensional polytope."""
    if not p.is_full_dimensional:
        raise NotFullDimensional("interior lattice points of a non-full-dimensional polytope")
    lo, hi = bounding_box(p)
    out = []
    ineqs = [(tuple(int(x) for x in n), c) for n, c in p.inequalities]
    for pt in _grid(lo, hi):
        if all(sum(a * b for a, b in zip(n, pt)) > c for n, c in ineqs):
            out.append(as_vec(pt))
    return sorted(out)


def lattice_points(p: Polytope) -> list[tuple[int, ...]]:
    """All lattice points of p (boundary included)."""
    if p.is_empty:
        return []
    lo, hi = bounding_box(p)
    eqs = [(tuple(int(x) for x in n), c) for n, c in p.equations]
    ineqs = [(tuple(int(x) for x in n), c) for n, c in p.inequalities]
    out = []
    for pt in _grid(lo, hi):
        if all(sum(a * b for a, b in zip(n, pt)) == c for n, c in eqs) and all(
            sum(a * b for a, b in zip(n, pt)) >= c for n, c in ineqs
        ):
            out.append(pt)
    return sorted(out)


def scale_polytope(p: Polytope, factor) -> Polytope:
    factor = rat(factor)
    if factor <= 0:
        raise ZeroVolume("scale factor must be positive")
    return Polytope(
        p.dim,
        tuple(sorted(vscale(factor, v) for v in p.vertices)),
        tuple((n, c * factor) for n, c in p.inequalities),
        tuple(_canonical_equation(n, c * factor) for n, c in p.equations),
        p.affine_hull_dim,
    )
