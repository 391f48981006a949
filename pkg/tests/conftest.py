"""Shared fixtures: catalog data, independent geometric oracles, and seeded
random generators for divisorial polytopes and coordinate changes."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

import pytest

from tfk import catalog as load_catalog
from tfk import divpol as dp
from tfk import exactgeom as eg


# ---------------------------------------------------------------------------
# catalog fixtures
# ---------------------------------------------------------------------------

def _cert(name):
    psi = load_catalog(name).to_divpol()
    result = dp.fano_check(psi)
    assert result.ok
    return result


@pytest.fixture(scope="session")
def dp4_cert():
    return _cert("dp4-3A1")


@pytest.fixture(scope="session")
def mm321_cert():
    return _cert("mm-3.21")


@pytest.fixture(scope="session")
def tents_cert():
    return _cert("synthetic-sym-tents")


@pytest.fixture(scope="session")
def halfslope_cert():
    return _cert("synthetic-halfslope")


@pytest.fixture(scope="session")
def stable_cert():
    return _cert("synthetic-stable")


# ---------------------------------------------------------------------------
# independent 2-D oracles (pure arithmetic, no kernel machinery)
# ---------------------------------------------------------------------------

def _cyclic_order(points):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)

    def half(p):
        x, y = p[0] - cx, p[1] - cy
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        px, py = p[0] - cx, p[1] - cy
        qx, qy = q[0] - cx, q[1] - cy
        cross = px * qy - py * qx
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return sorted(points, key=functools.cmp_to_key(cmp))


def shoelace_area(points) -> Fraction:
    """Exact area of a convex polygon given by its (unordered) vertices."""
    pts = _cyclic_order([tuple(map(Fraction, p)) for p in points])
    s = Fraction(0)
    for a, b in zip(pts, pts[1:] + pts[:1]):
        s += a[0] * b[1] - b[0] * a[1]
    return abs(s) / 2


def shoelace_centroid(points):
    """Exact centroid of a convex polygon by the shoelace formula."""
    pts = _cyclic_order([tuple(map(Fraction, p)) for p in points])
    a = Fraction(0)
    cx = Fraction(0)
    cy = Fraction(0)
    for p, q in zip(pts, pts[1:] + pts[:1]):
        w = p[0] * q[1] - q[0] * p[1]
        a += w
        cx += (p[0] + q[0]) * w
        cy += (p[1] + q[1]) * w
    return (cx / (3 * a), cy / (3 * a))


# ---------------------------------------------------------------------------
# random data
# ---------------------------------------------------------------------------

BOXES_1D = [((-1,), (1,)), ((-2,), (1,)), ((-1,), (2,))]
BOXES_2D = [
    ((-1, -1), (-1, 1), (1, -1), (1, 1)),
    ((-1, 0), (0, -1), (1, 0), (0, 1)),
    ((-1, -1), (1, 0), (0, 1)),
]


def random_concave_entry(box, rng, spread=2):
    """Upper concave envelope of random integer values on the lattice points.

    Graph vertices are lattice points of the envelope by construction, so
    the entry always satisfies the integrality condition.
    """
    pts = eg.lattice_points(box)
    lifted = [tuple(map(Fraction, w)) + (Fraction(rng.randint(-spread, spread)),)
              for w in pts]
    g = eg.hull(lifted)
    pieces = []
    for n, c in g.inequalities:
        nt = n[-1]
        if nt < 0:
            slope = tuple(Fraction(x, -nt) for x in n[:-1])
            pieces.append((slope, Fraction(c, nt)))
    if not pieces:  # flat envelope: single constant piece
        val = max(p[-1] for p in lifted)
        pieces.append((eg.zero_vec(box.dim), val))
    return dp.plconcave(box, pieces)


def random_valid_divpol(rng, dim) -> dp.DivisorialPolytope:
    """A random divisorial polytope passing validation (not necessarily Fano)."""
    box = eg.hull(rng.choice(BOXES_1D if dim == 1 else BOXES_2D))
    n_entries = rng.randint(1, 3)
    points = rng.sample([dp.ProjPoint.of(0), dp.ProjPoint.of(1), dp.INF,
                         dp.ProjPoint.of(Fraction(-1))], n_entries)
    entries = [(p, random_concave_entry(box, rng)) for p in sorted(points)]
    psi = dp.divisorial_polytope(box, entries)
    deg = dp.degree_function(psi)
    floor_val = min(dp.evaluate(deg, v) for v in dp.refinement_vertices(psi))
    shift = 1 - floor_val
    first_point, first_fn = psi.entries[0]
    lifted = dp.plconcave(box, [(pc.slope, pc.constant + shift)
                                for pc in first_fn.pieces])
    entries = [(first_point, lifted)] + list(psi.entries[1:])
    psi = dp.divisorial_polytope(box, entries)
    assert dp.validate(psi).ok
    return psi


def random_symmetric_divpol(rng, dim) -> dp.DivisorialPolytope:
    """A random valid divisorial polytope with centrally symmetric entries."""
    verts = ((-1,), (1,)) if dim == 1 else rng.choice(BOXES_2D[:2])
    box = eg.hull(verts)
    pts = eg.lattice_points(box)
    n_entries = rng.randint(1, 2)
    points = sorted(rng.sample([dp.ProjPoint.of(0), dp.INF], n_entries))
    entries = []
    for p in points:
        values = {}
        for w in pts:
            neg = tuple(-x for x in w)
            if neg in values:
                values[w] = values[neg]
            else:
                values[w] = rng.randint(-2, 2)
        lifted = [tuple(map(Fraction, w)) + (Fraction(v),) for w, v in values.items()]
        g = eg.hull(lifted)
        pieces = []
        for n, c in g.inequalities:
            if n[-1] < 0:
                pieces.append((tuple(Fraction(x, -n[-1]) for x in n[:-1]),
                               Fraction(c, n[-1])))
        if not pieces:
            pieces.append((eg.zero_vec(box.dim), max(p[-1] for p in lifted)))
        entries.append((p, dp.plconcave(box, pieces)))
    psi = dp.divisorial_polytope(box, entries)
    deg = dp.degree_function(psi)
    floor_val = min(dp.evaluate(deg, v) for v in dp.refinement_vertices(psi))
    shift = 1 - floor_val
    p0, f0 = psi.entries[0]
    lifted0 = dp.plconcave(box, [(pc.slope, pc.constant + shift) for pc in f0.pieces])
    psi = dp.divisorial_polytope(box, [(p0, lifted0)] + list(psi.entries[1:]))
    assert dp.validate(psi).ok
    return psi


def random_unimodular(rng, dim):
    """A random unimodular integer matrix as a product of elementary moves."""
    mat = [[Fraction(1) if i == j else Fraction(0) for j in range(dim)]
           for i in range(dim)]
    for _ in range(6):
        kind = rng.randrange(3)
        if dim == 1:
            mat[0][0] *= rng.choice([1, -1])
            continue
        i, j = rng.sample(range(dim), 2)
        if kind == 0:  # shear
            k = rng.choice([-2, -1, 1, 2])
            for col in range(dim):
                mat[i][col] += k * mat[j][col]
        elif kind == 1:  # swap
            mat[i], mat[j] = mat[j], mat[i]
        else:  # sign flip
            mat[i] = [-x for x in mat[i]]
    return tuple(tuple(x for x in row) for row in mat)


def random_mobius(rng):
    from tfk import symmetry as sym
    while True:
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c != 0:
            return sym.mobius(a, b, c, d)


@pytest.fixture
def rng():
    return random.Random(20260809)
