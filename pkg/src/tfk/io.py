"""Input documents: a diff-friendly exact JSON format for divisorial polytopes.

Rationals travel as strings ("1/3", "0.5") or integers; points of the
projective line as "0", "5/2", "inf", or homogeneous "[p,q]".  Parsing is
strict, reports the offending field path, and round-trips bit-exactly
through ``serialize``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import divpol as dp
from . import exactgeom as eg
from .divpol import DivisorialPolytope, ProjPoint
from .errors import InputSyntaxError, NonRationalNumber, SchemaError

SCHEMA_VERSION = "1"


def _parse_rat(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"{path}: expected an exact rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise NonRationalNumber(f"{path}: {value!r} is not an exact rational")
    if isinstance(value, float):
        raise NonRationalNumber(
            f"{path}: floats are ambiguous; write the value as a string")
    raise SchemaError(f"{path}: expected an exact rational, got {type(value).__name__}")


def _parse_point(value, path: str) -> ProjPoint:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: a point must be a string")
    s = value.strip()
    if s.startswith("[") and s.endswith("]"):
        parts = s[1:-1].split(",")
        if len(parts) != 2:
            raise SchemaError(f"{path}: homogeneous points need exactly two entries")
        p = _parse_rat(parts[0].strip(), path)
        q = _parse_rat(parts[1].strip(), path)
        if q == 0:
            if p == 0:
                raise SchemaError(f"{path}: [0,0] is not a projective point")
            return ProjPoint.infinity()
        return ProjPoint.of(p / q)
    if s.lower() in ("inf", "infinity", "oo"):
        return ProjPoint.infinity()
    if s.lower() == "generic":
        raise SchemaError(f"{path}: the generic point cannot appear in a document")
    try:
        return ProjPoint.of(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise NonRationalNumber(f"{path}: {value!r} is not a point of the projective line")


def _rat_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class InputDocument:
    """Parsed, canonicalized description of one divisorial polytope."""

    schema_version: str
    box: tuple[tuple[int, ...], ...]
    entries: tuple[tuple[ProjPoint, tuple[tuple[tuple[Fraction, ...], Fraction], ...]], ...]
    kdiv: tuple[tuple[ProjPoint, int], ...] | None
    precision: int | None
    name: str | None

    def to_divpol(self) -> DivisorialPolytope:
        box = eg.hull(self.box)
        entries = [
            (p, dp.plconcave(box, pieces)) for p, pieces in self.entries
        ]
        kdiv = dict(self.kdiv) if self.kdiv is not None else None
        return dp.divisorial_polytope(box, entries, kdiv)


def parse_input(text: str) -> InputDocument:
    """Parse a document; the first violation raises with its field path."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level: expected an object")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if str(version) != SCHEMA_VERSION:
        raise SchemaError(f"schema_version: unsupported version {version!r}")
    known = {"schema_version", "box", "entries", "kdiv", "precision", "name"}
    for key in raw:
        if key not in known:
            raise SchemaError(f"{key}: unknown field")
    if "box" not in raw or not isinstance(raw["box"], list) or not raw["box"]:
        raise SchemaError("box: expected a nonempty list of lattice vertices")
    box = []
    dim = None
    for i, vert in enumerate(raw["box"]):
        if not isinstance(vert, list) or not vert:
            raise SchemaError(f"box[{i}]: expected a nonempty coordinate list")
        coords = []
        for j, c in enumerate(vert):
            q = _parse_rat(c, f"box[{i}][{j}]")
            if q.denominator != 1:
                raise SchemaError(f"box[{i}][{j}]: box vertices must be lattice points")
            coords.append(int(q))
        if dim is None:
            dim = len(coords)
        elif len(coords) != dim:
            raise SchemaError(f"box[{i}]: mixed vertex dimensions")
        box.append(tuple(coords))
    if "entries" not in raw or not isinstance(raw["entries"], list):
        raise SchemaError("entries: expected a list")
    entries = []
    seen = set()
    for i, entry in enumerate(raw["entries"]):
        path = f"entries[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{path}: expected an object")
        if "point" not in entry:
            raise SchemaError(f"{path}.point: missing")
        point = _parse_point(entry["point"], f"{path}.point")
        if point in seen:
            raise SchemaError(f"{path}.point: duplicate point {entry['point']!r}")
        seen.add(point)
        pieces_raw = entry.get("pieces")
        if not isinstance(pieces_raw, list) or not pieces_raw:
            raise SchemaError(f"{path}.pieces: expected a nonempty list")
        pieces = []
        for k, pc in enumerate(pieces_raw):
            ppath = f"{path}.pieces[{k}]"
            if not isinstance(pc, dict) or "slope" not in pc or "constant" not in pc:
                raise SchemaError(f"{ppath}: expected an object with slope and constant")
            slope_raw = pc["slope"]
            if not isinstance(slope_raw, list) or len(slope_raw) != dim:
                raise SchemaError(f"{ppath}.slope: expected {dim} coordinates")
            slope = tuple(
                _parse_rat(c, f"{ppath}.slope[{j}]") for j, c in enumerate(slope_raw)
            )
            constant = _parse_rat(pc["constant"], f"{ppath}.constant")
            pieces.append((slope, constant))
        entries.append((point, tuple(sorted(set(pieces)))))
    entries.sort()
    kdiv = None
    if "kdiv" in raw:
        if not isinstance(raw["kdiv"], list):
            raise SchemaError("kdiv: expected a list")
        acc = []
        kseen = set()
        for i, item in enumerate(raw["kdiv"]):
            path = f"kdiv[{i}]"
            if not isinstance(item, dict) or "point" not in item or "a" not in item:
                raise SchemaError(f"{path}: expected an object with point and a")
            point = _parse_point(item["point"], f"{path}.point")
            if point in kseen:
                raise SchemaError(f"{path}.point: duplicate point")
            kseen.add(point)
            a = _parse_rat(item["a"], f"{path}.a")
            if a.denominator != 1:
                raise SchemaError(f"{path}.a: coefficients are integers")
            acc.append((point, int(a)))
        kdiv = tuple(sorted(acc))
    precision = None
    if "precision" in raw:
        if not isinstance(raw["precision"], int) or raw["precision"] < 5:
            raise SchemaError("precision: expected an integer >= 5")
        precision = raw["precision"]
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("name: expected a string")
    return InputDocument(SCHEMA_VERSION, tuple(box), tuple(entries), kdiv, precision, name)


def document_from_divpol(psi: DivisorialPolytope, name: str | None = None,
                         precision: int | None = None) -> InputDocument:
    entries = tuple(
        (p, tuple((tuple(pc.slope), pc.constant) for pc in f.pieces))
        for p, f in psi.entries
    )
    box = tuple(tuple(int(c) for c in v) for v in psi.box.vertices)
    return InputDocument(SCHEMA_VERSION, box, entries, psi.kdiv, precision, name)


def serialize(doc: InputDocument) -> str:
    """Canonical text form; parse(serialize(doc)) == doc bit-exactly."""
    payload: dict = {"schema_version": doc.schema_version}
    if doc.name is not None:
        payload["name"] = doc.name
    payload["box"] = [list(v) for v in doc.box]
    payload["entries"] = [
        {
            "point": str(p),
            "pieces": [
                {"slope": [_rat_str(c) for c in slope], "constant": _rat_str(const)}
                for slope, const in pieces
            ],
        }
        for p, pieces in doc.entries
    ]
    if doc.kdiv is not None:
        payload["kdiv"] = [{"point": str(p), "a": a} for p, a in doc.kdiv]
    if doc.precision is not None:
        payload["precision"] = doc.precision
    return json.dumps(payload, indent=2) + "\n"
