"""Built-in example documents.

dp4-3A1 is the degree-4 del Pezzo surface with three A1 singularities under
its natural one-torus action.  mm-3.21 is the blowup of P^1 x P^2 in a
(1,2)-curve under its two-torus action; its data is reconstructed from the
hexagonal picture and is gated on construction: the reconstruction must
validate, carry canonical coefficients summing to -2, and exhibit the
half-integral slopes at 0 and infinity, otherwise the catalog refuses it.
The synthetic entries exercise verdict branches the classical examples
miss.
"""

from __future__ import annotations

from functools import lru_cache

from . import divpol as dp
from . import io
from .errors import UnknownCatalogEntry

_DP4 = """
{
  "schema_version": "1",
  "name": "dp4-3A1",
  "box": [[-1], [1]],
  "entries": [
    {"point": "0", "pieces": [{"slope": ["0"], "constant": "1"},
                               {"slope": ["-1"], "constant": "1"}]},
    {"point": "1", "pieces": [{"slope": ["0"], "constant": "0"},
                               {"slope": ["1"], "constant": "0"}]},
    {"point": "inf", "pieces": [{"slope": ["1"], "constant": "1"},
                                 {"slope": ["-1"], "constant": "1"}]}
  ]
}
"""

_MM_3_21 = """
{
  "schema_version": "1",
  "name": "mm-3.21",
  "box": [[-3, 3], [-1, 3], [3, -1], [3, -3], [1, -2], [-2, 1]],
  "entries": [
    {"point": "0", "pieces": [{"slope": ["0", "0"], "constant": "0"},
                               {"slope": ["-1/2", "0"], "constant": "-1/2"}]},
    {"point": "inf", "pieces": [{"slope": ["0", "0"], "constant": "0"},
                                 {"slope": ["0", "-1/2"], "constant": "-1/2"}]},
    {"point": "1", "pieces": [{"slope": ["0", "0"], "constant": "2"},
                               {"slope": ["1", "1"], "constant": "2"}]}
  ]
}
"""

_SYM_TENTS = """
{
  "schema_version": "1",
  "name": "synthetic-sym-tents",
  "box": [[-1], [1]],
  "entries": [
    {"point": "0", "pieces": [{"slope": ["1"], "constant": "1"},
                               {"slope": ["-1"], "constant": "1"}]},
    {"point": "inf", "pieces": [{"slope": ["1"], "constant": "1"},
                                 {"slope": ["-1"], "constant": "1"}]}
  ]
}
"""

_HALFSLOPE = """
{
  "schema_version": "1",
  "name": "synthetic-halfslope",
  "box": [[-1], [1]],
  "entries": [
    {"point": "0", "pieces": [{"slope": ["1"], "constant": "1"},
                               {"slope": ["-1"], "constant": "1"}]},
    {"point": "inf", "pieces": [{"slope": ["1/2"], "constant": "1/2"}]}
  ]
}
"""

_STABLE = """
{
  "schema_version": "1",
  "name": "synthetic-stable",
  "box": [[-1], [1]],
  "entries": [
    {"point": "0", "pieces": [{"slope": ["-1"], "constant": "2"},
                               {"slope": ["1"], "constant": "2"}]},
    {"point": "1", "pieces": [{"slope": ["-1/2"], "constant": "1/2"}]},
    {"point": "inf", "pieces": [{"slope": ["1/2"], "constant": "-3/2"}]}
  ]
}
"""

_RAW = {
    "dp4-3A1": _DP4,
    "mm-3.21": _MM_3_21,
    "synthetic-sym-tents": _SYM_TENTS,
    "synthetic-halfslope": _HALFSLOPE,
    "synthetic-stable": _STABLE,
}


def catalog_names() -> tuple[str, ...]:
    return tuple(sorted(_RAW))


@lru_cache(maxsize=None)
def catalog(name: str) -> io.InputDocument:
    """A built-in document by name; reconstruction gates run on first use."""
    if name not in _RAW:
        raise UnknownCatalogEntry(
            f"unknown catalog entry {name!r}; available: {', '.join(catalog_names())}")
    doc = io.parse_input(_RAW[name])
    if name == "mm-3.21":
        _gate_mm_3_21(doc)
    return doc


def _gate_mm_3_21(doc: io.InputDocument) -> None:
    psi = doc.to_divpol()
    if not dp.validate(psi).ok:
        raise AssertionError("mm-3.21 reconstruction does not validate")
    cert = dp.fano_check(psi)
    if not cert.ok:
        raise AssertionError(f"mm-3.21 reconstruction is not Fano: {cert.message}")
    if sum(a for _, a in cert.a) != -2:
        raise AssertionError("mm-3.21 coefficients do not sum to -2")
    if cert.mu_of(dp.ProjPoint.of(0)) != 2 or cert.mu_of(dp.INF) != 2:
        raise AssertionError("mm-3.21 slope denominators at 0 and inf must be 2")
