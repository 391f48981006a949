"""Command-line interface: staged analysis of divisorial-polytope documents.

Commands mirror the pipeline: validate, fano, candidates, kstab, soliton,
symmetry, report (everything), catalog-list.  Exit codes: 0 for a completed
analysis regardless of verdict, 2 for input errors, 3 for verification
failures (invalid or non-Fano data), 4 for running a stage whose
prerequisite failed.  Reports are deterministic for fixed input and
precision; timings are only included on request so that reruns stay
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from mpmath import mp

from . import degen as dg
from . import divpol as dp
from . import exactgeom as eg
from . import futaki as fk
from . import io as tio
from . import symmetry as sym
from .catalog import catalog as load_catalog, catalog_names
from .errors import (
    InputSyntaxError,
    NonRationalNumber,
    SchemaError,
    StageDependencyError,
    TfkError,
    UnknownCatalogEntry,
    UnsupportedDimension,
)

COMMANDS = ("validate", "fano", "candidates", "kstab", "soliton", "symmetry", "report")

_STAGES = {
    "validate": ("validate",),
    "fano": ("validate", "fano"),
    "candidates": ("validate", "fano", "candidates"),
    "kstab": ("validate", "fano", "candidates", "kstab"),
    "soliton": ("validate", "fano", "candidates", "soliton"),
    "symmetry": ("validate", "fano", "symmetry"),
    "report": ("validate", "fano", "candidates", "kstab", "soliton", "symmetry"),
}

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFICATION = 3
EXIT_STAGE = 4


def _fmt_vec(v) -> list[str]:
    return [str(x) for x in v]


def _fmt_float(x, precision: int) -> str:
    return mp.nstr(x, precision, strip_zeros=False)


class _Analysis:
    """Shared stage runner; stages compute lazily and cache."""

    def __init__(self, doc: tio.InputDocument, precision: int):
        self.doc = doc
        self.precision = precision
        self.psi = doc.to_divpol()
        self.timings: dict[str, float] = {}
        self._cert = None
        self._candidates = None

    def _timed(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.timings[name] = time.perf_counter() - t0
        return out

    def validation(self):
        rep = self._timed("validate", lambda: dp.validate(self.psi))
        return {
            "ok": rep.ok,
            "failures": [
                {"code": f.code, "witness": str(f.witness), "message": f.message}
                for f in rep.failures
            ],
        }

    def require_valid(self):
        if not dp.validate(self.psi).ok:
            raise StageDependencyError("validation failed; fix the input first")

    def fano(self):
        self.require_valid()
        result = self._timed("fano", lambda: dp.fano_check(self.psi))
        if result.ok:
            self._cert = result
            return {
                "ok": True,
                "kdiv": [{"point": str(p), "a": a} for p, a in result.a],
                "mu": [{"point": str(p), "mu": m} for p, m in result.mu],
            }
        return {
            "ok": False,
            "clause": result.clause,
            "witness": str(result.witness),
            "message": result.message,
        }

    def require_cert(self):
        self.require_valid()
        if self._cert is None:
            result = dp.fano_check(self.psi)
            if not result.ok:
                raise StageDependencyError(f"not Fano ({result.clause}): {result.message}")
            self._cert = result
        return self._cert

    def candidates(self):
        cert = self.require_cert()
        if self._candidates is None:
            self._candidates = self._timed(
                "candidates", lambda: dg.enumerate_candidates(cert))
        rows = []
        for c in self._candidates:
            rows.append({
                "q": str(c.q),
                "delta_vertices": [_fmt_vec(v) for v in c.delta.vertices],
                "u_q": _fmt_vec(c.u_q),
                "normal": c.normal,
                "b_q": _fmt_vec(eg.barycenter(c.delta0)),
            })
        return rows

    def kstab(self):
        cert = self.require_cert()
        self.candidates()
        verdict = self._timed(
            "kstab", lambda: fk.kstability_verdict(cert, self._candidates))
        return {
            "status": verdict.status.value,
            "witnesses": [
                {"q": str(q), "b_q": _fmt_vec(b)} for q, b in verdict.witnesses
            ],
            "futaki_linear_form": _fmt_vec(verdict.futaki_linear_form),
        }

    def soliton(self):
        cert = self.require_cert()
        self.candidates()
        verdict = self._timed(
            "soliton",
            lambda: fk.soliton_verdict(cert, self.precision, self._candidates))
        out = {
            "exists": verdict.exists,
            "xi": [_fmt_float(x, self.precision) for x in verdict.xi.xi],
            "residual": _fmt_float(verdict.xi.residual, 8),
            "weighted_moments": [
                {"q": str(q), "w": _fmt_float(w, self.precision)}
                for q, w in verdict.weighted_moments
            ],
            "margin": _fmt_float(verdict.margin, self.precision),
        }
        if verdict.indeterminate:
            out["indeterminate"] = [str(q) for q in verdict.indeterminate]
            out["warning"] = (
                "weighted moments within tolerance of zero; existence reported "
                "as false, not as a proof of nonexistence")
        criteria = sym.soliton_criteria(cert)
        corroborating = [tag for tag, val in
                         (("c1", criteria.c1), ("c2", criteria.c2), ("c3", criteria.c3))
                         if val]
        if corroborating:
            out["via_symmetry_criterion"] = corroborating
        return out

    def symmetry(self):
        cert = self.require_cert()
        pairs = self._timed("symmetry", lambda: sym.find_automorphism_pairs(cert))
        criteria = sym.soliton_criteria(cert)
        return {
            "pairs": [
                {
                    "psi": str(p.psi),
                    "fstar": [list(row) for row in p.fstar],
                    "shifts": [
                        {"point": str(q), "v": list(v), "b": b}
                        for q, (v, b) in p.shifts
                    ],
                }
                for p in pairs
            ],
            "criteria": {
                "c1_three_fractional_points": criteria.c1,
                "c2_swapped_fractional_pair": criteria.c2,
                "c3_fixed_point_free": criteria.c3,
                "high_mu_points": [str(p) for p in criteria.high_mu_points],
                "swap_witness": (
                    [str(criteria.swap_witness[0]), str(criteria.swap_witness[1])]
                    if criteria.swap_witness else None),
                "note": criteria.note,
            },
        }


def run_command(command: str, doc: tio.InputDocument,
                precision: int | None = None) -> tuple[dict, int]:
    """Run one command; returns (report payload, exit code)."""
    if command not in _STAGES:
        raise ValueError(f"unknown command {command!r}")
    precision = resolve_precision(precision, doc)
    analysis = _Analysis(doc, precision)
    payload: dict = {
        "command": command,
        "precision": precision,
        "input": json.loads(tio.serialize(doc)),
    }
    code = EXIT_OK
    stages = _STAGES[command]
    for stage in stages:
        runner = getattr(analysis, stage if stage != "validate" else "validation")
        try:
            payload[stage] = runner()
        except StageDependencyError as exc:
            if command == "report":
                payload[stage] = {"skipped": str(exc)}
                code = EXIT_VERIFICATION
                continue
            raise
        if stage == "validate" and not payload[stage]["ok"]:
            if command == "validate" or command == "report":
                code = EXIT_VERIFICATION
        if stage == "fano" and not payload[stage]["ok"]:
            if command == "fano" or command == "report":
                code = EXIT_VERIFICATION
    payload["analysis"] = analysis
    return payload, code


def resolve_precision(explicit: int | None, doc: tio.InputDocument | None) -> int:
    if explicit is not None:
        return explicit
    if doc is not None and doc.precision is not None:
        return doc.precision
    env = os.environ.get("TFK_PRECISION")
    if env:
        try:
            return max(5, int(env))
        except ValueError:
            pass
    return fk.DEFAULT_PRECISION


def _render_text(payload: dict) -> str:
    lines = []
    name = payload["input"].get("name") or "input"
    lines.append(f"tfk {payload['command']} on {name} (precision {payload['precision']})")
    if "validate" in payload:
        v = payload["validate"]
        lines.append(f"validate: {'ok' if v['ok'] else 'FAILED'}")
        for f in v["failures"]:
            lines.append(f"  - [{f['code']}] {f['message']}")
    if "fano" in payload:
        f = payload["fano"]
        if f.get("skipped"):
            lines.append(f"fano: skipped ({f['skipped']})")
        elif f["ok"]:
            kd = ", ".join(f"a[{e['point']}]={e['a']}" for e in f["kdiv"])
            mus = ", ".join(f"mu[{e['point']}]={e['mu']}" for e in f["mu"])
            lines.append(f"fano: ok ({kd}; {mus})")
        else:
            lines.append(f"fano: FAILED [{f['clause']}] {f['message']}")
    if "candidates" in payload and isinstance(payload["candidates"], list):
        lines.append("candidates:")
        for row in payload["candidates"]:
            lines.append(
                f"  Q={row['q']:>8}  normal={str(row['normal']):5}  "
                f"u_Q=({','.join(row['u_q'])})  b_Q=({','.join(row['b_q'])})")
    if "kstab" in payload and "status" in payload.get("kstab", {}):
        k = payload["kstab"]
        lines.append(f"k-stability: {k['status']}")
        for w in k["witnesses"]:
            lines.append(f"  witness Q={w['q']} b_Q=({','.join(w['b_q'])})")
        lines.append(f"  toral futaki form: ({','.join(k['futaki_linear_form'])})")
    if "soliton" in payload and "exists" in payload.get("soliton", {}):
        s = payload["soliton"]
        via = (f"  via symmetry criterion {','.join(s['via_symmetry_criterion'])}"
               if s.get("via_symmetry_criterion") else "")
        lines.append(f"soliton: exists={s['exists']}{via}  xi=({', '.join(s['xi'])})")
        for wm in s["weighted_moments"]:
            lines.append(f"  W({wm['q']}) = {wm['w']}")
        if s.get("warning"):
            lines.append(f"  warning: {s['warning']}")
    if "symmetry" in payload and "pairs" in payload.get("symmetry", {}):
        g = payload["symmetry"]
        lines.append(f"symmetry: {len(g['pairs'])} accepted pair(s)")
        for p in g["pairs"]:
            lines.append(f"  {p['psi']}  F*={p['fstar']}")
        c = g["criteria"]
        lines.append(
            f"  criteria: three-fractional={c['c1_three_fractional_points']} "
            f"swap={c['c2_swapped_fractional_pair']} "
            f"fixed-point-free={c['c3_fixed_point_free']}")
    if "timings" in payload:
        lines.append("timings:")
        for k, v in payload["timings"].items():
            lines.append(f"  {k}: {v:.3f}s")
    return "\n".join(lines) + "\n"


def _write_delimited(payload: dict, outdir: str) -> str:
    """Candidate table as TSV next to the figures."""
    path = os.path.join(outdir, "candidates.tsv")
    rows = payload.get("candidates") or []
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("q\tnormal\tu_q\tb_q\tdelta_vertices\n")
        for row in rows:
            fh.write("\t".join([
                row["q"],
                str(row["normal"]).lower(),
                ",".join(row["u_q"]),
                ",".join(row["b_q"]),
                ";".join(",".join(v) for v in row["delta_vertices"]),
            ]) + "\n")
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tfk",
        description=(
            "Equivariant K-stability and Kaehler-Ricci-soliton testing for "
            "complexity-one Fano torus actions given by divisorial polytopes."),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="path to an input document")
        src.add_argument("--catalog", help="name of a built-in example")
        p.add_argument("--precision", type=int, default=None,
                       help="significant digits for float stages (default 50)")
        p.add_argument("--svg", metavar="DIR", default=None,
                       help="also render figures and a TSV candidate table into DIR")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--timings", action="store_true",
                       help="include stage timings (output is no longer reproducible)")
    lister = sub.add_parser("catalog-list")
    lister.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    if args.command == "catalog-list":
        names = catalog_names()
        if args.json:
            print(json.dumps({"catalog": list(names)}, indent=2))
        else:
            for n in names:
                print(n)
        return EXIT_OK

    try:
        if args.catalog:
            doc = load_catalog(args.catalog)
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                doc = tio.parse_input(fh.read())
    except (InputSyntaxError, SchemaError, NonRationalNumber,
            UnknownCatalogEntry) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        payload, code = run_command(args.command, doc, args.precision)
    except StageDependencyError as exc:
        print(f"stage dependency error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except TfkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION

    analysis = payload.pop("analysis")
    if args.timings:
        payload["timings"] = dict(analysis.timings)

    if args.svg:
        try:
            from . import render
            candidates = analysis._candidates if analysis._candidates else None
            os.makedirs(args.svg, exist_ok=True)
            figures = render.render_svg(analysis.psi, args.svg, candidates)
            table = _write_delimited(payload, args.svg)
            payload["artifacts"] = {"figures": [os.path.basename(f) for f in figures],
                                    "table": os.path.basename(table)}
        except UnsupportedDimension as exc:
            print(f"figure error: {exc}", file=sys.stderr)
            return EXIT_INPUT

    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(_render_text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
