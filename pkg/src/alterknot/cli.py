"""Command-line front end: ``alterknot analyze | census | constants | arc-census``.

Exit codes are a stable contract:

====  ==========================================================
0     success
2     input could not be parsed, validated, or is not alternating/reduced
3     input is not hyperbolic (non-prime, or a (2, q)-torus knot)
4     arc enumeration cutoff too small to be complete
5     an inequality or derivation check failed
====  ==========================================================
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import arcs, bounds
from .diagram import KnotDiagram, is_prime, nugatory_crossings, parse_pd, validate
from .dt import canonical_dt, dt_string, parse_dt, to_dt
from .errors import (
    AlterknotError,
    DerivationMismatch,
    DiagramError,
    IncompleteEnumeration,
    PreconditionError,
)
from .surfaces import N_HOMOTOPY, augment, checkerboards, exceptional_name
from .twist import detect_twist_regions, twist_reduce

SCHEMA = 1
EXIT_OK, EXIT_PARSE, EXIT_NONHYPERBOLIC, EXIT_INCOMPLETE, EXIT_VIOLATION = 0, 2, 3, 4, 5

CENSUS_FIELDS = ("name", "dt_code", "crossings", "twist_number", "cusp_area", "meridian_length")
DEFAULT_T_GRID = (0.25, 0.5, 0.75, 1.0)
DEFAULT_D_GRID = (0.1, 0.25, 0.5, 1.0, 2.0)
DEFAULT_RESULTS = "alterknot-results.jsonl"

# statements the reports check, recorded alongside the numbers
ANCHORS = {
    "sandwich": "A (tw - 2) <= cusp area < 10 sqrt(3) (tw - 1)",
    "meridian": "meridian length < 3 for hyperbolic alternating knots",
    "hyperbolic": "prime reduced alternating diagrams other than (2, q)-torus knots are hyperbolic",
    "euler": "|chi(S_R2)| + |chi(S_B2)| = cr(K2) + 2 tw_N - 2",
    "arc_theorem": "pi (k e^d - 1) / ((e^d - 1)(sinh d + 2 pi)) |chi| disjoint arcs of length <= 2d",
}


class CliFailure(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


# ---------------------------------------------------------------------------
# stable serialization
# ---------------------------------------------------------------------------

def _stable(value: Any) -> Any:
    """Round floats to 12 significant digits, recursively."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {str(k): _stable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_stable(v) for v in value]
    return value


def dumps(obj: Any, pretty: bool = True) -> str:
    if pretty:
        return json.dumps(_stable(obj), sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(_stable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _num(x: float) -> str:
    s = f"{x:.12g}"
    return s if any(ch in s for ch in ".en") else s + ".0"


def _error_payload(exc: CliFailure) -> dict:
    return {"schema": SCHEMA, "error": {"type": exc.kind, "message": str(exc), "exit_code": exc.code}}


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _read_diagram(args) -> tuple[KnotDiagram, dict]:
    sources = [s for s in ("pd", "dt", "file") if getattr(args, s)]
    if len(sources) != 1:
        raise CliFailure(EXIT_PARSE, "UsageError", "give exactly one of --pd, --dt, --file")
    try:
        if args.pd:
            return parse_pd(args.pd), {"format": "pd", "text": args.pd}
        if args.dt:
            return parse_dt(args.dt), {"format": "dt", "text": args.dt}
        text = Path(args.file).read_text().strip()
    except DiagramError as exc:
        raise CliFailure(EXIT_PARSE, type(exc).__name__, str(exc)) from exc
    except OSError as exc:
        raise CliFailure(EXIT_PARSE, "FileError", str(exc)) from exc
    fmt = "pd" if "X" in text.upper() and "[" in text else "dt"
    try:
        d = parse_pd(text) if fmt == "pd" else parse_dt(text)
    except DiagramError as exc:
        raise CliFailure(EXIT_PARSE, type(exc).__name__, str(exc)) from exc
    return d, {"format": fmt, "file": str(args.file), "text": text}


def _clamped_threshold(requested: int | None) -> int:
    return max(N_HOMOTOPY, requested if requested is not None else N_HOMOTOPY)


def analyze(d: KnotDiagram, threshold: int | None = None) -> dict:
    """Full pipeline for one diagram.  Raises CliFailure for rejected inputs."""
    report = validate(d)
    if not report.alternating:
        raise CliFailure(EXIT_PARSE, "NotAlternating", "diagram is not alternating")
    if not report.reduced:
        bad = sorted(nugatory_crossings(d))
        raise CliFailure(EXIT_PARSE, "NotReduced", f"nugatory crossings {bad}")
    if not report.prime:
        raise CliFailure(EXIT_NONHYPERBOLIC, "NotPrime",
                         "diagram is composite, so the knot is not hyperbolic")
    reduced = twist_reduce(d)
    regions = detect_twist_regions(reduced)
    tw = len(regions)
    if tw == 1:
        raise CliFailure(EXIT_NONHYPERBOLIC, "TorusKnot",
                         f"(2,{len(d)})-torus knot is not hyperbolic; bounds suppressed")
    name = exceptional_name(d)
    red, blue = checkerboards(d)
    N = _clamped_threshold(threshold)
    family = augment(reduced, N)
    b = bounds.main_bounds(tw, exceptional=name is not None)
    return {
        "schema": SCHEMA,
        "diagram": report.as_dict(),
        "dt_code": dt_string(canonical_dt(d)),
        "twist_reduced_dt": dt_string(to_dt(reduced)),
        "twist_regions": [
            {"crossings": list(r.crossing_ids), "length": r.length, "handedness": r.handedness}
            for r in regions
        ],
        "tw": tw,
        "hyperbolic": True,
        "exceptional": name,
        "checkerboards": {"red": red.as_dict(), "blue": blue.as_dict(),
                          "euler_sum": red.euler + blue.euler,
                          "slope_difference": abs(red.boundary_slope - blue.boundary_slope)},
        "threshold_requested": threshold,
        "threshold_used": N,
        "augmented": family.as_dict(),
        "bounds": b.as_dict(),
        "anchors": {k: ANCHORS[k] for k in ("sandwich", "hyperbolic", "euler")},
    }


def _human_analyze(rep: dict) -> str:
    b = rep["bounds"]
    lines = [
        f"dt code        {rep['dt_code']}",
        f"crossings      {rep['diagram']['crossing_count']}",
        f"twist number   {rep['tw']}",
        f"exceptional    {rep['exceptional'] or 'no'}",
        f"euler sum      {rep['checkerboards']['euler_sum']}",
        f"slope diff     {rep['checkerboards']['slope_difference']}",
        f"cusp area      [{_num(b['cusp_area_lower'])}, {_num(b['cusp_area_upper'])})",
        f"slope length   >= {_num(b['slope_length_lower'])}",
        f"volume         [{_num(b['surgery_volume_lower'])}, {_num(b['surgery_volume_upper'])}]",
    ]
    return "\n".join(lines)


def cmd_analyze(args, out) -> int:
    d, source = _read_diagram(args)
    rep = analyze(d, args.threshold)
    rep["input"] = source
    out.write((dumps(rep) if args.json else _human_analyze(rep)) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class CensusRow:
    name: str
    dt_code: str
    crossings: int
    twist_number: int | None = None
    cusp_area: float | None = None
    meridian_length: float | None = None


@dataclass
class VerificationResult:
    name: str
    tw: int | None
    tw_table: int | None
    status: str
    bounds: dict | None = None
    sandwich_ok: bool | None = None
    meridian_ok: bool | None = None
    margins: dict = field(default_factory=dict)
    timestamp: str = ""

    @property
    def violation(self) -> bool:
        return self.sandwich_ok is False or self.meridian_ok is False

    def as_dict(self, with_time: bool = True) -> dict:
        out = {
            "name": self.name,
            "tw": self.tw,
            "tw_table": self.tw_table,
            "tw_agrees": None if self.tw_table is None or self.tw is None else self.tw == self.tw_table,
            "status": self.status,
            "sandwich_ok": self.sandwich_ok,
            "meridian_ok": self.meridian_ok,
            "margins": self.margins,
        }
        if self.bounds is not None:
            out["cusp_area_lower"] = self.bounds["cusp_area_lower"]
            out["cusp_area_upper"] = self.bounds["cusp_area_upper"]
            out["exceptional"] = self.bounds["exceptional"]
        if with_time:
            out["timestamp"] = self.timestamp
        return out


def _opt(raw: str, kind, name: str):
    raw = (raw or "").strip()
    if not raw:
        return None
    try:
        return kind(raw)
    except ValueError:
        raise SchemaError(f"{name}: cannot read {raw!r}") from None


def parse_census_row(raw: dict) -> CensusRow:
    name = (raw.get("name") or "").strip()
    code = (raw.get("dt_code") or "").strip()
    if not name or not code:
        raise SchemaError("name and dt_code are required")
    crossings = _opt(raw.get("crossings"), int, "crossings")
    if crossings is None or crossings < 3:
        raise SchemaError("crossings must be an integer >= 3")
    row = CensusRow(
        name=name,
        dt_code=code,
        crossings=crossings,
        twist_number=_opt(raw.get("twist_number"), int, "twist_number"),
        cusp_area=_opt(raw.get("cusp_area"), float, "cusp_area"),
        meridian_length=_opt(raw.get("meridian_length"), float, "meridian_length"),
    )
    if row.cusp_area is not None and not row.cusp_area > 0:
        raise SchemaError("cusp_area must be positive")
    if row.meridian_length is not None and not row.meridian_length > 0:
        raise SchemaError("meridian_length must be positive")
    return row


def verify_row(row: CensusRow, now: str = "") -> VerificationResult:
    try:
        d = parse_dt(row.dt_code)
    except DiagramError as exc:
        raise SchemaError(f"dt_code: {exc}") from exc
    if len(d) != row.crossings:
        raise SchemaError(f"dt_code has {len(d)} crossings, row says {row.crossings}")
    try:
        rep = analyze(d)
    except CliFailure as exc:
        if exc.code == EXIT_NONHYPERBOLIC:
            return VerificationResult(row.name, None, row.twist_number, "non-hyperbolic", timestamp=now)
        raise SchemaError(str(exc)) from exc
    b = rep["bounds"]
    result = VerificationResult(row.name, rep["tw"], row.twist_number, "checked", b, timestamp=now)
    if row.cusp_area is None:
        result.status = "no-cusp-area"
    else:
        result.sandwich_ok = b["cusp_area_lower"] <= row.cusp_area < b["cusp_area_upper"]
        result.margins["lower"] = row.cusp_area - b["cusp_area_lower"]
        result.margins["upper"] = b["cusp_area_upper"] - row.cusp_area
    if row.meridian_length is not None:
        result.meridian_ok = row.meridian_length < 3
        result.margins["meridian"] = 3 - row.meridian_length
    return result


def run_census(text: str, now: str = "") -> tuple[list[VerificationResult], list[dict]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != CENSUS_FIELDS:
        raise CliFailure(EXIT_PARSE, "SchemaError", f"header must be {','.join(CENSUS_FIELDS)}")
    results, skipped = [], []
    for index, raw in enumerate(reader, start=2):
        try:
            results.append(verify_row(parse_census_row(raw), now))
        except SchemaError as exc:
            skipped.append({"line": index, "reason": str(exc)})
    return results, skipped


def cmd_census(args, out) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise CliFailure(EXIT_PARSE, "FileError", str(exc)) from exc
    now = datetime.now(timezone.utc).isoformat(timespec="seconds")
    results, skipped = run_census(text, now)
    violations = [r.name for r in results if r.violation]
    summary = {
        "schema": SCHEMA,
        "rows": len(results) + len(skipped),
        "checked": sum(r.sandwich_ok is not None for r in results),
        "sandwich_ok": sum(r.sandwich_ok is True for r in results),
        "meridian_ok": sum(r.meridian_ok is True for r in results),
        "tw_disagreements": sorted(r.name for r in results if r.tw_table is not None
                                   and r.tw is not None and r.tw != r.tw_table),
        "non_hyperbolic": sorted(r.name for r in results if r.status == "non-hyperbolic"),
        "missing_cusp_area": sorted(r.name for r in results if r.status == "no-cusp-area"),
        "skipped": skipped,
        "violations": violations,
        "anchors": {k: ANCHORS[k] for k in ("sandwich", "meridian")},
    }
    if args.out != "-":
        with open(args.out, "a", encoding="utf-8") as fh:
            for r in results:
                fh.write(dumps(r.as_dict(), pretty=False) + "\n")
    if args.json:
        summary["results"] = [r.as_dict(with_time=False) for r in results]
        out.write(dumps(summary) + "\n")
    else:
        for r in results:
            flag = {True: "ok", False: "VIOLATION", None: "-"}
            out.write(f"{r.name:12s} tw={r.tw!s:4s} sandwich={flag[r.sandwich_ok]:9s} "
                      f"meridian={flag[r.meridian_ok]}\n")
        out.write(f"{summary['sandwich_ok']}/{summary['checked']} sandwich checks passed, "
                  f"{len(skipped)} rows skipped, {len(violations)} violations\n")
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def cmd_constants(args, out) -> int:
    try:
        traces = bounds.verify_all(v3=args.tamper_v3)
    except DerivationMismatch as exc:
        raise CliFailure(EXIT_VIOLATION, "DerivationMismatch", str(exc)) from exc
    ok = all(e.passed for entries in traces.values() for e in entries)
    if args.json:
        payload = {
            "schema": SCHEMA,
            "precision": bounds.precision(),
            "constants": {name: [e.as_dict() for e in entries] for name, entries in traces.items()},
            "all_passed": ok,
        }
        out.write(dumps(payload) + "\n")
    else:
        for name, entries in traces.items():
            passed = all(e.passed for e in entries)
            out.write(f"{name:10s} {'pass' if passed else 'FAIL'}\n")
            if args.verify:
                for e in entries:
                    out.write(f"    {e.name:24s} {_num(e.value):>22s} {e.relation:2s} "
                              f"{_num(e.bound):<22s} {'pass' if e.passed else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# arc census
# ---------------------------------------------------------------------------

def _grid(text: str | None, default: Sequence[float]) -> list[float]:
    if text is None:
        return list(default)
    try:
        values = [float(x) for x in text.replace(" ", ",").split(",") if x]
    except ValueError:
        raise CliFailure(EXIT_PARSE, "UsageError", f"cannot read grid {text!r}") from None
    if not values:
        raise CliFailure(EXIT_PARSE, "UsageError", "grid is empty")
    return values


def cmd_arc_census(args, out) -> int:
    t_grid = _grid(args.t_grid, DEFAULT_T_GRID)
    d_grid = _grid(args.d_grid, DEFAULT_D_GRID)
    try:
        rows = arcs.verify_arc_theorem(t_grid, d_grid, args.qmax)
    except IncompleteEnumeration as exc:
        raise CliFailure(EXIT_INCOMPLETE, "IncompleteEnumeration", str(exc)) from exc
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "d", "k", "formula", "achieved", "pass"])
    for row in rows:
        writer.writerow(row.csv_fields())
    if args.out and args.out != "-":
        Path(args.out).write_text(buf.getvalue())
    out.write(buf.getvalue())
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alterknot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="twist number, surfaces and bounds for one diagram")
    p.add_argument("--pd", help="PD code, e.g. 'X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]'")
    p.add_argument("--dt", help="DT code, e.g. '4 6 8 2'")
    p.add_argument("--file", help="file holding one PD or DT code")
    p.add_argument("--threshold", type=int, default=None,
                   help=f"crossing circle threshold N (clamped to >= {N_HOMOTOPY})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("census", help="check the cusp-area sandwich on a census table")
    p.add_argument("path", help=f"CSV with header {','.join(CENSUS_FIELDS)}")
    p.add_argument("--out", default=DEFAULT_RESULTS, help="append-only JSONL results ('-' for none)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("constants", help="re-derive and certify the numerical constants")
    p.add_argument("--verify", action="store_true", help="print every inequality in each chain")
    p.add_argument("--json", action="store_true")
    p.add_argument("--tamper-v3", type=float, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("arc-census", help="check the arc theorem on the thrice-punctured sphere")
    p.add_argument("--t-grid", help="comma-separated horoball scales")
    p.add_argument("--d-grid", help="comma-separated half-lengths d")
    p.add_argument("--qmax", type=int, default=None)
    p.add_argument("--out", default=None, help="also write the CSV here")
    p.set_defaults(func=cmd_arc_census)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        return args.func(args, out)
    except CliFailure as exc:
        failure = exc
    except (DiagramError, PreconditionError) as exc:
        failure = CliFailure(EXIT_PARSE, type(exc).__name__, str(exc))
    except AlterknotError as exc:
        failure = CliFailure(EXIT_VIOLATION, type(exc).__name__, str(exc))
    if as_json:
        out.write(dumps(_error_payload(failure)) + "\n")
    else:
        sys.stderr.write(f"error ({failure.kind}): {failure}\n")
    return failure.code


if __name__ == "__main__":
    sys.exit(main())
