"""Command-line front end.

    restricted-goldbach enumerate --base 10 --digits 1,3 --k 2
    restricted-goldbach scan --digits 2,8 --k 6
    restricted-goldbach arcs --digits 0-9 --k 4 --Y 1
    restricted-goldbach moments --digits 0,1 --k 4 --s-max 3
    restricted-goldbach sievebound --digits 1,3 --k 2 --m-max 50
    restricted-goldbach ucolumn --base 3 --digits 0,1 --s 1

Exit codes: 0 success, 2 validation error, 3 cap exceeded, 4 internal
invariant violation (including any ``holds`` column coming out false).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .circle import DominanceRow, build_grid, build_partition, dominance_report, minor_arc_aggregate
from .digitset import (
    ENUMERATION_CAP,
    DigitSystem,
    RestrictedSet,
    enumerate_members,
    sieve_bound_check,
)
from .errors import ConfigurationError, DomainError, InvariantError, SizeError
from .expsum import u_column, u_oracle
from .moments import check_cap, column_bound, moment
from .primes import DEFAULT_DELTA0, cutoff_for, exception_scan, load_or_build

CACHE_ENV = "RESTRICTED_GOLDBACH_CACHE_DIR"

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    base: int = 10
    digits: list[int] = field(default_factory=lambda: list(range(10)))
    k: int = 2
    delta0: float = DEFAULT_DELTA0
    Y: float = 1.0
    s: int = 1
    s_max: int = 3
    m_max: int = 100
    N: int | None = None
    cutoff: int | None = None
    delta: float = 0.1
    min_n: int = 4
    cap: int = ENUMERATION_CAP
    format: str = "csv"
    output: str = "-"
    sieve_cache: str | None = None
    threads: int = 1

    @property
    def rset(self) -> RestrictedSet:
        return RestrictedSet(DigitSystem(self.base, tuple(self.digits)), self.k)

    def validate(self) -> None:
        rset = self.rset  # digit and base checks
        if not 0 < self.delta0 < 1 / 6:
            raise DomainError(f"delta0 must lie in (0, 1/6), got {self.delta0}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")
        if self.command == "arcs":
            y_max = rset.cardinality**self.delta0
            if not 1 <= self.Y <= y_max:
                raise ConfigurationError(f"Y = {self.Y} outside [1, |A_k|^delta0] = [1, {y_max:.6g}]")
        if self.command in ("moments", "ucolumn") and min(self.s, self.s_max) < 1:
            raise DomainError("moment order must be >= 1")
        if self.command == "sievebound" and self.m_max < 1:
            raise DomainError("m-max must be >= 1")


@dataclass
class Report:
    rows: list[dict[str, Any]]
    summary: dict[str, Any]
    columns: list[str]
    failed: str | None = None  # set when a certified inequality is violated


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        # same 12 significant digits as the CSV rendering
        return float(f"{float(v):.12g}")
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _versions() -> dict[str, str]:
    return {"restricted_goldbach": __version__, "numpy": np.__version__}


def render(config: RunConfig, report: Report) -> str:
    cfg = _jsonable(asdict(config))
    if config.format == "json":
        doc = {
            "config": cfg,
            "versions": _versions(),
            "rows": _jsonable(report.rows),
            "summary": _jsonable(report.summary),
        }
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(cfg, sort_keys=True)}\n")
    buf.write(f"# versions: {json.dumps(_versions(), sort_keys=True)}\n")
    buf.write(f"# summary: {json.dumps(_jsonable(report.summary))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_fmt(row[c]) for c in report.columns])
    return buf.getvalue()


def _parse_cell(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_output(text: str) -> dict[str, Any]:
    """Parse either rendering back into {config, versions, rows, summary}."""
    if text.lstrip().startswith("{"):
        return json.loads(text)
    meta: dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader, [])
    rows = [dict(zip(header, map(_parse_cell, r))) for r in reader]
    return {"config": meta.get("config"), "versions": meta.get("versions"), "rows": rows, "summary": meta.get("summary")}


# -- commands -------------------------------------------------------------------


def cmd_enumerate(config: RunConfig) -> Report:
    rset = config.rset
    members = enumerate_members(rset, cap=config.cap)
    rows = [{"n": int(n)} for n in members]
    return Report(rows, {"cardinality": rset.cardinality, "X": rset.X}, ["n"])


def _cache_path(config: RunConfig, X: int, P: int) -> str | None:
    if config.sieve_cache:
        return config.sieve_cache
    root = os.environ.get(CACHE_ENV)
    if root:
        return str(Path(root) / f"primes_X{X}_P{P}.bin")
    return None


def cmd_scan(config: RunConfig) -> Report:
    rset = config.rset
    P = 1 if config.cutoff is None else config.cutoff
    table = load_or_build(rset.X, P, _cache_path(config, rset.X, P))
    result = exception_scan(rset, table, min_n=config.min_n, threads=config.threads)
    rows = [
        {"n": r.n, "rep_count": r.rep_count, "R_weighted": r.R_weighted}
        for r in result.exceptions
    ]
    summary = {
        "X": rset.X,
        "P": P,
        "cardinality": rset.cardinality,
        "scanned": result.scanned,
        "exceptions": result.exception_count,
        "delta": config.delta,
        "reference": float(rset.cardinality) ** (1 - config.delta),
    }
    return Report(rows, summary, ["n", "rep_count", "R_weighted"])


def cmd_arcs(config: RunConfig) -> Report:
    rset = config.rset
    P = cutoff_for(rset.X, config.delta0) if config.cutoff is None else config.cutoff
    table = load_or_build(rset.X, P, _cache_path(config, rset.X, P))
    partition = build_partition(rset.X, config.delta0)
    grid = build_grid(table, config.N)
    report = dominance_report(rset, grid, partition, table, config.Y)
    agg = minor_arc_aggregate(rset, grid, partition)
    rows = [asdict(r) for r in report]
    for row in rows:
        row["rel_error"] = row["abs_error"] / max(1.0, row["exact"])
    summary = {
        "X": rset.X,
        "P": P,
        "N": grid.N,
        "Q": partition.Q,
        "width": partition.width,
        "major_measure": partition.measure,
        "scanned": len(rows),
        "major_positive": sum(r["major_positive"] for r in rows),
        "major_dominates": sum(r["major_dominates"] for r in rows),
        "below_threshold": sum(r["below_threshold"] for r in rows),
        "max_rel_error": max((r["rel_error"] for r in rows), default=0.0),
        "minor_abs_sum": agg.total,
        "minor_integral": agg.integral,
    }
    failed = None
    if summary["max_rel_error"] > 1e-6:
        failed = f"full-circle quadrature off by {summary['max_rel_error']:.3g} relative"
    columns = [f.name for f in fields(DominanceRow)] + ["rel_error"]
    return Report(rows, summary, columns, failed)


def cmd_moments(config: RunConfig) -> Report:
    rset = config.rset
    rows = []
    for s in range(1, config.s_max + 1):
        g, bound = column_bound(rset, s)
        try:
            check_cap(rset, s)
        except SizeError:
            rows.append({"s": s, "moment": None, "bound": bound, "holds": None, "gcd": g})
            continue
        m = moment(rset, s)
        rows.append({"s": s, "moment": m, "bound": bound, "holds": m <= bound * (1 + 1e-9), "gcd": g})
    bad = [r["s"] for r in rows if r["holds"] is False]
    summary = {"cardinality": rset.cardinality, "X": rset.X, "all_hold": not bad}
    failed = f"moment bound fails for s in {bad}" if bad else None
    return Report(rows, summary, ["s", "moment", "bound", "holds", "gcd"], failed)


def cmd_sievebound(config: RunConfig) -> Report:
    rset = config.rset
    rows = []
    for m in range(1, config.m_max + 1):
        c = sieve_bound_check(rset, m)
        rows.append({"m": m, "count": c.count, "bound": c.bound, "holds": c.holds})
    bad = [r["m"] for r in rows if not r["holds"]]
    summary = {"cardinality": rset.cardinality, "X": rset.X, "all_hold": not bad}
    failed = f"multiples bound fails for m in {bad[:10]}" if bad else None
    return Report(rows, summary, ["m", "count", "bound", "holds"], failed)


def cmd_ucolumn(config: RunConfig) -> Report:
    system = config.rset.system
    s = config.s
    rows = []
    for n in range(system.base):
        u = u_column(system, s, n)
        o = u_oracle(system, s, n)
        rows.append({"n": n, "u": u, "oracle": o, "match": abs(u - o) < 1e-8})
    total = sum(r["oracle"] for r in rows)
    summary = {"s": s, "total": total, "expected_total": system.size ** (2 * s)}
    bad = not all(r["match"] for r in rows) or total != system.size ** (2 * s)
    failed = "column count disagrees with its oracle" if bad else None
    return Report(rows, summary, ["n", "u", "oracle", "match"], failed)


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "enumerate": cmd_enumerate,
    "scan": cmd_scan,
    "arcs": cmd_arcs,
    "moments": cmd_moments,
    "sievebound": cmd_sievebound,
    "ucolumn": cmd_ucolumn,
}


def parse_digits(text: str) -> list[int]:
    """'1,3,7' or ranges like '0-9' or '0-4,7'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="restricted-goldbach", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, default=10)
    common.add_argument("--digits", type=parse_digits, default=list(range(10)), help="e.g. 1,3 or 0-9")
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--delta0", type=float, default=DEFAULT_DELTA0)
    common.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default="-")
    common.add_argument("--threads", type=int, default=1)

    sub.add_parser("enumerate", parents=[common], help="list the restricted set")
    p = sub.add_parser("scan", parents=[common], help="even members that are not p1 + p2")
    p.add_argument("--cutoff", type=int, default=None, help="prime cutoff P (default 1)")
    p.add_argument("--delta", type=float, default=0.1, help="exponent for the |A|^(1-delta) reference")
    p.add_argument("--min-n", type=int, default=4)
    p.add_argument("--sieve-cache", default=None)
    p = sub.add_parser("arcs", parents=[common], help="major/minor arc dominance per even member")
    p.add_argument("--Y", type=float, default=1.0)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=None, help="prime cutoff P (default floor(X^(6 delta0)))")
    p.add_argument("--sieve-cache", default=None)
    p = sub.add_parser("moments", parents=[common], help="even moments against the column bound")
    p.add_argument("--s-max", type=int, default=3)
    p = sub.add_parser("sievebound", parents=[common], help="multiples of m against the sieve bound")
    p.add_argument("--m-max", type=int, default=100)
    p = sub.add_parser("ucolumn", parents=[common], help="digit-column counts against exhaustive counting")
    p.add_argument("--s", type=int, default=1)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known})


def run(config: RunConfig) -> tuple[int, str | None, str | None]:
    """Execute a config; returns (exit code, rendered output, diagnostic)."""
    try:
        config.validate()
        report = COMMANDS[config.command](config)
    except SizeError as exc:
        return EXIT_CAP, None, f"error: {exc}"
    except (DomainError, ConfigurationError) as exc:
        return EXIT_VALIDATION, None, f"error: {exc}"
    except InvariantError as exc:
        return EXIT_INVARIANT, None, f"invariant violated: {exc}"
    text = render(config, report)
    if report.failed:
        return EXIT_INVARIANT, text, f"invariant violated: {report.failed}"
    return EXIT_OK, text, None


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    config = config_from_args(ns)
    code, text, diagnostic = run(config)
    if text is not None:
        if config.output == "-":
            sys.stdout.write(text)
        else:
            Path(config.output).write_text(text)
    if diagnostic:
        print(diagnostic, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
