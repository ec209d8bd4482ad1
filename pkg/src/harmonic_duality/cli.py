"""Command-line harness: ``harmonic-duality run <config>`` and ``list-suites``.

Exit status: 0 all checks pass, 1 some check fails, 2 config or usage error
(including unsupported dimensions), 3 runtime error while evaluating a case.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np

from . import experiments as ex
from .errors import UnsupportedDimensionError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def load_config(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ex.ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ex.ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    try:
        jsonschema.validate(cfg, ex.CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ex.ConfigError(f"schema violation at {where}: {exc.message}") from exc
    ids = [c["id"] for c in cfg["cases"]]
    if len(set(ids)) != len(ids):
        raise ex.ConfigError("case ids must be unique")
    for case in cfg["cases"]:
        ex.validate_case_semantics(case)


def run_config(cfg: dict, seed: int | None = None, timing: bool = False) -> tuple[dict, int]:
    """Run all cases; returns the report and the exit status."""
    seed = int(cfg.get("seed", 0) if seed is None else seed)
    cases_out = []
    status = EXIT_OK
    for index, case in enumerate(cfg["cases"]):
        rng = np.random.default_rng([seed, index])
        entry = {"id": case["id"], "mode": case["mode"], "inputs": case}
        t0 = time.perf_counter()
        try:
            outcome = ex.RUNNERS[case["mode"]](case, rng)
        except (ex.ConfigError, UnsupportedDimensionError):
            raise
        except Exception as exc:  # noqa: BLE001 - reported, exit status 3
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}", checks=[])
            status = EXIT_RUNTIME
        else:
            checks = [c.as_dict() for c in outcome.checks]
            ok = all(c["pass"] for c in checks)
            entry.update(status="pass" if ok else "fail", checks=checks,
                         diagnostics=ex._jsonable(outcome.diagnostics))
            if not ok and status == EXIT_OK:
                status = EXIT_FAIL
        if timing:
            entry["wall_time_s"] = round(time.perf_counter() - t0, 3)
        cases_out.append(entry)
    summary = {s: sum(1 for c in cases_out if c["status"] == s) for s in ("pass", "fail", "error")}
    report = {
        "schema_version": ex.SCHEMA_VERSION,
        "config": cfg.get("name", ""),
        "seed": seed,
        "summary": {"cases": len(cases_out), **summary},
        "cases": cases_out,
    }
    return report, status


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


CSV_FIELDS = ["case", "mode", "status", "check", "value", "reference", "provenance",
              "abs_error", "rel_error", "tolerance", "tolerance_kind", "pass"]


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for case in report["cases"]:
        if not case["checks"]:
            w.writerow({"case": case["id"], "mode": case["mode"], "status": case["status"],
                        "check": case.get("error", "")})
        for c in case["checks"]:
            row = {"case": case["id"], "mode": case["mode"], "status": case["status"], "check": c["name"]}
            for k in CSV_FIELDS[4:]:
                v = c[k]
                row[k] = json.dumps(v) if isinstance(v, (dict, list)) else v
            w.writerow(row)
    return buf.getvalue()


def list_suites(machine: bool = False) -> str:
    if machine:
        items = [{"name": s.name, "description": s.description, "dims": list(s.dims),
                  "default_dims": list(s.default_dims), "samples": s.samples} for s in ex.SUITES.values()]
        return json.dumps({"schema_version": ex.SCHEMA_VERSION, "suites": items}, indent=2, ensure_ascii=False) + "\n"
    width = max(len(n) for n in ex.SUITES)
    return "".join(f"{s.name:<{width}}  {s.description} (n in {list(s.dims)})\n" for s in ex.SUITES.values())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmonic-duality", description="Verification harness for harmonic-form identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    r.add_argument("--out", default=None, help="report path (default: config 'output' or stdout)")
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.add_argument("--timing", action="store_true", help="add wall times (reports are then not reproducible)")
    ls = sub.add_parser("list-suites", help="list built-in identity suites")
    ls.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-suites":
        sys.stdout.write(list_suites(args.json))
        return EXIT_OK
    try:
        cfg = load_config(args.config)
    except (ex.ConfigError, UnsupportedDimensionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report, status = run_config(cfg, args.seed, args.timing)
    except (ex.ConfigError, UnsupportedDimensionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = report_json(report) if args.format == "json" else report_csv(report)
    out = args.out or cfg.get("output")
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    s = report["summary"]
    print(f"{s['cases']} cases: {s['pass']} pass, {s['fail']} fail, {s['error']} error", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
