"""Command line driver: verify, diff, list-examples, export-chart.

Exit codes: 0 when everything passes, 1 when an identity fails (or a diff is
flagged), 2 for usage and configuration errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
import time

from .examples import get_example, list_examples
from .geometry import ChartError, dump_chart
from .report import ReportError, build_report, dumps, exit_status, loads, render_table, report_diff
from .suites import SUITES, SuiteConfig, run_suites

__all__ = ["main", "config_from_args", "run_suite", "ConfigError"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


_KEYS = {"example": str, "suites": "csv", "samples": int, "seed": int, "grid": "ints",
         "jet_order": int, "tolerances": dict, "threads": int, "mc_samples": int,
         "linearization_samples": int, "out": str}


def _coerce(key, value):
    kind = _KEYS[key]
    try:
        if kind == "csv":
            items = value.split(",") if isinstance(value, str) else list(value)
            return tuple(s.strip() for s in items if str(s).strip())
        if kind == "ints":
            items = value.split(",") if isinstance(value, str) else (
                list(value) if isinstance(value, (list, tuple)) else [value])
            return tuple(int(v) for v in items)
        if kind is dict:
            if not isinstance(value, dict):
                raise TypeError("expected an object")
            return {str(k): float(v) for k, v in value.items()}
        if kind is int and isinstance(value, bool):
            raise TypeError("expected an integer")
        return kind(value)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad value for {key!r}: {value!r} ({err})") from None


def config_from_args(args) -> tuple[SuiteConfig, str | None]:
    """Merge the optional JSON config file with command-line flags (flags win)."""
    merged = {}
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {args.config}: {err}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        for k, v in doc.items():
            key = k.replace("-", "_")
            if key not in _KEYS:
                raise ConfigError(f"unknown config key {k!r}")
            merged[key] = _coerce(key, v)
    for key in _KEYS:
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = _coerce(key, v)
    out = merged.pop("out", None)
    if "example" not in merged:
        raise ConfigError("no example given (use --example or the config file)")
    bad = set(merged.get("suites", ())) - set(SUITES)
    if bad:
        raise ConfigError(f"unknown suites {sorted(bad)}; choose from {', '.join(SUITES)}")
    for key in ("samples", "jet_order", "mc_samples", "linearization_samples"):
        if key in merged and merged[key] < 1:
            raise ConfigError(f"{key} must be positive")
    if "grid" in merged and (not merged["grid"] or min(merged["grid"]) < 1):
        raise ConfigError("grid resolutions must be positive")
    if merged.get("threads") is not None and merged["threads"] < 1:
        raise ConfigError("threads must be positive")
    return SuiteConfig(**merged), out


def run_suite(cfg: SuiteConfig) -> tuple[int, dict]:
    """Run the configured suites; returns (exit status, report document)."""
    entry = get_example(cfg.example)
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    result = run_suites(entry, cfg)
    timing = {"started": started, "elapsed_s": time.perf_counter() - t0}
    doc = build_report(cfg.to_dict(), result, timing)
    return exit_status(doc), doc


def _verify(args) -> int:
    cfg, out = config_from_args(args)
    status, doc = run_suite(cfg)
    text = dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    if args.table or not out:
        sys.stdout.write(render_table(doc))
    return status


def _diff(args) -> int:
    try:
        with open(args.old) as fa, open(args.new) as fb:
            old, new = loads(fa.read()), loads(fb.read())
    except OSError as err:
        raise ConfigError(str(err)) from None
    entries = report_diff(old, new)
    for e in entries:
        flags = ",".join(e["flags"]) or "-"
        sys.stdout.write(f"{e['suite']}/{e['name']}: {e['old_status']} -> {e['new_status']} "
                         f"measured {e['old']} -> {e['new']} [{flags}]\n")
    return EXIT_FAIL if any(e["flags"] for e in entries) else EXIT_OK


def _list(args) -> int:
    for name in list_examples():
        sys.stdout.write(name + "\n")
    return EXIT_OK


def _export(args) -> int:
    entry = get_example(args.name)
    dump_chart(entry.chart, args.path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lckgeom", description="Verify lcK identities on charts.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run identity suites and write a report")
    v.add_argument("--example")
    v.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--grid", help="quadrature resolution or refinement series, e.g. 8,16,32")
    v.add_argument("--jet-order", dest="jet_order", type=int)
    v.add_argument("--threads", type=int)
    v.add_argument("--mc-samples", dest="mc_samples", type=int)
    v.add_argument("--out")
    v.add_argument("--config", help="JSON file with the same keys as the flags")
    v.add_argument("--table", action="store_true", help="also print a table when --out is set")
    v.set_defaults(func=_verify)
    d = sub.add_parser("diff", help="compare two reports")
    d.add_argument("old")
    d.add_argument("new")
    d.set_defaults(func=_diff)
    sub.add_parser("list-examples", help="list catalog examples").set_defaults(func=_list)
    e = sub.add_parser("export-chart", help="write an example chart as JSON")
    e.add_argument("name")
    e.add_argument("path")
    e.set_defaults(func=_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    if not hasattr(args, "config"):
        args.config = None
    try:
        return args.func(args)
    except (ConfigError, ReportError, ChartError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
