"""Report documents: assembly, stable JSON serialization, table rendering and diffing."""

from __future__ import annotations

import json
import math

from . import __version__
from .suites import ERROR, FAIL, PASS, SKIPPED

__all__ = ["FORMAT", "ReportError", "build_report", "report_body", "dumps", "loads",
           "render_table", "report_diff", "exit_status", "DRIFT_FACTOR", "DRIFT_FLOOR"]

FORMAT = "lckgeom-report/1"
DRIFT_FACTOR = 10.0
DRIFT_FLOOR = 1e-14       # residuals below this are treated as equal roundoff


class ReportError(ValueError):
    pass


def build_report(config: dict, result: dict, timing: dict | None = None) -> dict:
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0, ERROR: 0}
    for recs in result["suites"].values():
        for r in recs:
            counts[r["status"]] += 1
    doc = {
        "format": FORMAT,
        "version": __version__,
        "config": config,
        "flags": result["flags"],
        "suites": result["suites"],
        "info": result["info"],
        "summary": {"pass": counts[PASS], "fail": counts[FAIL], "skipped": counts[SKIPPED],
                    "error": counts[ERROR]},
    }
    if timing is not None:
        doc["timing"] = timing
    return doc


def report_body(doc: dict) -> dict:
    """The report without its timing block; this part is deterministic."""
    return {k: v for k, v in doc.items() if k != "timing"}


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ReportError(f"not a JSON report: {err}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise ReportError(f"not a {FORMAT} document")
    return doc


def exit_status(doc: dict) -> int:
    s = doc["summary"]
    return 1 if s["fail"] or s["error"] else 0


def render_table(doc: dict) -> str:
    rows = [("suite", "identity", "status", "measured", "threshold")]
    for suite, recs in doc["suites"].items():
        for r in recs:
            m = r["measured"]
            rows.append((suite, r["name"], r["status"], "-" if m is None else f"{m:.3e}",
                         f"{r['comparison']} {r['threshold']:.1e}"))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    s = doc["summary"]
    lines.append(f"pass {s['pass']}  fail {s['fail']}  skipped {s['skipped']}  error {s['error']}")
    return "\n".join(lines) + "\n"


def _index(doc):
    return {(suite, r["name"]): r for suite, recs in doc["suites"].items() for r in recs}


def report_diff(old: dict, new: dict) -> list:
    """Per-identity changes between two reports over the same suites.

    Each entry has ``suite``, ``name``, old/new status and measurement, ``ratio``
    and ``flags`` (``drift`` when the measurement moved by more than
    DRIFT_FACTOR in the failing direction, ``new_failure`` when a non-failing
    identity now fails or errors, ``added``/``removed``).  Identical reports
    give an empty list.
    """
    if sorted(old["suites"]) != sorted(new["suites"]):
        raise ReportError(f"suite mismatch: {sorted(old['suites'])} vs {sorted(new['suites'])}")
    io, inew = _index(old), _index(new)
    out = []
    for key in sorted(set(io) | set(inew)):
        a, b = io.get(key), inew.get(key)
        entry = {"suite": key[0], "name": key[1],
                 "old_status": a and a["status"], "new_status": b and b["status"],
                 "old": a and a["measured"], "new": b and b["measured"], "ratio": None,
                 "flags": []}
        if a is None or b is None:
            entry["flags"].append("added" if a is None else "removed")
            out.append(entry)
            continue
        if a["status"] == b["status"] and a["measured"] == b["measured"]:
            continue
        if b["status"] in (FAIL, ERROR) and a["status"] not in (FAIL, ERROR):
            entry["flags"].append("new_failure")
        if a["measured"] is not None and b["measured"] is not None:
            lo, hi = max(abs(a["measured"]), DRIFT_FLOOR), max(abs(b["measured"]), DRIFT_FLOOR)
            entry["ratio"] = hi / lo
            worse = hi / lo if b["comparison"] == "<=" else lo / hi
            if worse > DRIFT_FACTOR:
                entry["flags"].append("drift")
        elif (a["measured"] is None) != (b["measured"] is None):
            entry["flags"].append("drift")
        out.append(entry)
    return out
