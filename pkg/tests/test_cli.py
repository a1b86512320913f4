import json

import pytest

from lckgeom.cli import main
from lckgeom.report import FAIL, PASS, dumps, loads, report_body, report_diff


def _verify(tmp_path, name, *extra):
    out = tmp_path / name
    code = main(["verify", "--out", str(out), *extra])
    return code, loads(out.read_text())


def test_list_and_export(tmp_path, capsys):
    assert main(["list-examples"]) == 0
    assert "hopf_standard" in capsys.readouterr().out
    path = tmp_path / "chart.json"
    assert main(["export-chart", "kaehler_flat", str(path)]) == 0
    assert json.loads(path.read_text())["name"] == "kaehler_flat"


def test_usage_errors(tmp_path):
    assert main([]) == 2
    assert main(["verify", "--example", "nowhere"]) == 2
    assert main(["verify", "--example", "kaehler_flat", "--suites", "bogus"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--config", str(bad)]) == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"example": "kaehler_flat", "colour": 1}))
    assert main(["verify", "--config", str(unknown)]) == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"example": "kaehler_flat", "suites": "pointwise", "samples": 50,
                               "seed": 3}))
    code, doc = _verify(tmp_path, "r.json", "--config", str(cfg), "--samples", "4")
    assert code == 0
    assert doc["config"]["samples"] == 4 and doc["config"]["seed"] == 3


def test_report_is_deterministic_and_diffable(tmp_path):
    args = ["--example", "hopf_standard", "--suites", "pointwise,symmetry", "--samples", "6",
            "--seed", "7"]
    c1, d1 = _verify(tmp_path, "a.json", *args, "--threads", "1")
    c2, d2 = _verify(tmp_path, "b.json", *args, "--threads", "3")
    assert c1 == c2 == 0
    assert dumps(report_body(d1)) == dumps(report_body(d2))
    assert report_diff(d1, d2) == []
    assert main(["diff", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == 0
    for recs in d1["suites"].values():
        for r in recs:
            assert r["anchor"] and r["status"] in (PASS, "SKIPPED(hypothesis)")


def test_lowered_jet_order_is_flagged(tmp_path):
    args = ["--example", "hopf_standard", "--suites", "linearization", "--seed", "1"]
    c3, d3 = _verify(tmp_path, "o3.json", *args, "--jet-order", "3")
    c2, d2 = _verify(tmp_path, "o2.json", *args, "--jet-order", "2")
    assert c3 == 0 and c2 == 1
    flagged = {e["name"] for e in report_diff(d3, d2) if e["flags"]}
    assert any(n.startswith("linearize_scal[") for n in flagged)
    assert main(["diff", str(tmp_path / "o3.json"), str(tmp_path / "o2.json")]) == 1


def test_diff_rejects_suite_mismatch(tmp_path):
    _, a = _verify(tmp_path, "p.json", "--example", "kaehler_flat", "--suites", "pointwise",
                   "--samples", "3")
    _, b = _verify(tmp_path, "s.json", "--example", "kaehler_flat", "--suites", "symmetry",
                   "--samples", "3")
    with pytest.raises(ValueError):
        report_diff(a, b)
    assert main(["diff", str(tmp_path / "p.json"), str(tmp_path / "s.json")]) == 2


def test_injected_failure_sets_exit_status(tmp_path):
    args = ["--example", "kaehler_flat", "--suites", "pointwise", "--samples", "3"]
    cfg = tmp_path / "tight.json"
    # a negative threshold cannot be met
    cfg.write_text(json.dumps({"tolerances": {"pointwise.lee_closed": -1.0}}))
    code, doc = _verify(tmp_path, "t.json", *args, "--config", str(cfg))
    assert code == 1
    rec = next(r for r in doc["suites"]["pointwise"] if r["name"] == "lee_closed")
    assert rec["status"] == FAIL


def test_grid_refinement_shrinks_global_residuals(tmp_path):
    base = ["--example", "hopf_standard", "--suites", "global", "--mc-samples", "2000"]
    _, d8 = _verify(tmp_path, "g8.json", *base, "--grid", "8")
    _, d16 = _verify(tmp_path, "g16.json", *base, "--grid", "16")
    i8 = {r["name"]: r for r in d8["suites"]["global"]}
    i16 = {r["name"]: r for r in d16["suites"]["global"]}
    shrunk = [n for n in i8 if n.startswith("moment_map[") and i8[n]["measured"] > 1e-6]
    assert shrunk
    for n in shrunk:
        assert i16[n]["measured"] <= i8[n]["measured"] / 3, n
