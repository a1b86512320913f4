"""Acceptance criteria 1-7.

Each test prints one line ``criterion N: PASS|FAIL ...``.  Thresholds are pinned
here and compared against the measured values in the suite records, so a change
to the library's default tolerances cannot silently relax a criterion.  Running
this file as a script prints the same lines without pytest.
"""

import functools
import sys
import time

from lckgeom.cli import run_suite
from lckgeom.examples import get_example
from lckgeom.report import dumps, report_body
from lckgeom.suites import PASS, SKIPPED, SuiteConfig, run_suites

# criterion 1: identity name -> pinned relative residual bound
POINTWISE_IDENTITIES = (
    "lie_derivative_omega", "twisted_commutator", "holvf_twisted_interior",
    "delta_star_two_forms", "holvf_lie_commutator", "holvf_lie_JX", "holvf_anticommute",
    "weyl_torsion_free", "weyl_metric", "weyl_omega", "weyl_J_parallel",
    "chern_A_consistency", "chern_metric", "chern_J_parallel", "chern_torsion_J",
    "chern_torsion_closed_form", "levi_civita_DJ", "chern_torsion_derivative",
    "codifferential_omega", "fake_scal_chern_vs_scal", "fake_scal_chern_vs_scal_chern",
    "scal_vs_scal_chern", "ricci_weyl_vs_riemann", "weyl_curvature_bianchi",
    "weyl_curvature_skew", "weyl_curvature_J", "weyl_curvature_type_11",
    "ricci_weyl_symmetric", "ricci_weyl_J_invariant", "ring_a_symmetric",
    "ring_a_J_anti_invariant", "ring_a_trace_free", "tangent_space_round_trip",
    "trace_bracket", "trace_cyclic", "momentum_delta_star", "momentum_sym_nabla",
    "lee_derivative_weyl",
)
POINTWISE_TOL = 1e-8
POINTWISE_SECONDS = 60.0

LIN_TOL = {"linearize_metric": 1e-9, "linearize_theta_sharp": 1e-9,
           "linearize_norm_theta_sq": 1e-9, "linearize_scal": 1e-7,
           "linearize_dstar_theta": 1e-7}
LIN_SECONDS = 60.0

GLOBAL_GRID = (8, 16, 32)
MOMENT_TOL = 1e-3
MOMENT_ORDER = 1.8
MOMENT_PAIRS = 3
GLOBAL_SECONDS = 600.0

FUTAKI_TOL = 1e-3
FUTAKI_DIRECTIONS = 3

STRUCTURAL_TOL = {"vaisman_lee_parallel": 1e-9, "vaisman_coclosed": 1e-9,
                  "frozen[lee_period]": 1e-8, "action_preserves_omega": 1e-10,
                  "action_lee_type": 1e-10, "action_twisted_hamiltonian": 1e-10,
                  "lee_dual_potential": 1e-11}


def _records(result, suite):
    return {r["name"]: r for r in result["suites"][suite]}


def _emit(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}", flush=True)
    return ok, detail


def _within(rec, tol):
    m = rec["measured"]
    return rec["status"] == PASS and m is not None and m <= tol


@functools.lru_cache(maxsize=None)
def _global_run():
    cfg = SuiteConfig("hopf_standard", suites=("global",), grid=GLOBAL_GRID)
    t0 = time.perf_counter()
    res = run_suites(get_example("hopf_standard"), cfg)
    return res, time.perf_counter() - t0


def criterion_1():
    cfg = SuiteConfig("hopf_standard", suites=("pointwise",), samples=100, seed=0, jet_order=3)
    t0 = time.perf_counter()
    recs = _records(run_suites(get_example("hopf_standard"), cfg), "pointwise")
    dt = time.perf_counter() - t0
    bad = [n for n in POINTWISE_IDENTITIES if not _within(recs[n], POINTWISE_TOL)]
    worst = max(recs[n]["measured"] for n in POINTWISE_IDENTITIES)
    ok = not bad and dt <= POINTWISE_SECONDS
    return _emit(1, ok, f"{len(POINTWISE_IDENTITIES) - len(bad)}/{len(POINTWISE_IDENTITIES)} "
                        f"identities <= {POINTWISE_TOL:g} (worst {worst:.2e}), {dt:.1f}s"
                        + (f", failing {bad}" if bad else ""))


def criterion_2():
    cfg = SuiteConfig("hopf_standard", suites=("linearization",), linearization_samples=20,
                      seed=0, jet_order=3)
    t0 = time.perf_counter()
    recs = _records(run_suites(get_example("hopf_standard"), cfg), "linearization")
    dt = time.perf_counter() - t0
    checked, bad = 0, []
    for name, rec in recs.items():
        base = name.split("[")[0]
        if base in LIN_TOL:
            checked += 1
            if not _within(rec, LIN_TOL[base]):
                bad.append(name)
    ok = checked >= len(LIN_TOL) and not bad and dt <= LIN_SECONDS
    return _emit(2, ok, f"{checked - len(bad)}/{checked} linearizations within pinned bounds, "
                        f"{dt:.1f}s" + (f", failing {bad}" if bad else ""))


def _pair_status(rec, conv):
    if rec["status"] != PASS or rec["measured"] > MOMENT_TOL:
        return False
    if conv["note"].startswith("errors at roundoff"):
        return conv["status"] == PASS
    return conv["status"] == PASS and conv["measured"] >= MOMENT_ORDER


def criterion_3():
    res, dt = _global_run()
    recs = _records(res, "global")
    mm = res["info"]["moment_map"]
    passing, failing, trivial = [], [], []
    for key, rep in sorted(mm.items()):
        lhs, rhs = rep["lhs"], rep["rhs"]
        if max(abs(lhs), abs(rhs)) <= 1e-9 * max(rep["scale"] or 0.0, 1.0):
            trivial.append(key)
            continue
        rec, conv = recs[f"moment_map[{key}]"], recs[f"moment_map_convergence[{key}]"]
        line = (f"{key}: rel {rec['measured']:.2e} order "
                + ("roundoff" if conv["note"] else f"{conv['measured']:.2f}"))
        (passing if _pair_status(rec, conv) else failing).append((key, line))
    for _, line in passing:
        print(f"  pass  {line}")
    for _, line in failing:
        print(f"  fail  {line}")
    # the Lee-dual potential is a combination of k1 and k2, so it is not an independent pair
    independent = [k for k, _ in passing if not k.endswith(",lee_dual")]
    ok = len(independent) >= MOMENT_PAIRS and dt <= GLOBAL_SECONDS
    return _emit(3, ok, f"{len(independent)} independent nontrivial pairs pass "
                        f"(need {MOMENT_PAIRS}), {len(failing)} nontrivial pairs fail, "
                        f"{len(trivial)} trivial, global suite {dt:.0f}s")


def criterion_4():
    res, _ = _global_run()
    recs = _records(res, "global")
    fut = {n: r for n, r in recs.items() if n.startswith("futaki[")}
    der = {n: r for n, r in recs.items() if n.startswith("futaki_derivative[")}
    gens = {n.split(",")[1].rstrip("]") for n in der if ",k" in n}
    dirs = {n.split("[")[1].split(",")[0] for n in der}
    bad = [n for n, r in {**fut, **der}.items() if not _within(r, FUTAKI_TOL)]
    worst = max(r["measured"] for r in {**fut, **der}.values())
    ok = ("futaki[lee_dual]" in fut and len(dirs) >= FUTAKI_DIRECTIONS and len(gens) >= 1
          and not bad)
    return _emit(4, ok, f"F for {len(fut)} fields, dF/dt for {len(gens)} generators x "
                        f"{len(dirs)} directions, worst {worst:.1e}"
                        + (f", failing {bad}" if bad else ""))


def criterion_5():
    flat = run_suites(get_example("kaehler_flat"),
                      SuiteConfig("kaehler_flat", suites=("pointwise",), samples=100))
    frec = flat["suites"]["pointwise"]
    fbad = [r["name"] for r in frec if r["status"] != PASS]
    dform = run_suites(get_example("hopf_deformed"),
                       SuiteConfig("hopf_deformed", suites=("pointwise",), samples=100))
    drec = dform["suites"]["pointwise"]
    skipped = [r for r in drec if r["status"] == SKIPPED]
    uncond = [r for r in drec if not r["requires"]]
    dbad = [r["name"] for r in uncond if not _within(r, POINTWISE_TOL)]
    gated_ok = all("integrable" in r["requires"] or "kaehler" in r["requires"]
                   or "vaisman" in r["requires"] for r in skipped)
    ok = (not fbad and not dbad and gated_ok and not dform["flags"]["integrable"]
          and any("integrable" in r["requires"] for r in skipped))
    return _emit(5, ok, f"kaehler_flat {len(frec) - len(fbad)}/{len(frec)} pass; "
                        f"hopf_deformed {len(skipped)} skipped, "
                        f"{len(uncond) - len(dbad)}/{len(uncond)} unconditional pass"
                        + (f", failing {fbad + dbad}" if fbad or dbad else ""))


def criterion_6():
    res = run_suites(get_example("hopf_standard"),
                     SuiteConfig("hopf_standard", suites=("pointwise", "symmetry", "regression"),
                                 samples=100))
    recs = {}
    for s in res["suites"]:
        recs.update(_records(res, s))
    bad = [n for n, tol in STRUCTURAL_TOL.items() if not _within(recs[n], tol)]
    nonexact = recs["lee_form_non_exact"]
    if nonexact["status"] != PASS:
        bad.append("lee_form_non_exact")
    period = res["info"]["lee_period"][0]
    return _emit(6, not bad, f"{len(STRUCTURAL_TOL) + 1 - len(bad)}/{len(STRUCTURAL_TOL) + 1} "
                             f"certificates, lee period {period:.12f}"
                             + (f", failing {bad}" if bad else ""))


def criterion_7():
    base = dict(suites=("pointwise", "symmetry", "linearization", "regression", "global"),
                samples=20, seed=11, grid=(8,), mc_samples=4000, linearization_samples=5)
    bodies = []
    for threads in (1, 3):
        _, doc = run_suite(SuiteConfig("hopf_standard", threads=threads, **base))
        bodies.append(dumps(report_body(doc)))
    same = bodies[0] == bodies[1]
    return _emit(7, same, f"report bodies for 1 and 3 threads "
                          f"{'byte-identical' if same else 'differ'} ({len(bodies[0])} bytes)")


def _check(fn, capsys):
    with capsys.disabled():
        print()
        ok, detail = fn()
    assert ok, detail


def test_criterion_1_pointwise(capsys):
    _check(criterion_1, capsys)


def test_criterion_2_linearization(capsys):
    _check(criterion_2, capsys)


def test_criterion_3_moment_map(capsys):
    _check(criterion_3, capsys)


def test_criterion_4_futaki(capsys):
    _check(criterion_4, capsys)


def test_criterion_5_degenerate_reductions(capsys):
    _check(criterion_5, capsys)


def test_criterion_6_structural_certificates(capsys):
    _check(criterion_6, capsys)


def test_criterion_7_determinism(capsys):
    _check(criterion_7, capsys)


if __name__ == "__main__":
    results = [fn()[0] for fn in (criterion_1, criterion_2, criterion_3, criterion_4,
                                  criterion_5, criterion_6, criterion_7)]
    sys.exit(0 if all(results) else 1)
