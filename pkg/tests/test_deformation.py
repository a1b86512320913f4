import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lckgeom import jets
from lckgeom.deformation import (DeformationField, basic_bracket_check, curve_eval, linearize,
                                 propringa_residuals, random_sp, sp_project, sp_residual,
                                 tangent_round_trip, tangent_vector, trace_identities)
from lckgeom.examples import get_example
from lckgeom.geometry import CompatibilityError, eval_fields


@pytest.fixture(scope="module")
def hopf():
    return get_example("hopf_standard")


def _standard_pair():
    w = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], float)
    return w, -w


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_tangent_algebra(seed):
    rng = np.random.default_rng(seed)
    w, J = _standard_pair()
    a, b, c = (random_sp(rng, w[None], 1)[0] for _ in range(3))
    ctx = jets.get_context(1, 1)
    Jj, wj = jets.constant(ctx, J), jets.constant(ctx, w)
    assert sp_residual(jets.constant(ctx, a), wj).max() < 1e-13
    tv = tangent_vector(J, a)
    rt = tangent_round_trip(J, tv.a_hat)
    assert max(rt["anticommutes"].max(), rt["reconstructs"].max()) < 1e-13
    ti = trace_identities(J, a, b, c)
    assert ti["bracket_trace"].max() < 1e-12 and ti["cyclic"].max() < 1e-12
    assert basic_bracket_check(J, a, b).max() < 1e-11


def test_sp_projection_is_idempotent():
    rng = np.random.default_rng(0)
    w, _ = _standard_pair()
    ctx = jets.get_context(1, 1)
    wj, wi = jets.constant(ctx, w), jets.constant(ctx, np.linalg.inv(w))
    m = jets.constant(ctx, rng.standard_normal((4, 4)))
    p = sp_project(m, wj, wi)
    assert sp_residual(p, wj).max() < 1e-14
    np.testing.assert_allclose(sp_project(p, wj, wi).value, p.value, atol=1e-14)


def test_library_directions_are_sp_and_invariant(hopf):
    b = eval_fields(hopf.chart, hopf.chart.sample_points(10, seed=1), order=2)
    for name, a in hopf.deformations.items():
        av = a.evaluate(b)
        assert sp_residual(av, b.omega).max() < 1e-12, name
        pr = propringa_residuals(b, tangent_vector(b.J, av).ring_a)
        assert max(v.max() for v in pr.values()) < 1e-12, name


def test_curve_stays_compatible(hopf):
    x = hopf.chart.sample_points(6, seed=2)
    cb = curve_eval(hopf.chart, x, hopf.deformations["lee_horizontal"], order=3)
    # compatibility holds for every Taylor coefficient in t
    J, w = cb.J, cb.omega
    sq = jets.matmul(J, J).coeffs + np.eye(4)[..., None] * (np.arange(cb.ctx.size) == 0)
    assert np.abs(sq).max() < 1e-11


def test_non_symplectic_direction_rejected(hopf):
    bad = DeformationField(tuple(tuple(1.0 if i == j == 0 else 0.0 for j in range(4))
                                 for i in range(4)), "bad")
    with pytest.raises(CompatibilityError):
        curve_eval(hopf.chart, hopf.chart.sample_points(2, seed=0), bad)


def test_linearization_formulas(hopf):
    x = hopf.chart.sample_points(8, seed=9)
    res = linearize(("metric", "theta_sharp", "norm_theta_sq", "scal", "dstar_theta",
                     "mu_extended"), hopf.chart, x, hopf.deformations["transverse"], order=3)
    for q in ("metric", "theta_sharp", "norm_theta_sq"):
        assert res[q].residual.max() < 1e-9, q
    for q in ("scal", "dstar_theta", "mu_extended"):
        assert res[q].hypotheses_met
        assert res[q].residual.max() < 1e-7, q


def test_low_order_linearization_is_flagged(hopf):
    x = hopf.chart.sample_points(3, seed=9)
    res = linearize("scal", hopf.chart, x, hopf.deformations["transverse"], order=2)
    assert np.all(np.isinf(res["scal"].residual))
