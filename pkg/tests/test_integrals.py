import math

import numpy as np
import pytest

from lckgeom import expr as ex
from lckgeom.examples import get_example
from lckgeom.geometry import eval_fields
from lckgeom.integrals import (IntegrationError, QuadratureRule, convergence_order, futaki,
                               integrate, lee_period, mean_mu, midpoint_grid, monte_carlo,
                               moment_map_identity, orbit_axes, total_mass)
from lckgeom.pointwise import LocalGeometry

from . import oracles


@pytest.fixture(scope="module")
def hopf():
    return get_example("hopf_standard")


def test_total_mass_against_symbolic_volume(hopf):
    _, vol = oracles.hopf_total_mass()
    ref = float(vol)
    assert ref == pytest.approx(2 * math.pi ** 2 * math.log(2), rel=1e-14)
    axes = orbit_axes(hopf.chart)
    errs = [abs(total_mass(midpoint_grid(hopf.chart, r, axes)) - ref) for r in (8, 16, 32)]
    assert convergence_order((8, 16, 32), errs) >= 1.9
    assert errs[-1] / ref < 1e-3


def test_collapsed_and_full_grids_agree(hopf):
    full = total_mass(midpoint_grid(hopf.chart, 8))
    collapsed = total_mass(midpoint_grid(hopf.chart, 8, orbit_axes(hopf.chart)))
    assert full == pytest.approx(collapsed, rel=1e-13)


def test_collapse_rejects_non_invariant_integrand(hopf):
    rule = midpoint_grid(hopf.chart, 4, orbit_axes(hopf.chart))
    with pytest.raises(IntegrationError):
        integrate(rule, lambda p: np.cos(p[:, 1]))


def test_lee_period_matches_symbolic(hopf):
    ref = float(oracles.hopf_lee_period())
    assert ref == pytest.approx(-2 * math.log(2), rel=1e-14)
    for p in hopf.chart.sample_points(3, seed=4):
        assert lee_period(hopf.chart, p) == pytest.approx(ref, rel=1e-12)


def test_thread_count_does_not_change_results(hopf):
    rule = midpoint_grid(hopf.chart, 8)

    def f(p):
        return np.sin(3 * p[:, 0]) * np.cos(p[:, 2]) ** 2 + p[:, 1]

    vals = [integrate(rule, f, workers=w, check_invariance=False) for w in (1, 2, 4)]
    assert vals[0] == vals[1] == vals[2]


def test_monte_carlo_is_seeded(hopf):
    a = monte_carlo(hopf.chart, 500, seed=3)
    b = monte_carlo(hopf.chart, 500, seed=3)
    np.testing.assert_array_equal(a.points, b.points)
    assert not np.array_equal(a.points, monte_carlo(hopf.chart, 500, seed=4).points)
    assert total_mass(monte_carlo(hopf.chart, 20000, seed=1)) == pytest.approx(
        2 * math.pi ** 2 * math.log(2), rel=0.05)


def test_rule_rejects_negative_weights():
    with pytest.raises(IntegrationError):
        QuadratureRule(np.zeros((2, 4)), np.array([1.0, -1.0]), "midpoint_grid", 1, None, (), "x")


def test_futaki_vanishes_for_constant_mu(hopf):
    rule = midpoint_grid(hopf.chart, 8, orbit_axes(hopf.chart))
    assert mean_mu(rule, hopf.chart) == pytest.approx(8.0, abs=1e-12)
    for h in (ex.const(-1.0),) + hopf.chart.potentials:
        r = futaki(rule, hopf.chart, h)
        assert abs(r["F"]) <= 1e-12 * max(r["scale"], 1.0)


def test_moment_map_identity_converges(hopf):
    rep = moment_map_identity(hopf.chart, hopf.deformations["transverse"],
                              hopf.test_potentials["quadratic_wave"], resolutions=(8, 16))
    assert rep.rel_err < 1e-3
    assert rep.resolution_series[1]["abs_err"] < rep.resolution_series[0]["abs_err"] / 3
    d = rep.to_dict()
    assert set(d) == {"identity", "lhs", "rhs", "abs_err", "rel_err", "scheme",
                      "resolution_series", "convergence_order", "scale"}
    assert "runtime_ms" in rep.to_dict(timing=True)


def test_convergence_order_of_known_series():
    r = np.array([8, 16, 32])
    assert convergence_order(r, 3.0 / r ** 2) == pytest.approx(2.0)
    assert convergence_order(r, [0.0, 0.0, 0.0]) is None
