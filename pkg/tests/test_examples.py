import math

import numpy as np
import pytest

from lckgeom.examples import get_example, list_examples
from lckgeom.geometry import ChartError, eval_fields, lee_form
from lckgeom.pointwise import LocalGeometry


def test_catalog():
    assert list_examples() == ["hopf_deformed", "hopf_standard", "kaehler_flat"]
    with pytest.raises(ChartError):
        get_example("missing")


@pytest.mark.parametrize("name", ["hopf_standard", "hopf_deformed", "kaehler_flat"])
def test_entries_are_consistent(name):
    e = get_example(name)
    x = e.chart.sample_points(8, seed=0)
    b = eval_fields(e.chart, x, order=2)
    assert lee_form(b).residual.max() < 1e-10
    assert e.action.generators == e.chart.generators
    for a in e.deformations.values():
        assert a.evaluate(b).shape == (8, 4, 4)
    assert e.test_potentials


def test_hopf_frozen_constants():
    e = get_example("hopf_standard")
    fc = {k: v.value for k, v in e.frozen_constants.items()}
    assert fc["lee_period"] == pytest.approx(-2 * math.log(2))
    assert fc["total_mass"] == pytest.approx(2 * math.pi ** 2 * math.log(2))
    geo = LocalGeometry(eval_fields(e.chart, e.chart.sample_points(5, seed=1), order=3))
    np.testing.assert_allclose(geo.scal.value, fc["scal"], atol=1e-11)
    np.testing.assert_allclose(geo.mu_chern.value, fc["mu"], atol=1e-10)


def test_deformed_example_is_not_integrable():
    e = get_example("hopf_deformed")
    geo = LocalGeometry(eval_fields(e.chart, e.chart.sample_points(5, seed=1), order=2))
    assert not geo.integrable
    assert e.expected_flags["vaisman"] is False


def test_flat_torus_is_kaehler():
    e = get_example("kaehler_flat")
    geo = LocalGeometry(eval_fields(e.chart, e.chart.sample_points(5, seed=1), order=3))
    assert np.all(geo.theta.value == 0.0)
    assert np.all(geo.scal.value == 0.0)
