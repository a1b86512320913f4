import numpy as np
import pytest

from lckgeom import expr as ex
from lckgeom.examples import get_example
from lckgeom.geometry import eval_fields, relative_residual
from lckgeom.pointwise import LocalGeometry
from lckgeom.symmetry import (field_from_potential, fundamental_vector, kappa_bracket,
                              momentum_intermediates, symplectic_dual_V)


@pytest.fixture(scope="module")
def setup():
    e = get_example("hopf_standard")
    geo = LocalGeometry(eval_fields(e.chart, e.chart.sample_points(12, seed=8), order=3))
    return e, geo


def test_action_assumptions(setup):
    e, geo = setup
    chk = e.action.check(geo)
    for k, v in chk.items():
        assert v is not None and v.max() < 1e-10, k


def test_lee_dual_field(setup):
    e, geo = setup
    V = symplectic_dual_V(geo)
    # on the Hopf surface V = 2 (k1 + k2)
    ks = e.action.fields(geo)
    assert relative_residual(V, (ks[0] + ks[1]) * 2.0).max() < 1e-12
    assert relative_residual(field_from_potential(geo, -1.0).X, V).max() < 1e-12
    assert relative_residual(fundamental_vector(geo, V)[0], 0.0).max() < 1e-12


def test_potentials_reproduce_generators(setup):
    e, geo = setup
    for k, h in zip(e.action.fields(geo), e.chart.potentials):
        hf = field_from_potential(geo, h)
        assert hf.residual.max() < 1e-13
        assert relative_residual(hf.X, k).max() < 1e-12


def test_kappa_is_a_lie_algebra_map(setup):
    e, geo = setup
    pots = list(e.test_potentials.values())
    fields = [field_from_potential(geo, h).X for h in pots]
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            assert kappa_bracket(geo, fields[i], fields[j]).max() < 1e-10


def test_fundamental_vector_is_tangent(setup):
    e, geo = setup
    for h in e.test_potentials.values():
        xs, r = fundamental_vector(geo, field_from_potential(geo, h).X)
        assert r["anticommutes"].max() < 1e-11 and r["omega_skew"].max() < 1e-11
        m = momentum_intermediates(geo, field_from_potential(geo, h))
        assert m.delta_star_dtheta_h.max() < 1e-9 and m.sym_nabla.max() < 1e-9


def test_generator_sign_verification():
    from lckgeom.examples import _verify_generator_signs
    e = get_example("hopf_standard")
    flipped = tuple(tuple(-ex.as_expr(v) for v in k) for k in e.chart.generators)
    from dataclasses import replace
    fixed = _verify_generator_signs(replace(e.chart, generators=flipped))
    x = e.chart.sample_points(3, seed=0)
    b1 = eval_fields(fixed, x, order=1)
    b0 = eval_fields(e.chart, x, order=1)
    for k0, k1 in zip(e.chart.generators, fixed.generators):
        np.testing.assert_allclose(b1.array(k1).value, b0.array(k0).value)
