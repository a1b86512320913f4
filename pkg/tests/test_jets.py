import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lckgeom import expr as ex
from lckgeom import jets
from lckgeom.jets import JetError, JetOrderError


def _seeded(values, order):
    ctx = jets.get_context(len(values), order)
    return ctx, [jets.seed(i, np.asarray(v, float), ctx) for i, v in enumerate(values)]


def _all_partials(jet, nvars, order):
    out = {}
    ctx = jet.ctx
    for alpha in ctx.index:
        if sum(alpha) <= order:
            out[alpha] = float(np.asarray(jet.partial(alpha)))
    return out


def _sympy_partials(fexpr, syms, point, order):
    out = {}
    ctx = jets.get_context(len(syms), order)
    for alpha in ctx.index:
        d = fexpr
        for s, a in zip(syms, alpha):
            if a:
                d = sp.diff(d, s, a)
        out[alpha] = float(d.subs(dict(zip(syms, point))))
    return out


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_composite_matches_sympy(order):
    x, y = sp.symbols("x y")
    point = (0.3, 0.7)
    f_sym = sp.sin(x * y) * sp.exp(x) / (1 + y ** 2) + sp.log(2 + x) * sp.sqrt(1 + y) \
        + sp.atan2(y, 1 + x) + (1 + x * x) ** sp.Rational(3, 2)
    ctx, (X, Y) = _seeded(point, order)
    f = jets.sin(X * Y) * jets.exp(X) / (1.0 + Y ** 2) + jets.log(2.0 + X) * jets.sqrt(1.0 + Y) \
        + jets.atan2(Y, 1.0 + X) + jets.pow_real(1.0 + X * X, 1.5)
    got = _all_partials(f, 2, order)
    want = _sympy_partials(f_sym, (x, y), point, order)
    for alpha in want:
        assert got[alpha] == pytest.approx(want[alpha], rel=1e-12, abs=1e-12), alpha


def test_expression_tree_evaluates_as_jet():
    x, y = sp.symbols("x y")
    e = ex.cos(ex.var("x")) * ex.var("y") ** 2 - ex.exp(ex.var("x") / 2)
    f_sym = sp.cos(x) * y ** 2 - sp.exp(x / 2)
    ctx, (X, Y) = _seeded((0.4, -1.1), 3)
    j = ex.evaluate(e, {"x": X, "y": Y})
    want = _sympy_partials(f_sym, (x, y), (0.4, -1.1), 3)
    got = _all_partials(j, 2, 3)
    for alpha in want:
        assert got[alpha] == pytest.approx(want[alpha], rel=1e-12, abs=1e-12)


def test_expression_json_round_trip():
    e = ex.atan2(ex.var("a"), 1.0 + ex.var("b") ** 2) + ex.log(ex.sqrt(ex.var("a") + 3.0))
    back = ex.from_json(ex.to_json(e))
    env = {"a": np.array([0.2, 0.5]), "b": np.array([1.0, -2.0])}
    np.testing.assert_array_equal(ex.evaluate(back, env), ex.evaluate(e, env))


def test_order_exceeded_raises():
    ctx, (X,) = _seeded((0.5,), 2)
    f = jets.sin(X)
    with pytest.raises(JetOrderError):
        f.partial((3,))
    g = f.derivative(0).derivative(0)
    with pytest.raises(JetOrderError):
        g.derivative(0).derivative(0)


def test_context_rejects_bad_arguments():
    with pytest.raises(JetError):
        jets.get_context(0, 2)
    with pytest.raises(JetError):
        jets.get_context(2, 0)


def test_domain_errors():
    ctx, (X,) = _seeded((-1.0,), 2)
    with pytest.raises(JetError):
        jets.log(X)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_product_and_chain_rule(a, b):
    ctx, (X, Y) = _seeded((a, b), 3)
    f, g = jets.sin(X + 2.0 * Y), jets.exp(X * Y)
    prod = f * g
    for v in range(2):
        lhs = prod.derivative(v).value
        rhs = (f.derivative(v) * g + f * g.derivative(v)).value
        assert np.allclose(lhs, rhs, rtol=1e-13, atol=1e-13)
    # d/dx exp(sin(x + 2y)) = cos(x + 2y) exp(sin(x + 2y))
    h = jets.exp(f)
    assert h.partial((1, 0)) == pytest.approx(math.cos(a + 2 * b) * math.exp(math.sin(a + 2 * b)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_matrix_inverse_det_expm(seed):
    rng = np.random.default_rng(seed)
    ctx, (T,) = _seeded((0.0,), 3)
    A = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    B = rng.standard_normal((3, 3))
    M = jets.constant(ctx, A) + jets.einsum("...,ab->...ab", T, B)
    Minv = jets.inverse(M)
    # (A + tB)^-1 = sum_k (-A^-1 B)^k A^-1 t^k
    Ai = np.linalg.inv(A)
    for k in range(4):
        want = np.linalg.matrix_power(-Ai @ B, k) @ Ai
        np.testing.assert_allclose(Minv.coeffs[..., k], want, rtol=0,
                                   atol=1e-12 * np.abs(want).max())
    # d/dt det(A + tB) at 0 = det(A) tr(A^-1 B)
    d = jets.det(M)
    assert d.value == pytest.approx(np.linalg.det(A), rel=1e-12)
    assert d.partial((1,)) == pytest.approx(np.linalg.det(A) * np.trace(np.linalg.solve(A, B)),
                                             rel=1e-10)
    # d/dt expm(tB) = B, d^2/dt^2 = B^2
    E = jets.expm(jets.einsum("...,ab->...ab", T, B))
    np.testing.assert_allclose(E.partial((1,)), B, atol=1e-12)
    np.testing.assert_allclose(E.partial((2,)), B @ B, atol=1e-11)


def test_expm_large_constant_part():
    ctx, (T,) = _seeded((0.0,), 2)
    A = np.array([[0.0, 3.0], [-3.0, 0.0]])
    E = jets.expm(jets.constant(ctx, A) + jets.einsum("...,ab->...ab", T, A))
    want = np.array([[math.cos(3), math.sin(3)], [-math.sin(3), math.cos(3)]])
    np.testing.assert_allclose(E.value, want, atol=1e-12)
    np.testing.assert_allclose(E.partial((1,)), A @ want, atol=1e-11)


def test_einsum_matches_numpy_on_values():
    rng = np.random.default_rng(3)
    ctx, (X,) = _seeded((0.2,), 2)
    A = jets.constant(ctx, rng.standard_normal((5, 3, 4))) * jets.cos(X)
    B = rng.standard_normal((5, 4, 2))
    C = jets.einsum("...ij,...jk->...ik", A, B)
    np.testing.assert_allclose(C.value, np.einsum("...ij,...jk->...ik", A.value, B), atol=1e-14)
