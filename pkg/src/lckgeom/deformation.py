"""Tangent directions to the space of omega-compatible complex structures.

A direction is an endomorphism field a in sp(TM, omega); it moves J along
J_t = expm(-t a) J expm(t a) with velocity a_hat = [J, a].  The symmetric
form ring_a = -J a_hat is the variation of the metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import expr as ex
from . import jets
from .geometry import ChartError, CompatibilityError, FieldBundle, eval_fields, relative_residual
from .jets import Jet
from .pointwise import LocalGeometry
from .riemannian import adjoint, codifferential, divergence_delta, lie_derivative

__all__ = [
    "DeformationField",
    "TangentVector",
    "LinearizationResult",
    "sp_project",
    "sp_residual",
    "tangent_vector",
    "propringa_residuals",
    "tangent_round_trip",
    "curve_eval",
    "linearize",
    "basic_bracket_check",
    "trace_identities",
    "invariance_residual",
    "LINEARIZABLE",
    "t_derivative",
]


@dataclass(frozen=True)
class DeformationField:
    """Endomorphism field a^b_c(x) given by expressions (rows indexed by b)."""

    a: tuple
    label: str = "a"

    def __post_init__(self):
        rows = tuple(tuple(ex.as_expr(v) for v in row) for row in self.a)
        if any(len(r) != len(rows) for r in rows):
            raise ChartError("deformation field must be a square array of expressions")
        object.__setattr__(self, "a", rows)

    def evaluate(self, bundle: FieldBundle) -> Jet:
        return bundle.array(self.a)

    def to_dict(self) -> dict:
        return {"label": self.label, "a": [[ex.to_json(e) for e in row] for row in self.a]}


@dataclass(frozen=True)
class TangentVector:
    a_hat: Jet      # [J, a]
    ring_a: Jet     # -J [J, a]


def sp_project(a, omega, omega_inv):
    """(a - omega^-1 a^T omega) / 2, the omega-skew part of a."""
    return (a - jets.einsum("...ab,...cb,...cd->...ad", omega_inv, a, omega)) * 0.5


def sp_residual(a, omega) -> np.ndarray:
    """omega(a., .) + omega(., a.) relative to |omega a|."""
    wa = jets.einsum("...ab,...bc->...ac", omega, a)
    lhs = jets.einsum("...ca,...cb->...ab", a, omega)
    return relative_residual(lhs, -wa)


def invariance_residual(bundle: FieldBundle, a: Jet, generators) -> np.ndarray:
    """Max over generators of |L_k a| per point."""
    out = np.zeros(len(bundle.points))
    for k in generators:
        L = lie_derivative(bundle.array(k), a, ("u", "d"), bundle.dim)
        out = np.maximum(out, relative_residual(L, 0.0))
    return out


def tangent_vector(J, a) -> TangentVector:
    a_hat = J @ a - a @ J
    return TangentVector(a_hat, -(J @ a_hat))


def propringa_residuals(bundle: FieldBundle, ring_a: Jet) -> dict:
    """ring_a is g-symmetric, anticommutes with J and is trace-free."""
    J = bundle.J
    return {
        "g_symmetric": relative_residual(ring_a, adjoint(bundle, ring_a)),
        "J_anti_invariant": relative_residual(J @ ring_a, -(ring_a @ J)),
        "trace_free": relative_residual(jets.einsum("...aa->...", ring_a), 0.0),
    }


def tangent_round_trip(J, u) -> dict:
    """For u tangent at J: Ju + uJ = 0, u in sp, and u = [J, -Ju/2]."""
    b = -(J @ u) * 0.5
    rebuilt = J @ b - b @ J
    return {"anticommutes": relative_residual(J @ u, -(u @ J)),
            "reconstructs": relative_residual(rebuilt, u)}


# -- curves ------------------------------------------------------------------------

def curve_eval(chart, x, a: DeformationField, order: int = 3, t_name: str = "curve_t",
               check: bool = True, tol: float = 1e-11) -> FieldBundle:
    """Bundle at J_t = expm(-t a) J expm(t a) with t an extra jet variable seeded at 0."""
    base = eval_fields(chart, x, order=order, extra_vars=(t_name,), check=check)
    av = a.evaluate(base)
    if check:
        res = sp_residual(av, base.omega)
        if np.any(res > tol):
            raise CompatibilityError(f"deformation {a.label!r} is not omega-skew", float(res.max()))
    t = base.env[t_name]
    ta = jets.einsum("...,...ab->...ab", t, av)
    Jt = jets.expm(-ta) @ base.J @ jets.expm(ta)
    if check:
        eye = np.eye(chart.dim)
        sq = np.abs((Jt @ Jt + eye).coeffs).max()
        comp = np.abs((jets.einsum("...ca,...cd,...db->...ab", Jt, base.omega, Jt)
                       - base.omega).coeffs).max()
        if max(sq, comp) > 1e-9 * max(1.0, float(np.abs(Jt.coeffs).max())):
            raise CompatibilityError("J_t lost compatibility along the curve", float(max(sq, comp)))
    g = base.omega @ Jt
    return replace(base, J=Jt, g=g, ginv=jets.inverse(g), _cache={})


def t_derivative(q: Jet, bundle: FieldBundle, t_name: str = "curve_t") -> np.ndarray:
    """d/dt at t = 0 of a jet over a curve bundle."""
    alpha = [0] * bundle.ctx.num_vars
    alpha[bundle.var_index(t_name)] = 1
    return q.partial(alpha)


# -- linearization formulas -----------------------------------------------------------

LINEARIZABLE = ("metric", "theta_sharp", "norm_theta_sq", "scal", "dstar_theta", "mu_extended")
_NEEDS_LCK = ("scal", "dstar_theta", "mu_extended")


@dataclass(frozen=True)
class LinearizationResult:
    quantity: str
    lhs: np.ndarray
    rhs: np.ndarray
    residual: np.ndarray
    hypotheses: dict = field(default_factory=dict)
    required: tuple = ()

    @property
    def hypotheses_met(self) -> bool:
        return all(self.hypotheses.get(h, False) for h in self.required)


def _quantity(geo: LocalGeometry, name: str) -> Jet:
    if name == "metric":
        return geo.bundle.g
    if name == "theta_sharp":
        return geo.theta_sharp
    if name == "norm_theta_sq":
        return geo.theta_norm_sq
    if name == "scal":
        return geo.scal
    if name == "dstar_theta":
        return geo.dstar_theta
    if name == "mu_extended":
        return geo.mu_extended
    raise ValueError(f"unknown quantity {name!r}; choose from {LINEARIZABLE}")


def _formula(geo: LocalGeometry, ring_a: Jet, name: str) -> Jet:
    b, n = geo.bundle, geo.n
    ts = geo.theta_sharp
    a_ts = jets.einsum("...ab,...b->...a", ring_a, ts)
    if name == "metric":
        return jets.einsum("...ac,...cb->...ab", b.g, ring_a)
    if name == "theta_sharp":
        return -a_ts
    th_a_ts = jets.einsum("...a,...a->...", geo.theta, a_ts)
    if name == "norm_theta_sq":
        return -th_a_ts
    div = divergence_delta(ring_a, geo.conn, b)
    div_ts = jets.einsum("...a,...a->...", div, ts)
    if name == "dstar_theta":
        return -div_ts
    dd = codifferential(div, geo.conn, b)
    if name == "scal":
        return dd + th_a_ts * ((n - 1) / 2)
    if name == "mu_extended":
        return dd - div_ts
    raise ValueError(f"unknown quantity {name!r}")


def linearize(quantities, chart, x, a: DeformationField, order: int = 3,
              generators=None) -> dict:
    """t-derivatives of base quantities along J_t against their closed forms at t = 0.

    Returns name -> :class:`LinearizationResult`.  scal, d*theta and mu need an
    integrable J and a K-invariant a; both flags are measured and attached.
    """
    if isinstance(quantities, str):
        quantities = (quantities,)
    curve = LocalGeometry(curve_eval(chart, x, a, order=order))
    base = LocalGeometry(eval_fields(chart, x, order=order))
    av = a.evaluate(base.bundle)
    tv = tangent_vector(base.bundle.J, av)
    gens = chart.generators if generators is None else generators
    inv = invariance_residual(base.bundle, av, gens) if gens else np.zeros(len(x))
    hyp = {"integrable": base.integrable, "k_invariant": bool(np.all(inv <= 1e-10))}
    out = {}
    for q in quantities:
        try:
            lhs = t_derivative(_quantity(curve, q), curve.bundle)
        except jets.JetOrderError:
            lhs = np.full(np.shape(_formula(base, tv.ring_a, q).value), np.nan)
        rhs = _formula(base, tv.ring_a, q).value
        res = relative_residual(lhs, rhs)
        res = np.where(np.isnan(res), np.inf, res)
        out[q] = LinearizationResult(q, lhs, rhs, res, dict(hyp),
                                     ("integrable", "k_invariant") if q in _NEEDS_LCK else ())
    return out


# -- pointwise algebra -----------------------------------------------------------------

def basic_bracket_check(J: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """d^2/dtds of M J M^-1 with M = e^{ta} e^{-sb} e^{-ta}, against [J, ab - ba]."""
    J, a, b = (np.asarray(v, dtype=float) for v in (J, a, b))
    batch = np.broadcast_shapes(J.shape[:-2], a.shape[:-2], b.shape[:-2])
    ctx = jets.get_context(2, 2)
    t = jets.seed(0, np.zeros(batch), ctx)
    s = jets.seed(1, np.zeros(batch), ctx)
    ta = jets.einsum("...,...ab->...ab", t, np.broadcast_to(a, batch + a.shape[-2:]))
    sb = jets.einsum("...,...ab->...ab", s, np.broadcast_to(b, batch + b.shape[-2:]))
    M = jets.expm(ta) @ jets.expm(-sb) @ jets.expm(-ta)
    Minv = jets.expm(ta) @ jets.expm(sb) @ jets.expm(-ta)
    curve = M @ J @ Minv
    lhs = curve.partial((1, 1))
    c = a @ b - b @ a
    return relative_residual(lhs, J @ c - c @ J)


def trace_identities(J, a, b, c) -> dict:
    """tr(J[J,a][J,b]) = 2 tr(J[a,b]) and the cyclic sum of tr(J[[a,b],c]) vanishes."""
    def br(x, y):
        return x @ y - y @ x

    tr = lambda m: np.trace(m, axis1=-2, axis2=-1)  # noqa: E731
    lhs1 = tr(J @ br(J, a) @ br(J, b))
    rhs1 = 2.0 * tr(J @ br(a, b))
    cyc = tr(J @ br(br(a, b), c)) + tr(J @ br(br(b, c), a)) + tr(J @ br(br(c, a), b))
    scale = np.maximum.reduce([np.abs(tr(J @ br(br(a, b), c))), np.abs(tr(J @ br(br(b, c), a))),
                               np.ones_like(cyc)])
    return {"bracket_trace": relative_residual(lhs1, rhs1),
            "cyclic": np.abs(cyc) / scale}


def random_sp(rng, omega: np.ndarray, count: int) -> np.ndarray:
    """Random elements of sp(omega) at each point (omega has a leading batch axis)."""
    m = rng.standard_normal((count,) + omega.shape[-2:])
    wi = np.linalg.inv(omega)
    return 0.5 * (m - wi @ np.swapaxes(m, -1, -2) @ omega)
