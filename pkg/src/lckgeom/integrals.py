"""Quadrature over a chart and the global identities built on it.

Integrals are taken against omega^n; quadrature weights carry the density
Pf(omega) of omega^n / n!, so every integral below multiplies by n!.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import jets
from .deformation import DeformationField, curve_eval, t_derivative, tangent_vector
from .geometry import Chart, eval_fields, pfaffian
from .pointwise import LocalGeometry
from .riemannian import codifferential, delta_star, divergence_delta, endo_inner
from .symmetry import field_from_potential, fundamental_vector

__all__ = [
    "QuadratureRule",
    "IntegrationError",
    "GlobalReport",
    "midpoint_grid",
    "monte_carlo",
    "orbit_axes",
    "integrate",
    "total_mass",
    "taut_pairings",
    "moment_map_identity",
    "futaki",
    "futaki_derivative",
    "integration_by_parts",
    "lee_period",
    "convergence_order",
    "mean_mu",
]

DEFAULT_CHUNK = 256


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray
    weights: np.ndarray          # cell measure * Pf(omega) at the point
    scheme: str
    resolution: int | None = None
    seed: int | None = None
    collapsed: tuple = ()        # axes integrated exactly under torus invariance
    chart_name: str = ""

    def __post_init__(self):
        if not np.all(self.weights > 0):
            raise IntegrationError("quadrature weights must be strictly positive")

    def describe(self) -> dict:
        return {"scheme": self.scheme, "resolution": self.resolution, "seed": self.seed,
                "points": int(len(self.points)), "collapsed_axes": list(self.collapsed)}


def orbit_axes(chart: Chart) -> tuple:
    """Coordinate axes whose coordinate field is one of the chart generators."""
    out = []
    for k in chart.generators:
        vals = [e.value if e.op == "const" else None for e in k]
        if None in vals:
            continue
        if sorted(vals) == [0.0] * (chart.dim - 1) + [1.0]:
            i = vals.index(1.0)
            if chart.coordinates[i].periodic:
                out.append(i)
    return tuple(sorted(set(out)))


def _density(chart: Chart, pts: np.ndarray) -> np.ndarray:
    b = eval_fields(chart, pts, order=1, check=False)
    return pfaffian(b.omega).value


def midpoint_grid(chart: Chart, resolution: int, collapse=()) -> QuadratureRule:
    """Tensor midpoint rule; axes in ``collapse`` are replaced by one node times their length."""
    collapse = tuple(sorted(collapse))
    axes, cell = [], 1.0
    for i, c in enumerate(chart.coordinates):
        if i in collapse:
            if not c.periodic:
                raise IntegrationError(f"cannot collapse non-periodic axis {c.name!r}")
            axes.append(np.array([c.lower + 0.5 * c.length]))
            cell *= c.length
        else:
            h = c.length / resolution
            axes.append(c.lower + h * (np.arange(resolution) + 0.5))
            cell *= h
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    w = cell * _density(chart, pts)
    return QuadratureRule(pts, w, "midpoint_grid", int(resolution), None, collapse, chart.name)


def monte_carlo(chart: Chart, count: int, seed: int, collapse=()) -> QuadratureRule:
    collapse = tuple(sorted(collapse))
    rng = np.random.default_rng(seed)
    lo = np.array([c.lower for c in chart.coordinates])
    ln = np.array([c.length for c in chart.coordinates])
    pts = lo + ln * rng.random((int(count), chart.dim))
    for i in collapse:
        pts[:, i] = lo[i] + 0.5 * ln[i]
    # reject boundary hits of open axes (measure zero, but keep the rule well defined)
    inner = np.ones(len(pts), bool)
    for i, c in enumerate(chart.coordinates):
        if not c.periodic:
            inner &= (pts[:, i] > c.lower) & (pts[:, i] < c.upper)
    pts = pts[inner]
    w = float(np.prod(ln)) / count * _density(chart, pts)
    return QuadratureRule(pts, w, "monte_carlo", None, int(seed), collapse, chart.name)


def _evaluate_chunks(f, pts, chunk, workers):
    starts = list(range(0, len(pts), chunk))

    def run(s):
        p = pts[s:s + chunk]
        try:
            v = np.asarray(f(p), dtype=float)
        except Exception as err:  # reported with the offending points
            raise IntegrationError(f"integrand failed near point {p[0].tolist()}: {err}") from err
        if v.shape[0] != len(p):
            raise IntegrationError("integrand returned the wrong number of values")
        bad = ~np.isfinite(v.reshape(len(p), -1)).all(axis=1)
        if bad.any():
            raise IntegrationError(f"non-finite integrand at point {p[np.argmax(bad)].tolist()}")
        return v

    if workers is None:
        workers = min(8, os.cpu_count() or 1)
    if workers <= 1 or len(starts) == 1:
        parts = [run(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    return np.concatenate(parts, axis=0)


def _check_invariance(rule: QuadratureRule, f, tol=1e-8):
    if not rule.collapsed:
        return
    rng = np.random.default_rng(12345)
    p = rule.points[: min(4, len(rule.points))].copy()
    base = np.asarray(f(p), dtype=float)
    q = p.copy()
    for i in rule.collapsed:
        q[:, i] = q[:, i] + rng.random(len(q)) * 2.0 * np.pi
    moved = np.asarray(f(q), dtype=float)
    scale = max(float(np.abs(base).max()), 1.0)
    if np.abs(moved - base).max() > tol * scale:
        raise IntegrationError("integrand is not invariant along the collapsed axes; "
                               "use a rule without collapsed axes")


def integrate(rule: QuadratureRule, f, workers: int | None = None,
              chunk: int = DEFAULT_CHUNK, check_invariance: bool = True):
    """Sum w_i f(x_i) with a compensated, order-fixed reduction.

    ``f`` maps an (m, dim) array of points to m values or to an (m, q) array;
    the result is a float or a length-q array.  Chunking is independent of
    ``workers``, so results are bit-identical for any thread count.
    """
    if check_invariance:
        _check_invariance(rule, f)
    vals = _evaluate_chunks(f, rule.points, chunk, workers)
    if vals.ndim == 1:
        return math.fsum((rule.weights * vals).tolist())
    prod = rule.weights[:, None] * vals.reshape(len(vals), -1)
    return np.array([math.fsum(prod[:, j].tolist()) for j in range(prod.shape[1])])


def total_mass(rule: QuadratureRule) -> float:
    """Integral of omega^n / n! (the Riemannian volume)."""
    return math.fsum(rule.weights.tolist())


def lee_period(chart: Chart, base_point, axis: int = 0, nodes: int = 64) -> float:
    """Integral of theta along the closed coordinate loop through ``base_point``."""
    from .geometry import lee_form
    c = chart.coordinates[axis]
    if not c.periodic:
        raise IntegrationError("the loop axis must be periodic")
    h = c.length / nodes
    pts = np.repeat(np.asarray(base_point, float)[None, :], nodes, axis=0)
    pts[:, axis] = c.lower + h * (np.arange(nodes) + 0.5)
    theta = lee_form(eval_fields(chart, pts, order=1)).jet.value[:, axis]
    return math.fsum((theta * h).tolist())


# -- reports ---------------------------------------------------------------------

@dataclass
class GlobalReport:
    identity: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    scheme: dict
    resolution_series: list = field(default_factory=list)
    convergence_order: float | None = None
    scale: float | None = None
    runtime_ms: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = {"identity": self.identity, "lhs": self.lhs, "rhs": self.rhs,
             "abs_err": self.abs_err, "rel_err": self.rel_err, "scheme": self.scheme,
             "resolution_series": self.resolution_series,
             "convergence_order": self.convergence_order, "scale": self.scale}
        if timing:
            d["runtime_ms"] = self.runtime_ms
        return d


def convergence_order(resolutions, errors) -> float | None:
    """Least-squares slope of -log(err) against log(resolution)."""
    r = np.asarray(resolutions, float)
    e = np.asarray(errors, float)
    ok = e > 0
    if ok.sum() < 2:
        return None
    slope = np.polyfit(np.log(r[ok]), np.log(e[ok]), 1)[0]
    return float(-slope)


SCALE_FLOOR = 1e-9


def _rel(lhs, rhs, scale):
    """|lhs - rhs| / max(|lhs|, |rhs|, scale), with an absolute floor for 0 = 0 cases."""
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), scale, SCALE_FLOOR)


# -- tautological pairings -----------------------------------------------------------

def taut_pairings(rule: QuadratureRule, chart: Chart, u, v, order: int = 2,
                  tol: float = 1e-9, workers=None) -> dict:
    """G(u, v) = int tr(uv) omega^n and Omega(u, v) = int tr(Juv) omega^n.

    ``u`` and ``v`` map a :class:`LocalGeometry` to endomorphism values; both
    must anticommute with J.  Also returns the swapped pairings.
    """
    nf = math.factorial(chart.n)

    def f(pts):
        geo = LocalGeometry(eval_fields(chart, pts, order=order))
        J = geo.bundle.J.value
        U, W = _values(u(geo)), _values(v(geo))
        for m in (U, W):
            bad = np.abs(J @ m + m @ J).max()
            if bad > tol * max(1.0, float(np.abs(m).max())):
                raise IntegrationError(f"direction is not tangent at J (residual {bad:.2e})")
        tr = lambda m: np.trace(m, axis1=-2, axis2=-1)  # noqa: E731
        return np.stack([tr(U @ W), tr(J @ U @ W), tr(W @ U), tr(J @ W @ U)], axis=-1)

    r = integrate(rule, f, workers=workers) * nf
    return {"G": float(r[0]), "Omega": float(r[1]), "G_swapped": float(r[2]),
            "Omega_swapped": float(r[3])}


def _values(x):
    return x.value if isinstance(x, jets.Jet) else np.asarray(x, float)


# -- moment map identity ---------------------------------------------------------------

def _moment_map_integrand(chart: Chart, a: DeformationField, h, order: int):
    h = ex.as_expr(h)

    def f(pts):
        curve = LocalGeometry(curve_eval(chart, pts, a, order=order))
        mu_dot = t_derivative(curve.mu_extended, curve.bundle)
        base = LocalGeometry(eval_fields(chart, pts, order=2))
        hv = base.bundle.scalar(h)
        hf = field_from_potential(base, hv)
        xstar, _ = fundamental_vector(base, hf.X)
        J = base.bundle.J.value
        ahat = tangent_vector(base.bundle.J, a.evaluate(base.bundle)).a_hat.value
        pair = np.trace(J @ xstar.value @ ahat, axis1=-2, axis2=-1)
        lhs = mu_dot * hv.value
        return np.stack([lhs, -0.5 * pair, np.abs(lhs)], axis=-1)

    return f


def moment_map_identity(chart: Chart, a: DeformationField, h, resolutions=(16,),
                        collapse=None, order: int = 3, workers=None,
                        label: str = "", primary: int | None = None) -> GlobalReport:
    """int mu'(a_hat) h omega^n against -Omega(X*, a_hat)/2 with X* = -L_X J, X from h.

    ``primary`` selects the reported resolution (default: the last one); all
    resolutions form the refinement series used for the convergence order.
    """
    t0 = time.perf_counter()
    if collapse is None:
        collapse = orbit_axes(chart)
    nf = math.factorial(chart.n)
    f = _moment_map_integrand(chart, a, h, order)
    series = []
    for res in resolutions:
        rule = midpoint_grid(chart, res, collapse)
        lhs, rhs, scale = integrate(rule, f, workers=workers) * nf
        series.append({"resolution": int(res), "lhs": float(lhs), "rhs": float(rhs),
                       "abs_err": float(abs(lhs - rhs)), "scale": float(scale)})
    last = series[-1]
    if primary is not None:
        last = next(s for s in series if s["resolution"] == int(primary))
    rep = GlobalReport(
        identity=f"moment_map[{label or a.label}]",
        lhs=last["lhs"], rhs=last["rhs"], abs_err=last["abs_err"],
        rel_err=_rel(last["lhs"], last["rhs"], last["scale"]),
        scheme={"scheme": "midpoint_grid", "collapsed_axes": list(collapse)},
        resolution_series=series,
        convergence_order=convergence_order([s["resolution"] for s in series],
                                            [s["abs_err"] for s in series])
        if len(series) > 1 else None,
        scale=last["scale"],
    )
    rep.runtime_ms = 1000.0 * (time.perf_counter() - t0)
    return rep


# -- Futaki invariant ----------------------------------------------------------------------

def mean_mu(rule: QuadratureRule, chart: Chart, order: int = 2, workers=None) -> float:
    def f(pts):
        return LocalGeometry(eval_fields(chart, pts, order=order)).mu_extended.value
    return integrate(rule, f, workers=workers) / total_mass(rule)


def futaki(rule: QuadratureRule, chart: Chart, h, order: int = 2, workers=None) -> dict:
    """mu_bar and F = int (mu - mu_bar) h omega^n for the potential h."""
    h = ex.as_expr(h)
    nf = math.factorial(chart.n)

    def f(pts):
        geo = LocalGeometry(eval_fields(chart, pts, order=order))
        hv = geo.bundle.scalar(h).value
        mu = geo.mu_extended.value
        return np.stack([mu, hv, mu * hv, np.abs(mu * hv)], axis=-1)

    i_mu, i_h, i_muh, i_abs = integrate(rule, f, workers=workers)
    vol = total_mass(rule)
    mu_bar = i_mu / vol
    F = nf * (i_muh - mu_bar * i_h)
    return {"mu_bar": float(mu_bar), "F": float(F), "scale": float(nf * i_abs)}


def futaki_derivative(rule: QuadratureRule, chart: Chart, a: DeformationField, h,
                      order: int = 3, workers=None) -> dict:
    """d/dt F(X; J_t) at t = 0 = int mu' h - (int mu' / vol) int h, against omega^n."""
    h = ex.as_expr(h)
    nf = math.factorial(chart.n)

    def f(pts):
        curve = LocalGeometry(curve_eval(chart, pts, a, order=order))
        mu_dot = t_derivative(curve.mu_extended, curve.bundle)
        hv = curve.bundle.scalar(h).value
        return np.stack([mu_dot * hv, mu_dot, hv, np.abs(mu_dot * hv)], axis=-1)

    i_mh, i_m, i_h, i_abs = integrate(rule, f, workers=workers)
    vol = total_mass(rule)
    dF = nf * (i_mh - i_m * i_h / vol)
    return {"dF": float(dF), "scale": float(nf * i_abs)}


def integration_by_parts(rule: QuadratureRule, chart: Chart, a: DeformationField, h,
                         workers=None) -> dict:
    """int d*(delta ring_a) h omega^n against int <ring_a, delta* dh> omega^n."""
    h = ex.as_expr(h)
    nf = math.factorial(chart.n)

    def f(pts):
        geo = LocalGeometry(eval_fields(chart, pts, order=2))
        b = geo.bundle
        ring = tangent_vector(b.J, a.evaluate(b)).ring_a
        hv = b.scalar(h)
        lhs = codifferential(divergence_delta(ring, geo.conn, b), geo.conn, b).value * hv.value
        hess = delta_star(hv.grad(geo.dim), geo.conn, b).value
        rhs = endo_inner(b, ring, hess).value
        return np.stack([lhs, rhs, np.abs(lhs)], axis=-1)

    lhs, rhs, scale = integrate(rule, f, workers=workers) * nf
    return {"lhs": float(lhs), "rhs": float(rhs), "scale": float(scale)}
