"""Identity suites: every checked identity becomes one record with a status.

Record fields: ``name``, ``anchor`` (the identity in formula form), ``status``
(PASS, FAIL, SKIPPED(hypothesis), ERROR), ``measured``, ``threshold``,
``comparison`` (``<=`` or ``>=``), ``requires`` (hypothesis names) and ``note``.
Hypothesis-gated identities keep their measured value when skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import jets
from . import lck
from .deformation import (basic_bracket_check, invariance_residual, linearize,
                          propringa_residuals, random_sp, sp_residual, tangent_round_trip,
                          tangent_vector, trace_identities, _formula)
from .examples import ExampleCatalogEntry
from .geometry import eval_fields, exterior_d1, relative_residual
from .integrals import (SCALE_FLOOR, futaki, futaki_derivative, integrate, integration_by_parts,
                        lee_period, mean_mu, midpoint_grid, moment_map_identity, monte_carlo,
                        orbit_axes, taut_pairings, total_mass)
from .pointwise import LocalGeometry
from .riemannian import (codifferential, cov_vector, d_theta_form1, d_theta_scalar, delta_star,
                         divergence_delta, interior, lie_bracket, lie_derivative)
from .symmetry import (field_from_potential, fundamental_vector, holomorphy_identities,
                       holvf2_residual, kappa_bracket, momentum_intermediates, symplectic_dual_V)

__all__ = ["SUITES", "SuiteConfig", "SuiteRecorder", "run_suites", "PASS", "FAIL", "SKIPPED",
           "ERROR", "random_scalar", "random_vector", "PRIMARY_RESOLUTION"]

PASS, FAIL, SKIPPED, ERROR = "PASS", "FAIL", "SKIPPED(hypothesis)", "ERROR"
SUITES = ("pointwise", "linearization", "symmetry", "global", "regression")
PRIMARY_RESOLUTION = 16


@dataclass
class SuiteConfig:
    example: str = "hopf_standard"
    suites: tuple = ("pointwise",)
    samples: int = 100
    seed: int = 0
    grid: tuple = (PRIMARY_RESOLUTION,)
    jet_order: int = 3
    tolerances: dict = field(default_factory=dict)
    threads: int | None = None
    mc_samples: int = 100_000
    linearization_samples: int = 20

    def to_dict(self) -> dict:
        return {"example": self.example, "suites": list(self.suites), "samples": self.samples,
                "seed": self.seed, "grid": list(self.grid), "jet_order": self.jet_order,
                "tolerances": dict(sorted(self.tolerances.items())),
                "mc_samples": self.mc_samples,
                "linearization_samples": self.linearization_samples}


class SuiteRecorder:
    """Collects records for one suite, applying tolerance overrides and hypothesis gates."""

    def __init__(self, suite: str, hypotheses: dict, overrides: dict):
        self.suite = suite
        self.hypotheses = hypotheses
        self.overrides = overrides
        self.records = []

    def _threshold(self, name, default):
        for key in (f"{self.suite}.{name}", name, self.suite):
            if key in self.overrides:
                return float(self.overrides[key])
        return default

    def add(self, name, anchor, measured, tol, requires=(), comparison="<=", note=""):
        tol = self._threshold(name, tol)
        if measured is not None and not isinstance(measured, float):
            arr = np.asarray(measured, dtype=float)
            measured = float(np.max(arr)) if arr.size else 0.0
        missing = [h for h in requires if not self.hypotheses.get(h, False)]
        if measured is None:
            status = ERROR
        elif missing:
            status = SKIPPED
        elif math.isnan(measured):
            status = FAIL
        elif comparison == "<=":
            status = PASS if measured <= tol else FAIL
        else:
            status = PASS if measured >= tol else FAIL
        rec = {"name": name, "anchor": anchor, "status": status,
               "measured": None if measured is None or not math.isfinite(measured)
               else measured,
               "threshold": tol, "comparison": comparison, "requires": list(requires),
               "note": note if not missing else (note + "; " if note else "")
               + "hypothesis not met: " + ", ".join(missing)}
        if measured is not None and not math.isfinite(measured):
            rec["note"] = (rec["note"] + "; " if rec["note"] else "") + "non-finite measurement"
        self.records.append(rec)
        return rec

    def run(self, name, anchor, tol, fn, requires=(), comparison="<=", note=""):
        try:
            val = fn()
        except Exception as err:  # the suite continues and reports the failure
            rec = self.add(name, anchor, None, tol, (), comparison,
                           f"{type(err).__name__}: {err}")
            rec["status"] = ERROR
            return rec
        return self.add(name, anchor, val, tol, requires, comparison, note)


# -- random test fields -----------------------------------------------------------------

def random_scalar(rng, chart, terms: int = 3):
    """Smooth random scalar: constant plus products of shifted sines in chart coordinates."""
    names = chart.coordinate_names
    out = ex.const(float(rng.normal()))
    for _ in range(terms):
        i, j = rng.integers(0, len(names), size=2)
        fi = 2.0 * math.pi / chart.coordinates[i].length * int(rng.integers(1, 3))
        fj = 2.0 * math.pi / chart.coordinates[j].length * int(rng.integers(1, 3))
        out = out + float(rng.normal()) * ex.sin(fi * ex.var(names[i]) + float(rng.uniform(0, 6))) \
            * ex.cos(fj * ex.var(names[j]) + float(rng.uniform(0, 6)))
    return out


def random_vector(rng, chart, terms: int = 2):
    return tuple(random_scalar(rng, chart, terms) for _ in range(chart.dim))


# -- hypotheses ---------------------------------------------------------------------------

def _hypotheses(entry: ExampleCatalogEntry, geo: LocalGeometry) -> dict:
    flags = entry.expected_flags
    return {
        "integrable": geo.integrable,
        "kaehler": bool(flags.get("kaehler")),
        "vaisman": bool(flags.get("vaisman")) and geo.integrable,
        "potentials": bool(entry.chart.potentials)
        and all(h is not None for h in entry.chart.potentials),
        "lee_coefficients": entry.chart.lee_coefficients is not None,
    }


# -- pointwise suite ------------------------------------------------------------------------

def pointwise_suite(entry, cfg: SuiteConfig, geo: LocalGeometry, hyp: dict) -> list:
    rec = SuiteRecorder("pointwise", hyp, cfg.tolerances)
    b, dim, n = geo.bundle, geo.dim, geo.n
    theta, conn = geo.theta, geo.conn
    J, omega, g = b.J, b.omega, b.g
    rng = np.random.default_rng(cfg.seed + 101)
    X = b.array(random_vector(rng, entry.chart))
    Y = b.array(random_vector(rng, entry.chart))
    f = b.scalar(random_scalar(rng, entry.chart))
    zeta = b.array(random_vector(rng, entry.chart))            # components of a 1-form
    T8, T10 = 1e-8, 1e-10
    I = np.eye(dim)

    # chart structure
    rec.add("lee_extraction", "d omega = theta ^ omega (least-squares residual)", geo.lee.residual,
            T10)
    rec.run("lee_closed", "d theta = 0", T10, lambda: geo.lee.closed_residual)
    rec.add("levi_civita_metricity", "D g = 0", conn.metricity_residual, 1e-11)
    rec.add("levi_civita_symmetry", "Gamma^c_ab = Gamma^c_ba", conn.symmetry_residual, 1e-11)
    rec.run("riemann_bianchi", "Rm(X,Y)Z + Rm(Y,Z)X + Rm(Z,X)Y = 0", T10,
            lambda: geo.curvature.bianchi_residual)
    rec.run("ricci_symmetric", "Ric(X,Y) = Ric(Y,X)", T10,
            lambda: relative_residual(geo.curvature.ric, geo.curvature.ric.mT))

    # twisted calculus and Lie derivatives
    def lie_omega():
        lhs = lie_derivative(X, omega, ("d", "d"), dim)
        rhs = d_theta_form1(interior(X, omega), theta, dim) + \
            jets.einsum("...,...ab->...ab", jets.einsum("...a,...a->...", theta, X), omega)
        return relative_residual(lhs, rhs)
    rec.run("lie_derivative_omega", "L_X omega = d_theta(X -| omega) + theta(X) omega", T8,
            lie_omega)

    def commutator():
        w = jets.einsum("...a,...b,...ab->...", X, Y, omega)
        lhs = d_theta_scalar(w, theta, dim)
        rhs = (interior(X, d_theta_form1(interior(Y, omega), theta, dim))
               - interior(Y, d_theta_form1(interior(X, omega), theta, dim))
               - interior(lie_bracket(X, Y, dim), omega))
        return relative_residual(lhs, rhs)
    rec.run("twisted_commutator",
            "d_theta(omega(X,Y)) = X -| d_theta(Y -| omega) - Y -| d_theta(X -| omega) "
            "- [X,Y] -| omega", T8, commutator)
    rec.run("d_theta_squared", "d_theta d_theta f = 0", 1e-11,
            lambda: relative_residual(d_theta_form1(d_theta_scalar(f, theta, dim), theta, dim),
                                      0.0))
    rec.run("d_theta_of_minus_one", "d_theta(-1) = theta", 1e-12,
            lambda: relative_residual(d_theta_scalar(f * 0.0 - 1.0, theta, dim), theta))
    k_fields = [b.array(k) for k in entry.chart.generators]

    def lie_d_commute():
        out = np.zeros(len(b.points))
        for k in k_fields:
            lhs = lie_derivative(k, f.grad(dim), ("d",), dim)
            rhs = lie_derivative(k, f, (), dim).grad(dim)
            out = np.maximum(out, relative_residual(lhs, rhs))
        return out
    rec.run("lie_commutes_with_d", "L_k(df) = d(L_k f) for each generator k", 1e-11,
            lie_d_commute)
    rec.run("divergence_scalar_multiple", "delta(f Id) = -df", T10,
            lambda: relative_residual(divergence_delta(
                jets.einsum("...,cb->...cb", f, I), conn, b), -f.grad(dim)))

    weyl = geo.weyl
    rec.run("delta_star_two_forms",
            "delta* z = D(z#) - (. -| dz)#/2 = nabla(z#) - (. -| d_theta z)#/2 + g(z,theta)/2 Id",
            T8, lambda: delta_star(zeta, conn, b, theta, weyl.gamma).residual)
    ld = lck.lee_vector_derivatives(b, theta, conn, weyl)
    rec.run("lee_derivative_forms", "(D theta)# = D(theta#) = delta* theta", T10,
            lambda: np.maximum(relative_residual(ld["D_theta_flat_sharp"], ld["D_theta_sharp"]),
                               relative_residual(delta_star(theta, conn, b).value,
                                                 ld["D_theta_sharp"])))
    rec.run("lee_derivative_weyl", "D(theta#) = nabla(theta#) + |theta|^2/2 Id", T8,
            lambda: relative_residual(ld["D_theta_sharp"], ld["nabla_theta_sharp"]
                                      + jets.einsum("...,cb->...cb", geo.theta_norm_sq, I) * 0.5))

    # holomorphy of vector fields
    hol = holomorphy_identities(geo, X)
    rec.add("holvf_lie_commutator", "L_X J = [J, nabla X]", hol["lie_commutator"], T8,
            ("integrable",))
    rec.add("holvf_lie_JX", "L_{JX} J = J o L_X J", hol["lie_JX"], T8, ("integrable",))
    rec.add("holvf_anticommute", "L_X J o J + J o L_X J = 0", hol["anticommutes"], T8)
    rec.run("holvf_twisted_interior",
            "d_theta(X -| omega) = omega(nabla X ., .) + omega(., nabla X .)", T8,
            lambda: holvf2_residual(geo, X), ("integrable",))

    # Weyl connection
    w = weyl.residuals
    rec.add("weyl_torsion_free", "T^nabla = 0", w["torsion"], T8)
    rec.add("weyl_metric", "nabla g = theta (x) g", w["nabla_g"], T8)
    rec.add("weyl_omega", "nabla omega = theta (x) omega", w["nabla_omega"], T8, ("integrable",),
            note="equivalent to nabla J = 0 given nabla g = theta (x) g")
    rec.add("weyl_J_parallel", "nabla J = 0", w["nabla_J"], T8, ("integrable",))

    # Chern connection
    ch = geo.chern
    c = ch.residuals
    rec.add("chern_A_consistency",
            "A^Ch from (d omega(J., ., .))# = theta(JX)JY + theta(Y)X - g(X,Y) theta#",
            c["ACh_consistency"], T8)
    rec.add("chern_metric", "nabla^Ch g = 0", c["nablaCh_g"], T8)
    rec.add("chern_J_parallel", "nabla^Ch J = 0", c["nablaCh_J"], T8, ("integrable",))
    rec.add("chern_torsion_J", "J T^Ch(X,Y) = T^Ch(JX,Y) = T^Ch(X,JY)",
            np.maximum(c["TCh_J_left"], c["TCh_J_right"]), T8)
    rec.add("chern_torsion_closed_form",
            "T^Ch(X,Y) = (theta(X)Y - theta(Y)X - theta(JX)JY + theta(JY)JX)/2",
            c["TCh_closed"], T8)
    rec.add("levi_civita_DJ",
            "(D_Y J)X = (theta(JX)Y - theta(X)JY - g(JX,Y) theta# + g(X,Y) J theta#)/2",
            c["DJ"], T8, ("integrable",))
    rec.run("chern_torsion_derivative",
            "2 g((nabla^Ch_Z T^Ch)(X,Y), W) = theta-expansion in D theta, g and J",
            T8, lambda: c["nablaCh_TCh"], ("integrable",))
    rec.run("codifferential_omega", "d* omega = -(n-1) J theta, J theta = -theta o J", T8,
            lambda: lck.dstar_omega_residual(b, theta, conn))
    sr = lck.scalar_relations(b, theta, conn, ch)
    rec.add("fake_scal_chern_vs_scal",
            "scal~^Ch = scal - 2(n-1) d*theta - (n-3/2)(n-1)|theta|^2", sr["fake_scal"], T8,
            ("integrable",))
    rec.add("fake_scal_chern_vs_scal_chern",
            "scal~^Ch = scal^Ch - (n-1) d*theta - (n-1)^2 |theta|^2", sr["fake_scalCh"], T8,
            ("integrable",))
    rec.add("scal_vs_scal_chern", "scal - scal^Ch = (n-1) d*theta - (n-1)/2 |theta|^2",
            sr["scalCh_scal"], T8, ("integrable",))
    rec.add("mu_chern_equals_extended",
            "scal^Ch + n d*theta = scal + d*theta + (n-1)/2 |theta|^2",
            relative_residual(geo.mu_chern, geo.mu_extended), T8, ("integrable",))

    # Weyl curvature
    wc = geo.weyl_curvature.residuals
    rec.add("ricci_weyl_vs_riemann",
            "(Ric^nabla)# - Ric# = (n-1) delta* theta + (n-1)/2 theta (x) theta# "
            "- d*theta/2 Id - (n-1)/2 |theta|^2 Id", wc["ric_ric"], T8)
    rec.add("weyl_curvature_bianchi", "Omega^nabla first Bianchi identity", wc["bianchi"], T8)
    rec.add("weyl_curvature_skew", "g(Omega^nabla(X,Y)Z, W) = -g(Z, Omega^nabla(X,Y)W)",
            wc["skew"], T8)
    rec.add("weyl_curvature_J", "Omega^nabla(X,Y) J = J Omega^nabla(X,Y)", wc["J_commute"], T8,
            ("integrable",))
    rec.add("weyl_curvature_type_11", "Omega^nabla(JX,JY) = Omega^nabla(X,Y)", wc["type_11"], T8,
            ("integrable",))
    rec.add("ricci_weyl_symmetric", "Ric^nabla is symmetric", wc["ric_symmetric"], T8)
    rec.add("ricci_weyl_J_invariant", "Ric^nabla(JX,JY) = Ric^nabla(X,Y)", wc["ric_J_invariant"],
            T8, ("integrable",))

    # tangent space algebra (pointwise values)
    Jv = J.value
    av = random_sp(rng, omega.value, len(b.points))
    bv = random_sp(rng, omega.value, len(b.points))
    cv = random_sp(rng, omega.value, len(b.points))
    tv = tangent_vector(Jv, av)
    pr = propringa_residuals(b, _const(b, tv.ring_a))
    rec.add("ring_a_symmetric", "ring_a is g-symmetric", pr["g_symmetric"], T8)
    rec.add("ring_a_J_anti_invariant", "ring_a J = -J ring_a", pr["J_anti_invariant"], T8)
    rec.add("ring_a_trace_free", "tr ring_a = 0", pr["trace_free"], T8)
    rt = tangent_round_trip(Jv, tv.a_hat)
    sp_hat = sp_residual(_const(b, tv.a_hat), omega)
    rec.add("tangent_space_round_trip",
            "u = [J,a]: Ju + uJ = 0, u in sp(omega), u = [J, -Ju/2]",
            np.maximum.reduce([rt["anticommutes"], rt["reconstructs"], sp_hat]), T8)
    ti = trace_identities(Jv, av, bv, cv)
    rec.add("trace_bracket", "tr(J[J,a][J,b]) = 2 tr(J[a,b])", ti["bracket_trace"], T8)
    rec.add("trace_cyclic", "tr(J[[a,b],c]) + tr(J[[b,c],a]) + tr(J[[c,a],b]) = 0", ti["cyclic"],
            T8)

    # momentum-map intermediates with the chart potentials and a random potential
    pots = [h for h in entry.chart.potentials if h is not None]
    pots += list(entry.test_potentials.values()) + [random_scalar(rng, entry.chart)]
    d2 = np.zeros(len(b.points))
    d3 = np.zeros(len(b.points))
    for h in pots:
        m = momentum_intermediates(geo, field_from_potential(geo, b.scalar(h)))
        d2 = np.maximum(d2, m.delta_star_dtheta_h)
        d3 = np.maximum(d3, m.sym_nabla)
    rec.add("momentum_delta_star", "delta*(d_theta h) = J o nabla X + theta(JX)/2 Id", d2, T8,
            ("integrable",))
    rec.add("momentum_sym_nabla", "2 Sym_g(nabla X) = -J o L_X J", d3, T8, ("integrable",))

    # certificates and reductions
    rec.add("vaisman_lee_parallel", "D(theta#) = 0", relative_residual(ld["D_theta_sharp"], 0.0),
            1e-9, ("vaisman",))
    rec.add("vaisman_coclosed", "d*theta = 0", relative_residual(geo.dstar_theta, 0.0), 1e-9,
            ("vaisman",))
    rec.add("kaehler_theta_zero", "theta = 0", relative_residual(theta, 0.0), 0.0, ("kaehler",))
    rec.add("kaehler_twisted_equals_classical", "d_theta f = df and d_theta z = dz",
            np.maximum(relative_residual(d_theta_scalar(f, theta, dim), f.grad(dim)),
                       relative_residual(d_theta_form1(zeta, theta, dim),
                                         exterior_d1(zeta, dim))), 0.0, ("kaehler",))
    rec.add("kaehler_mu_equals_scal", "mu = scal^Ch = scal",
            np.maximum(relative_residual(geo.mu_extended, geo.scal),
                       relative_residual(geo.mu_chern, geo.scal)), 1e-14, ("kaehler",))
    rec.add("kaehler_chern_torsion_free", "T^Ch = 0", relative_residual(ch.torsion, 0.0), 1e-14,
            ("kaehler",))
    return rec.records


def _const(b, arr):
    return jets.constant(b.ctx, np.asarray(arr, float))


# -- symmetry suite -----------------------------------------------------------------------------

def symmetry_suite(entry, cfg: SuiteConfig, geo: LocalGeometry, hyp: dict) -> list:
    rec = SuiteRecorder("symmetry", hyp, cfg.tolerances)
    b, dim = geo.bundle, geo.dim
    act = entry.action.check(geo)
    T10 = 1e-10
    rec.add("action_preserves_omega", "L_k omega = 0 for every generator", act["preserves_omega"],
            T10)
    rec.add("action_lee_type", "V = sum c_i k_i", act["lee_type"], T10, ("lee_coefficients",))
    if act["twisted_hamiltonian"] is None:
        rec.add("action_twisted_hamiltonian", "k_i -| omega = d_theta h_i", 0.0, T10,
                ("potentials",), note="chart carries no potentials")
    else:
        rec.add("action_twisted_hamiltonian", "k_i -| omega = d_theta h_i",
                act["twisted_hamiltonian"], T10)
    rec.add("action_commutes", "[k_i, k_j] = 0", act["commute"], T10)
    rec.add("action_preserves_theta", "L_k theta = 0", act["preserves_theta"], T10)
    rec.add("action_theta_k", "theta(k) = 0", act["theta_k"], T10)
    rec.add("action_special_conformal", "d_theta(k -| omega) = 0", act["special_conformal"], T10)

    V = symplectic_dual_V(geo)
    theta = geo.theta
    rec.add("lee_dual_potential", "V -| omega = d_theta(-1), i.e. kappa(V) = -1",
            relative_residual(interior(V, b.omega), d_theta_scalar(
                jets.constant(b.ctx, -np.ones(len(b.points))), theta, dim)), 1e-11)
    rec.add("lee_dual_theta", "theta(V) = 0",
            relative_residual(jets.einsum("...a,...a->...", theta, V), 0.0), 1e-11)
    rec.add("lee_dual_J", "theta# = J V",
            relative_residual(geo.theta_sharp, jets.einsum("...ab,...b->...a", b.J, V)), T10)
    rec.add("lee_dual_preserves_omega", "L_V omega = 0",
            relative_residual(lie_derivative(V, b.omega, ("d", "d"), dim), 0.0), T10)
    rec.add("lee_dual_fundamental", "V* = -L_V J = 0",
            relative_residual(fundamental_vector(geo, V)[0], 0.0), T10, ("integrable",))
    rec.add("lee_dual_holomorphic_nabla", "nabla(theta#) commutes with J",
            relative_residual(
                b.J @ cov_vector(geo.weyl.gamma, geo.theta_sharp, dim),
                cov_vector(geo.weyl.gamma, geo.theta_sharp, dim) @ b.J), T10, ("integrable",))
    hf = field_from_potential(geo, -1.0)
    rec.add("potential_minus_one", "h = -1 gives X = V", relative_residual(hf.X, V), T10)

    if hyp["potentials"]:
        ks = entry.action.fields(geo)
        res = np.zeros(len(b.points))
        for k, h in zip(ks, entry.chart.potentials):
            res = np.maximum(res, relative_residual(field_from_potential(geo, h).X, k))
        rec.add("potential_generators", "X(h_i) = k_i", res, T10)
        if entry.chart.lee_coefficients is not None:
            c = entry.chart.lee_coefficients
            hsum = sum((ex.as_expr(h) * ci for h, ci in zip(entry.chart.potentials, c)),
                       ex.const(0.0))
            rec.add("potential_lee_combination", "sum c_i h_i = kappa(V) = -1",
                    relative_residual(b.scalar(hsum), -np.ones(len(b.points))), T10)
        fund = np.zeros(len(b.points))
        for k in ks:
            fund = np.maximum(fund, relative_residual(fundamental_vector(geo, k)[0], 0.0))
        rec.add("generator_fundamental", "k_i* = -L_{k_i} J = 0", fund, T10, ("integrable",))
        kb = kappa_bracket(geo, ks[0], ks[-1])
        kb = np.maximum(kb, kappa_bracket(geo, V, ks[0]))
    else:
        kb = kappa_bracket(geo, V, V)
    hf_tests = [field_from_potential(geo, h) for h in entry.test_potentials.values()]
    rng = np.random.default_rng(cfg.seed + 202)
    hf_tests.append(field_from_potential(geo, random_scalar(rng, entry.chart)))
    for i, hx in enumerate(hf_tests):
        for hy in hf_tests[i + 1:]:
            kb = np.maximum(kb, kappa_bracket(geo, hx.X, hy.X))
    rec.add("kappa_bracket", "d_theta(-omega(X,Y)) = [X,Y] -| omega", kb, T10)
    tang = np.zeros(len(b.points))
    theta_x = np.zeros(len(b.points))
    for hx in hf_tests:
        _, r = fundamental_vector(geo, hx.X)
        tang = np.maximum.reduce([tang, r["anticommutes"], r["omega_skew"]])
    for hx in hf_tests[:-1]:
        theta_x = np.maximum(theta_x, relative_residual(
            jets.einsum("...a,...a->...", theta, hx.X), 0.0))
    rec.add("fundamental_tangent", "X* J + J X* = 0 and X* in sp(omega)", tang, T10)
    rec.add("invariant_potential_theta", "theta(X) = 0 for invariant potentials", theta_x, T10)
    return rec.records


# -- linearization suite -------------------------------------------------------------------------

_LIN_ANCHORS = {
    "metric": ("g' = g(ring_a ., .)", 1e-9),
    "theta_sharp": ("(theta#)' = -ring_a theta#", 1e-9),
    "norm_theta_sq": ("(|theta|^2)' = -g(ring_a, theta (x) theta#)", 1e-9),
    "scal": ("scal' = d*(delta ring_a) + (n-1)/2 g(ring_a, theta (x) theta#)", 1e-7),
    "dstar_theta": ("(d*theta)' = -(delta ring_a)(theta#)", 1e-7),
    "mu_extended": ("mu' = d*(delta ring_a) - (delta ring_a)(theta#)", 1e-7),
}


def linearization_suite(entry, cfg: SuiteConfig, hyp: dict) -> list:
    rec = SuiteRecorder("linearization", hyp, cfg.tolerances)
    chart = entry.chart
    x = chart.sample_points(cfg.linearization_samples, cfg.seed + 303)
    base = LocalGeometry(eval_fields(chart, x, order=max(cfg.jet_order, 1)))
    b = base.bundle
    names = sorted(entry.deformations)
    for name in names:
        a = entry.deformations[name]
        av = a.evaluate(b)
        rec.add(f"sp_membership[{name}]", "omega(a., .) + omega(., a.) = 0",
                sp_residual(av, b.omega), 1e-11)
        inv = invariance_residual(b, av, chart.generators) if chart.generators else 0.0
        rec.add(f"k_invariance[{name}]", "L_k a = 0", inv, 1e-10)
        try:
            res = linearize(tuple(_LIN_ANCHORS), chart, x, a, order=cfg.jet_order)
        except Exception as err:
            for q, (anchor, tol) in _LIN_ANCHORS.items():
                r = rec.add(f"linearize_{q}[{name}]", anchor, None, tol,
                            note=f"{type(err).__name__}: {err}")
            continue
        for q, (anchor, tol) in _LIN_ANCHORS.items():
            r = res[q]
            lhyp = dict(hyp)
            lhyp.update(r.hypotheses)
            sub = SuiteRecorder("linearization", lhyp, cfg.tolerances)
            sub.add(f"linearize_{q}[{name}]", anchor, r.residual, tol, r.required)
            rec.records.extend(sub.records)

        def scal_dot_invariance():
            if base.bundle.ctx.order < 3:
                raise jets.JetOrderError("needs jet order 3")
            ring = tangent_vector(b.J, av).ring_a
            sdot = _formula(base, ring, "scal")
            out = np.zeros(len(x))
            for k in chart.generators:
                out = np.maximum(out, relative_residual(
                    lie_derivative(b.array(k), sdot, (), chart.dim), 0.0))
            return out
        rec.run(f"variation_invariance[{name}]", "L_k (scal') = 0 for K-invariant a", 1e-9,
                scal_dot_invariance, ("integrable",))
    # bracket compatibility for consecutive library pairs, pointwise
    br = np.zeros(len(x))
    for n1, n2 in zip(names, names[1:] + names[:1]):
        a1 = entry.deformations[n1].evaluate(b).value
        a2 = entry.deformations[n2].evaluate(b).value
        br = np.maximum(br, basic_bracket_check(b.J.value, a1, a2))
    rec.add("bracket_compatibility", "[a_hat, b_hat] = ([a, b])^ via d^2/dtds of the conjugation",
            br, 1e-9)
    return rec.records


def _nijenhuis_rate(entry, cfg) -> dict:
    """d/dt of the Nijenhuis tensor along each library direction (recorded only)."""
    from .deformation import curve_eval, t_derivative
    from .geometry import nijenhuis
    out = {}
    chart = entry.chart
    x = chart.sample_points(min(cfg.linearization_samples, 10), cfg.seed + 404)
    for name in sorted(entry.deformations):
        cb = curve_eval(chart, x, entry.deformations[name], order=2)
        N = nijenhuis(cb).components
        out[name] = float(np.abs(t_derivative(N, cb)).max())
    return out


# -- global suite -----------------------------------------------------------------------------------

def _primary(grid):
    grid = sorted(int(g) for g in grid)
    return PRIMARY_RESOLUTION if PRIMARY_RESOLUTION in grid else grid[-1]


def global_suite(entry, cfg: SuiteConfig, hyp: dict, info: dict) -> list:
    rec = SuiteRecorder("global", hyp, cfg.tolerances)
    chart = entry.chart
    grid = sorted(int(g) for g in cfg.grid)
    prim = _primary(grid)
    axes = orbit_axes(chart)
    nf = math.factorial(chart.n)
    rule = midpoint_grid(chart, prim, axes)
    vol = total_mass(rule)
    info["total_mass"] = vol
    info["quadrature"] = rule.describe()
    tol = 1e-3
    if "total_mass" in entry.frozen_constants:
        ref = entry.frozen_constants["total_mass"].value
        masses = [total_mass(midpoint_grid(chart, r, axes)) for r in grid]
        rec.add("total_mass", "int omega^n/n! against the frozen volume",
                abs(vol - ref) / abs(ref), tol)
        if len(grid) > 1:
            from .integrals import convergence_order
            errs = [abs(m - ref) for m in masses]
            order = convergence_order(grid, errs)
            info["total_mass_series"] = [{"resolution": r, "mass": m} for r, m in zip(grid, masses)]
            if all(e <= 1e-12 * abs(ref) for e in errs):
                rec.add("total_mass_convergence", "midpoint refinement order", 0.0, 0.0,
                        note="errors at roundoff level")
            else:
                rec.add("total_mass_convergence", "midpoint refinement order",
                        order if order is not None else float("nan"), 1.8, comparison=">=")

    def div_theorem():
        def f(pts):
            g = LocalGeometry(eval_fields(chart, pts, order=2))
            return np.stack([g.dstar_theta.value, np.abs(g.dstar_theta.value)], axis=-1)
        v, s = integrate(rule, f, workers=cfg.threads)
        return abs(v) / max(s, vol, SCALE_FLOOR)
    rec.run("divergence_theorem", "int d*theta omega^n = 0", tol, div_theorem)

    # mean of mu: grid against Monte Carlo
    def mu_schemes():
        mg = mean_mu(rule, chart, workers=cfg.threads)
        mc_rule = monte_carlo(chart, cfg.mc_samples, cfg.seed + 505)

        def f(pts):
            mu = LocalGeometry(eval_fields(chart, pts, order=2)).mu_extended.value
            return np.stack([mu, mu * mu], axis=-1)
        s1, s2 = integrate(mc_rule, f, workers=cfg.threads, check_invariance=False)
        vm = total_mass(mc_rule)
        mm = s1 / vm
        w = mc_rule.weights
        var = max(s2 / vm - mm * mm, 0.0)
        stderr = math.sqrt(var * float(np.sum(w * w))) / vm
        info["mu_bar"] = {"grid": mg, "monte_carlo": mm, "monte_carlo_stderr": stderr}
        return abs(mg - mm) / (5.0 * stderr + tol * max(abs(mg), 1.0))
    rec.run("mu_bar_scheme_invariance", "mu_bar(grid) = mu_bar(Monte Carlo) within combined error",
            1.0, mu_schemes)

    needs = ("integrable",)
    pots = dict(entry.test_potentials)
    if hyp["potentials"]:
        for i, h in enumerate(entry.chart.potentials):
            pots[f"k{i + 1}"] = h
    pots.setdefault("lee_dual", ex.const(-1.0))

    # Futaki invariant
    for pname in ("lee_dual",) + tuple(k for k in pots if k.startswith("k")):
        h = pots[pname]
        rec.run(f"futaki[{pname}]", "F(X) = int (mu - mu_bar) kappa(X) omega^n = 0", tol,
                lambda h=h: _futaki_rel(rule, chart, h, cfg), needs)
    for aname in sorted(entry.deformations):
        a = entry.deformations[aname]
        for pname in ("lee_dual",) + tuple(k for k in pots if k.startswith("k")):
            h = pots[pname]

            def fd(a=a, h=h):
                r = futaki_derivative(rule, chart, a, h, order=cfg.jet_order, workers=cfg.threads)
                return abs(r["dF"]) / max(r["scale"], SCALE_FLOOR)
            rec.run(f"futaki_derivative[{aname},{pname}]", "d/dt F(X; J_t) = 0 at t = 0", tol,
                    fd, needs)

    # integration by parts and the tautological pairings
    names = sorted(entry.deformations)
    if names:
        a0 = entry.deformations[names[0]]
        hname = sorted(entry.test_potentials)[0] if entry.test_potentials else None
        h0 = entry.test_potentials[hname] if hname else ex.const(1.0)

        def ibp():
            r = integration_by_parts(rule, chart, a0, h0, workers=cfg.threads)
            return abs(r["lhs"] - r["rhs"]) / max(abs(r["lhs"]), abs(r["rhs"]), r["scale"],
                                                   SCALE_FLOOR)
        rec.run(f"integration_by_parts[{names[0]}]",
                "int d*(delta ring_a) h omega^n = int <ring_a, delta* dh> omega^n", tol, ibp)
        a1 = entry.deformations[names[1 % len(names)]]

        def pairing():
            u = lambda g: tangent_vector(g.bundle.J, a0.evaluate(g.bundle)).a_hat  # noqa: E731
            v = lambda g: tangent_vector(g.bundle.J, a1.evaluate(g.bundle)).a_hat  # noqa: E731
            p = taut_pairings(rule, chart, u, v, workers=cfg.threads)
            pu = taut_pairings(rule, chart, u, u, workers=cfg.threads)
            info["taut_pairings"] = {"G": p["G"], "Omega": p["Omega"], "G_uu": pu["G"]}
            sc = max(abs(p["G"]), abs(pu["G"]), SCALE_FLOOR)
            sym = abs(p["G"] - p["G_swapped"]) / sc
            anti = abs(p["Omega"] + p["Omega_swapped"]) / sc
            diag = abs(pu["Omega"]) / sc
            pos = 0.0 if pu["G"] > 0 else 1.0
            return max(sym, anti, diag, pos)
        rec.run("tautological_pairings",
                "G symmetric and positive, Omega antisymmetric, Omega(u,u) = 0", 1e-9, pairing)

    # moment map identity
    for aname in names:
        a = entry.deformations[aname]
        for pname in sorted(pots):
            h = pots[pname]
            try:
                rep = moment_map_identity(chart, a, h, resolutions=grid, collapse=axes,
                                          order=cfg.jet_order, workers=cfg.threads,
                                          primary=prim, label=f"{aname},{pname}")
            except Exception as err:
                rec.add(f"moment_map[{aname},{pname}]", _MM_ANCHOR, None, tol,
                        note=f"{type(err).__name__}: {err}")
                continue
            info.setdefault("moment_map", {})[f"{aname},{pname}"] = rep.to_dict()
            rec.add(f"moment_map[{aname},{pname}]", _MM_ANCHOR, rep.rel_err, tol, needs,
                    note=f"lhs={rep.lhs:.12g} rhs={rep.rhs:.12g} at resolution {prim}")
            if len(grid) > 1:
                errs = [s["abs_err"] for s in rep.resolution_series]
                floor = 1e-10 * max(rep.scale or 0.0, 1.0)
                if all(e <= floor for e in errs):
                    rec.add(f"moment_map_convergence[{aname},{pname}]",
                            "midpoint refinement order of the identity error", 0.0, 0.0, needs,
                            note="errors at roundoff level at every resolution")
                else:
                    o = rep.convergence_order
                    rec.add(f"moment_map_convergence[{aname},{pname}]",
                            "midpoint refinement order of the identity error",
                            o if o is not None else float("nan"), 1.8, needs, comparison=">=")
    return rec.records


_MM_ANCHOR = "int mu'(a_hat) kappa(X) omega^n = -Omega(X*, a_hat)/2"


def _futaki_rel(rule, chart, h, cfg):
    r = futaki(rule, chart, h, workers=cfg.threads)
    return abs(r["F"]) / max(r["scale"], SCALE_FLOOR)


# -- regression suite ----------------------------------------------------------------------------------

def regression_suite(entry, cfg: SuiteConfig, geo: LocalGeometry, hyp: dict, info: dict) -> list:
    rec = SuiteRecorder("regression", hyp, cfg.tolerances)
    tol = 1e-8
    fc = entry.frozen_constants
    pointwise_values = {
        "scal": lambda: geo.scal,
        "theta_norm_sq": lambda: geo.theta_norm_sq,
        "dstar_theta": lambda: geo.dstar_theta,
        "scal_chern": lambda: geo.chern.scal,
        "scal_tilde_chern": lambda: geo.chern.scal_tilde,
        "mu": lambda: geo.mu_chern if geo.integrable else geo.mu_extended,
    }
    for name in sorted(fc):
        const = fc[name]
        anchor = f"recomputed {name} = frozen value ({const.provenance})"
        if name in pointwise_values:
            rec.run(f"frozen[{name}]", anchor, tol,
                    lambda c=const, fn=pointwise_values[name]:
                    np.abs(fn().value - c.value) / max(abs(c.value), 1.0))
        elif name == "lee_period":
            def period(c=const):
                pts = entry.chart.sample_points(3, cfg.seed + 606)
                vals = [lee_period(entry.chart, p) for p in pts]
                info["lee_period"] = vals
                return max(abs(v - c.value) for v in vals) / max(abs(c.value), 1.0)
            rec.run(f"frozen[{name}]", anchor, tol, period)
            rec.run("lee_form_non_exact", "s-loop period of theta is nonzero", 1e-3,
                    lambda: min(abs(v) for v in info.get("lee_period", [0.0])),
                    comparison=">=")
        elif name == "total_mass":
            def mass(c=const):
                chart = entry.chart
                collapse = tuple(i for i, co in enumerate(chart.coordinates) if co.periodic)
                rule = midpoint_grid(chart, 20000, collapse)
                return abs(total_mass(rule) - c.value) / max(abs(c.value), 1.0)
            rec.run(f"frozen[{name}]", anchor, tol, mass)
    return rec.records


# -- driver ----------------------------------------------------------------------------------------------

def run_suites(entry: ExampleCatalogEntry, cfg: SuiteConfig) -> dict:
    """Run the configured suites and return {'suites': {...}, 'info': {...}, 'flags': {...}}."""
    unknown = set(cfg.suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; choose from {list(SUITES)}")
    x = entry.chart.sample_points(cfg.samples, cfg.seed)
    geo = LocalGeometry(eval_fields(entry.chart, x, order=cfg.jet_order))
    hyp = _hypotheses(entry, geo)
    flags = {"integrable": hyp["integrable"], "nijenhuis_max": float(geo.nijenhuis.max()),
             "kaehler": hyp["kaehler"], "vaisman": hyp["vaisman"]}
    info: dict = {}
    out = {}
    for suite in SUITES:
        if suite not in cfg.suites:
            continue
        if suite == "pointwise":
            out[suite] = pointwise_suite(entry, cfg, geo, hyp)
        elif suite == "symmetry":
            out[suite] = symmetry_suite(entry, cfg, geo, hyp)
        elif suite == "linearization":
            out[suite] = linearization_suite(entry, cfg, hyp)
            try:
                info["nijenhuis_rate"] = _nijenhuis_rate(entry, cfg)
            except Exception as err:
                info["nijenhuis_rate"] = f"{type(err).__name__}: {err}"
        elif suite == "global":
            out[suite] = global_suite(entry, cfg, hyp, info)
        elif suite == "regression":
            out[suite] = regression_suite(entry, cfg, geo, hyp, info)
    return {"suites": out, "info": info, "flags": flags}
