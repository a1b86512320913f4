"""Built-in model geometries: the standard Hopf surface, a flat Kähler torus and
deformed Hopf structures, with torus actions, potentials and deformation libraries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import expr as ex
from .deformation import DeformationField
from .geometry import Chart, ChartError, Coordinate, Deformation, eval_fields, lee_form
from .riemannian import d_theta_scalar, interior

__all__ = [
    "FrozenConstant",
    "ExampleCatalogEntry",
    "hopf_standard",
    "kaehler_flat",
    "hopf_deformed",
    "get_example",
    "list_examples",
    "CATALOG",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class FrozenConstant:
    value: float
    provenance: str


@dataclass(frozen=True)
class ExampleCatalogEntry:
    chart: Chart
    deformations: dict = field(default_factory=dict)     # name -> DeformationField
    test_potentials: dict = field(default_factory=dict)  # name -> Expr (K-invariant)
    expected_flags: dict = field(default_factory=dict)
    frozen_constants: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.chart.name

    @property
    def action(self):
        from .symmetry import GroupAction
        return GroupAction.from_chart(self.chart)


# -- Hopf surface ------------------------------------------------------------

S, P1, ETA, P2 = (ex.var(v) for v in ("s", "phi1", "eta", "phi2"))
_C, _S = ex.cos(ETA), ex.sin(ETA)
_SC = _S * _C
_C2, _S2 = _C * _C, _S * _S
_COS2 = ex.cos(2.0 * ETA)


def _hopf_omega():
    z = ex.const(0.0)
    w01, w03, w12, w23 = LN2 * _C2, LN2 * _S2, _SC, _SC
    return ((z, w01, z, w03),
            (-w01, z, w12, z),
            (z, -w12, z, w23),
            (-w03, z, -w23, z))


def _hopf_J():
    z = ex.const(0.0)
    return ((z, -_C2 / LN2, z, -_S2 / LN2),
            (ex.const(LN2), z, -(_S / _C), z),
            (z, _SC, z, -_SC),
            (ex.const(LN2), z, _C / _S, z))


def _hopf_coordinates():
    two_pi = 2.0 * math.pi
    return (Coordinate("s", 0.0, 1.0, True),
            Coordinate("phi1", 0.0, two_pi, True),
            Coordinate("eta", 0.0, math.pi / 2, False),
            Coordinate("phi2", 0.0, two_pi, True))


# Invariant frame {theta#, J theta#, E, JE} with E = sin(eta)cos(eta) d/deta, and
# the g-duals of its members.  J permutes the frame: J e_i = sign_i e_perm(i).
_Z = ex.const(0.0)
_FRAME = ((ex.const(-2.0 / LN2), _Z, _Z, _Z),
          (_Z, ex.const(-2.0), _Z, ex.const(-2.0)),
          (_Z, _Z, _SC, _Z),
          (_Z, -_S2, _Z, _C2))
_FRAME_FLAT = ((ex.const(-2.0 * LN2), _Z, _Z, _Z),
               (_Z, -2.0 * _C2, _Z, -2.0 * _S2),
               (_Z, _Z, _SC, _Z),
               (_Z, -(_S2 * _C2), _Z, _S2 * _C2))
_J_PERM = (1, 0, 3, 2)
_J_SIGN = (1.0, -1.0, 1.0, -1.0)


def _is_zero(e) -> bool:
    return e.op == "const" and e.value == 0.0


def hopf_sp_field(coefficients: dict, label: str) -> DeformationField:
    """K-invariant field sum c_ij P(e_i (x) e_j^flat) in sp(TM, omega).

    P(e_i (x) e_j^flat) = (e_i (x) e_j^flat - J e_j (x) (J e_i)^flat) / 2 is the
    projection a -> (a - omega^-1 a^T omega) / 2 applied to the rank-one term.
    """
    entries = [[[] for _ in range(4)] for _ in range(4)]
    for (i, j), c in coefficients.items():
        c = ex.as_expr(c)
        pj, pi = _J_PERM[j], _J_PERM[i]
        sgn = _J_SIGN[i] * _J_SIGN[j]
        for r in range(4):
            for q in range(4):
                if not (_is_zero(_FRAME[i][r]) or _is_zero(_FRAME_FLAT[j][q])):
                    entries[r][q].append(0.5 * c * _FRAME[i][r] * _FRAME_FLAT[j][q])
                if not (_is_zero(_FRAME[pj][r]) or _is_zero(_FRAME_FLAT[pi][q])):
                    entries[r][q].append(-0.5 * sgn * c * _FRAME[pj][r] * _FRAME_FLAT[pi][q])
    rows = tuple(tuple(ex.Expr("+", tuple(t)) if t else ex.const(0.0) for t in row)
                 for row in entries)
    return DeformationField(rows, label)


def _hopf_deformations():
    two_pi_s = 2.0 * math.pi * S
    return {
        "lee_horizontal": hopf_sp_field({(0, 2): 1.0 + 0.5 * _COS2,
                                         (2, 0): 0.3 * ex.sin(two_pi_s)}, "lee_horizontal"),
        "lee_wave": hopf_sp_field({(1, 1): _COS2 * ex.cos(two_pi_s),
                                   (3, 0): 0.5 + 0.3 * ex.sin(two_pi_s),
                                   (2, 3): 0.4}, "lee_wave"),
        "contact_wave": hopf_sp_field({(0, 0): _COS2,
                                       (1, 3): 0.5 * ex.cos(two_pi_s) * (1.0 + _COS2),
                                       (2, 3): 0.4}, "contact_wave"),
        "transverse": hopf_sp_field({(2, 2): 1.0 - _COS2 * _COS2,
                                     (0, 3): 0.5 * ex.sin(two_pi_s) * _COS2,
                                     (3, 1): 0.3}, "transverse"),
    }


def _hopf_potentials():
    two_pi_s = 2.0 * math.pi * S
    return {
        "cos2eta": 0.5 * _COS2,
        "quadratic_wave": _COS2 * _COS2 + 0.3 * ex.sin(two_pi_s),
        "modulated": 0.2 * ex.cos(two_pi_s) * (1.0 + _COS2),
    }


def _hopf_chart(name="hopf_standard", deformation=None, parameters=None) -> Chart:
    z, one = ex.const(0.0), ex.const(1.0)
    return Chart(
        name=name,
        coordinates=_hopf_coordinates(),
        omega=_hopf_omega(),
        J=_hopf_J(),
        parameters=dict(parameters or {}),
        generators=((z, one, z, z), (z, z, z, one)),
        potentials=(-0.5 * _C2, -0.5 * _S2),
        lee_coefficients=(2.0, 2.0),
        deformation=deformation,
    )


_HOPF_CONSTANTS = {
    "scal": FrozenConstant(6.0, "symbolic pullback of |z|^-2 flat metric, Koszul formula"),
    "theta_norm_sq": FrozenConstant(4.0, "symbolic: theta = -d log|z|^2"),
    "dstar_theta": FrozenConstant(0.0, "symbolic divergence of theta#"),
    "lee_period": FrozenConstant(-2.0 * LN2, "symbolic integral of theta along the s-loop"),
    "total_mass": FrozenConstant(2.0 * math.pi ** 2 * LN2,
                                 "symbolic integral of Pf(omega) over the chart box"),
    "scal_chern": FrozenConstant(8.0, "symbolic unitary-frame trace of the Chern curvature"),
    "scal_tilde_chern": FrozenConstant(4.0, "symbolic real trace of the Chern curvature"),
    "mu": FrozenConstant(8.0, "scal_chern + n * dstar_theta from the symbolic values"),
}


def _verify_generator_signs(chart: Chart, samples: int = 64, seed: int = 0,
                            tol: float = 1e-10) -> Chart:
    """Check k_i -| omega = d_theta h_i; flip a generator if only the flipped sign fits."""
    if not chart.potentials or all(h is None for h in chart.potentials):
        return chart
    x = chart.sample_points(samples, seed)
    b = eval_fields(chart, x, order=1)
    theta = lee_form(b).jet
    gens = list(chart.generators)
    for i, h in enumerate(chart.potentials):
        if h is None:
            continue
        k = b.array(gens[i])
        lhs = interior(k, b.omega).value
        rhs = d_theta_scalar(b.scalar(h), theta, chart.dim).value
        scale = max(float(np.abs(rhs).max()), 1.0)
        if np.abs(lhs - rhs).max() <= tol * scale:
            continue
        if np.abs(lhs + rhs).max() <= tol * scale:
            gens[i] = tuple(-e for e in gens[i])
            continue
        raise ChartError(f"potential {i} of {chart.name!r} does not match its generator")
    return replace(chart, generators=tuple(gens))


def hopf_standard(n: int = 2) -> ExampleCatalogEntry:
    """Diagonal Hopf surface (C^2 minus 0)/(z ~ 2z) with z = 2^s (cos(eta) e^{i phi1},
    sin(eta) e^{i phi2}), the Vaisman metric |z|^-2 (flat) and the standard J."""
    if n != 2:
        raise ValueError("only the complex surface case n = 2 is provided")
    chart = _verify_generator_signs(_hopf_chart())
    return ExampleCatalogEntry(
        chart=chart,
        deformations=_hopf_deformations(),
        test_potentials=_hopf_potentials(),
        expected_flags={"integrable": True, "vaisman": True, "kaehler": False},
        frozen_constants=dict(_HOPF_CONSTANTS),
    )


def hopf_deformed(deformation: str = "lee_horizontal", t: float = 0.1) -> ExampleCatalogEntry:
    """Hopf chart with J replaced by expm(-t a) J expm(t a) for a library field a."""
    lib = _hopf_deformations()
    if deformation not in lib:
        raise ChartError(f"unknown deformation {deformation!r}; choose from {sorted(lib)}")
    base = _hopf_chart("hopf_deformed", Deformation(lib[deformation].a, "t"), {"t": float(t)})
    chart = _verify_generator_signs(base)
    entry = ExampleCatalogEntry(
        chart=chart,
        deformations=lib,
        test_potentials=_hopf_potentials(),
        expected_flags={"integrable": None, "vaisman": False, "kaehler": False},
        frozen_constants={
            "lee_period": _HOPF_CONSTANTS["lee_period"],
            "total_mass": _HOPF_CONSTANTS["total_mass"],
        },
    )
    return entry


# -- flat torus ------------------------------------------------------------------

def kaehler_flat(n: int = 2) -> ExampleCatalogEntry:
    """Flat torus R^2n / Z^2n with omega = sum dx_{2i-1} ^ dx_{2i} and J = -omega."""
    dim = 2 * n
    coords = tuple(Coordinate(f"x{i + 1}", 0.0, 1.0, True) for i in range(dim))
    w = np.zeros((dim, dim))
    for i in range(n):
        w[2 * i, 2 * i + 1], w[2 * i + 1, 2 * i] = 1.0, -1.0
    omega = tuple(tuple(float(v) for v in row) for row in w)
    J = tuple(tuple(float(-v) for v in row) for row in w)
    gens = tuple(tuple(1.0 if j == i else 0.0 for j in range(dim)) for i in range(dim))
    chart = Chart("kaehler_flat", coords, omega, J, generators=gens,
                  potentials=(None,) * dim, lee_coefficients=(0.0,) * dim)
    rng = np.random.default_rng(11)
    defs = {}
    for k in range(3):
        m = rng.standard_normal((dim, dim))
        a = 0.5 * (m - np.linalg.solve(w, m.T @ w))      # (a - omega^-1 a^T omega) / 2
        defs[f"constant_{k}"] = DeformationField(
            tuple(tuple(float(v) for v in row) for row in a), f"constant_{k}")
    return ExampleCatalogEntry(
        chart=chart,
        deformations=defs,
        test_potentials={"constant": ex.const(1.0)},
        expected_flags={"integrable": True, "vaisman": True, "kaehler": True},
        frozen_constants={
            "scal": FrozenConstant(0.0, "flat metric"),
            "theta_norm_sq": FrozenConstant(0.0, "closed omega"),
            "mu": FrozenConstant(0.0, "flat metric, theta = 0"),
            "total_mass": FrozenConstant(1.0, "unit torus volume"),
        },
    )


CATALOG = {
    "hopf_standard": hopf_standard,
    "kaehler_flat": kaehler_flat,
    "hopf_deformed": hopf_deformed,
}


def list_examples() -> list:
    return sorted(CATALOG)


def get_example(name: str) -> ExampleCatalogEntry:
    try:
        return CATALOG[name]()
    except KeyError:
        raise ChartError(f"unknown example {name!r}; available: {list_examples()}") from None
