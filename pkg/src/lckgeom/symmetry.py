"""Torus actions and twisted-Hamiltonian vector fields.

A vector field X is twisted-Hamiltonian with potential h when
X -| omega = d_theta h.  Fields are produced potential-first: X = -omega^-1 d_theta h.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import jets
from .geometry import Chart, relative_residual
from .jets import Jet
from .pointwise import LocalGeometry
from .riemannian import (cov_vector, d_theta_form1, d_theta_scalar, delta_star, interior,
                         lie_bracket, lie_derivative, sym_g)

__all__ = [
    "GroupAction",
    "HamiltonianField",
    "symplectic_dual_V",
    "field_from_potential",
    "kappa_bracket",
    "fundamental_vector",
    "momentum_intermediates",
    "holomorphy_identities",
    "holvf2_residual",
]


@dataclass(frozen=True)
class HamiltonianField:
    X: Jet
    h: Jet
    residual: np.ndarray          # X -| omega against d_theta h


@dataclass(frozen=True)
class GroupAction:
    """Commuting generators k_i with potentials h_i and Lee coefficients c_i (V = sum c_i k_i)."""

    generators: tuple
    potentials: tuple = ()
    lee_coefficients: tuple | None = None

    @classmethod
    def from_chart(cls, chart: Chart) -> GroupAction:
        return cls(chart.generators, chart.potentials, chart.lee_coefficients)

    def fields(self, geo: LocalGeometry) -> list:
        return [geo.bundle.array(k) for k in self.generators]

    def check(self, geo: LocalGeometry) -> dict:
        """Per-point residuals of the action assumptions and invariance facts.

        Keys: ``preserves_omega``, ``lee_type``, ``twisted_hamiltonian`` (None
        when potentials are missing), ``commute``, ``preserves_theta``,
        ``theta_k``, ``special_conformal``, ``preserves_J``.
        """
        b, dim = geo.bundle, geo.dim
        ks = self.fields(geo)
        npts = len(b.points)
        zero = np.zeros(npts)
        out = {k: zero.copy() for k in ("preserves_omega", "commute", "preserves_theta",
                                        "theta_k", "special_conformal", "preserves_J")}
        for i, k in enumerate(ks):
            out["preserves_omega"] = np.maximum(out["preserves_omega"], relative_residual(
                lie_derivative(k, b.omega, ("d", "d"), dim), 0.0))
            out["preserves_theta"] = np.maximum(out["preserves_theta"], relative_residual(
                lie_derivative(k, geo.theta, ("d",), dim), 0.0))
            out["preserves_J"] = np.maximum(out["preserves_J"], relative_residual(
                lie_derivative(k, b.J, ("u", "d"), dim), 0.0))
            out["theta_k"] = np.maximum(out["theta_k"], relative_residual(
                jets.einsum("...a,...a->...", geo.theta, k), 0.0))
            out["special_conformal"] = np.maximum(out["special_conformal"], relative_residual(
                d_theta_form1(interior(k, b.omega), geo.theta, dim), 0.0))
            for k2 in ks[i + 1:]:
                out["commute"] = np.maximum(out["commute"],
                                            relative_residual(lie_bracket(k, k2, dim), 0.0))
        if self.lee_coefficients is not None:
            V = symplectic_dual_V(geo)
            comb = sum((k * c for k, c in zip(ks, self.lee_coefficients)), V * 0.0)
            out["lee_type"] = relative_residual(V, comb)
        else:
            out["lee_type"] = None
        if self.potentials and all(h is not None for h in self.potentials):
            tw = zero.copy()
            for k, h in zip(ks, self.potentials):
                tw = np.maximum(tw, relative_residual(
                    interior(k, b.omega), d_theta_scalar(b.scalar(h), geo.theta, dim)))
            out["twisted_hamiltonian"] = tw
        else:
            out["twisted_hamiltonian"] = None
        return out


def symplectic_dual_V(geo: LocalGeometry) -> Jet:
    """V with V -| omega = theta, i.e. V = -omega^-1 theta."""
    return -jets.einsum("...ab,...b->...a", geo.bundle.omega_inv, geo.theta)


def field_from_potential(geo: LocalGeometry, h) -> HamiltonianField:
    """X = -omega^-1 d_theta h, so that X -| omega = d_theta h and kappa(X) = h."""
    b = geo.bundle
    if isinstance(h, (ex.Expr, int, float)):
        h = b.scalar(h)
    dth = d_theta_scalar(h, geo.theta, geo.dim)
    X = -jets.einsum("...ab,...b->...a", b.omega_inv, dth)
    return HamiltonianField(X, h, relative_residual(interior(X, b.omega), dth))


def kappa_bracket(geo: LocalGeometry, X: Jet, Y: Jet) -> np.ndarray:
    """Residual of d_theta(-omega(X, Y)) = [X, Y] -| omega."""
    b = geo.bundle
    w = jets.einsum("...a,...b,...ab->...", X, Y, b.omega)
    lhs = d_theta_scalar(-w, geo.theta, geo.dim)
    rhs = interior(lie_bracket(X, Y, geo.dim), b.omega)
    return relative_residual(lhs, rhs)


def fundamental_vector(geo: LocalGeometry, X: Jet):
    """X* = -L_X J with its tangency residuals (anticommutes with J, omega-skew)."""
    b = geo.bundle
    xs = -lie_derivative(X, b.J, ("u", "d"), geo.dim)
    anti = relative_residual(b.J @ xs, -(xs @ b.J))
    sp = relative_residual(jets.einsum("...ca,...cb->...ab", xs, b.omega),
                           -jets.einsum("...ac,...cb->...ab", b.omega, xs))
    return xs, {"anticommutes": anti, "omega_skew": sp}


def holomorphy_identities(geo: LocalGeometry, X: Jet) -> dict:
    """L_X J = [J, nabla X], L_{JX} J = J o L_X J and L_X J anticommutes with J."""
    b, dim = geo.bundle, geo.dim
    J = b.J
    nX = cov_vector(geo.weyl.gamma, X, dim)
    LXJ = lie_derivative(X, J, ("u", "d"), dim)
    LJXJ = lie_derivative(jets.einsum("...ab,...b->...a", J, X), J, ("u", "d"), dim)
    return {
        "lie_commutator": relative_residual(LXJ, J @ nX - nX @ J),
        "lie_JX": relative_residual(LJXJ, J @ LXJ),
        "anticommutes": relative_residual(LXJ @ J, -(J @ LXJ)),
    }


def holvf2_residual(geo: LocalGeometry, X: Jet) -> np.ndarray:
    """d_theta(X -| omega) = omega(nabla X ., .) + omega(., nabla X .)."""
    b, dim = geo.bundle, geo.dim
    N = cov_vector(geo.weyl.gamma, X, dim)                    # [e, b] = nabla_b X^e
    lhs = d_theta_form1(interior(X, b.omega), geo.theta, dim)
    rhs = (jets.einsum("...eb,...ec->...bc", N, b.omega)
           + jets.einsum("...be,...ec->...bc", b.omega, N))
    return relative_residual(lhs, rhs)


@dataclass(frozen=True)
class MomentumResiduals:
    delta_star_dtheta_h: np.ndarray
    sym_nabla: np.ndarray
    extras: dict = field(default_factory=dict)


def momentum_intermediates(geo: LocalGeometry, hf: HamiltonianField) -> MomentumResiduals:
    """delta*(d_theta h) = J o nabla X + theta(JX)/2 Id and 2 Sym_g(nabla X) = -J o L_X J."""
    b, dim = geo.bundle, geo.dim
    J = b.J
    X = hf.X
    dth = d_theta_scalar(hf.h, geo.theta, dim)
    ds = delta_star(dth, geo.conn, b).value
    nX = cov_vector(geo.weyl.gamma, X, dim)
    tJX = jets.einsum("...a,...ab,...b->...", geo.theta, J, X)
    rhs2 = J @ nX + jets.einsum("...,cb->...cb", tJX, np.eye(dim)) * 0.5
    LXJ = lie_derivative(X, J, ("u", "d"), dim)
    lhs3 = sym_g(b, nX) * 2.0
    return MomentumResiduals(relative_residual(ds, rhs2), relative_residual(lhs3, -(J @ LXJ)))
