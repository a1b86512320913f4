"""Weyl and Chern connections of an lcK structure, their curvatures and scalar traces.

Every identity is returned as a per-point relative residual (see
:func:`geometry.relative_residual`); callers decide which ones apply under
the hypotheses at hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .geometry import FieldBundle, exterior_d2, relative_residual
from .jets import Jet
from .riemannian import (ConnectionCoefficients, codifferential, codifferential_2form,
                         cov_covector, cov_endo, cov_two_tensor, cov_vector,
                         cov_vector_valued_two_form, curvature, curvature_tensor, delta_star,
                         sharp)

__all__ = [
    "WeylData",
    "ChernData",
    "WeylCurvature",
    "MuValues",
    "weyl",
    "chern",
    "weyl_curvature",
    "mu",
    "theta_J",
    "scalar_relations",
    "dstar_omega_residual",
    "lee_vector_derivatives",
]


def _eye(dim):
    return np.eye(dim)


def theta_J(theta: Jet, J: Jet) -> Jet:
    """(theta o J)_a = theta_e J^e_a, so J acting on 1-forms gives J theta = -theta o J."""
    return jets.einsum("...e,...ea->...a", theta, J)


def _theta_norm_sq(bundle, theta):
    return jets.einsum("...ab,...a,...b->...", bundle.ginv, theta, theta)


@dataclass(frozen=True)
class WeylData:
    A: Jet
    gamma: Jet
    residuals: dict = field(default_factory=dict)


def weyl(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients) -> WeylData:
    """nabla = D - A/2 with A(X, Y) = theta(X)Y + theta(Y)X - g(X, Y) theta#."""
    dim = bundle.dim
    ts = sharp(bundle, theta)
    I = _eye(dim)
    A = (jets.einsum("...a,cb->...cab", theta, I) + jets.einsum("...b,ca->...cab", theta, I)
         - jets.einsum("...ab,...c->...cab", bundle.g, ts))
    gamma = conn.gamma - A * 0.5
    torsion = gamma - gamma.swapaxes(-1, -2)
    res = {
        "torsion": relative_residual(torsion, 0.0),
        "nabla_omega": relative_residual(cov_two_tensor(gamma, bundle.omega, dim),
                                         jets.einsum("...a,...bc->...abc", theta, bundle.omega)),
        "nabla_J": relative_residual(cov_endo(gamma, bundle.J, dim), 0.0),
        "nabla_g": relative_residual(cov_two_tensor(gamma, bundle.g, dim),
                                     jets.einsum("...a,...bc->...abc", theta, bundle.g)),
    }
    return WeylData(A, gamma, res)


@dataclass(frozen=True)
class ChernData:
    A: Jet                 # from the definition (d omega(JX, Y, .))#
    A_closed: Jet          # theta(JX)JY + theta(Y)X - g(X, Y) theta#
    gamma: Jet
    torsion: Jet
    torsion_closed: Jet
    curvature: Jet
    scal_tilde: Jet
    scal: Jet
    residuals: dict = field(default_factory=dict)


def chern(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients,
          with_curvature: bool = True) -> ChernData:
    dim = bundle.dim
    g, ginv, J = bundle.g, bundle.ginv, bundle.J
    I = _eye(dim)
    ts = sharp(bundle, theta)
    tJ = theta_J(theta, J)
    dw = exterior_d2(bundle.omega, dim)
    A_def = jets.einsum("...cd,...ea,...ebd->...cab", ginv, J, dw)
    A_cl = (jets.einsum("...a,...cb->...cab", tJ, J) + jets.einsum("...b,ca->...cab", theta, I)
            - jets.einsum("...ab,...c->...cab", g, ts))
    gamma = conn.gamma - A_def * 0.5
    T = gamma - gamma.swapaxes(-1, -2)
    T_cl = (jets.einsum("...a,cb->...cab", theta, I) - jets.einsum("...b,ca->...cab", theta, I)
            - jets.einsum("...a,...cb->...cab", tJ, J)
            + jets.einsum("...b,...ca->...cab", tJ, J)) * 0.5
    JT = jets.einsum("...ce,...eab->...cab", J, T)
    T_Jx = jets.einsum("...ceb,...ea->...cab", T, J)
    T_Jy = jets.einsum("...cae,...eb->...cab", T, J)
    # D J from the Levi-Civita connection: (D_b J)^c_a
    DJ = cov_endo(conn.gamma, J, dim)
    gJ = jets.einsum("...ea,...eb->...ab", J, g)                # g(J d_a, d_b)
    Jts = jets.einsum("...ce,...e->...c", J, ts)
    DJ_rhs = (jets.einsum("...a,cb->...bca", tJ, I) - jets.einsum("...a,...cb->...bca", theta, J)
              - jets.einsum("...ab,...c->...bca", gJ, ts)
              + jets.einsum("...ab,...c->...bca", g, Jts)) * 0.5
    res = {
        "ACh_consistency": relative_residual(A_def, A_cl),
        "nablaCh_g": relative_residual(cov_two_tensor(gamma, g, dim), 0.0),
        "nablaCh_J": relative_residual(cov_endo(gamma, J, dim), 0.0),
        "TCh_J_left": relative_residual(JT, T_Jx),
        "TCh_J_right": relative_residual(JT, T_Jy),
        "TCh_closed": relative_residual(T, T_cl),
        "DJ": relative_residual(DJ, DJ_rhs),
    }
    nT = cov_vector_valued_two_form(gamma, T, dim)              # [z, c, x, y]
    if nT.order >= 0:
        lhs = jets.einsum("...cw,...zcxy->...zxyw", g, nT) * 2.0
        res["nablaCh_TCh"] = relative_residual(lhs, _nabla_T_rhs(bundle, theta, conn))
    if not with_curvature:
        return ChernData(A_def, A_cl, gamma, T, T_cl, None, None, None, res)
    R = curvature_tensor(gamma, dim)
    scal_tilde = jets.einsum("...ac,...bcab->...", ginv, R)
    scal = jets.einsum("...ab,...cb,...pq,...rq,...rs,...spac->...",
                       ginv, J, ginv, J, g, R) * 0.5
    return ChernData(A_def, A_cl, gamma, T, T_cl, R, scal_tilde, scal, res)


def _nabla_T_rhs(bundle, theta, conn):
    """2 g((nabla^Ch_Z T^Ch)(X, Y), W) from theta, indices [z, x, y, w]."""
    dim = bundle.dim
    g, J = bundle.g, bundle.J
    Dt = cov_covector(conn.gamma, theta, dim)                   # [z, y]
    tJ = theta_J(theta, J)
    gJ = jets.einsum("...ea,...eb->...ab", J, g)                # g(J d_a, d_b)
    DtJ = jets.einsum("...ze,...ey->...zy", Dt, J)              # (D_Z theta)(JY)
    nrm = jets.einsum("...ab,...a,...b->...", bundle.ginv, theta, theta)
    tt = jets.einsum("...y,...z->...yz", theta, theta)
    jj = jets.einsum("...y,...z->...yz", tJ, tJ)
    jt = jets.einsum("...y,...z->...yz", tJ, theta)             # theta(JY) theta(Z)
    tj = jets.einsum("...y,...z->...yz", theta, tJ)             # theta(Y) theta(JZ)
    ng = jets.einsum("...,...yz->...yz", nrm, g)
    ngJ = jets.einsum("...,...yz->...yz", nrm, gJ)
    s1 = (tt + jj - ng) * 0.5                                   # [y, z]
    s3 = (jt - tj - ngJ) * 0.5                                  # [y, z]
    out = (-jets.einsum("...zy,...xw->...zxyw", Dt, g)
           - jets.einsum("...yz,...xw->...zxyw", s1, g)
           + jets.einsum("...zx,...yw->...zxyw", Dt, g)
           + jets.einsum("...xz,...yw->...zxyw", s1, g)
           + jets.einsum("...zy,...xw->...zxyw", DtJ, gJ)
           + jets.einsum("...yz,...xw->...zxyw", s3, gJ)
           - jets.einsum("...zx,...yw->...zxyw", DtJ, gJ)
           - jets.einsum("...xz,...yw->...zxyw", s3, gJ))
    return out


@dataclass(frozen=True)
class WeylCurvature:
    omega: Jet       # Omega^nabla as R[d, c, a, b]
    ric: Jet
    residuals: dict = field(default_factory=dict)


def weyl_curvature(bundle: FieldBundle, weyl_data: WeylData, theta: Jet,
                   conn: ConnectionCoefficients) -> WeylCurvature:
    dim, n = bundle.dim, bundle.n
    g, ginv, J = bundle.g, bundle.ginv, bundle.J
    R = curvature_tensor(weyl_data.gamma, dim)
    ric = jets.einsum("...dbad->...ab", R)
    v = R.value
    bianchi = v + np.einsum("...dabc->...dcab", v) + np.einsum("...dbca->...dcab", v)
    low = jets.einsum("...wd,...dcab->...wcab", g, R)
    res = {
        "bianchi": relative_residual(bianchi, 0.0),
        "skew": relative_residual(low, -low.swapaxes(-3, -4)),
        "J_commute": relative_residual(jets.einsum("...dcab,...ce->...deab", R, J),
                                       jets.einsum("...dc,...ceab->...deab", J, R)),
        "type_11": relative_residual(jets.einsum("...pa,...qb,...dcpq->...dcab", J, J, R), R),
        "ric_symmetric": relative_residual(ric, ric.mT),
        "ric_J_invariant": relative_residual(jets.einsum("...pa,...qb,...pq->...ab", J, J, ric),
                                             ric),
    }
    # Ric^nabla# - Ric# against the theta expression
    curv = curvature(conn, bundle)
    diff = jets.einsum("...cb,...ab->...ca", ginv, ric - curv.ric)
    ts = sharp(bundle, theta)
    dstar = codifferential(theta, conn, bundle)
    nrm = _theta_norm_sq(bundle, theta)
    I = _eye(dim)
    rhs = (delta_star(theta, conn, bundle).value * (n - 1)
           + jets.einsum("...c,...b->...cb", ts, theta) * ((n - 1) / 2)
           - jets.einsum("...,cb->...cb", dstar, I) * 0.5
           - jets.einsum("...,cb->...cb", nrm, I) * ((n - 1) / 2))
    res["ric_ric"] = relative_residual(diff, rhs)
    return WeylCurvature(R, ric, res)


@dataclass(frozen=True)
class MuValues:
    mu_extended: Jet
    mu_chern: Jet | None
    residuals: dict = field(default_factory=dict)


def scalar_relations(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients,
                     ch: ChernData) -> dict:
    """Residuals of the three relations between scal, scal~^Ch and scal^Ch."""
    n = bundle.n
    scal = curvature(conn, bundle).scal
    dstar = codifferential(theta, conn, bundle)
    nrm = _theta_norm_sq(bundle, theta)
    return {
        "fake_scal": relative_residual(
            ch.scal_tilde, scal - dstar * (2 * (n - 1)) - nrm * ((n - 1.5) * (n - 1))),
        "fake_scalCh": relative_residual(
            ch.scal_tilde, ch.scal - dstar * (n - 1) - nrm * ((n - 1) ** 2)),
        "scalCh_scal": relative_residual(
            scal - ch.scal, dstar * (n - 1) - nrm * ((n - 1) / 2)),
    }


def mu(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients,
       ch: ChernData | None = None, scal: Jet | None = None) -> MuValues:
    """mu_extended = scal + d*theta + (n-1)/2 |theta|^2; mu_chern = scal^Ch + n d*theta."""
    n = bundle.n
    if scal is None:
        scal = curvature(conn, bundle).scal
    dstar = codifferential(theta, conn, bundle)
    ext = scal + dstar + _theta_norm_sq(bundle, theta) * ((n - 1) / 2)
    if ch is None:
        return MuValues(ext, None, {})
    mc = ch.scal + dstar * n
    return MuValues(ext, mc, {"mu_agree": relative_residual(mc, ext)})


def dstar_omega_residual(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients):
    """d* omega against -(n-1) J theta, with J theta = -theta o J."""
    lhs = codifferential_2form(bundle.omega, conn, bundle)
    rhs = theta_J(theta, bundle.J) * (bundle.n - 1)
    return relative_residual(lhs, rhs)


def lee_vector_derivatives(bundle: FieldBundle, theta: Jet, conn: ConnectionCoefficients,
                           weyl_data: WeylData) -> dict:
    """D(theta#), nabla(theta#) and (D theta)# as endomorphism jets."""
    dim = bundle.dim
    ts = sharp(bundle, theta)
    return {
        "D_theta_sharp": cov_vector(conn.gamma, ts, dim),
        "nabla_theta_sharp": cov_vector(weyl_data.gamma, ts, dim),
        "D_theta_flat_sharp": jets.einsum("...cb,...ab->...ca", bundle.ginv,
                                          cov_covector(conn.gamma, theta, dim)),
    }
