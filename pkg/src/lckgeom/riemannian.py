"""Levi-Civita connection, curvature and first-order operators in coordinates.

Connection coefficients are stored as ``G[..., c, a, b]`` with
nabla_{d_a} d_b = G^c_ab d_c.  Curvature tensors are stored as
``R[..., d, c, a, b]`` = (Rm(d_a, d_b) d_c)^d with the sign

    Rm(X, Y) = nabla_[X,Y] - [nabla_X, nabla_Y]

(the negative of the most common convention).  With this sign
Ric(X, Y) = tr(Z -> Rm(X, Z) Y) is the usual Ricci tensor and round spheres
have positive scalar curvature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .geometry import FieldBundle, exterior_d1, wedge1_1
from .jets import Jet

__all__ = [
    "ConnectionCoefficients",
    "CurvatureBundle",
    "DeltaStar",
    "levi_civita",
    "curvature",
    "curvature_tensor",
    "ricci_from_christoffel",
    "cov_vector",
    "cov_covector",
    "cov_endo",
    "cov_two_tensor",
    "divergence_delta",
    "delta_star",
    "differential_ops",
    "codifferential",
    "lie_derivative",
    "lie_bracket",
    "interior",
    "sharp",
    "flat",
    "endo_inner",
    "sym_g",
    "max_abs",
]


def max_abs(x) -> np.ndarray:
    """Per-point max |component| of a jet value (batch axis first)."""
    v = x.value if isinstance(x, Jet) else np.asarray(x)
    if v.ndim <= 1:
        return np.abs(v)
    return np.abs(v).reshape(v.shape[0], -1).max(axis=1)


@dataclass(frozen=True)
class ConnectionCoefficients:
    gamma: Jet
    metricity_residual: np.ndarray
    symmetry_residual: np.ndarray


@dataclass(frozen=True)
class CurvatureBundle:
    rm: Jet
    ric: Jet
    scal: Jet
    bianchi_residual: np.ndarray


def levi_civita(bundle: FieldBundle) -> ConnectionCoefficients:
    """Christoffel symbols from the Koszul formula."""
    if "lc" in bundle._cache:
        return bundle._cache["lc"]
    g, ginv = bundle.g, bundle.ginv
    dg = g.grad(bundle.dim)                        # [..., b, d, a] = d_a g_bd
    t = jets.einsum("...bda->...abd", dg)
    low = t + jets.einsum("...abd->...bad", t) - jets.einsum("...dab->...abd", t)
    gamma = jets.einsum("...cd,...abd->...cab", ginv, low) * 0.5
    conn = ConnectionCoefficients(
        gamma,
        max_abs(cov_two_tensor(gamma, g, bundle.dim)),
        max_abs(gamma.value - np.swapaxes(gamma.value, -1, -2)),
    )
    bundle._cache["lc"] = conn
    return conn


def curvature_tensor(gamma: Jet, dim: int) -> Jet:
    """R[d, c, a, b] = (Rm(d_a, d_b) d_c)^d for an arbitrary linear connection."""
    dG = gamma.grad(dim)                                      # [..., d, b, c, a]
    t1 = jets.einsum("...dbca->...dcab", dG)                  # d_a G^d_bc
    t2 = jets.einsum("...dacb->...dcab", dG)                  # d_b G^d_ac
    p = jets.einsum("...dae,...ebc->...dcab", gamma, gamma)   # G^d_ae G^e_bc
    return -(t1 - t2 + p - p.swapaxes(-1, -2))


def ricci_from_christoffel(gamma: Jet, dim: int) -> Jet:
    """Ric_ab = sum_d R[d, b, a, d] without forming the full curvature tensor."""
    dG = gamma.grad(dim)                                      # [..., d, b, c, a]
    t1 = jets.einsum("...ddba->...ab", dG)                    # d_a G^d_db
    t2 = jets.einsum("...dabd->...ab", dG)                    # d_d G^d_ab
    p1 = jets.einsum("...dae,...edb->...ab", gamma, gamma)
    p2 = jets.einsum("...dde,...eab->...ab", gamma, gamma)
    return -(t1 - t2 + p1 - p2)


def curvature(conn: ConnectionCoefficients, bundle: FieldBundle) -> CurvatureBundle:
    if "curv" in bundle._cache:
        return bundle._cache["curv"]
    rm = curvature_tensor(conn.gamma, bundle.dim)
    ric = jets.einsum("...dbad->...ab", rm)
    scal = jets.einsum("...ab,...ab->...", bundle.ginv, ric)
    v = rm.value
    bianchi = v + np.einsum("...dabc->...dcab", v) + np.einsum("...dbca->...dcab", v)
    out = CurvatureBundle(rm, ric, scal, max_abs(bianchi))
    bundle._cache["curv"] = out
    return out


# -- covariant derivatives ---------------------------------------------------

def cov_vector(gamma: Jet, X: Jet, dim: int) -> Jet:
    """(nabla X)[c, a] = nabla_a X^c, i.e. the endomorphism Y -> nabla_Y X."""
    return X.grad(dim) + jets.einsum("...cae,...e->...ca", gamma, X)


def cov_covector(gamma: Jet, z: Jet, dim: int) -> Jet:
    """(nabla z)[a, b] = (nabla_a z)_b."""
    dz = z.grad(dim)                                          # [..., b, a]
    return dz.mT - jets.einsum("...eab,...e->...ab", gamma, z)


def cov_endo(gamma: Jet, A: Jet, dim: int) -> Jet:
    """(nabla A)[a, c, b] = (nabla_a A)^c_b."""
    dA = jets.einsum("...cba->...acb", A.grad(dim))
    return (dA + jets.einsum("...cae,...eb->...acb", gamma, A)
            - jets.einsum("...eab,...ce->...acb", gamma, A))


def cov_two_tensor(gamma: Jet, T: Jet, dim: int) -> Jet:
    """(nabla T)[a, b, c] = (nabla_a T)_bc for a (0,2)-tensor."""
    dT = jets.einsum("...bca->...abc", T.grad(dim))
    return (dT - jets.einsum("...eab,...ec->...abc", gamma, T)
            - jets.einsum("...eac,...be->...abc", gamma, T))


def cov_vector_valued_two_form(gamma: Jet, T: Jet, dim: int) -> Jet:
    """(nabla T)[z, c, a, b] = (nabla_z T)^c_ab for a (1,2)-tensor T[c, a, b]."""
    dT = jets.einsum("...cabz->...zcab", T.grad(dim))
    return (dT + jets.einsum("...cze,...eab->...zcab", gamma, T)
            - jets.einsum("...eza,...ceb->...zcab", gamma, T)
            - jets.einsum("...ezb,...cae->...zcab", gamma, T))


# -- algebra helpers ---------------------------------------------------------

def sharp(bundle: FieldBundle, z: Jet) -> Jet:
    return jets.einsum("...ab,...b->...a", bundle.ginv, z)


def flat(bundle: FieldBundle, X: Jet) -> Jet:
    return jets.einsum("...ab,...b->...a", bundle.g, X)


def interior(X: Jet, w: Jet) -> Jet:
    """(X -| w)_b = X^a w_ab."""
    return jets.einsum("...a,...ab->...b", X, w)


def endo_inner(bundle: FieldBundle, A: Jet, B: Jet) -> Jet:
    """<A, B> = g_ab g^cd A^a_c B^b_d."""
    return jets.einsum("...ab,...cd,...ac,...bd->...", bundle.g, bundle.ginv, A, B)


def adjoint(bundle: FieldBundle, A: Jet) -> Jet:
    """g-adjoint g^{-1} A^T g."""
    return jets.einsum("...ab,...cb,...cd->...ad", bundle.ginv, A, bundle.g)


def sym_g(bundle: FieldBundle, A: Jet) -> Jet:
    return (A + adjoint(bundle, A)) * 0.5


# -- divergence and delta* -----------------------------------------------------

def divergence_delta(u: Jet, conn: ConnectionCoefficients, bundle: FieldBundle,
                     check: bool = True, tol: float = 1e-8) -> Jet:
    """(delta u)_b = -(D_a u)^a_b for a g-symmetric endomorphism field u."""
    if check:
        asym = max_abs(u.value - adjoint(bundle, u).value)
        scale = np.maximum(max_abs(u.value), 1.0)
        if np.any(asym / scale > tol):
            raise ValueError(f"divergence_delta needs a g-symmetric input "
                             f"(asymmetry {float((asym / scale).max()):.2e})")
    Du = cov_endo(conn.gamma, u, bundle.dim)
    return -jets.einsum("...aab->...b", Du)


@dataclass(frozen=True)
class DeltaStar:
    value: Jet                 # Levi-Civita form D(z#) - (. -| dz)#/2
    weyl_form: Jet | None      # nabla(z#) - (. -| d_theta z)#/2 + g(z, theta)/2 Id
    residual: np.ndarray | None


def delta_star(zeta: Jet, conn: ConnectionCoefficients, bundle: FieldBundle,
               theta: Jet | None = None, weyl_gamma: Jet | None = None) -> DeltaStar:
    """Symmetrized covariant derivative of a 1-form, as an endomorphism field.

    With ``theta`` and the Weyl connection coefficients the twisted form is
    computed as well and compared with the Levi-Civita form.
    """
    dim = bundle.dim
    zs = sharp(bundle, zeta)
    dz = exterior_d1(zeta, dim)
    lc = cov_vector(conn.gamma, zs, dim) - jets.einsum("...cd,...bd->...cb", bundle.ginv, dz) * 0.5
    if theta is None or weyl_gamma is None:
        return DeltaStar(lc, None, None)
    dtz = dz - wedge1_1(theta, zeta)
    gz = jets.einsum("...ab,...a,...b->...", bundle.ginv, zeta, theta)
    wf = (cov_vector(weyl_gamma, zs, dim)
          - jets.einsum("...cd,...bd->...cb", bundle.ginv, dtz) * 0.5
          + jets.einsum("...,cb->...cb", gz, np.eye(dim)) * 0.5)
    return DeltaStar(lc, wf, _rel(lc, wf))


def _rel(a: Jet, b: Jet) -> np.ndarray:
    va, vb = a.value, b.value
    return max_abs(va - vb) / np.maximum(np.maximum(max_abs(va), max_abs(vb)), 1.0)


# -- exterior differentials ----------------------------------------------------

def codifferential(zeta: Jet, conn: ConnectionCoefficients, bundle: FieldBundle) -> Jet:
    """d* z = -tr(D(z#)) = -g^ab (D_a z)_b."""
    return -jets.einsum("...ab,...ab->...", bundle.ginv, cov_covector(conn.gamma, zeta, bundle.dim))


def codifferential_2form(w: Jet, conn: ConnectionCoefficients, bundle: FieldBundle) -> Jet:
    """(d* w)_c = -g^ab (D_a w)_bc."""
    return -jets.einsum("...ab,...abc->...c", bundle.ginv,
                        cov_two_tensor(conn.gamma, w, bundle.dim))


def differential_ops(bundle: FieldBundle, theta: Jet, f: Jet | None = None,
                     zeta: Jet | None = None,
                     conn: ConnectionCoefficients | None = None) -> dict:
    """df, d_theta f for a scalar and dz, d_theta z, d* z for a 1-form."""
    dim = bundle.dim
    out = {}
    if f is not None:
        df = f.grad(dim)
        out["df"] = df
        out["d_theta_f"] = df - jets.einsum("...,...a->...a", f, theta)
    if zeta is not None:
        dz = exterior_d1(zeta, dim)
        out["dzeta"] = dz
        out["d_theta_zeta"] = dz - wedge1_1(theta, zeta)
        if conn is not None:
            out["dstar_zeta"] = codifferential(zeta, conn, bundle)
    return out


def d_theta_scalar(f: Jet, theta: Jet, dim: int) -> Jet:
    return f.grad(dim) - jets.einsum("...,...a->...a", f, theta)


def d_theta_form1(z: Jet, theta: Jet, dim: int) -> Jet:
    return exterior_d1(z, dim) - wedge1_1(theta, z)


# -- Lie derivatives -------------------------------------------------------------

_IDX = "pqrs"


def lie_derivative(X: Jet, T: Jet, signature, dim: int) -> Jet:
    """Coordinate Lie derivative of a tensor with the given up/down signature."""
    sig = tuple(signature)
    rank = len(sig)
    if rank > len(_IDX):
        raise ValueError("tensor rank too large")
    idx = _IDX[:rank]
    dT = T.grad(dim)
    out = jets.einsum(f"...c,...{idx}c->...{idx}", X, dT)
    if rank == 0:
        return out
    dX = X.grad(dim)                                          # [..., c, a] = d_a X^c
    for i, s in enumerate(sig):
        l = idx[i]
        src = idx[:i] + "c" + idx[i + 1:]
        if s == "d":
            out = out + jets.einsum(f"...{src},...c{l}->...{idx}", T, dX)
        else:
            out = out - jets.einsum(f"...{src},...{l}c->...{idx}", T, dX)
    return out


def lie_bracket(X: Jet, Y: Jet, dim: int) -> Jet:
    """[X, Y]^a = X^c d_c Y^a - Y^c d_c X^a."""
    return (jets.einsum("...c,...ac->...a", X, Y.grad(dim))
            - jets.einsum("...c,...ac->...a", Y, X.grad(dim)))
