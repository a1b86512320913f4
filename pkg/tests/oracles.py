"""Independent symbolic references built with sympy.

The Hopf surface data is derived here from scratch by pulling the flat
structure of C^2 back through the chart map; nothing is imported from the
package except for numeric comparison in the tests.
"""

from functools import lru_cache

import sympy as sp

s, p1, eta, p2 = sp.symbols("s phi1 eta phi2", real=True)
COORDS = (s, p1, eta, p2)
L = sp.log(2)


@lru_cache(maxsize=None)
def hopf_structure():
    """omega, J, g (as sympy matrices in coordinates (s, phi1, eta, phi2)) and theta."""
    r = 2 ** s
    x1 = r * sp.cos(eta) * sp.cos(p1)
    y1 = r * sp.cos(eta) * sp.sin(p1)
    x2 = r * sp.sin(eta) * sp.cos(p2)
    y2 = r * sp.sin(eta) * sp.sin(p2)
    F = sp.Matrix([x1, y1, x2, y2])
    dF = F.jacobian(COORDS)
    # multiplication by i on C^2 in the real basis (x1, y1, x2, y2)
    J0 = sp.Matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    rho2 = sp.simplify(x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2)
    g = sp.simplify(dF.T * dF / rho2)
    J = sp.simplify(dF.inv() * J0 * dF)
    # omega(X, Y) = g(JX, Y)  <=>  omega = J^T g
    omega = sp.simplify(J.T * g)
    theta = sp.Matrix([sp.diff(-sp.log(rho2), c) for c in COORDS]).T
    return omega, J, g, sp.simplify(theta)


@lru_cache(maxsize=None)
def hopf_scalars():
    """scal, |theta|^2 and d*theta of the Hopf metric, computed symbolically."""
    omega, J, g, theta = hopf_structure()
    n = 4
    ginv = sp.simplify(g.inv())
    Gam = [[[sp.simplify(sum(ginv[c, d] * (sp.diff(g[b, d], COORDS[a]) + sp.diff(g[a, d], COORDS[b])
                                           - sp.diff(g[a, b], COORDS[d])) for d in range(n)) / 2)
             for b in range(n)] for a in range(n)] for c in range(n)]

    def R_std(d, c, a, b):
        # standard sign: R(d_a, d_b) d_c
        val = sp.diff(Gam[d][b][c], COORDS[a]) - sp.diff(Gam[d][a][c], COORDS[b])
        val += sum(Gam[d][a][e] * Gam[e][b][c] - Gam[d][b][e] * Gam[e][a][c] for e in range(n))
        return val

    ric = sp.Matrix(n, n, lambda b, c: sp.simplify(sum(R_std(a, c, a, b) for a in range(n))))
    scal = sp.simplify(sum(ginv[b, c] * ric[b, c] for b in range(n) for c in range(n)))
    th_up = ginv * theta.T
    norm2 = sp.simplify((theta * th_up)[0])
    sqrtg = sp.sqrt(sp.simplify(g.det()))
    div = sum(sp.diff(sqrtg * th_up[a], COORDS[a]) for a in range(n)) / sqrtg
    return {"scal": sp.simplify(scal), "theta_norm_sq": norm2, "dstar_theta": sp.simplify(-div),
            "sqrt_det_g": sp.simplify(sqrtg)}


def hopf_potential_check():
    """k_i -| omega - d_theta h_i for h_i = -|z_i|^2 / (2 |z|^2), k_i = d/dphi_i."""
    omega, J, g, theta = hopf_structure()
    h = [-sp.cos(eta) ** 2 / 2, -sp.sin(eta) ** 2 / 2]
    out = []
    for i, idx in enumerate((1, 3)):
        k = sp.zeros(4, 1)
        k[idx] = 1
        lhs = (k.T * omega)                                   # (k -| omega)_b = k^a omega_ab
        dh = sp.Matrix([[sp.diff(h[i], c) for c in COORDS]])
        rhs = dh - h[i] * theta
        out.append(sp.simplify(lhs - rhs))
    return out


def hopf_lee_period():
    """Integral of theta along the s-loop (phi, eta fixed)."""
    _, _, _, theta = hopf_structure()
    return sp.simplify(sp.integrate(theta[0], (s, 0, 1)))


def hopf_total_mass():
    """Integral of omega^2 / 2 = Pf(omega) over the chart box."""
    omega = hopf_structure()[0]
    pf = omega[0, 1] * omega[2, 3] - omega[0, 2] * omega[1, 3] + omega[0, 3] * omega[1, 2]
    pf = sp.simplify(pf)
    return pf, sp.simplify(sp.integrate(pf, (s, 0, 1), (p1, 0, 2 * sp.pi), (eta, 0, sp.pi / 2),
                                        (p2, 0, 2 * sp.pi)))


def conformal_christoffel(f, dim=4):
    """Christoffel symbols of exp(f) * delta in coordinates x0..x{dim-1}."""
    xs = sp.symbols(f"x0:{dim}", real=True)
    fx = f(*xs)
    df = [sp.diff(fx, x) for x in xs]
    G = [[[sp.Rational(1, 2) * ((1 if c == a else 0) * df[b] + (1 if c == b else 0) * df[a]
                                - (1 if a == b else 0) * df[c])
           for b in range(dim)] for a in range(dim)] for c in range(dim)]
    return xs, G


@lru_cache(maxsize=None)
def hopf_chern_scalars():
    """Chern scalar curvatures of the Hopf structure from an explicit unitary frame.

    The Chern connection is built from its definition D - A/2 with
    A(X, Y) = (d omega(JX, Y, .))^sharp; curvature uses the convention
    Rm(X, Y) = nabla_[X,Y] - [nabla_X, nabla_Y].
    """
    omega, J, g, theta = hopf_structure()
    n = 4
    X = COORDS
    ginv = sp.simplify(g.inv())
    Gam = [[[sum(ginv[c, d] * (sp.diff(g[b, d], X[a]) + sp.diff(g[a, d], X[b])
                                - sp.diff(g[a, b], X[d])) for d in range(n)) / 2
             for b in range(n)] for a in range(n)] for c in range(n)]
    dw = [[[sp.diff(omega[b, c], X[a]) + sp.diff(omega[c, a], X[b]) + sp.diff(omega[a, b], X[c])
            for c in range(n)] for b in range(n)] for a in range(n)]
    A = [[[sp.simplify(sum(ginv[c, d] * sum(J[e, a] * dw[e][b][d] for e in range(n))
                           for d in range(n)))
           for b in range(n)] for a in range(n)] for c in range(n)]
    Ch = [[[sp.simplify(Gam[c][a][b] - A[c][a][b] / 2) for b in range(n)] for a in range(n)]
          for c in range(n)]

    def Rm(d, c, a, b):
        val = sp.diff(Ch[d][b][c], X[a]) - sp.diff(Ch[d][a][c], X[b])
        val += sum(Ch[d][a][e] * Ch[e][b][c] - Ch[d][b][e] * Ch[e][a][c] for e in range(n))
        return -val

    R = [[[[sp.simplify(Rm(d, c, a, b)) for b in range(n)] for a in range(n)] for c in range(n)]
         for d in range(n)]

    def curv(Xv, Yv, Zv):
        return sp.Matrix([sum(R[d][c][a][b] * Zv[c] * Xv[a] * Yv[b]
                              for a in range(n) for b in range(n) for c in range(n))
                          for d in range(n)])

    def gg(u, v):
        return (u.T * g * v)[0]

    e1 = sp.Matrix([1 / L, 0, 0, 0])
    e2 = sp.Matrix([0, 0, 1, 0])
    frame = [e1, e2]
    full = [e1, J * e1, e2, J * e2]
    scal_ch = 2 * sum(gg(curv(ei, J * ei, ej), J * ej) for ei in frame for ej in frame)
    fake = sum(gg(curv(ea, eb, ea), eb) for ea in full for eb in full)
    return {"scal_ch": sp.simplify(sp.trigsimp(scal_ch)), "scal_tilde_ch": sp.simplify(sp.trigsimp(fake))}
