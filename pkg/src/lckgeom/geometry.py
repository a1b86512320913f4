"""Charts, jet evaluation of the structure fields, and basic validity checks.

Index layout used throughout the package (a leading batch axis of sample
points is always present):

* vector ``X[..., a]`` = X^a, covector ``z[..., a]`` = z_a
* endomorphism ``A[..., a, b]`` = A^a_b, so ``A @ X`` applies A to X
* two-forms and metrics ``w[..., a, b]`` = w_ab

The metric is g(X, Y) = omega(X, JY), i.e. ``g = omega @ J`` as matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from . import expr as ex
from . import jets
from .jets import Jet

__all__ = [
    "ChartError",
    "CompatibilityError",
    "Coordinate",
    "Deformation",
    "Chart",
    "TensorValue",
    "FieldBundle",
    "LeeForm",
    "eval_fields",
    "lee_form",
    "musical",
    "nijenhuis",
    "volume_density",
    "pfaffian",
    "wedge1_2",
    "exterior_d0",
    "exterior_d1",
    "exterior_d2",
    "load_chart",
    "dump_chart",
    "chart_from_dict",
    "chart_to_dict",
    "relative_residual",
    "nijenhuis_norm",
    "wedge1_1",
]


class ChartError(ValueError):
    """Malformed chart definition or evaluation outside its domain."""


class CompatibilityError(ChartError):
    """omega and J fail the compatibility conditions; carries the residual."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class Coordinate:
    name: str
    lower: float
    upper: float
    periodic: bool = False

    @property
    def length(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class Deformation:
    """J = expm(-p a) J0 expm(p a) with ``p`` a chart parameter."""

    a: tuple
    parameter: str


def _matrix(rows, n, what):
    rows = tuple(tuple(ex.as_expr(v) for v in row) for row in rows)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ChartError(f"{what} must be a {n}x{n} array of expressions")
    return rows


@dataclass(frozen=True)
class Chart:
    """Coordinate box with expression-tree definitions of omega, J and symmetry data."""

    name: str
    coordinates: tuple
    omega: tuple
    J: tuple
    parameters: dict = field(default_factory=dict)
    generators: tuple = ()
    potentials: tuple = ()
    lee_coefficients: tuple | None = None
    deformation: Deformation | None = None

    def __post_init__(self):
        n = len(self.coordinates)
        if n < 4 or n % 2:
            raise ChartError("chart dimension must be an even integer >= 4")
        names = [c.name for c in self.coordinates]
        if len(set(names)) != n:
            raise ChartError("coordinate names must be distinct")
        for c in self.coordinates:
            if not c.upper > c.lower:
                raise ChartError(f"empty interval for coordinate {c.name!r}")
        object.__setattr__(self, "omega", _matrix(self.omega, n, "omega"))
        object.__setattr__(self, "J", _matrix(self.J, n, "J"))
        gens = tuple(tuple(ex.as_expr(v) for v in k) for k in self.generators)
        if any(len(k) != n for k in gens):
            raise ChartError("generators must have one component per coordinate")
        object.__setattr__(self, "generators", gens)
        pots = tuple(None if h is None else ex.as_expr(h) for h in self.potentials)
        if pots and len(pots) != len(gens):
            raise ChartError("potentials must pair with generators")
        object.__setattr__(self, "potentials", pots)
        if self.lee_coefficients is not None:
            lc = tuple(float(c) for c in self.lee_coefficients)
            if len(lc) != len(gens):
                raise ChartError("lee_coefficients must pair with generators")
            object.__setattr__(self, "lee_coefficients", lc)
        object.__setattr__(self, "parameters", {k: float(v) for k, v in self.parameters.items()})
        clash = set(self.parameters) & set(names)
        if clash:
            raise ChartError(f"parameter names clash with coordinates: {sorted(clash)}")
        if self.deformation is not None:
            d = self.deformation
            if d.parameter not in self.parameters:
                raise ChartError(f"deformation parameter {d.parameter!r} is not a chart parameter")
            object.__setattr__(self, "deformation", Deformation(_matrix(d.a, n, "deformation a"),
                                                                d.parameter))
        known = set(names) | set(self.parameters)
        for e in self._all_exprs():
            unknown = ex.free_names(e) - known
            if unknown:
                raise ChartError(f"expression uses unknown names {sorted(unknown)}")

    def _all_exprs(self):
        for row in self.omega + self.J:
            yield from row
        for k in self.generators:
            yield from k
        for h in self.potentials:
            if h is not None:
                yield h
        if self.deformation is not None:
            for row in self.deformation.a:
                yield from row

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @property
    def n(self) -> int:
        return self.dim // 2

    @property
    def coordinate_names(self) -> list:
        return [c.name for c in self.coordinates]

    @property
    def periodic(self) -> np.ndarray:
        return np.array([c.periodic for c in self.coordinates])

    def with_parameters(self, **values) -> Chart:
        unknown = set(values) - set(self.parameters)
        if unknown:
            raise ChartError(f"unknown parameters {sorted(unknown)}")
        params = dict(self.parameters)
        params.update({k: float(v) for k, v in values.items()})
        return replace(self, parameters=params)

    def wrap(self, x) -> np.ndarray:
        """Wrap periodic coordinates into the box and reject points outside it."""
        x = np.array(x, dtype=float, ndmin=2)
        if x.shape[-1] != self.dim:
            raise ChartError(f"points need {self.dim} coordinates")
        for i, c in enumerate(self.coordinates):
            if c.periodic:
                x[..., i] = c.lower + np.mod(x[..., i] - c.lower, c.length)
            elif np.any(x[..., i] <= c.lower) or np.any(x[..., i] >= c.upper):
                raise ChartError(f"coordinate {c.name!r} outside the open interval "
                                 f"({c.lower}, {c.upper})")
        return x

    def sample_points(self, count: int, seed: int, margin: float = 0.05) -> np.ndarray:
        """Seeded points from the open box; non-periodic axes keep a relative margin."""
        rng = np.random.default_rng(seed)
        u = rng.random((int(count), self.dim))
        lo = np.array([c.lower for c in self.coordinates])
        ln = np.array([c.length for c in self.coordinates])
        m = np.where(self.periodic, 0.0, margin)
        return lo + ln * (m + (1.0 - 2.0 * m) * u)


# -- tensors ---------------------------------------------------------------

@dataclass(frozen=True)
class TensorValue:
    """Jet-valued tensor components with index variances ('u' up, 'd' down)."""

    signature: tuple
    components: Jet
    base_point: np.ndarray | None = None

    def __post_init__(self):
        sig = tuple(self.signature)
        if any(s not in ("u", "d") for s in sig):
            raise ChartError("signature entries must be 'u' or 'd'")
        shape = self.components.shape
        if len(shape) < len(sig):
            raise ChartError("component array has fewer axes than the signature")
        if sig:
            tail = shape[len(shape) - len(sig):]
            if len(set(tail)) != 1:
                raise ChartError("tensor axes must all have length 2n")
        object.__setattr__(self, "signature", sig)

    @property
    def rank(self) -> int:
        return len(self.signature)

    @property
    def value(self) -> np.ndarray:
        return self.components.value


@dataclass
class FieldBundle:
    """Jets of omega, J, g and inverses at a batch of points.

    ``ctx`` seeds the 2n coordinates first, then the active parameters and
    extra curve variables in the order given.
    """

    chart: Chart
    points: np.ndarray
    ctx: jets.JetContext
    env: dict
    variables: tuple
    omega: Jet
    J: Jet
    g: Jet
    ginv: Jet
    omega_inv: Jet
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def n(self) -> int:
        return self.chart.n

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise ChartError(f"{name!r} is not a jet variable of this bundle") from None

    def scalar(self, e) -> Jet:
        return self._to_jet(ex.evaluate(ex.as_expr(e), self.env, self._cache))

    def array(self, exprs) -> Jet:
        """Evaluate a nested list of expressions into a jet array (batch axis first)."""
        def rec(node):
            if isinstance(node, (list, tuple)):
                return [rec(v) for v in node]
            return self.scalar(node)
        items = rec(exprs)
        return jets.stack(items, axis=-1) if not isinstance(items[0], list) else \
            jets.stack([jets.stack(r, axis=-1) for r in items], axis=-2)

    def _to_jet(self, v) -> Jet:
        if isinstance(v, Jet):
            return v
        return jets.constant(self.ctx, np.broadcast_to(np.asarray(v, float), (len(self.points),)))


def _base_env(chart: Chart, points, ctx, active, extra):
    env = {}
    for i, name in enumerate(chart.coordinate_names):
        env[name] = jets.seed(i, points[:, i], ctx)
    k = chart.dim
    for name in active:
        if name not in chart.parameters:
            raise ChartError(f"unknown parameter {name!r}")
        env[name] = jets.seed(k, np.full(len(points), chart.parameters[name]), ctx)
        k += 1
    for name in chart.parameters:
        env.setdefault(name, chart.parameters[name])
    extras = {}
    for name in extra:
        if name in env:
            raise ChartError(f"extra variable {name!r} clashes with a chart name")
        extras[name] = jets.seed(k, np.zeros(len(points)), ctx)
        k += 1
    return env, extras


def _matrix_jet(bundle_like_eval, rows):
    return jets.stack([jets.stack([bundle_like_eval(e) for e in row], axis=-1) for row in rows],
                      axis=-2)


def eval_fields(chart: Chart, x, order: int = 2, active_params=(), extra_vars=(),
                check: bool = True, tol: float = 1e-9) -> FieldBundle:
    """Jets of omega, J, g = omega(., J.), and inverses at the points ``x``.

    ``active_params`` are chart parameters promoted to jet variables (seeded at
    their base value); ``extra_vars`` are additional free jet variables seeded
    at 0 (curve parameters).  With ``check`` the compatibility conditions are
    verified at base values and a :class:`CompatibilityError` is raised on
    violation.
    """
    points = chart.wrap(x)
    active = tuple(active_params)
    extra = tuple(extra_vars)
    nvars = chart.dim + len(active) + len(extra)
    ctx = jets.get_context(nvars, order)
    env, extras = _base_env(chart, points, ctx, active, extra)
    cache = {}

    def ev(e):
        v = ex.evaluate(e, env, cache)
        if isinstance(v, Jet):
            return v
        return jets.constant(ctx, np.broadcast_to(np.asarray(v, float), (len(points),)))

    omega = _matrix_jet(ev, chart.omega)
    J = _matrix_jet(ev, chart.J)
    if chart.deformation is not None:
        p = env[chart.deformation.parameter]
        a = _matrix_jet(ev, chart.deformation.a)
        pa = a * p
        J = jets.matmul(jets.matmul(jets.expm(-pa), J), jets.expm(pa))
    g = jets.matmul(omega, J)
    variables = tuple(chart.coordinate_names) + active + extra
    env_all = dict(env)
    env_all.update(extras)
    if check:
        _check_compatibility(omega, J, g, tol)
    try:
        omega_inv = jets.inverse(omega)
    except jets.JetError as err:
        raise ChartError(f"omega is degenerate: {err}") from None
    try:
        ginv = jets.inverse(g)
    except jets.JetError as err:
        raise CompatibilityError("metric is singular", float("inf")) from err
    return FieldBundle(chart, points, ctx, env_all, variables, omega, J, g, ginv, omega_inv,
                       cache)


def _check_compatibility(omega: Jet, J: Jet, g: Jet, tol: float):
    w, j, gv = omega.value, J.value, g.value
    scale = max(1.0, float(np.abs(w).max()))
    skew = float(np.abs(w + np.swapaxes(w, -1, -2)).max()) / scale
    if skew > tol:
        raise CompatibilityError("omega is not antisymmetric", skew)
    n = j.shape[-1]
    sq = float(np.abs(j @ j + np.eye(n)).max()) / max(1.0, float(np.abs(j).max()) ** 2)
    if sq > tol:
        raise CompatibilityError("J^2 != -Id", sq)
    inv = float(np.abs(np.swapaxes(j, -1, -2) @ w @ j - w).max()) / scale
    if inv > tol:
        raise CompatibilityError("omega(J., J.) != omega", inv)
    sym = float(np.abs(gv - np.swapaxes(gv, -1, -2)).max()) / scale
    if sym > tol:
        raise CompatibilityError("g = omega(., J.) is not symmetric", sym)
    eig = np.linalg.eigvalsh(0.5 * (gv + np.swapaxes(gv, -1, -2)))
    if np.any(eig[..., 0] <= 0):
        raise CompatibilityError("g = omega(., J.) is not positive definite",
                                 float(-eig[..., 0].min()))


# -- exterior calculus on coordinate components ----------------------------

def exterior_d0(f: Jet, dim: int) -> Jet:
    """df as a covector."""
    return f.grad(dim)


def exterior_d1(z: Jet, dim: int) -> Jet:
    """(dz)_ab = d_a z_b - d_b z_a."""
    dz = z.grad(dim)            # [..., b, a] = d_a z_b
    return dz.mT - dz


def exterior_d2(w: Jet, dim: int) -> Jet:
    """(dw)_abc = d_a w_bc + d_b w_ca + d_c w_ab."""
    p = w.grad(dim).coeffs      # [..., b, c, a] = d_a w_bc
    ax = p.ndim
    # reorder so that index order is (a, b, c)
    t_abc = np.moveaxis(p, ax - 2, ax - 4)           # [..., a, b, c]
    out = t_abc + np.moveaxis(t_abc, (ax - 4, ax - 3, ax - 2), (ax - 3, ax - 2, ax - 4)) \
        + np.moveaxis(t_abc, (ax - 4, ax - 3, ax - 2), (ax - 2, ax - 4, ax - 3))
    return Jet(w.ctx, out, w.order - 1)


def wedge1_1(a, b) -> Jet:
    """(a ^ b)_ij = a_i b_j - a_j b_i."""
    t = jets.einsum("...i,...j->...ij", a, b)
    return t - t.mT


def wedge1_2(a, w) -> Jet:
    """(a ^ w)_ijk = a_i w_jk + a_j w_ki + a_k w_ij."""
    t = jets.einsum("...i,...jk->...ijk", a, w)
    c = t.coeffs
    ax = c.ndim
    out = c + np.moveaxis(c, (ax - 4, ax - 3, ax - 2), (ax - 3, ax - 2, ax - 4)) \
        + np.moveaxis(c, (ax - 4, ax - 3, ax - 2), (ax - 2, ax - 4, ax - 3))
    return Jet(t.ctx, out, t.order)


def _triples(dim):
    return list(combinations(range(dim), 3))


# -- Lee form --------------------------------------------------------------

@dataclass(frozen=True)
class LeeForm:
    theta: TensorValue
    residual: np.ndarray          # |d omega - theta ^ omega| / max(|d omega|, 1) per point
    abs_residual: np.ndarray
    closed_residual: np.ndarray   # |d theta| per point (nan if order too low)
    condition: np.ndarray         # condition number of the least-squares system

    @property
    def jet(self) -> Jet:
        return self.theta.components


def lee_form(bundle: FieldBundle) -> LeeForm:
    """Least-squares Lee form: minimize |d omega - theta ^ omega| pointwise, in jets."""
    if "lee" in bundle._cache:
        return bundle._cache["lee"]
    dim = bundle.dim
    w = bundle.omega
    dw = exterior_d2(w, dim)
    tri = _triples(dim)
    # M[..., t, a]: coefficient of theta_a in (theta ^ omega)_{ijk} for triple t = (i, j, k)
    wc = w.coeffs
    M = np.zeros(wc.shape[:-3] + (len(tri), dim, w.ctx.size))
    for t, (i, j, k) in enumerate(tri):
        M[..., t, i, :] += wc[..., j, k, :]
        M[..., t, j, :] += wc[..., k, i, :]
        M[..., t, k, :] += wc[..., i, j, :]
    Mj = Jet(w.ctx, M, w.order)
    rhs = Jet(dw.ctx, np.stack([dw.coeffs[..., i, j, k, :] for (i, j, k) in tri], axis=-2),
              dw.order)
    MtM = jets.einsum("...ta,...tb->...ab", Mj, Mj)
    cond = np.linalg.cond(MtM.value)
    theta = jets.einsum("...ab,...b->...a", jets.inverse(MtM),
                        jets.einsum("...ta,...t->...a", Mj, rhs))
    res = rhs.value - np.einsum("...ta,...a->...t", M[..., 0], theta.value)
    absres = np.abs(res).max(axis=-1)
    scale = np.maximum(np.abs(rhs.value).max(axis=-1), 1.0)
    if theta.order >= 1:
        closed = np.abs(exterior_d1(theta, dim).value).max(axis=(-1, -2))
    else:
        closed = np.full(len(bundle.points), np.nan)
    out = LeeForm(TensorValue(("d",), theta, bundle.points), absres / scale, absres, closed, cond)
    bundle._cache["lee"] = out
    return out


# -- musical isomorphisms --------------------------------------------------

_LETTERS = "pqrstuvw"


def musical(value: TensorValue, bundle: FieldBundle, direction: str, slot: int = 0) -> TensorValue:
    """Raise ('sharp') a down index or lower ('flat') an up index at ``slot``."""
    sig = list(value.signature)
    if not 0 <= slot < len(sig):
        raise ChartError("slot out of range")
    if direction == "sharp":
        if sig[slot] != "d":
            raise ChartError("sharp needs a down index at the slot")
        metric, sig[slot] = bundle.ginv, "u"
    elif direction == "flat":
        if sig[slot] != "u":
            raise ChartError("flat needs an up index at the slot")
        metric, sig[slot] = bundle.g, "d"
    else:
        raise ChartError("direction must be 'sharp' or 'flat'")
    rank = len(sig)
    idx = list(_LETTERS[:rank])
    src = "".join(idx)
    idx[slot] = "m"
    dst = "".join(idx)
    out = jets.einsum(f"...m{src[slot]},...{src}->...{dst}", metric, value.components)
    return TensorValue(tuple(sig), out, value.base_point)


# -- integrability and volume ----------------------------------------------

def nijenhuis(bundle: FieldBundle) -> TensorValue:
    """N_J(d_a, d_b)^d as components ``N[..., d, a, b]``."""
    J = bundle.J
    dJ = J.grad(bundle.dim)                 # [..., d, b, c] = d_c J^d_b
    t1 = jets.einsum("...ca,...dbc->...dab", J, dJ)      # J^c_a d_c J^d_b
    t3 = jets.einsum("...de,...eab->...dab", J, dJ)      # J^d_e d_b J^e_a
    N = t1 - t1.swapaxes(-1, -2) + t3 - t3.swapaxes(-1, -2)
    return TensorValue(("u", "d", "d"), N, bundle.points)


def nijenhuis_norm(bundle: FieldBundle) -> np.ndarray:
    """Max-abs Nijenhuis component per point, relative to the size of dJ."""
    N = nijenhuis(bundle).value
    scale = np.maximum(np.abs(bundle.J.grad(bundle.dim).value).max(axis=(-1, -2, -3)), 1.0)
    return np.abs(N).max(axis=(-1, -2, -3)) / scale


def pfaffian(m: Jet) -> Jet:
    """Pfaffian of an antisymmetric jet matrix (recursive expansion along row 0)."""
    return _pf(m, list(range(m.shape[-1])))


def _pf(m, idx):
    if len(idx) == 0:
        return jets.constant(m.ctx, np.ones(m.shape[:-2]))
    if len(idx) == 2:
        return m[..., idx[0], idx[1]]
    total = None
    i = idx[0]
    for pos, j in enumerate(idx[1:]):
        rest = [k for k in idx[1:] if k != j]
        term = m[..., i, j] * _pf(m, rest)
        if pos % 2:
            term = -term
        total = term if total is None else total + term
    return total


def volume_density(bundle: FieldBundle, tol: float = 1e-10) -> Jet:
    """Pf(omega): the density of omega^n / n! against the coordinate volume.

    Cross-checked against sqrt(det g); raises on non-positive density.
    """
    pf = pfaffian(bundle.omega)
    v = pf.value
    if np.any(v <= 0):
        raise ChartError("non-positive volume density (orientation or degeneracy failure)")
    rg = np.sqrt(np.linalg.det(bundle.g.value))
    rel = float(np.abs(v - rg).max() / max(float(np.abs(rg).max()), 1e-300))
    if rel > tol:
        raise ChartError(f"Pf(omega) and sqrt(det g) disagree (relative {rel:.2e})")
    return pf


# -- JSON ------------------------------------------------------------------

def _mat_json(rows):
    return [[ex.to_json(e) for e in row] for row in rows]


def chart_to_dict(chart: Chart) -> dict:
    return {
        "name": chart.name,
        "coordinates": [{"name": c.name, "lower": c.lower, "upper": c.upper,
                         "periodic": bool(c.periodic)} for c in chart.coordinates],
        "parameters": dict(chart.parameters),
        "omega": _mat_json(chart.omega),
        "J": _mat_json(chart.J),
        "deformation": None if chart.deformation is None else {
            "a": _mat_json(chart.deformation.a), "parameter": chart.deformation.parameter},
        "generators": [[ex.to_json(e) for e in k] for k in chart.generators],
        "potentials": [None if h is None else ex.to_json(h) for h in chart.potentials],
        "lee_coefficients": None if chart.lee_coefficients is None
        else list(chart.lee_coefficients),
    }


def chart_from_dict(doc: dict) -> Chart:
    if not isinstance(doc, dict):
        raise ChartError("chart document must be a JSON object")
    required = {"name", "coordinates", "omega", "J"}
    missing = required - set(doc)
    if missing:
        raise ChartError(f"chart document lacks {sorted(missing)}")
    allowed = required | {"parameters", "deformation", "generators", "potentials",
                          "lee_coefficients"}
    extra = set(doc) - allowed
    if extra:
        raise ChartError(f"unknown chart keys {sorted(extra)}")
    try:
        coords = tuple(Coordinate(str(c["name"]), float(c["lower"]), float(c["upper"]),
                                  bool(c.get("periodic", False))) for c in doc["coordinates"])
        mat = lambda rows: tuple(tuple(ex.from_json(v) for v in row) for row in rows)  # noqa: E731
        deformation = None
        if doc.get("deformation") is not None:
            d = doc["deformation"]
            deformation = Deformation(mat(d["a"]), str(d["parameter"]))
        return Chart(
            name=str(doc["name"]),
            coordinates=coords,
            omega=mat(doc["omega"]),
            J=mat(doc["J"]),
            parameters=dict(doc.get("parameters") or {}),
            generators=tuple(tuple(ex.from_json(v) for v in k) for k in doc.get("generators") or ()),
            potentials=tuple(None if h is None else ex.from_json(h)
                             for h in doc.get("potentials") or ()),
            lee_coefficients=doc.get("lee_coefficients"),
            deformation=deformation,
        )
    except (KeyError, TypeError) as err:
        raise ChartError(f"malformed chart document: {err}") from None
    except ex.ExprError as err:
        raise ChartError(f"malformed expression: {err}") from None


def dump_chart(chart: Chart, path) -> None:
    with open(path, "w") as fh:
        json.dump(chart_to_dict(chart), fh, indent=2)
        fh.write("\n")


def load_chart(path) -> Chart:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ChartError(f"invalid JSON: {err}") from None
    return chart_from_dict(doc)


def relative_residual(lhs, rhs) -> np.ndarray:
    """Per-point max|lhs - rhs| / max(max|lhs|, max|rhs|, 1)."""
    a = lhs.value if isinstance(lhs, Jet) else np.asarray(lhs, dtype=float)
    b = rhs.value if isinstance(rhs, Jet) else np.asarray(rhs, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    if a.ndim == 0:
        a, b = a[None], b[None]
    if a.ndim == 1:
        d, sa, sb = np.abs(a - b), np.abs(a), np.abs(b)
    else:
        k = a.shape[0]
        d = np.abs(a - b).reshape(k, -1).max(axis=1)
        sa = np.abs(a).reshape(k, -1).max(axis=1)
        sb = np.abs(b).reshape(k, -1).max(axis=1)
    return d / np.maximum(np.maximum(sa, sb), 1.0)
