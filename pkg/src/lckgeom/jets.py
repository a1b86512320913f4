"""Truncated multivariate Taylor jets.

A :class:`Jet` stores the Taylor coefficients of a (possibly array-valued)
function about a base point, truncated at total degree ``order``::

    f(x0 + h) = sum_alpha  c_alpha h^alpha,   |alpha| <= order

The coefficient axis is always the last axis of ``Jet.coeffs``; every leading
axis is an ordinary array axis (sample points, tensor indices).  Products are
truncated Cauchy products, evaluated with a precomputed pair table so that a
whole batch of tensors is multiplied with a handful of numpy calls.

Differentiation lowers the number of trustworthy degrees by one.  Each jet
tracks that as ``Jet.order``; coefficients above it are kept at zero.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "JetContext",
    "Jet",
    "JetError",
    "JetOrderError",
    "seed",
    "constant",
    "jet_arith",
    "jet_elementary",
    "jet_matrix",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "pow_real",
    "atan2",
    "einsum",
    "matmul",
    "stack",
    "inverse",
    "det",
    "trace",
    "expm",
]


class JetError(ValueError):
    """Invalid jet operation (context mismatch, domain violation, singular input)."""


class JetOrderError(JetError):
    """A derivative was requested beyond the truncation order still available."""


class JetContext:
    """Differentiation variables and truncation order shared by a family of jets."""

    def __init__(self, num_vars: int, order: int):
        if num_vars < 1:
            raise JetError("num_vars must be >= 1")
        if order < 1:
            raise JetError("order must be >= 1")
        self.num_vars = int(num_vars)
        self.order = int(order)
        monos = [(0,) * self.num_vars]
        for deg in range(1, self.order + 1):
            for combo in itertools.combinations_with_replacement(range(self.num_vars), deg):
                alpha = [0] * self.num_vars
                for v in combo:
                    alpha[v] += 1
                monos.append(tuple(alpha))
        self.monomials = np.array(monos, dtype=np.int64)
        self.size = len(monos)
        self.degree = self.monomials.sum(axis=1)
        self.index = {m: i for i, m in enumerate(monos)}
        self.factorial = np.array(
            [math.prod(math.factorial(a) for a in m) for m in monos], dtype=float
        )
        self._build_pairs(monos)
        self._build_derivatives(monos)
        self._masks = {
            p: (self.degree <= p).astype(float) for p in range(-1, self.order + 1)
        }

    def _build_pairs(self, monos):
        left, right, starts = [], [], []
        for k, gamma in enumerate(monos):
            starts.append(len(left))
            ranges = [range(g + 1) for g in gamma]
            for alpha in itertools.product(*ranges):
                beta = tuple(g - a for g, a in zip(gamma, alpha))
                left.append(self.index[alpha])
                right.append(self.index[beta])
        self.pair_left = np.array(left, dtype=np.int64)
        self.pair_right = np.array(right, dtype=np.int64)
        self.pair_starts = np.array(starts, dtype=np.int64)

    def _build_derivatives(self, monos):
        # d/dx_v maps coefficient beta+e_v (times beta_v+1) onto beta
        self.diff_src = []
        self.diff_factor = []
        for v in range(self.num_vars):
            src = np.zeros(self.size, dtype=np.int64)
            fac = np.zeros(self.size)
            for i, beta in enumerate(monos):
                up = list(beta)
                up[v] += 1
                j = self.index.get(tuple(up))
                if j is not None:
                    src[i] = j
                    fac[i] = beta[v] + 1
            self.diff_src.append(src)
            self.diff_factor.append(fac)

    def mask(self, order: int) -> np.ndarray:
        return self._masks[max(-1, min(order, self.order))]

    def __repr__(self):
        return f"JetContext(num_vars={self.num_vars}, order={self.order})"


@lru_cache(maxsize=None)
def _context(num_vars: int, order: int) -> JetContext:
    return JetContext(num_vars, order)


def get_context(num_vars: int, order: int) -> JetContext:
    """Shared (cached) context; contexts are immutable so sharing is safe."""
    return _context(int(num_vars), int(order))


class Jet:
    """Array of truncated Taylor expansions sharing one :class:`JetContext`."""

    __slots__ = ("ctx", "coeffs", "order")
    __array_priority__ = 1000

    def __init__(self, ctx: JetContext, coeffs, order: int | None = None):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[-1:] != (ctx.size,):
            raise JetError(
                f"coefficient axis has length {coeffs.shape[-1:]}, context needs {ctx.size}"
            )
        self.ctx = ctx
        self.order = ctx.order if order is None else int(order)
        if self.order < ctx.order:
            coeffs = coeffs * ctx.mask(self.order)
        self.coeffs = coeffs

    # -- basic views -------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[:-1]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def value(self) -> np.ndarray:
        """Degree-0 coefficients (the represented value at the base point)."""
        if self.order < 0:
            raise JetOrderError("jet carries no valid coefficients")
        return self.coeffs[..., 0]

    def coefficient(self, alpha) -> np.ndarray:
        """Raw Taylor coefficient for multi-index ``alpha``."""
        alpha = tuple(int(a) for a in alpha)
        if sum(alpha) > self.order:
            raise JetOrderError(f"degree {sum(alpha)} exceeds available order {self.order}")
        return self.coeffs[..., self.ctx.index[alpha]]

    def partial(self, alpha) -> np.ndarray:
        """Mixed partial derivative d^alpha f at the base point."""
        alpha = tuple(int(a) for a in alpha)
        return self.coefficient(alpha) * math.prod(math.factorial(a) for a in alpha)

    def derivative(self, var: int) -> Jet:
        """Jet of d f / d x_var (one order lower)."""
        if not 0 <= var < self.ctx.num_vars:
            raise JetError(f"invalid variable index {var}")
        if self.order < 1:
            raise JetOrderError("cannot differentiate a jet of order 0")
        c = self.coeffs[..., self.ctx.diff_src[var]] * self.ctx.diff_factor[var]
        return Jet(self.ctx, c, self.order - 1)

    def grad(self, nvars: int | None = None) -> Jet:
        """Stack of first derivatives; the derivative index becomes the last array axis."""
        nvars = self.ctx.num_vars if nvars is None else nvars
        if self.order < 1:
            raise JetOrderError("cannot differentiate a jet of order 0")
        parts = [
            self.coeffs[..., self.ctx.diff_src[v]] * self.ctx.diff_factor[v]
            for v in range(nvars)
        ]
        return Jet(self.ctx, np.stack(parts, axis=-2), self.order - 1)

    def __getitem__(self, key) -> Jet:
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.ctx, self.coeffs[key + (Ellipsis,)] if Ellipsis not in key
                   else self.coeffs[key + (slice(None),)], self.order)

    def __len__(self):
        return self.shape[0]

    def reshape(self, *shape) -> Jet:
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Jet(self.ctx, self.coeffs.reshape(tuple(shape) + (self.ctx.size,)), self.order)

    def swapaxes(self, a: int, b: int) -> Jet:
        a = a % self.ndim
        b = b % self.ndim
        return Jet(self.ctx, np.swapaxes(self.coeffs, a, b), self.order)

    @property
    def mT(self) -> Jet:
        """Transpose of the two trailing array axes."""
        return self.swapaxes(-1, -2)

    def sum(self, axis=None) -> Jet:
        if axis is None:
            axis = tuple(range(self.ndim))
        elif isinstance(axis, int):
            axis = (axis % self.ndim,)
        else:
            axis = tuple(a % self.ndim for a in axis)
        return Jet(self.ctx, self.coeffs.sum(axis=axis), self.order)

    def with_order(self, order: int) -> Jet:
        return Jet(self.ctx, self.coeffs, min(order, self.order))

    def copy(self) -> Jet:
        return Jet(self.ctx, self.coeffs.copy(), self.order)

    def __repr__(self):
        return f"Jet(shape={self.shape}, order={self.order}, ctx={self.ctx})"

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.ctx is not self.ctx:
                raise JetError("jets belong to different contexts")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is not None:
            return Jet(self.ctx, self.coeffs + o.coeffs, min(self.order, o.order))
        other = np.asarray(other, dtype=float)
        shape = np.broadcast_shapes(self.shape, other.shape)
        c = np.array(np.broadcast_to(self.coeffs, shape + (self.ctx.size,)))
        c[..., 0] += other
        return Jet(self.ctx, c, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ctx, -self.coeffs, self.order)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is not None:
            return _cauchy(self, o)
        return Jet(self.ctx, self.coeffs * np.asarray(other, dtype=float)[..., None], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is not None:
            return _cauchy(self, reciprocal(o))
        return Jet(self.ctx, self.coeffs / np.asarray(other, dtype=float)[..., None], self.order)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, power):
        if isinstance(power, Jet):
            return exp(log(self) * power)
        if float(power).is_integer():
            n = int(power)
            if n < 0:
                return reciprocal(self ** (-n))
            if n == 0:
                return constant(self.ctx, np.ones(self.shape))
            result, base = None, self
            while n:
                if n & 1:
                    result = base if result is None else result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        return pow_real(self, power)

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)


def _cauchy(a: Jet, b: Jet) -> Jet:
    ctx = a.ctx
    prod = a.coeffs[..., ctx.pair_left] * b.coeffs[..., ctx.pair_right]
    return Jet(ctx, np.add.reduceat(prod, ctx.pair_starts, axis=-1), min(a.order, b.order))


# -- construction ----------------------------------------------------------

def seed(var_index: int, value, ctx: JetContext) -> Jet:
    """Jet of the coordinate function x -> value + (x_var - base_var)."""
    if not 0 <= var_index < ctx.num_vars:
        raise JetError(f"invalid variable index {var_index} for {ctx.num_vars} variables")
    value = np.asarray(value, dtype=float)
    c = np.zeros(value.shape + (ctx.size,))
    c[..., 0] = value
    e = [0] * ctx.num_vars
    e[var_index] = 1
    c[..., ctx.index[tuple(e)]] = 1.0
    return Jet(ctx, c)


def constant(ctx: JetContext, value) -> Jet:
    value = np.asarray(value, dtype=float)
    c = np.zeros(value.shape + (ctx.size,))
    c[..., 0] = value
    return Jet(ctx, c)


def stack(items, axis: int = 0) -> Jet:
    """Stack jets (and plain numbers) along a new array axis."""
    items = list(items)
    ctx = next((it.ctx for it in _flatten(items) if isinstance(it, Jet)), None)
    if ctx is None:
        raise JetError("stack needs at least one jet")
    return _stack(items, ctx, axis)


def _flatten(items):
    for it in items:
        if isinstance(it, (list, tuple)):
            yield from _flatten(it)
        else:
            yield it


def _stack(items, ctx, axis):
    jets = []
    for it in items:
        if isinstance(it, (list, tuple)):
            it = _stack(it, ctx, 0)
        elif not isinstance(it, Jet):
            it = constant(ctx, it)
        jets.append(it)
    shape = np.broadcast_shapes(*(j.shape for j in jets))
    arrays = [np.broadcast_to(j.coeffs, shape + (ctx.size,)) for j in jets]
    axis = axis if axis >= 0 else axis + len(shape) + 1
    return Jet(ctx, np.stack(arrays, axis=axis), min(j.order for j in jets))


# -- univariate composition -----------------------------------------------

def _compose(arg: Jet, derivs) -> Jet:
    """f(arg) from the Taylor coefficients ``derivs[k] = f^(k)(c0)/k!``."""
    ctx = arg.ctx
    u = Jet(ctx, arg.coeffs.copy(), arg.order)
    u.coeffs[..., 0] = 0.0
    p = max(arg.order, 0)
    result = constant(ctx, derivs[p]).with_order(arg.order)
    for k in range(p - 1, -1, -1):
        result = result * u
        result.coeffs[..., 0] += derivs[k]
    return result


def _check(ok, msg):
    if not np.all(ok):
        raise JetError(msg)


def reciprocal(x: Jet) -> Jet:
    c0 = x.coeffs[..., 0]
    _check(c0 != 0, "division by a jet with zero constant term")
    p = max(x.order, 0)
    derivs = [(-1.0) ** k / c0 ** (k + 1) for k in range(p + 1)]
    return _compose(x, derivs)


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e = np.exp(x.coeffs[..., 0])
    p = max(x.order, 0)
    return _compose(x, [e / math.factorial(k) for k in range(p + 1)])


def log(x):
    if not isinstance(x, Jet):
        return np.log(x)
    c0 = x.coeffs[..., 0]
    _check(c0 > 0, "log of a jet with non-positive constant term")
    p = max(x.order, 0)
    derivs = [np.log(c0)] + [(-1.0) ** (k - 1) / (k * c0 ** k) for k in range(1, p + 1)]
    return _compose(x, derivs)


def pow_real(x, r: float):
    if not isinstance(x, Jet):
        return np.power(x, r)
    c0 = x.coeffs[..., 0]
    _check(c0 > 0, "real power of a jet with non-positive constant term")
    p = max(x.order, 0)
    derivs = []
    binom = 1.0
    for k in range(p + 1):
        derivs.append(binom * c0 ** (r - k))
        binom *= (r - k) / (k + 1)
    return _compose(x, derivs)


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    return pow_real(x, 0.5)


def sin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    s, c = np.sin(x.coeffs[..., 0]), np.cos(x.coeffs[..., 0])
    cycle = [s, c, -s, -c]
    p = max(x.order, 0)
    return _compose(x, [cycle[k % 4] / math.factorial(k) for k in range(p + 1)])


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    s, c = np.sin(x.coeffs[..., 0]), np.cos(x.coeffs[..., 0])
    cycle = [c, -s, -c, s]
    p = max(x.order, 0)
    return _compose(x, [cycle[k % 4] / math.factorial(k) for k in range(p + 1)])


def atan2(y, x):
    if not isinstance(y, Jet) and not isinstance(x, Jet):
        return np.arctan2(y, x)
    ctx = y.ctx if isinstance(y, Jet) else x.ctx
    if not isinstance(y, Jet):
        y = constant(ctx, y)
    if not isinstance(x, Jet):
        x = constant(ctx, x)
    y0, x0 = y.coeffs[..., 0], x.coeffs[..., 0]
    _check(x0 ** 2 + y0 ** 2 > 0, "atan2 of a jet at the origin")
    # atan2(y, x) = atan2(y0, x0) + atan(w), w has no constant term
    w = (y * x0 - x * y0) / (x * x0 + y * y0)
    p = max(w.order, 0)
    derivs = [np.zeros_like(x0)]
    for k in range(1, p + 1):
        derivs.append(np.full_like(x0, 0.0 if k % 2 == 0 else (-1.0) ** ((k - 1) // 2) / k))
    out = _compose(w, derivs)
    out.coeffs[..., 0] = np.arctan2(y0, x0)
    return out


_ELEMENTARY = {
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
}


def jet_elementary(f: str, arg: Jet, *extra) -> Jet:
    """Dispatch by name: exp, log, sqrt, sin, cos, pow_real (exponent), atan2 (x)."""
    if f == "pow_real":
        return pow_real(arg, *extra)
    if f == "atan2":
        return atan2(arg, *extra)
    try:
        return _ELEMENTARY[f](arg)
    except KeyError:
        raise JetError(f"unknown elementary function {f!r}") from None


def jet_arith(lhs: Jet, rhs: Jet, op: str) -> Jet:
    if isinstance(lhs, Jet) and isinstance(rhs, Jet) and lhs.ctx is not rhs.ctx:
        raise JetError("jets belong to different contexts")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise JetError(f"unknown arithmetic op {op!r}")


# -- contractions -----------------------------------------------------------

_PAIR = "Z"


def _parse(subscripts: str, n: int):
    if "->" not in subscripts:
        raise JetError("einsum subscripts must be explicit (contain '->')")
    ins, out = subscripts.replace(" ", "").split("->")
    terms = ins.split(",")
    if len(terms) != n:
        raise JetError("operand count does not match subscripts")
    return terms, out


def _letters(term: str):
    return [c for c in term.replace("...", "")]


def einsum(subscripts: str, *operands):
    """Tensor contraction over jets; plain arrays act as constant factors.

    Subscripts must be explicit; ``...`` stands for leading batch axes.
    The letter ``Z`` is reserved.
    """
    terms, out = _parse(subscripts, len(operands))
    jets = [op for op in operands if isinstance(op, Jet)]
    if not jets:
        return np.einsum(subscripts, *operands)
    ctx = jets[0].ctx
    for j in jets:
        if j.ctx is not ctx:
            raise JetError("jets belong to different contexts")
    # fold constant arrays into the first jet they touch; then contract jets pairwise
    items = list(zip(terms, operands))
    consts = [(t, o) for t, o in items if not isinstance(o, Jet)]
    jet_items = [(t, o) for t, o in items if isinstance(o, Jet)]
    needed_later = set(_letters(out))
    for t, _ in jet_items[1:]:
        needed_later |= set(_letters(t))
    t0, j0 = jet_items[0]
    if consts:
        letters_all = []
        for t in [t0] + [t for t, _ in consts]:
            for c in _letters(t):
                if c not in letters_all:
                    letters_all.append(c)
        new_t = "..." + "".join(c for c in letters_all if c in needed_later)
        sub = ",".join([_ensure(t0) + _PAIR] + [t for t, _ in consts]) + "->" + new_t + _PAIR
        coeffs = np.einsum(sub, j0.coeffs, *[np.asarray(o, dtype=float) for _, o in consts])
        jet_items[0] = (new_t, Jet(ctx, coeffs, j0.order))
    while len(jet_items) > 1:
        (ta, a), (tb, b) = jet_items[0], jet_items[1]
        rest = jet_items[2:]
        keep = set(_letters(out))
        for t, _ in rest:
            keep |= set(_letters(t))
        letters_all = []
        for c in _letters(ta) + _letters(tb):
            if c not in letters_all:
                letters_all.append(c)
        tr = "..." + "".join(c for c in letters_all if c in keep)
        jet_items = [(tr, _pair_contract(ta, a, tb, b, tr))] + rest
    t, j = jet_items[0]
    if _letters(t) != _letters(out) or not out.startswith("..."):
        coeffs = np.einsum(t + _PAIR + "->" + out + _PAIR, j.coeffs)
        j = Jet(ctx, coeffs, j.order)
    return j


def _pair_contract(ta, a, tb, b, tr):
    ctx = a.ctx
    sub = f"{_ensure(ta)}{_PAIR},{_ensure(tb)}{_PAIR}->{tr}{_PAIR}"
    prod = np.einsum(sub, a.coeffs[..., ctx.pair_left], b.coeffs[..., ctx.pair_right],
                     optimize=True)
    return Jet(ctx, np.add.reduceat(prod, ctx.pair_starts, axis=-1), min(a.order, b.order))


def _ensure(t):
    return t if t.startswith("...") else "..." + t


def matmul(a, b) -> Jet:
    """Matrix product over the two trailing axes (vectors allowed on either side)."""
    na = a.ndim if isinstance(a, Jet) else np.ndim(a)
    nb = b.ndim if isinstance(b, Jet) else np.ndim(b)
    if nb == 1 or (isinstance(b, Jet) and b.ndim == 1):
        return einsum("...ij,...j->...i", a, b)
    if na == 1:
        return einsum("...i,...ij->...j", a, b)
    return einsum("...ij,...jk->...ik", a, b)


# -- matrix functions --------------------------------------------------------

def _split_matrix(m: Jet):
    m0 = m.coeffs[..., 0]
    nil = Jet(m.ctx, m.coeffs.copy(), m.order)
    nil.coeffs[..., 0] = 0.0
    return m0, nil


def trace(m: Jet) -> Jet:
    return Jet(m.ctx, np.einsum("...iiZ->...Z", m.coeffs), m.order)


def inverse(m: Jet) -> Jet:
    """Matrix inverse: exact truncated Neumann series about the constant part."""
    if m.shape[-1] != m.shape[-2]:
        raise JetError("inverse needs a square matrix")
    m0, nil = _split_matrix(m)
    cond = np.linalg.cond(m0)
    if not np.all(np.isfinite(cond)) or np.any(cond > 1e14):
        raise JetError("singular constant-term matrix")
    inv0 = np.linalg.inv(m0)
    step = -einsum("...ij,...jk->...ik", inv0, nil)
    term = constant(m.ctx, inv0).with_order(m.order)
    total = term
    for _ in range(max(m.order, 0)):
        term = matmul(step, term)
        total = total + term
    return total


def det(m: Jet) -> Jet:
    """Determinant via LU elimination with pivoting on the constant terms."""
    n = m.shape[-1]
    if m.shape[-2] != n:
        raise JetError("det needs a square matrix")
    batch = m.shape[:-2]
    work = m.coeffs.reshape((-1, n, n, m.ctx.size)).copy()
    nb = work.shape[0]
    sign = np.ones(nb)
    result = constant(m.ctx, np.ones(nb)).with_order(m.order)
    rows = np.arange(nb)
    for k in range(n):
        piv = k + np.argmax(np.abs(work[:, k:, k, 0]), axis=1)
        swap = piv != k
        sign[swap] *= -1
        tmp = work[rows, k].copy()
        work[rows, k] = work[rows, piv]
        work[rows, piv] = tmp
        pivot = Jet(m.ctx, work[:, k, k], m.order)
        if np.any(np.abs(pivot.coeffs[..., 0]) == 0.0):
            raise JetError("singular constant-term matrix")
        result = result * pivot
        if k + 1 < n:
            inv_p = reciprocal(pivot)
            for i in range(k + 1, n):
                factor = Jet(m.ctx, work[:, i, k], m.order) * inv_p
                row_k = Jet(m.ctx, work[:, k, k:], m.order)
                upd = Jet(m.ctx, work[:, i, k:], m.order) - row_k * Jet(
                    m.ctx, factor.coeffs[:, None, :], factor.order)
                work[:, i, k:] = upd.coeffs
    result = result * sign
    return result.reshape(batch)


def expm(m: Jet) -> Jet:
    """Matrix exponential: Taylor series with scaling and squaring of the constant part."""
    n = m.shape[-1]
    if m.shape[-2] != n:
        raise JetError("expm needs a square matrix")
    m0 = m.coeffs[..., 0]
    norm = float(np.max(np.abs(m0).sum(axis=-1))) if m0.size else 0.0
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    x = m * (0.5 ** squarings)
    nterms = max(m.order, 0) + (0 if norm == 0.0 else 20)
    eye = np.broadcast_to(np.eye(n), m.shape)
    term = constant(m.ctx, eye).with_order(m.order)
    total = term
    for k in range(1, nterms + 1):
        term = matmul(term, x) * (1.0 / k)
        total = total + term
    for _ in range(squarings):
        total = matmul(total, total)
    return total


def jet_matrix(op: str, m: Jet):
    if op == "inverse":
        return inverse(m)
    if op == "det":
        return det(m)
    if op == "trace":
        return trace(m)
    if op == "expm":
        return expm(m)
    raise JetError(f"unknown matrix op {op!r}")
