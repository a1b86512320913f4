"""Small expression trees over a fixed elementary-function vocabulary.

Field definitions of a chart (omega, J, generators, potentials, deformation
fields) are stored as expression trees so they can be evaluated on jets or
plain arrays and serialized to JSON.  JSON form of a node:

* a number                      -> constant
* a string                      -> variable (coordinate or parameter name)
* ``{"op": name, "args": [..]}`` -> operation

Supported ops: ``+ - * / exp log sqrt sin cos pow atan2``.  ``+`` and ``*``
accept any number of arguments, ``-`` is unary or binary.
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from . import jets

__all__ = ["Expr", "var", "const", "as_expr", "evaluate", "from_json", "to_json",
           "ExprError", "OPS", "exp", "log", "sqrt", "sin", "cos", "atan2", "free_names"]


class ExprError(ValueError):
    pass


OPS = {
    "+": (1, None),
    "-": (1, 2),
    "*": (1, None),
    "/": (2, 2),
    "exp": (1, 1),
    "log": (1, 1),
    "sqrt": (1, 1),
    "sin": (1, 1),
    "cos": (1, 1),
    "pow": (2, 2),
    "atan2": (2, 2),
}


class Expr:
    """Immutable expression node."""

    __slots__ = ("op", "args", "value", "name")

    def __init__(self, op: str, args=(), value=None, name=None):
        if op not in ("const", "var") and op not in OPS:
            raise ExprError(f"unknown op {op!r}")
        if op in OPS:
            lo, hi = OPS[op]
            if len(args) < lo or (hi is not None and len(args) > hi):
                raise ExprError(f"op {op!r} takes {lo}..{hi} arguments, got {len(args)}")
        self.op = op
        self.args = tuple(args)
        self.value = value
        self.name = name

    # arithmetic sugar
    def __add__(self, o):
        return Expr("+", (self, as_expr(o)))

    def __radd__(self, o):
        return Expr("+", (as_expr(o), self))

    def __sub__(self, o):
        return Expr("-", (self, as_expr(o)))

    def __rsub__(self, o):
        return Expr("-", (as_expr(o), self))

    def __mul__(self, o):
        return Expr("*", (self, as_expr(o)))

    def __rmul__(self, o):
        return Expr("*", (as_expr(o), self))

    def __truediv__(self, o):
        return Expr("/", (self, as_expr(o)))

    def __rtruediv__(self, o):
        return Expr("/", (as_expr(o), self))

    def __neg__(self):
        return Expr("-", (self,))

    def __pow__(self, o):
        return Expr("pow", (self, as_expr(o)))

    def __repr__(self):
        if self.op == "const":
            return repr(self.value)
        if self.op == "var":
            return self.name
        return f"{self.op}({', '.join(map(repr, self.args))})"


def const(v) -> Expr:
    return Expr("const", value=float(v))


def var(name: str) -> Expr:
    return Expr("var", name=str(name))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, numbers.Real):
        return const(x)
    if isinstance(x, str):
        return var(x)
    raise ExprError(f"cannot convert {type(x).__name__} to an expression")


def exp(x):
    return Expr("exp", (as_expr(x),))


def log(x):
    return Expr("log", (as_expr(x),))


def sqrt(x):
    return Expr("sqrt", (as_expr(x),))


def sin(x):
    return Expr("sin", (as_expr(x),))


def cos(x):
    return Expr("cos", (as_expr(x),))


def atan2(y, x):
    return Expr("atan2", (as_expr(y), as_expr(x)))


def _pow(base, e):
    if isinstance(e, (int, float)) or (isinstance(e, np.ndarray) and e.ndim == 0):
        e = float(e)
        if e.is_integer() and abs(e) <= 16:
            if isinstance(base, jets.Jet):
                return base ** int(e)
            return np.power(base, e)
        return jets.pow_real(base, e)
    if isinstance(base, jets.Jet) or isinstance(e, jets.Jet):
        return jets.exp(jets.log(base) * e)
    return np.power(base, e)


def evaluate(expr: Expr, env: dict, cache: dict | None = None):
    """Evaluate ``expr`` with variables bound in ``env`` (Jets, arrays or floats).

    ``cache`` memoizes shared subtrees across several evaluations in one pass.
    """
    if cache is None:
        cache = {}
    return _eval(expr, env, cache)


def _eval(e: Expr, env, cache):
    key = id(e)
    hit = cache.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    op = e.op
    if op == "const":
        out = e.value
    elif op == "var":
        try:
            out = env[e.name]
        except KeyError:
            raise ExprError(f"unbound variable {e.name!r}") from None
    else:
        vals = [_eval(a, env, cache) for a in e.args]
        if op == "+":
            out = vals[0]
            for v in vals[1:]:
                out = out + v
        elif op == "-":
            out = -vals[0] if len(vals) == 1 else vals[0] - vals[1]
        elif op == "*":
            out = vals[0]
            for v in vals[1:]:
                out = out * v
        elif op == "/":
            out = vals[0] / vals[1]
        elif op == "pow":
            out = _pow(vals[0], vals[1])
        elif op == "atan2":
            out = jets.atan2(vals[0], vals[1])
        else:
            out = getattr(jets, op)(vals[0])
    cache[key] = (e, out)
    return out


def free_names(expr: Expr) -> set:
    out = set()
    stack = [expr]
    while stack:
        e = stack.pop()
        if e.op == "var":
            out.add(e.name)
        stack.extend(e.args)
    return out


def to_json(expr: Expr):
    if expr.op == "const":
        v = expr.value
        return int(v) if float(v).is_integer() and abs(v) < 2 ** 53 else v
    if expr.op == "var":
        return expr.name
    return {"op": expr.op, "args": [to_json(a) for a in expr.args]}


def from_json(doc) -> Expr:
    if isinstance(doc, bool):
        raise ExprError("booleans are not expressions")
    if isinstance(doc, numbers.Real):
        if not math.isfinite(doc):
            raise ExprError("non-finite constant")
        return const(doc)
    if isinstance(doc, str):
        return var(doc)
    if isinstance(doc, dict):
        if set(doc) != {"op", "args"}:
            raise ExprError(f"expression node needs exactly 'op' and 'args', got {sorted(doc)}")
        if not isinstance(doc["args"], list):
            raise ExprError("'args' must be a list")
        return Expr(doc["op"], tuple(from_json(a) for a in doc["args"]))
    raise ExprError(f"invalid expression document: {doc!r}")
