"""Compile-time evaluation of classical expressions."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping, Optional

from . import ast

MAX_EXPONENT = 4096


class EvalError(Exception):
    def __init__(self, message: str, span=None):
        super().__init__(message if span is None else f"{span}: {message}")
        self.message = message
        self.span = span


def to_rational(v):
    """Normalize a Python number (or nested list of numbers) to Fractions."""
    if isinstance(v, (list, tuple)):
        return [to_rational(x) for x in v]
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, float):
        if not math.isfinite(v):
            raise EvalError(f"non-finite value {v}")
        return Fraction(v)
    return Fraction(v)


def _log2(x):
    x = Fraction(x)
    if x <= 0:
        raise EvalError("log2 of a non-positive value")
    if x.numerator == 1 or x.denominator == 1:
        n = x.numerator if x.denominator == 1 else x.denominator
        if n & (n - 1) == 0:
            k = n.bit_length() - 1
            return Fraction(k if x.denominator == 1 else -k)
    return Fraction(math.log2(x))


def _float_fn(fn):
    def wrapped(x):
        try:
            return Fraction(fn(float(x)))
        except (ValueError, OverflowError) as exc:
            raise EvalError(str(exc)) from None
    return wrapped


BUILTIN_FUNCTIONS: dict[str, Callable] = {
    "log2": _log2,
    "floor": lambda x: Fraction(math.floor(x)),
    "ceil": lambda x: Fraction(math.ceil(x)),
    "abs": lambda x: abs(Fraction(x)),
    "int": lambda x: Fraction(int(x)),
    "sqrt": _float_fn(math.sqrt),
    "sin": _float_fn(math.sin),
    "cos": _float_fn(math.cos),
    "tan": _float_fn(math.tan),
    "tanh": _float_fn(math.tanh),
    "exp": _float_fn(math.exp),
    "log": _float_fn(math.log),
    "min": lambda *xs: min(xs),
    "max": lambda *xs: max(xs),
}

CONSTANTS = {"pi": Fraction(math.pi)}


def require_int(v, what: str = "value", span=None) -> int:
    if isinstance(v, list) or Fraction(v).denominator != 1:
        raise EvalError(f"{what} must be an integer, got {_show(v)}", span)
    return int(v)


def _show(v):
    if isinstance(v, list):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else repr(float(v))


def eval_classical(expr, env: Mapping, attr_lookup: Optional[Callable] = None):
    """Evaluate ``expr`` to an exact rational (or a list for array values).

    ``attr_lookup(node)`` is consulted for attribute accesses the classical
    environment cannot answer (e.g. ``.size`` of a quantum path); it returns
    None when it cannot resolve the node either.
    """
    def ev(e):
        if isinstance(e, ast.Num):
            return e.value
        if isinstance(e, ast.Name):
            if e.id in env:
                return to_rational(env[e.id])
            if e.id in CONSTANTS:
                return CONSTANTS[e.id]
            raise EvalError(f"unbound classical name '{e.id}'", e.span)
        if isinstance(e, ast.Index):
            base = ev(e.base)
            if not isinstance(base, list):
                raise EvalError("indexing a non-array value", e.span)
            i = require_int(ev(e.index), "array index", e.span)
            if not 0 <= i < len(base):
                raise EvalError(f"index {i} out of range for array of length {len(base)}", e.span)
            return base[i]
        if isinstance(e, ast.Attr):
            if attr_lookup is not None:
                got = attr_lookup(e)
                if got is not None:
                    return to_rational(got)
            base = ev(e.base)
            if isinstance(base, list) and e.name in ("len", "size"):
                return Fraction(len(base))
            raise EvalError(f"unknown attribute '{e.name}'", e.span)
        if isinstance(e, ast.UnaryOp):
            v = _scalar(ev(e.operand), e)
            if e.op == "neg":
                return -v
            if e.op == "not":
                return Fraction(int(v == 0))
            if e.op == "bitnot":
                return Fraction(~require_int(v, "operand of '~'", e.span))
            raise EvalError(f"unknown operator {e.op}", e.span)
        if isinstance(e, ast.BinOp):
            a = _scalar(ev(e.left), e)
            b = _scalar(ev(e.right), e)
            return _binop(e, a, b)
        if isinstance(e, ast.CallExpr):
            fn = BUILTIN_FUNCTIONS.get(e.func)
            if fn is None:
                raise EvalError(f"unknown classical function '{e.func}'", e.span)
            args = [_scalar(ev(a), e) for a in e.args]
            try:
                return to_rational(fn(*args))
            except TypeError:
                raise EvalError(f"wrong number of arguments to '{e.func}'", e.span) from None
        raise EvalError(f"not a classical expression: {type(e).__name__}", getattr(e, "span", None))

    return ev(expr)


def _scalar(v, e):
    if isinstance(v, list):
        raise EvalError("array value used where a scalar is required", e.span)
    return v


def _binop(e, a: Fraction, b: Fraction) -> Fraction:
    op = e.op
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise EvalError("division by zero", e.span)
        return a / b
    if op == "pow":
        if b.denominator == 1:
            if abs(b) > MAX_EXPONENT:
                raise EvalError("exponent too large", e.span)
            if a == 0 and b < 0:
                raise EvalError("division by zero", e.span)
            return a ** int(b)
        if a < 0:
            raise EvalError("fractional power of a negative value", e.span)
        return to_rational(float(a) ** float(b))
    if op in ("lt", "le", "gt", "ge", "eq", "ne"):
        return Fraction(int({"lt": a < b, "le": a <= b, "gt": a > b,
                             "ge": a >= b, "eq": a == b, "ne": a != b}[op]))
    if op == "and":
        return Fraction(int(bool(a) and bool(b)))
    if op == "or":
        return Fraction(int(bool(a) or bool(b)))
    x = require_int(a, f"left operand of '{op}'", e.span)
    y = require_int(b, f"right operand of '{op}'", e.span)
    if op in ("shl", "shr"):
        if y < 0 or y > MAX_EXPONENT:
            raise EvalError("shift count out of range", e.span)
        return Fraction(x << y if op == "shl" else x >> y)
    if op == "bitand":
        return Fraction(x & y)
    if op == "bitor":
        return Fraction(x | y)
    if op == "bitxor":
        return Fraction(x ^ y)
    raise EvalError(f"unknown operator {op}", e.span)
