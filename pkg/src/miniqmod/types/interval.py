"""Interval inference and precision-bounded fixed-point semantics for expressions."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Mapping, Optional

from .expr import (BITWISE_OPS, LOGICAL_OPS, RELATIONAL_OPS, Binary, Const, Expr,
                   UnknownVariable, Unary, UnsupportedOperator, Var, desugar)
from .fixedpoint import FixedPointFormat, min_fraction_digits, round_down, snap

DEFAULT_MACHINE_PRECISION = 8


class LossyConstantWarning(UserWarning):
    pass


@dataclass(frozen=True)
class NumInterval:
    lo: Fraction
    hi: Fraction
    frac: int

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        scale = 1 << self.frac
        if (self.lo * scale).denominator != 1 or (self.hi * scale).denominator != 1:
            raise ValueError(f"endpoints of [{self.lo}, {self.hi}] are not multiples of 2^-{self.frac}")

    def contains(self, value) -> bool:
        value = Fraction(value)
        return self.lo <= value <= self.hi and (value * (1 << self.frac)).denominator == 1

    def rounded(self, frac: int) -> "NumInterval":
        if frac >= self.frac:
            return self
        return NumInterval(round_down(self.lo, frac), round_down(self.hi, frac), frac)


BOOL_INTERVAL = NumInterval(Fraction(0), Fraction(1), 0)
BOOL_FORMAT = FixedPointFormat(1, False, 0)


def domain_interval(fmt: FixedPointFormat) -> NumInterval:
    return NumInterval(fmt.min_value, fmt.max_value, fmt.fraction_digits)


def const_interval(value: Fraction) -> NumInterval:
    return NumInterval(value, value, min_fraction_digits(value))


def infer_format(iv: NumInterval, machine_precision: int = DEFAULT_MACHINE_PRECISION) -> FixedPointFormat:
    f = min(iv.frac, machine_precision)
    lo_code = floor(iv.lo * (1 << f))
    hi_code = floor(iv.hi * (1 << f))
    if lo_code < 0:
        n = max((-lo_code - 1).bit_length(), max(hi_code, 0).bit_length()) + 1
        return FixedPointFormat(max(n, f + 1), True, f)
    return FixedPointFormat(max(hi_code.bit_length(), f, 1), False, f)


def common_format(a: FixedPointFormat, b: FixedPointFormat) -> FixedPointFormat:
    """Smallest format both operands embed into without loss (used by bitwise ops)."""
    frac = max(a.fraction_digits, b.fraction_digits)
    signed = a.signed or b.signed

    def int_bits(f):
        return f.size - f.fraction_digits + (1 if signed and not f.signed else 0)

    return FixedPointFormat(max(int_bits(a), int_bits(b)) + frac, signed, frac)


def _add(a, b):
    return NumInterval(a.lo + b.lo, a.hi + b.hi, max(a.frac, b.frac))


def _sub(a, b):
    return NumInterval(a.lo - b.hi, a.hi - b.lo, max(a.frac, b.frac))


def _mul(a, b):
    products = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
    return NumInterval(min(products), max(products), a.frac + b.frac)


def _neg(a):
    return NumInterval(-a.hi, -a.lo, a.frac)


def _combine(op: str, a: NumInterval, b: NumInterval, fa=None, fb=None) -> NumInterval:
    if op == "add":
        return _add(a, b)
    if op == "sub":
        return _sub(a, b)
    if op == "mul":
        return _mul(a, b)
    if op in RELATIONAL_OPS or op in LOGICAL_OPS:
        return BOOL_INTERVAL
    if op in BITWISE_OPS:
        return domain_interval(common_format(fa, fb))
    raise UnsupportedOperator(f"operator '{op}' is not supported on quantum values")


def _resolve_consts(consts):
    out = {}
    for k, v in (consts or {}).items():
        out[k] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def _const_value(value: Fraction, machine_precision: Optional[int]) -> Fraction:
    """Snap a classical constant onto the machine-precision grid."""
    mp = DEFAULT_MACHINE_PRECISION if machine_precision is None else machine_precision
    den = value.denominator
    dyadic = den & (den - 1) == 0
    if machine_precision is None and dyadic:
        return value
    if dyadic and min_fraction_digits(value) <= mp:
        return value
    snapped = snap(value, mp)
    warnings.warn(f"constant {float(value)!r} snapped to {float(snapped)!r} "
                  f"({mp} fraction digits)", LossyConstantWarning, stacklevel=3)
    return snapped


def infer_interval(expr: Expr, var_formats: Mapping[str, FixedPointFormat],
                   consts: Optional[Mapping] = None,
                   machine_precision: Optional[int] = None) -> NumInterval:
    """Sound value interval of ``expr``.

    With ``machine_precision`` set, every intermediate result is assumed
    truncated to at most that many fraction digits, which is what the
    synthesized circuits compute. Without it the interval is of the exact
    (unbounded precision) value.
    """
    consts = _resolve_consts(consts)
    mp = machine_precision

    def fmt_of(iv):
        return infer_format(iv, mp if mp is not None else iv.frac)

    def walk(e) -> NumInterval:
        if isinstance(e, Const):
            return const_interval(_const_value(e.value, mp))
        if isinstance(e, Var):
            if e.name in var_formats:
                return domain_interval(var_formats[e.name])
            if e.name in consts:
                return const_interval(_const_value(consts[e.name], mp))
            raise UnknownVariable(e.name)
        if isinstance(e, Unary):
            a = bounded(walk(e.operand))
            if e.op == "neg":
                return _neg(a)
            if e.op == "not":
                return BOOL_INTERVAL
            if e.op == "bitnot":
                return domain_interval(fmt_of(a))
            raise UnsupportedOperator(e.op)
        if isinstance(e, Binary):
            if e.op in ("pow", "shl", "shr"):
                return walk(desugar(e))
            a = bounded(walk(e.left))
            b = bounded(walk(e.right))
            if e.op in BITWISE_OPS:
                return _combine(e.op, a, b, fmt_of(a), fmt_of(b))
            return _combine(e.op, a, b)
        raise TypeError(f"not an expression node: {e!r}")

    def bounded(iv):
        return iv if mp is None else iv.rounded(mp)

    return walk(expr)


@dataclass
class Annotated:
    """Expression node decorated with the interval and register format it gets.

    ``interval`` is computed from the children's truncated intervals;
    ``fmt`` is the format of the register holding this node's (truncated)
    value. Constants carry their snapped value.
    """
    expr: Expr
    interval: NumInterval
    fmt: FixedPointFormat
    args: list["Annotated"] = field(default_factory=list)
    value: Optional[Fraction] = None

    @property
    def op(self) -> str:
        e = self.expr
        if isinstance(e, (Unary, Binary)):
            return e.op
        return "const" if isinstance(e, Const) else "var"

    @property
    def is_const(self) -> bool:
        return self.value is not None


def annotate(expr: Expr, var_formats: Mapping[str, FixedPointFormat],
             machine_precision: int = DEFAULT_MACHINE_PRECISION) -> Annotated:
    mp = machine_precision
    expr = desugar(expr)

    def walk(e) -> Annotated:
        if isinstance(e, Const):
            v = _const_value(e.value, mp)
            iv = const_interval(v)
            return Annotated(Const(v), iv, infer_format(iv, mp), value=v)
        if isinstance(e, Var):
            if e.name not in var_formats:
                raise UnknownVariable(e.name)
            fmt = var_formats[e.name]
            return Annotated(e, domain_interval(fmt), fmt)
        if isinstance(e, Unary):
            a = walk(e.operand)
            if a.is_const:
                return walk(Const(_fold_unary(e.op, a.value)))
            ai = a.interval.rounded(a.fmt.fraction_digits)
            if e.op == "neg":
                iv = _neg(ai)
            elif e.op == "not":
                iv = BOOL_INTERVAL
            elif e.op == "bitnot":
                iv = domain_interval(a.fmt)
            else:
                raise UnsupportedOperator(e.op)
            fmt = a.fmt if e.op == "bitnot" else infer_format(iv, mp)
            return Annotated(e, iv, fmt, [a])
        if isinstance(e, Binary):
            a, b = walk(e.left), walk(e.right)
            if a.is_const and b.is_const:
                return walk(Const(_fold_binary(e.op, a.value, b.value)))
            ai = a.interval.rounded(a.fmt.fraction_digits)
            bi = b.interval.rounded(b.fmt.fraction_digits)
            iv = _combine(e.op, ai, bi, a.fmt, b.fmt)
            fmt = common_format(a.fmt, b.fmt) if e.op in BITWISE_OPS else infer_format(iv, mp)
            return Annotated(e, iv, fmt, [a, b])
        raise TypeError(f"not an expression node: {e!r}")

    return walk(expr)


def _fold_unary(op, v):
    if op == "neg":
        return -v
    if op == "not":
        return Fraction(int(v == 0))
    raise UnsupportedOperator(f"'{op}' on a classical constant inside a quantum expression")


def _fold_binary(op, a, b):
    table = {
        "add": lambda: a + b, "sub": lambda: a - b, "mul": lambda: a * b,
        "lt": lambda: a < b, "le": lambda: a <= b, "gt": lambda: a > b,
        "ge": lambda: a >= b, "eq": lambda: a == b, "ne": lambda: a != b,
        "and": lambda: bool(a) and bool(b), "or": lambda: bool(a) or bool(b),
    }
    if op not in table:
        raise UnsupportedOperator(f"'{op}' on classical constants inside a quantum expression")
    return Fraction(table[op]())


def evaluate(node: Annotated, values: Mapping[str, Fraction]) -> Fraction:
    """Classical value of an annotated tree under the truncating register semantics."""
    if node.is_const:
        return node.value
    e = node.expr
    if isinstance(e, Var):
        return Fraction(values[e.name])
    args = [evaluate(a, values) for a in node.args]
    op = node.op
    if op == "add":
        v = args[0] + args[1]
    elif op == "sub":
        v = args[0] - args[1]
    elif op == "mul":
        v = args[0] * args[1]
    elif op == "neg":
        v = -args[0]
    elif op in RELATIONAL_OPS or op in ("and", "or"):
        v = Fraction(int(_fold_binary(op, *args)))
    elif op == "not":
        v = Fraction(int(args[0] == 0))
    elif op in BITWISE_OPS:
        f = node.fmt.fraction_digits
        x, y = (int(a * (1 << f)) for a in args)
        code = {"bitand": x & y, "bitor": x | y, "bitxor": x ^ y}[op]
        v = Fraction(code, 1 << f)
    elif op == "bitnot":
        fmt = node.args[0].fmt
        v = fmt.value_of(~fmt.code_of(args[0]))
    else:
        raise UnsupportedOperator(op)
    return node.fmt.wrap(v)
