"""Expression trees over quantum variables and classical constants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

ARITH_OPS = {"add", "sub", "mul"}
RELATIONAL_OPS = {"lt", "le", "gt", "ge", "eq", "ne"}
LOGICAL_OPS = {"and", "or"}
BITWISE_OPS = {"bitand", "bitor", "bitxor"}
BINARY_OPS = ARITH_OPS | RELATIONAL_OPS | LOGICAL_OPS | BITWISE_OPS | {"pow", "shl", "shr", "div"}
UNARY_OPS = {"neg", "bitnot", "not"}

SYMBOLS = {
    "add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "**",
    "lt": "<", "le": "<=", "gt": ">", "ge": ">=", "eq": "==", "ne": "!=",
    "and": "and", "or": "or", "bitand": "&", "bitor": "|", "bitxor": "^",
    "shl": "<<", "shr": ">>", "neg": "-", "bitnot": "~", "not": "not ",
}


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"

    def __str__(self):
        return f"{SYMBOLS[self.op]}({self.operand})"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"({self.left} {SYMBOLS[self.op]} {self.right})"


Expr = Union[Const, Var, Unary, Binary]


class UnsupportedOperator(ValueError):
    pass


class UnknownVariable(KeyError):
    pass


def variables(expr: Expr) -> list[str]:
    """Distinct variable names in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(e):
        if isinstance(e, Var):
            seen.setdefault(e.name)
        elif isinstance(e, Unary):
            walk(e.operand)
        elif isinstance(e, Binary):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return list(seen)


def is_boolean_op(expr: Expr) -> bool:
    if isinstance(expr, Binary):
        return expr.op in RELATIONAL_OPS or expr.op in LOGICAL_OPS
    return isinstance(expr, Unary) and expr.op == "not"


def desugar(expr: Expr) -> Expr:
    """Rewrite shifts into multiplications by powers of two and pow into mul chains.

    Left-folded: ``x**3`` becomes ``(x*x)*x``.
    """
    if isinstance(expr, Unary):
        return Unary(expr.op, desugar(expr.operand))
    if not isinstance(expr, Binary):
        return expr
    left = desugar(expr.left)
    if expr.op in ("shl", "shr", "pow"):
        k = _int_exponent(expr.right, expr.op)
        if expr.op == "shl":
            return Binary("mul", left, Const(Fraction(2) ** k))
        if expr.op == "shr":
            return Binary("mul", left, Const(Fraction(1, 2 ** k)))
        if k == 0:
            return Const(Fraction(1))
        out = left
        for _ in range(k - 1):
            out = Binary("mul", out, left)
        return out
    return Binary(expr.op, left, desugar(expr.right))


def _int_exponent(e: Expr, op: str) -> int:
    if not isinstance(e, Const) or e.value.denominator != 1 or e.value < 0:
        raise UnsupportedOperator(f"'{SYMBOLS[op]}' needs a non-negative classical integer on the right")
    return int(e.value)
