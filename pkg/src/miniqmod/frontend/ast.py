"""Syntax tree for the external Qmod dialect.

Every node keeps a source span; spans are excluded from equality so that
structurally identical trees compare equal regardless of layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .lexer import Span

_NOSPAN = Span(0, 0)


def _span():
    return field(default=_NOSPAN, compare=False, repr=False)


# ---- types -----------------------------------------------------------------

@dataclass
class QBitType:
    span: Span = _span()


@dataclass
class QNumType:
    size: Optional["Expr"] = None
    signed: Optional[bool] = None
    fraction_digits: Optional["Expr"] = None
    span: Span = _span()


@dataclass
class QArrayType:
    element: "TypeExpr"
    length: Optional["Expr"] = None
    span: Span = _span()


@dataclass
class NamedType:
    name: str
    span: Span = _span()


@dataclass
class IntType:
    span: Span = _span()


@dataclass
class RealType:
    span: Span = _span()


@dataclass
class CArrayType:
    element: "TypeExpr"
    length: Optional["Expr"] = None
    span: Span = _span()


@dataclass
class FuncType:
    params: list["TypeExpr"]
    span: Span = _span()


QUANTUM_TYPES = (QBitType, QNumType, QArrayType, NamedType)
CLASSICAL_TYPES = (IntType, RealType, CArrayType)
TypeExpr = Union[QBitType, QNumType, QArrayType, NamedType, IntType, RealType, CArrayType, FuncType]


# ---- expressions -----------------------------------------------------------

@dataclass
class Num:
    value: Fraction
    text: str = field(default="", compare=False)
    span: Span = _span()


@dataclass
class Name:
    id: str
    span: Span = _span()


@dataclass
class Attr:
    base: "Expr"
    name: str
    span: Span = _span()


@dataclass
class Index:
    base: "Expr"
    index: "Expr"
    span: Span = _span()


@dataclass
class UnaryOp:
    op: str
    operand: "Expr"
    span: Span = _span()


@dataclass
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass
class CallExpr:
    func: str
    args: list["Expr"]
    span: Span = _span()


@dataclass
class Lambda:
    params: list[str]
    body: list["Stmt"]
    span: Span = _span()


Expr = Union[Num, Name, Attr, Index, UnaryOp, BinOp, CallExpr]


def is_path(e) -> bool:
    if isinstance(e, Name):
        return True
    if isinstance(e, Attr):
        return is_path(e.base)
    if isinstance(e, Index):
        return is_path(e.base)
    return False


def path_root(e) -> str:
    while not isinstance(e, Name):
        e = e.base
    return e.id


# ---- statements ------------------------------------------------------------

@dataclass
class Decl:
    name: str
    type: TypeExpr
    span: Span = _span()


@dataclass
class Allocate:
    target: Expr
    size: Optional[Expr] = None
    span: Span = _span()


@dataclass
class Assign:
    op: str  # "|=", "^=", "+="
    target: Expr
    value: Expr
    span: Span = _span()


@dataclass
class Phase:
    expr: Expr
    angle: Expr
    span: Span = _span()


@dataclass
class AssignAmplitude:
    expr: Expr
    target: Expr
    span: Span = _span()


@dataclass
class Control:
    condition: Expr
    body: list["Stmt"]
    span: Span = _span()


@dataclass
class Repeat:
    var: str
    count: Expr
    body: list["Stmt"]
    span: Span = _span()


@dataclass
class WithinApply:
    within: list["Stmt"]
    apply: list["Stmt"]
    span: Span = _span()


@dataclass
class Invert:
    body: list["Stmt"]
    span: Span = _span()


@dataclass
class Power:
    count: Expr
    body: list["Stmt"]
    span: Span = _span()


@dataclass
class Call:
    func: str
    args: list[Union[Expr, Lambda]]
    span: Span = _span()


Stmt = Union[Decl, Allocate, Assign, Phase, AssignAmplitude, Control, Repeat,
             WithinApply, Invert, Power, Call]


# ---- top level -------------------------------------------------------------

@dataclass
class Param:
    name: str
    type: TypeExpr
    is_output: bool = False
    span: Span = _span()

    @property
    def is_quantum(self) -> bool:
        return isinstance(self.type, QUANTUM_TYPES)


@dataclass
class FieldDef:
    name: str
    type: TypeExpr
    span: Span = _span()


@dataclass
class RecordDef:
    name: str
    fields: list[FieldDef]
    span: Span = _span()


@dataclass
class FuncDef:
    name: str
    params: list[Param]
    body: list[Stmt]
    span: Span = _span()


@dataclass
class Program:
    items: list[Union[RecordDef, FuncDef]]
    filename: str = field(default="<input>", compare=False)

    @property
    def records(self) -> dict[str, RecordDef]:
        return {r.name: r for r in self.items if isinstance(r, RecordDef)}

    @property
    def functions(self) -> dict[str, FuncDef]:
        return {f.name: f for f in self.items if isinstance(f, FuncDef)}
