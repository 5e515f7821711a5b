"""Typed, fully elaborated program tree.

Elaboration inlines every call reachable from ``main`` with concrete
classical values, so the tree below refers directly to storage cells rather
than to names. Call boundaries survive as :class:`TCall` nodes so that the
flow checks and the synthesizer can still see them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from ..frontend.lexer import Span
from ..types.expr import Expr
from ..types.fixedpoint import FixedPointFormat
from .qtypes import QType, numeric_format

_NOSPAN = Span(0, 0)


@dataclass(eq=False)
class Slot:
    """A declared quantum variable (one per declaration per inlined call)."""
    name: str
    declared: QType
    function: str
    role: str  # "local", "param", "output"

    def __repr__(self):
        return f"Slot({self.function}.{self.name})"


_cell_ids = itertools.count()


@dataclass(eq=False)
class Cell:
    """One quantum object: the storage created by a single initialization."""
    name: str
    slot: Slot
    qtype: QType
    id: int = field(default_factory=lambda: next(_cell_ids))

    @property
    def size(self) -> int:
        return self.qtype.size

    def __repr__(self):
        return f"Cell({self.name}#{self.id}, {self.qtype})"


@dataclass(frozen=True, eq=False)
class Ref:
    """A view of ``qtype.size`` consecutive bits of a cell starting at ``offset``."""
    cell: Cell
    offset: int
    qtype: QType
    text: str = ""

    @property
    def size(self) -> int:
        return self.qtype.size

    @property
    def bits(self) -> range:
        return range(self.offset, self.offset + self.size)

    @property
    def fmt(self) -> Optional[FixedPointFormat]:
        return numeric_format(self.qtype)

    @property
    def is_whole(self) -> bool:
        return self.offset == 0 and self.size == self.cell.size

    def overlaps(self, other: "Ref") -> bool:
        return (self.cell is other.cell and self.offset < other.offset + other.size
                and other.offset < self.offset + self.size)

    def __eq__(self, other):
        return (isinstance(other, Ref) and self.cell is other.cell
                and self.offset == other.offset and self.qtype == other.qtype)

    def __hash__(self):
        return hash((id(self.cell), self.offset, self.qtype))

    def __str__(self):
        return self.text or f"{self.cell.name}[{self.offset}:{self.offset + self.size}]"


@dataclass(eq=False)
class TExpr:
    """A quantum expression; every ``Var`` name is a key of ``refs``."""
    expr: Expr
    refs: dict[str, Ref]

    @property
    def formats(self) -> dict[str, FixedPointFormat]:
        return {k: r.fmt for k, r in self.refs.items()}


@dataclass(eq=False)
class TStmt:
    span: Span = field(default=_NOSPAN, kw_only=True)
    origin: str = field(default="main", kw_only=True)


@dataclass(eq=False)
class TAllocate(TStmt):
    cell: Cell


@dataclass(eq=False)
class TAssign(TStmt):
    cell: Cell
    expr: TExpr
    fmt: FixedPointFormat
    declared: bool = False  # target format came from a declaration, not inference


@dataclass(eq=False)
class TInplace(TStmt):
    op: str  # "xor" or "add"
    target: Ref
    expr: TExpr


@dataclass(eq=False)
class TPhase(TStmt):
    expr: TExpr
    angle: float


@dataclass(eq=False)
class TAmplitude(TStmt):
    expr: TExpr
    target: Ref


@dataclass(eq=False)
class TGate(TStmt):
    name: str
    params: tuple[float, ...]
    operands: list[Ref]


@dataclass(eq=False)
class TRelease(TStmt):
    """Scope-exit release of a local that is still initialized."""
    cell: Cell


@dataclass(eq=False)
class TControl(TStmt):
    condition: Union[Ref, TExpr]
    body: list[TStmt]


@dataclass(eq=False)
class TWithin(TStmt):
    within: list[TStmt]
    apply: list[TStmt]
    rolled_back: list[Cell] = field(default_factory=list)


@dataclass(eq=False)
class TInvert(TStmt):
    body: list[TStmt]


@dataclass(eq=False)
class TPower(TStmt):
    count: int
    body: list[TStmt]


@dataclass(eq=False)
class TCall(TStmt):
    name: str
    body: list[TStmt]
    inputs: list[Ref] = field(default_factory=list)
    outputs: list[Slot] = field(default_factory=list)
    captures: list[Ref] = field(default_factory=list)


@dataclass(eq=False)
class OutputVar:
    name: str
    slot: Slot
    cell: Optional[Cell]
    qtype: Optional[QType]


@dataclass(eq=False)
class TypedProgram:
    body: list[TStmt]
    outputs: list[OutputVar]
    machine_precision: int
    filename: str = "<input>"
    warnings: list = field(default_factory=list)
    span: Span = _NOSPAN


def walk(stmts):
    """Pre-order traversal over nested typed statements."""
    for s in stmts:
        yield s
        for child in children(s):
            yield from walk(child)


def children(s) -> list[list[TStmt]]:
    if isinstance(s, TWithin):
        return [s.within, s.apply]
    if isinstance(s, (TControl, TInvert, TPower, TCall)):
        return [s.body]
    return []


def refs_of(s) -> list[Ref]:
    """Quantum views read or written directly by a (non-compound) statement."""
    if isinstance(s, TAssign):
        return list(s.expr.refs.values())
    if isinstance(s, TInplace):
        return [s.target, *s.expr.refs.values()]
    if isinstance(s, TPhase):
        return list(s.expr.refs.values())
    if isinstance(s, TAmplitude):
        return [s.target, *s.expr.refs.values()]
    if isinstance(s, TGate):
        return list(s.operands)
    if isinstance(s, TControl):
        c = s.condition
        return [c] if isinstance(c, Ref) else list(c.refs.values())
    return []
