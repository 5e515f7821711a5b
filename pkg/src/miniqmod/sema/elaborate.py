"""Name resolution, type checking and call inlining.

Starting from ``main``, every call is expanded with its concrete classical
arguments, ``repeat`` loops are unrolled and each quantum path is resolved to
a bit range of a storage cell. The result is a :class:`TypedProgram`.
"""
from __future__ import annotations

import warnings
from collections import ChainMap
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..frontend import ast
from ..frontend.classical import EvalError, eval_classical, require_int
from ..frontend.lexer import Span
from ..types import expr as E
from ..types.fixedpoint import FixedPointFormat
from ..types.interval import (DEFAULT_MACHINE_PRECISION, LossyConstantWarning, annotate,
                              infer_format, infer_interval)
from .diagnostics import ERROR, WARNING, Diagnostic, SemaError
from .qtypes import QArray, QBit, QNum, QRecord, QType, close_type, numeric_format
from .typed import (Cell, Ref, Slot, TAllocate, TAmplitude, TAssign, TCall, TControl, TExpr,
                    TGate, TInplace, TInvert, OutputVar, TPhase, TPower, TRelease, TStmt,
                    TWithin, TypedProgram, refs_of, walk)

MAX_CALL_DEPTH = 64
MAX_UNROLLED_STATEMENTS = 200_000

_ASSIGN_OPS = {"^=": "xor", "+=": "add"}

# name -> (number of leading classical angle arguments, quantum operand types)
BUILTIN_GATES: dict[str, tuple[int, tuple[QType, ...]]] = {
    "H": (0, (QBit(),)), "X": (0, (QBit(),)), "Y": (0, (QBit(),)), "Z": (0, (QBit(),)),
    "S": (0, (QBit(),)), "T": (0, (QBit(),)),
    "RX": (1, (QBit(),)), "RY": (1, (QBit(),)), "RZ": (1, (QBit(),)),
    "CX": (0, (QBit(), QBit())),
    "CCX": (0, (QArray(QBit(), 2), QBit())),
    "SWAP": (0, (QBit(), QBit())),
    "hadamard_transform": (0, (QArray(QBit()),)),
}

_CLASSICAL_ATTRS = ("size", "len")


class _Abort(Exception):
    """Unwinds the current statement after a diagnostic has been recorded."""


# ---- bindings --------------------------------------------------------------

@dataclass
class Classical:
    value: Union[Fraction, list]


@dataclass
class SlotBinding:
    slot: Slot
    view: QType


@dataclass
class RefBinding:
    ref: Ref


@dataclass
class Closure:
    node: ast.Lambda
    env: Mapping
    function: str


@dataclass
class FuncBinding:
    target: Union[ast.FuncDef, Closure, str]
    param_types: Optional[list] = None


class _ClassicalView(Mapping):
    def __init__(self, env: Mapping):
        self.env = env

    def __getitem__(self, key):
        b = self.env[key]
        if isinstance(b, Classical):
            return b.value
        raise KeyError(key)

    def __iter__(self):
        return (k for k, v in self.env.items() if isinstance(v, Classical))

    def __len__(self):
        return sum(1 for _ in self)


class _Frame:
    def __init__(self, name: str, locals_: list[Slot]):
        self.name = name
        self.locals = locals_


# ---- the elaborator --------------------------------------------------------

class Elaborator:
    def __init__(self, program: ast.Program, consts: Optional[Mapping] = None,
                 machine_precision: int = DEFAULT_MACHINE_PRECISION):
        self.program = program
        self.filename = program.filename
        self.mp = machine_precision
        self.diagnostics: list[Diagnostic] = []
        self.current: dict[Slot, Optional[Cell]] = {}
        self.functions: dict[str, ast.FuncDef] = {}
        self.records: dict[str, QRecord] = {}
        self.frames: list[_Frame] = []
        self.emitted = 0
        self.globals = {k: Classical(_to_value(v)) for k, v in (consts or {}).items()}

    # ---- diagnostics ----

    def error(self, message: str, span: Span, hint: Optional[str] = None):
        self.diagnostics.append(Diagnostic(ERROR, message, span or Span(0, 0), hint, self.filename))
        raise _Abort()

    def warn(self, message: str, span: Span, hint: Optional[str] = None):
        self.diagnostics.append(Diagnostic(WARNING, message, span or Span(0, 0), hint, self.filename))

    def guarded(self, fn, *args):
        try:
            return fn(*args)
        except _Abort:
            return None

    # ---- declarations ----

    def collect(self):
        for item in self.program.items:
            if isinstance(item, ast.RecordDef):
                if item.name in self.records or any(
                        isinstance(o, ast.RecordDef) and o.name == item.name and o is not item
                        for o in self.program.items[:self.program.items.index(item)]):
                    self.guarded(self.error, f"record '{item.name}' is defined more than once", item.span)
            elif isinstance(item, ast.FuncDef):
                if item.name in self.functions:
                    self.guarded(self.error, f"function '{item.name}' is defined more than once", item.span)
                    continue
                self.functions[item.name] = item
                seen = set()
                for p in item.params:
                    if p.name in seen:
                        self.guarded(self.error, f"duplicate parameter '{p.name}' in '{item.name}'", p.span)
                    seen.add(p.name)
                    if p.is_output and not p.is_quantum:
                        self.guarded(self.error, f"classical parameter '{p.name}' cannot be an output", p.span)
        defs = self.program.records
        for name in defs:
            self.guarded(self.record_type, name, defs, ())

    def record_type(self, name: str, defs, stack) -> QRecord:
        if name in self.records:
            return self.records[name]
        rd = defs[name]
        if name in stack:
            self.error(f"record '{name}' contains itself", rd.span)
        fields, seen = [], set()
        for f in rd.fields:
            if f.name in seen:
                self.error(f"duplicate field '{f.name}' in record '{name}'", f.span)
            seen.add(f.name)
            t = self.qtype(f.type, self.globals, stack + (name,))
            if t.is_open:
                self.error(f"field '{f.name}' of record '{name}' needs a fixed size", f.span)
            fields.append((f.name, t))
        if not fields:
            self.error(f"record '{name}' has no fields", rd.span)
        rec = QRecord(name, tuple(fields))
        self.records[name] = rec
        return rec

    # ---- classical evaluation ----

    def classical(self, node, env, what="value"):
        try:
            return eval_classical(node, _ClassicalView(env), lambda a: self.quantum_attr(a, env))
        except EvalError as exc:
            self.error(exc.message, exc.span or getattr(node, "span", None))

    def classical_int(self, node, env, what: str) -> int:
        v = self.classical(node, env, what)
        try:
            return require_int(v, what)
        except EvalError as exc:
            self.error(exc.message, node.span)

    def quantum_attr(self, node: ast.Attr, env):
        if node.name not in _CLASSICAL_ATTRS or not ast.is_path(node.base):
            return None
        if not isinstance(env.get(ast.path_root(node.base)), (SlotBinding, RefBinding)):
            return None
        t = self.path_type(node.base, env)
        if node.name == "size":
            if t.size is None:
                self.error(f"size of '{_text(node.base)}' is not known yet", node.span)
            return t.size
        if not isinstance(t, QArray):
            self.error(f"'.len' requires an array, '{_text(node.base)}' is {t}", node.span)
        if t.length is None:
            self.error(f"length of '{_text(node.base)}' is not known yet", node.span)
        return t.length

    # ---- types ----

    def qtype(self, t, env, stack=()) -> QType:
        if isinstance(t, ast.QBitType):
            return QBit()
        if isinstance(t, ast.QNumType):
            if t.size is None:
                return QNum()
            size = self.classical_int(t.size, env, "qnum size")
            signed = bool(t.signed)
            frac = 0 if t.fraction_digits is None else self.classical_int(t.fraction_digits, env,
                                                                          "fraction digits")
            try:
                return QNum(FixedPointFormat(size, signed, frac))
            except ValueError as exc:
                self.error(str(exc), t.span)
        if isinstance(t, ast.QArrayType):
            elem = self.qtype(t.element, env, stack)
            if t.length is None:
                return QArray(elem)
            n = self.classical_int(t.length, env, "array length")
            if n < 1:
                self.error(f"array length must be positive, got {n}", t.length.span)
            return QArray(elem, n)
        if isinstance(t, ast.NamedType):
            defs = self.program.records
            if t.name not in defs:
                self.error(f"unknown type '{t.name}'", t.span)
            return self.record_type(t.name, defs, stack)
        self.error("expected a quantum type", t.span)

    # ---- paths ----

    def cell_of(self, slot: Slot, name: str, span) -> Cell:
        cell = self.current.get(slot)
        if cell is None:
            self.error(f"use of uninitialized variable '{name}'", span,
                       "initialize it with allocate(...) or '|=' first")
        return cell

    def binding_ref(self, name: str, b, span) -> Ref:
        if isinstance(b, RefBinding):
            return Ref(b.ref.cell, b.ref.offset, b.ref.qtype, name)
        cell = self.cell_of(b.slot, name, span)
        t = close_type(b.view, cell.size, cell.qtype)
        if t is None:
            self.error(f"'{name}' of type {b.view} cannot view an object of {cell.size} qubits", span)
        return Ref(cell, 0, t, name)

    def resolve_path(self, node, env) -> Ref:
        if isinstance(node, ast.Name):
            b = env.get(node.id)
            if b is None:
                self.error(f"unknown identifier '{node.id}'", node.span)
            if not isinstance(b, (SlotBinding, RefBinding)):
                self.error(f"'{node.id}' is not a quantum variable", node.span)
            return self.binding_ref(node.id, b, node.span)
        if isinstance(node, ast.Attr):
            base = self.resolve_path(node.base, env)
            if not isinstance(base.qtype, QRecord):
                self.error(f"'{base}' of type {base.qtype} has no field '{node.name}'", node.span)
            try:
                off, ft = base.qtype.field(node.name)
            except KeyError:
                self.error(f"record {base.qtype.name} has no field '{node.name}'", node.span)
            return Ref(base.cell, base.offset + off, ft, f"{base}.{node.name}")
        if isinstance(node, ast.Index):
            base = self.resolve_path(node.base, env)
            if not isinstance(base.qtype, QArray):
                self.error(f"'{base}' of type {base.qtype} cannot be indexed", node.span)
            i = self.classical_int(node.index, env, "array index")
            if not 0 <= i < base.qtype.length:
                self.error(f"index {i} out of range for '{base}' of length {base.qtype.length}", node.span)
            elem = base.qtype.element
            return Ref(base.cell, base.offset + i * elem.size, elem, f"{base}[{i}]")
        self.error("expected a quantum variable path", getattr(node, "span", None))

    def path_type(self, node, env) -> QType:
        """Type of a path; works for uninitialized variables with a known type."""
        if isinstance(node, ast.Name):
            b = env.get(node.id)
            if isinstance(b, SlotBinding) and self.current.get(b.slot) is None:
                return b.view
        return self.resolve_path(node, env).qtype

    def slot_target(self, node, env, what: str) -> SlotBinding:
        if not isinstance(node, ast.Name):
            self.error(f"{what} must be a plain variable name", node.span)
        b = env.get(node.id)
        if b is None:
            self.error(f"unknown identifier '{node.id}'", node.span)
        if not isinstance(b, SlotBinding):
            self.error(f"'{node.id}' cannot be initialized here; it is not an output or local variable",
                       node.span)
        return b

    def init_slot(self, b: SlotBinding, storage: QType, name: str) -> Cell:
        cell = Cell(name, b.slot, storage)
        self.current[b.slot] = cell
        return cell

    # ---- expressions ----

    def is_quantum(self, node, env) -> bool:
        if isinstance(node, ast.Name):
            return isinstance(env.get(node.id), (SlotBinding, RefBinding))
        if isinstance(node, ast.Attr):
            if node.name in _CLASSICAL_ATTRS and ast.is_path(node.base) and self.is_quantum(node.base, env):
                return False
            return self.is_quantum(node.base, env)
        if isinstance(node, ast.Index):
            return self.is_quantum(node.base, env) or self.is_quantum(node.index, env)
        if isinstance(node, ast.UnaryOp):
            return self.is_quantum(node.operand, env)
        if isinstance(node, ast.BinOp):
            return self.is_quantum(node.left, env) or self.is_quantum(node.right, env)
        if isinstance(node, ast.CallExpr):
            return any(self.is_quantum(a, env) for a in node.args)
        return False

    def texpr(self, node, env, span) -> TExpr:
        refs: dict[str, Ref] = {}

        def var(ref: Ref) -> E.Var:
            for k, r in refs.items():
                if r == ref:
                    return E.Var(k)
            key = str(ref)
            n = 1
            while key in refs:
                n += 1
                key = f"{ref}~{n}"
            refs[key] = ref
            return E.Var(key)

        def conv(e):
            if not self.is_quantum(e, env):
                v = self.classical(e, env)
                if isinstance(v, list):
                    self.error("array value used where a number is required", e.span)
                return E.Const(v)
            if ast.is_path(e):
                ref = self.resolve_path(e, env)
                if ref.fmt is None:
                    self.error(f"'{ref}' of type {ref.qtype} cannot be used in an arithmetic expression",
                               e.span, "only qbit and qnum values take part in expressions")
                return var(ref)
            if isinstance(e, ast.UnaryOp):
                return E.Unary(e.op, conv(e.operand))
            if isinstance(e, ast.BinOp):
                if e.op == "div":
                    if self.is_quantum(e.right, env):
                        self.error("division by a quantum value is not supported", e.span)
                    d = self.classical(e.right, env)
                    if isinstance(d, list) or d == 0:
                        self.error("division by zero" if d == 0 else "array used as a divisor", e.span)
                    return E.Binary("mul", conv(e.left), E.Const(1 / Fraction(d)))
                if e.op in ("pow", "shl", "shr"):
                    if self.is_quantum(e.right, env):
                        self.error(f"the right operand of '{E.SYMBOLS.get(e.op, e.op)}' must be classical",
                                   e.span)
                    k = self.classical_int(e.right, env, "exponent" if e.op == "pow" else "shift count")
                    if k < 0:
                        self.error(f"{'exponent' if e.op == 'pow' else 'shift count'} must be non-negative",
                                   e.right.span)
                    return E.Binary(e.op, conv(e.left), E.Const(Fraction(k)))
                return E.Binary(e.op, conv(e.left), conv(e.right))
            if isinstance(e, ast.CallExpr):
                self.error(f"function '{e.func}' cannot be applied to quantum values", e.span)
            self.error("unsupported expression", getattr(e, "span", span))

        out = TExpr(conv(node), refs)
        self.check_expr(out, span)
        return out

    def annotate(self, te: TExpr, span):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", LossyConstantWarning)
            try:
                ann = annotate(te.expr, te.formats, self.mp)
            except (E.UnsupportedOperator, ValueError) as exc:
                self.error(str(exc), span)
        seen = set()
        for w in caught:
            msg = str(w.message)
            if issubclass(w.category, LossyConstantWarning) and msg not in seen:
                seen.add(msg)
                self.warn(msg, span)
        return ann

    def check_expr(self, te: TExpr, span):
        ann = self.annotate(te, span)

        def walk_(n):
            if n.op in ("and", "or", "not"):
                for a in n.args:
                    if a.fmt.size != 1 or a.fmt.signed or a.fmt.fraction_digits:
                        self.error(f"operand of '{n.op}' must be a single-bit boolean, got {a.fmt}", span,
                                   "compare with a relational operator or use the bitwise '&', '|', '^'")
            for a in n.args:
                walk_(a)
        walk_(ann)
        return ann

    def result_format(self, te: TExpr, span) -> FixedPointFormat:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LossyConstantWarning)
            iv = infer_interval(te.expr, te.formats, machine_precision=self.mp)
        return infer_format(iv, self.mp)

    # ---- statements ----

    def block(self, stmts, env) -> list[TStmt]:
        out = []
        for s in stmts:
            try:
                out.extend(self.stmt(s, env))
            except _Abort:
                pass
        return out

    def tag(self, s: TStmt, span) -> TStmt:
        s.span = span
        s.origin = self.frames[-1].name if self.frames else "main"
        self.emitted += 1
        if self.emitted > MAX_UNROLLED_STATEMENTS:
            self.error("program expands to too many statements", span)
        return s

    def stmt(self, s, env) -> list[TStmt]:
        span = s.span
        if isinstance(s, ast.Decl):
            if s.name in env.maps[0]:
                self.error(f"'{s.name}' is already declared in this scope", span)
            if s.name in self.functions or s.name in BUILTIN_GATES:
                self.error(f"'{s.name}' shadows a function name", span)
            t = self.qtype(s.type, env)
            slot = Slot(s.name, t, self.frames[-1].name, "local")
            env.maps[0][s.name] = SlotBinding(slot, t)
            self.current[slot] = None
            self.frames[-1].locals.append(slot)
            return []
        if isinstance(s, ast.Allocate):
            b = self.slot_target(s.target, env, "allocation target")
            name = s.target.id
            if s.size is not None:
                n = self.classical_int(s.size, env, "allocation size")
                if n < 1:
                    self.error(f"allocation size must be positive, got {n}", s.size.span)
                storage = close_type(b.view, n)
                if storage is None:
                    self.error(f"cannot allocate {n} qubits for '{name}' of type {b.view}", span)
            else:
                if b.view.is_open:
                    self.error(f"cannot allocate '{name}': its size is not known", span,
                               f"use allocate(size, {name})")
                storage = b.view
            return [self.tag(TAllocate(self.init_slot(b, storage, name)), span)]
        if isinstance(s, ast.Assign):
            if s.op == "|=":
                return [self.assign(s, env)]
            target = self.resolve_path(s.target, env)
            if target.fmt is None:
                self.error(f"in-place target '{target}' of type {target.qtype} is not numeric", span)
            te = self.texpr(s.value, env, span)
            for r in te.refs.values():
                if r.overlaps(target):
                    self.error(f"'{target}' appears in its own in-place expression", span)
            return [self.tag(TInplace(_ASSIGN_OPS[s.op], target, te), span)]
        if isinstance(s, ast.Phase):
            te = self.texpr(s.expr, env, span)
            angle = self.classical(s.angle, env)
            if isinstance(angle, list):
                self.error("phase angle must be a number", s.angle.span)
            return [self.tag(TPhase(te, float(angle)), span)]
        if isinstance(s, ast.AssignAmplitude):
            target = self.resolve_path(s.target, env)
            if target.size != 1:
                self.error(f"amplitude indicator '{target}' must be a single qubit, got {target.qtype}", span)
            te = self.texpr(s.expr, env, span)
            for r in te.refs.values():
                if r.overlaps(target):
                    self.error(f"indicator '{target}' appears in the encoded expression", span)
            return [self.tag(TAmplitude(te, target), span)]
        if isinstance(s, ast.Control):
            return self.control(s, env)
        if isinstance(s, ast.Repeat):
            n = self.classical_int(s.count, env, "repeat count")
            if n < 0:
                self.error(f"repeat count must be non-negative, got {n}", s.count.span)
            out = []
            for i in range(n):
                out.extend(self.block(s.body, env.new_child({s.var: Classical(Fraction(i))})))
            return out
        if isinstance(s, ast.WithinApply):
            return [self.within_apply(s, env)]
        if isinstance(s, ast.Invert):
            return [self.tag(TInvert(self.block(s.body, env)), span)]
        if isinstance(s, ast.Power):
            n = self.classical_int(s.count, env, "power count")
            if n < 0:
                self.error(f"power count must be non-negative, got {n}", s.count.span)
            return [self.tag(TPower(n, self.block(s.body, env)), span)]
        if isinstance(s, ast.Call):
            return [self.call(s, env)]
        self.error("unsupported statement", span)

    def assign(self, s: ast.Assign, env) -> TStmt:
        b = self.slot_target(s.target, env, "out-of-place assignment target")
        name = s.target.id
        if isinstance(b.view, (QArray, QRecord)):
            self.error(f"cannot assign a number to '{name}' of type {b.view}", s.span)
        te = self.texpr(s.value, env, s.span)
        inferred = self.result_format(te, s.span)
        declared = numeric_format(b.view)
        fmt = declared or inferred
        storage = b.view if declared is not None else QNum(fmt)
        cell = self.init_slot(b, storage, name)
        return self.tag(TAssign(cell, te, fmt, declared=declared is not None), s.span)

    def control(self, s: ast.Control, env) -> list[TStmt]:
        span = s.span
        if not self.is_quantum(s.condition, env):
            v = self.classical(s.condition, env)
            if isinstance(v, list):
                self.error("control condition must be a number", span)
            return self.block(s.body, env) if v != 0 else []
        cond: Union[Ref, TExpr]
        if ast.is_path(s.condition):
            ref = self.resolve_path(s.condition, env)
            cond = ref if ref.size == 1 else self.texpr(s.condition, env, span)
        else:
            cond = self.texpr(s.condition, env, span)
        if isinstance(cond, TExpr):
            fmt = self.result_format(cond, span)
            if fmt.size != 1 or fmt.signed or fmt.fraction_digits:
                self.error(f"control condition must be boolean, its values need format {fmt}", span,
                           "compare it with a relational operator")
        body = self.block(s.body, env)
        cond_refs = [cond] if isinstance(cond, Ref) else list(cond.refs.values())
        for inner in walk(body):
            for r in refs_of(inner):
                if any(r.overlaps(c) for c in cond_refs):
                    self.error(f"'{r}' is used inside a block controlled on it", inner.span)
        return [self.tag(TControl(cond, body), span)]

    def within_apply(self, s: ast.WithinApply, env) -> TStmt:
        before = dict(self.current)
        within = self.block(s.within, env)
        created = [slot for slot, cell in self.current.items()
                   if cell is not None and before.get(slot) is not cell]
        rolled = [self.current[slot] for slot in created]
        apply = self.block(s.apply, env)
        for slot in created:
            self.current[slot] = None
        return self.tag(TWithin(within, apply, rolled), s.span)

    # ---- calls ----

    def lookup_function(self, name: str, env, span):
        b = env.get(name)
        if isinstance(b, FuncBinding):
            return b
        if b is not None:
            self.error(f"'{name}' is not callable", span)
        if name in self.functions:
            return FuncBinding(self.functions[name])
        if name in BUILTIN_GATES:
            return FuncBinding(name)
        self.error(f"unknown function '{name}'", span)

    def call(self, s: ast.Call, env) -> TStmt:
        fb = self.lookup_function(s.func, env, s.span)
        if len(self.frames) >= MAX_CALL_DEPTH:
            self.error(f"call depth limit ({MAX_CALL_DEPTH}) exceeded; is '{s.func}' recursive?", s.span)
        if isinstance(fb.target, str):
            return self.builtin(fb.target, s, env)
        if isinstance(fb.target, Closure):
            return self.call_lambda(s, fb, env)
        return self.call_function(fb.target, s, env)

    def builtin(self, name: str, s: ast.Call, env) -> TStmt:
        n_angles, qparams = BUILTIN_GATES[name]
        if len(s.args) != n_angles + len(qparams):
            self.error(f"'{name}' takes {n_angles + len(qparams)} arguments, got {len(s.args)}", s.span)
        angles = []
        for a in s.args[:n_angles]:
            if isinstance(a, ast.Lambda) or self.is_quantum(a, env):
                self.error(f"angle argument of '{name}' must be classical", a.span)
            v = self.classical(a, env)
            if isinstance(v, list):
                self.error(f"angle argument of '{name}' must be a number", a.span)
            angles.append(float(v))
        refs = []
        for a, pt in zip(s.args[n_angles:], qparams):
            if isinstance(a, ast.Lambda) or not ast.is_path(a):
                self.error(f"argument of '{name}' must be a quantum variable path", a.span)
            refs.append(self.bind_view(self.resolve_path(a, env), pt, a.span, name))
        self.check_aliasing(refs, [], s.span)
        if name == "hadamard_transform":
            r = refs[0]
            body = [self.tag(TGate("H", (), [Ref(r.cell, r.offset + i, QBit(), f"{r}[{i}]")]), s.span)
                    for i in range(r.size)]
            return self.tag(TCall(name, body, inputs=refs), s.span)
        return self.tag(TGate(name, tuple(angles), refs), s.span)

    def bind_view(self, ref: Ref, declared: QType, span, fname: str) -> Ref:
        """Packed-view conversion of an argument to a parameter type."""
        if declared.is_open:
            t = close_type(declared, ref.size, ref.qtype)
        else:
            t = declared if declared.size == ref.size else None
        if t is None:
            self.error(f"argument '{ref}' of type {ref.qtype} ({ref.size} qubits) does not fit "
                       f"parameter type {declared} of '{fname}'", span)
        return Ref(ref.cell, ref.offset, t, ref.text)

    def check_aliasing(self, refs: list[Ref], slots: list[tuple[Slot, str]], span):
        for i, a in enumerate(refs):
            for b in refs[i + 1:]:
                if a.overlaps(b):
                    self.error(f"'{a}' and '{b}' refer to overlapping quantum objects in one call", span)
        seen = {}
        for slot, name in slots:
            if slot in seen:
                self.error(f"'{name}' is passed twice as an output", span)
            seen[slot] = name

    def captures(self, lam: ast.Lambda, env) -> list[Ref]:
        names = set()

        def visit(node):
            if isinstance(node, ast.Name):
                names.add(node.id)
                return
            if isinstance(node, (list, tuple)):
                for x in node:
                    visit(x)
                return
            if hasattr(node, "__dataclass_fields__"):
                for f in node.__dataclass_fields__:
                    if f != "span":
                        visit(getattr(node, f))

        visit(lam.body)
        out = []
        for n in sorted(names - set(lam.params)):
            b = env.get(n)
            if isinstance(b, RefBinding):
                out.append(Ref(b.ref.cell, b.ref.offset, b.ref.qtype, n))
            elif isinstance(b, SlotBinding) and self.current.get(b.slot) is not None:
                out.append(self.binding_ref(n, b, lam.span))
        return out

    def call_function(self, fd: ast.FuncDef, s: ast.Call, env) -> TStmt:
        if len(s.args) != len(fd.params):
            self.error(f"'{fd.name}' takes {len(fd.params)} arguments, got {len(s.args)}", s.span)
        scope: dict = {}
        inputs: list[Ref] = []
        outputs: list[tuple[Slot, str]] = []
        captured: list[Ref] = []
        callee_env = ChainMap(scope, self.globals)
        for p, a in zip(fd.params, s.args):
            if isinstance(p.type, ast.FuncType):
                ptypes = [self.qtype(t, callee_env) for t in p.type.params]
                if isinstance(a, ast.Lambda):
                    if len(a.params) != len(ptypes):
                        self.error(f"lambda for '{p.name}' takes {len(a.params)} parameters, "
                                   f"expected {len(ptypes)}", a.span)
                    scope[p.name] = FuncBinding(Closure(a, env, self.frames[-1].name), ptypes)
                    captured.extend(self.captures(a, env))
                elif isinstance(a, ast.Name):
                    scope[p.name] = FuncBinding(self.lookup_function(a.id, env, a.span).target, ptypes)
                else:
                    self.error(f"argument for '{p.name}' must be a function or a lambda", a.span)
            elif isinstance(a, ast.Lambda):
                self.error(f"parameter '{p.name}' of '{fd.name}' does not take a function", a.span)
            elif not p.is_quantum:
                if self.is_quantum(a, env):
                    self.error(f"parameter '{p.name}' of '{fd.name}' is classical", a.span)
                scope[p.name] = Classical(self.classical_arg(p, self.classical(a, env), callee_env, a.span))
            elif p.is_output:
                b = self.slot_target(a, env, f"output argument for '{p.name}'")
                declared = self.qtype(p.type, callee_env)
                view = declared
                if declared.is_open and not b.view.is_open:
                    view = close_type(declared, b.view.size, b.view)
                if view is None or (not view.is_open and not b.view.is_open and view.size != b.view.size):
                    self.error(f"output argument '{a.id}' of type {b.view} does not fit parameter "
                               f"type {declared} of '{fd.name}'", a.span)
                scope[p.name] = SlotBinding(b.slot, view)
                outputs.append((b.slot, a.id))
            else:
                if not ast.is_path(a):
                    self.error(f"argument for quantum parameter '{p.name}' must be a variable path", a.span)
                ref = self.bind_view(self.resolve_path(a, env), self.qtype(p.type, callee_env), a.span,
                                     fd.name)
                scope[p.name] = RefBinding(ref)
                inputs.append(ref)
        self.check_aliasing(inputs + captured, outputs, s.span)
        body, out_slots = self.enter(fd.name, fd.body, callee_env, outputs, s.span)
        return self.tag(TCall(fd.name, body, inputs=inputs, outputs=out_slots, captures=captured), s.span)

    def classical_arg(self, p: ast.Param, v, env, span):
        t = p.type
        if isinstance(t, ast.IntType):
            if isinstance(v, list) or v.denominator != 1:
                self.error(f"parameter '{p.name}' expects an int", span)
        elif isinstance(t, ast.RealType):
            if isinstance(v, list):
                self.error(f"parameter '{p.name}' expects a real number", span)
        elif isinstance(t, ast.CArrayType):
            if not isinstance(v, list):
                self.error(f"parameter '{p.name}' expects an array", span)
            if t.length is not None:
                n = self.classical_int(t.length, env, "array length")
                if len(v) != n:
                    self.error(f"parameter '{p.name}' expects {n} elements, got {len(v)}", span)
            if isinstance(t.element, ast.IntType) and any(
                    isinstance(x, list) or x.denominator != 1 for x in v):
                self.error(f"parameter '{p.name}' expects integers", span)
        return v

    def call_lambda(self, s: ast.Call, fb: FuncBinding, env) -> TStmt:
        clo: Closure = fb.target
        lam = clo.node
        if len(s.args) != len(lam.params):
            self.error(f"'{s.func}' takes {len(lam.params)} arguments, got {len(s.args)}", s.span)
        scope: dict = {}
        inputs = []
        for name, t, a in zip(lam.params, fb.param_types or [QArray(QBit())] * len(lam.params), s.args):
            if isinstance(a, ast.Lambda) or not ast.is_path(a):
                self.error(f"argument for '{name}' must be a quantum variable path", getattr(a, "span", s.span))
            ref = self.bind_view(self.resolve_path(a, env), t, a.span, s.func)
            scope[name] = RefBinding(ref)
            inputs.append(ref)
        captured = self.captures(lam, clo.env)
        self.check_aliasing(inputs, [], s.span)
        for r in inputs:
            for c in captured:
                if r.overlaps(c):
                    self.error(f"'{r}' is passed to '{s.func}', which already captures '{c}'", s.span)
        body, _ = self.enter(clo.function, lam.body, ChainMap(scope, clo.env), [], s.span)
        return self.tag(TCall(s.func, body, inputs=inputs, captures=captured), s.span)

    def enter(self, name: str, body, env, outputs, span):
        frame = _Frame(name, [])
        self.frames.append(frame)
        try:
            out = self.block(body, env)
        finally:
            self.frames.pop()
        for slot in frame.locals:
            cell = self.current.get(slot)
            if cell is not None:
                self.warn(f"local '{slot.name}' of '{name}' is still initialized at the end of the "
                          f"function and is released; it must be back in the zero state", span)
                rel = TRelease(cell)
                rel.span, rel.origin = span, name
                out.append(rel)
                self.current[slot] = None
        for slot, arg in outputs:
            cell = self.current.get(slot)
            if cell is not None:
                self.binding_ref(arg, SlotBinding(slot, slot.declared), span)
        return out, [slot for slot, _ in outputs]

    # ---- entry point ----

    def run(self, entry: str = "main", args: Optional[Mapping] = None) -> TypedProgram:
        self.collect()
        fd = self.functions.get(entry)
        if fd is None:
            self.diagnostics.append(Diagnostic(ERROR, f"no '{entry}' function", Span(1, 1), None,
                                               self.filename))
            raise SemaError(self.diagnostics)
        args = {k: _to_value(v) for k, v in (args or {}).items()}
        scope: dict = {}
        env = ChainMap(scope, self.globals)
        outputs = []
        for p in fd.params:
            try:
                if isinstance(p.type, ast.FuncType):
                    self.error(f"'{entry}' cannot take function parameter '{p.name}'", p.span)
                if p.is_quantum:
                    t = self.qtype(p.type, env)
                    if not p.is_output:
                        self.error(f"quantum parameter '{p.name}' of '{entry}' must be an output", p.span,
                                   f"declare it as '{p.name}: output {t}'")
                    slot = Slot(p.name, t, entry, "output")
                    scope[p.name] = SlotBinding(slot, t)
                    self.current[slot] = None
                    outputs.append((p.name, slot))
                else:
                    if p.name not in args:
                        self.error(f"no value given for classical parameter '{p.name}' of '{entry}'",
                                   p.span, f"pass it with --arg {p.name}=...")
                    scope[p.name] = Classical(self.classical_arg(p, args[p.name], env, p.span))
            except _Abort:
                pass
        for k in args:
            if k not in {p.name for p in fd.params}:
                self.guarded(self.error, f"'{entry}' has no parameter '{k}'", fd.span)
        if any(d.is_error for d in self.diagnostics):
            raise SemaError(self.diagnostics)
        frame = _Frame(entry, [])
        self.frames.append(frame)
        body = self.block(fd.body, env)
        self.frames.pop()
        out_vars = []
        for name, slot in outputs:
            cell = self.current.get(slot)
            qt = None
            if cell is not None:
                qt = close_type(slot.declared, cell.size, cell.qtype)
                if qt is None:
                    self.guarded(self.error, f"output '{name}' of type {slot.declared} cannot hold "
                                             f"{cell.qtype}", fd.span)
            out_vars.append(OutputVar(name, slot, cell, qt))
        if any(d.is_error for d in self.diagnostics):
            raise SemaError(self.diagnostics)
        return TypedProgram(body, out_vars, self.mp, self.filename,
                            [d for d in self.diagnostics if not d.is_error], span=fd.span)


def _to_value(v):
    if isinstance(v, (list, tuple)):
        return [_to_value(x) for x in v]
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


def _text(node) -> str:
    from ..frontend.printer import format_expr
    return format_expr(node)


def resolve_and_typecheck(program: ast.Program, args: Optional[Mapping] = None,
                          consts: Optional[Mapping] = None,
                          machine_precision: int = DEFAULT_MACHINE_PRECISION,
                          entry: str = "main") -> TypedProgram:
    """Elaborate ``program`` from ``entry``.

    Raises :class:`SemaError` carrying every diagnostic when any error was
    found; warnings of a successful run are kept on ``TypedProgram.warnings``.
    """
    return Elaborator(program, consts, machine_precision).run(entry, args)
