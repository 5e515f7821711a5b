"""Initialization-state and within/apply checks over the typed tree."""
from __future__ import annotations

from typing import Optional

from ..frontend.lexer import Span
from .diagnostics import ERROR, WARNING, Diagnostic
from .typed import (Cell, Ref, Slot, TAllocate, TAmplitude, TAssign, TCall, TControl, TGate,
                    TInplace, TInvert, TPhase, TPower, TRelease, TWithin, TypedProgram, refs_of,
                    walk)

# Operand positions a gate may move out of the computational basis.
_WRITTEN_OPERANDS = {
    "H": (0,), "X": (0,), "Y": (0,), "RX": (0,), "RY": (0,),
    "CX": (1,), "CCX": (1,), "SWAP": (0, 1),
}


class _Flow:
    def __init__(self, prog: TypedProgram):
        self.prog = prog
        self.state: dict[Slot, Optional[Cell]] = {}
        self.diags: list[Diagnostic] = []

    def report(self, message: str, span: Span, severity: str = ERROR):
        self.diags.append(Diagnostic(severity, message, span, None, self.prog.filename))

    def live(self, cell: Cell) -> bool:
        return self.state.get(cell.slot) is cell

    def use(self, ref: Ref, span):
        if not self.live(ref.cell):
            self.report(f"use of uninitialized variable '{ref}'", span)

    def init(self, cell: Cell, span):
        if self.state.get(cell.slot) is not None:
            self.report(f"'{cell.name}' is already initialized", span)
        self.state[cell.slot] = cell

    def block(self, stmts):
        for s in stmts:
            self.stmt(s)

    def live_set(self):
        return {slot: cell for slot, cell in self.state.items() if cell is not None}

    def stmt(self, s):
        if isinstance(s, TAllocate):
            self.init(s.cell, s.span)
        elif isinstance(s, TAssign):
            for r in refs_of(s):
                self.use(r, s.span)
            self.init(s.cell, s.span)
        elif isinstance(s, (TInplace, TPhase, TAmplitude, TGate)):
            for r in refs_of(s):
                self.use(r, s.span)
        elif isinstance(s, TRelease):
            if not self.live(s.cell):
                self.report(f"release of uninitialized variable '{s.cell.name}'", s.span)
            self.state[s.cell.slot] = None
        elif isinstance(s, TControl):
            for r in refs_of(s):
                self.use(r, s.span)
            self.block(s.body)
        elif isinstance(s, TWithin):
            self.block(s.within)
            self.block(s.apply)
            for cell in s.rolled_back:
                if self.live(cell):
                    self.state[cell.slot] = None
        elif isinstance(s, (TInvert, TPower)):
            before = self.live_set()
            self.block(s.body)
            after = self.live_set()
            kind = "invert" if isinstance(s, TInvert) else "power"
            for slot in set(before) | set(after):
                if before.get(slot) is not after.get(slot):
                    self.report(f"{kind} block must not change whether '{slot.name}' is initialized",
                                s.span)
            self.state.update({slot: before.get(slot) for slot in set(before) | set(after)})
        elif isinstance(s, TCall):
            for slot in s.outputs:
                if self.state.get(slot) is not None:
                    self.report(f"output argument '{slot.name}' of '{s.name}' is already initialized",
                                s.span)
                    self.state[slot] = None
            for r in (*s.inputs, *s.captures):
                self.use(r, s.span)
            self.block(s.body)
            for slot in s.outputs:
                if self.state.get(slot) is None:
                    self.report(f"output '{slot.name}' is not initialized by '{s.name}'", s.span)
            for r in s.inputs:
                if not self.live(r.cell):
                    self.report(f"parameter '{r}' of '{s.name}' must still be initialized when it returns",
                                s.span)

    def run(self) -> list[Diagnostic]:
        self.block(self.prog.body)
        for out in self.prog.outputs:
            if self.state.get(out.slot) is None:
                self.report(f"output '{out.name}' of main is never initialized", self.prog.span)
        return self.diags


def check_init_flow(prog: TypedProgram) -> list[Diagnostic]:
    """Check initialization discipline: allocate/``|=`` need an uninitialized
    target, every other use an initialized one; outputs are initialized on
    return; invert and power bodies leave initialization state unchanged."""
    return _Flow(prog).run()


def check_within_apply(prog: TypedProgram) -> list[Diagnostic]:
    diags = []

    def report(sev, msg, span):
        diags.append(Diagnostic(sev, msg, span, None, prog.filename))

    for s in walk(prog.body):
        if not isinstance(s, TWithin) or not s.rolled_back:
            continue
        created = {id(c) for c in s.rolled_back}
        for inner in walk(s.apply):
            written: list[Ref] = []
            if isinstance(inner, (TAssign, TAllocate)) and id(inner.cell) in created:
                report(ERROR, f"apply block re-initializes '{inner.cell.name}', which the within "
                              f"block initialized", inner.span)
            elif isinstance(inner, TRelease) and id(inner.cell) in created:
                report(ERROR, f"apply block releases '{inner.cell.name}', which the within "
                              f"block initialized", inner.span)
            elif isinstance(inner, TInplace):
                written = [inner.target]
            elif isinstance(inner, TAmplitude):
                written = [inner.target]
            elif isinstance(inner, TGate):
                written = [inner.operands[i] for i in _WRITTEN_OPERANDS.get(inner.name, ())]
            for r in written:
                if id(r.cell) in created:
                    report(WARNING, f"apply block modifies '{r}', which the within block "
                                    f"initialized; its release is checked at simulation time",
                           inner.span)
    return diags
