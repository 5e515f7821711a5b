"""Lower a typed program to CircuitIR."""
from __future__ import annotations

import warnings
from fractions import Fraction
from math import floor

from ..ir.circuit import CircuitIR
from ..sema.typed import (Cell, Ref, TAllocate, TAmplitude, TAssign, TCall, TControl, TExpr, TGate,
                          TInplace, TInvert, TPhase, TPower, TRelease, TWithin, TypedProgram)
from ..types.interval import LossyConstantWarning, annotate
from ..types.fixedpoint import plan_alignment
from .amplitude import multiplexed_ry, rotation_angle
from .arith import Reg, add_into, const_sources, reg_sources, xor_into
from .expr import ExprSynth
from .fragment import Emitter, SynthError, adjoint, assemble, conjugate, control, to_physical
from .phase import expr_to_phase_polynomial, synth_phase

_GATE_KINDS = {"H", "X", "Y", "Z", "S", "T", "RX", "RY", "RZ", "CX", "SWAP", "CCX"}


class Lowerer:
    def __init__(self, machine_precision: int):
        self.mp = machine_precision
        self.em = Emitter()
        self.bound: dict[Cell, tuple[int, ...]] = {}

    # ---- helpers ----

    def ids(self, ref: Ref) -> tuple[int, ...]:
        try:
            cell_ids = self.bound[ref.cell]
        except KeyError:
            raise SynthError(f"'{ref}' is not initialized") from None
        return cell_ids[ref.offset:ref.offset + ref.size]

    def reg(self, ref: Ref) -> Reg:
        return Reg(self.ids(ref), ref.fmt)

    def annotated(self, te: TExpr):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LossyConstantWarning)
            node = annotate(te.expr, te.formats, self.mp)
        env = {k: self.reg(r) for k, r in te.refs.items()}
        return node, env

    def value_register(self, te: TExpr):
        """(compute fragment, Reg) for an expression, or (None, constant value)."""
        node, env = self.annotated(te)
        if node.is_const:
            return None, node.value, node
        if node.op == "var":
            return [], env[node.expr.name], node
        frag, reg = ExprSynth(self.em, env).compute(node)
        return frag, reg, node

    # ---- statements ----

    def block(self, stmts) -> list:
        out = []
        for s in stmts:
            out += self.stmt(s)
        return out

    def stmt(self, s) -> list:
        em = self.em
        em.span, em.origin = s.span, s.origin
        if isinstance(s, TAllocate):
            ids = tuple(em.fresh(s.cell.size))
            self.bound[s.cell] = ids
            return [em.alloc(ids)]
        if isinstance(s, TRelease):
            ids = self.bound.pop(s.cell)
            return [em.release(ids)]
        if isinstance(s, TAssign):
            return self.assign(s)
        if isinstance(s, TInplace):
            return self.inplace(s)
        if isinstance(s, TPhase):
            node, env = self.annotated(s.expr)
            poly = expr_to_phase_polynomial(node, env)
            return synth_phase(em, poly, s.angle)
        if isinstance(s, TAmplitude):
            return self.amplitude(s)
        if isinstance(s, TGate):
            return self.gate(s)
        if isinstance(s, TControl):
            return self.control(s)
        if isinstance(s, TWithin):
            compute = self.block(s.within)
            body = self.block(s.apply)
            em.span, em.origin = s.span, s.origin
            for cell in s.rolled_back:
                self.bound.pop(cell, None)
            return conjugate(compute, body)
        if isinstance(s, TInvert):
            return adjoint(self.block(s.body))
        if isinstance(s, TPower):
            body = self.block(s.body)
            return body * s.count
        if isinstance(s, TCall):
            return self.block(s.body)
        raise SynthError(f"cannot lower {type(s).__name__}")

    def assign(self, s: TAssign) -> list:
        em = self.em
        frag, src, node = self.value_register(s.expr)
        if frag and src.fmt == s.fmt:
            # the expression's result register becomes the variable
            self.bound[s.cell] = src.ids
            return frag
        ids = tuple(em.fresh(s.fmt.size))
        self.bound[s.cell] = ids
        out = [em.alloc(ids)]
        if frag is None:
            return out + xor_into(em, ids, const_sources(floor(Fraction(src) * (1 << s.fmt.fraction_digits)),
                                                         s.fmt.size))
        copy = xor_into(em, ids, reg_sources(src, s.fmt.fraction_digits, s.fmt.size))
        return out + conjugate(frag, copy)

    def inplace(self, s: TInplace) -> list:
        em = self.em
        target = self.reg(s.target)
        fmt = target.fmt
        frag, src, node = self.value_register(s.expr)
        if frag is None:
            sources = const_sources(floor(Fraction(src) * (1 << fmt.fraction_digits)), fmt.size)
        else:
            plan = plan_alignment(src.fmt, fmt)
            sources = [None if plan.source_bit(j) is None else src.ids[plan.source_bit(j)]
                       for j in range(fmt.size)]
        write = xor_into(em, target.ids, sources) if s.op == "xor" else add_into(em, target.ids, sources)
        return conjugate(frag or [], write)

    def amplitude(self, s: TAmplitude) -> list:
        em = self.em
        ind = self.ids(s.target)[0]
        frag, src, node = self.value_register(s.expr)
        if frag is None:
            alpha = rotation_angle(src)
            return [em.gate("RY", (ind,), (alpha,))] if alpha else []
        iv = node.interval.rounded(node.fmt.fraction_digits)
        return conjugate(frag, multiplexed_ry(em, src, ind, iv.lo, iv.hi))

    def gate(self, s: TGate) -> list:
        if s.name not in _GATE_KINDS:
            raise SynthError(f"unknown gate '{s.name}'")
        qubits = [q for r in s.operands for q in self.ids(r)]
        return [self.em.gate(s.name, qubits, s.params)]

    def control(self, s: TControl) -> list:
        if isinstance(s.condition, Ref):
            ctrl = self.ids(s.condition)
            return control(self.block(s.body), ctrl)
        frag, src, node = self.value_register(s.condition)
        body = self.block(s.body)
        if frag is None:
            return body if src != 0 else []
        return conjugate(frag, control(body, src.ids))


def synthesize(prog: TypedProgram, recycle: bool = True) -> CircuitIR:
    """Circuit for a typed program.

    Checkpoints are recorded after each top-level statement of ``main``
    with the qubits of the variables initialized at that point.
    """
    lw = Lowerer(prog.machine_precision)
    events: list = []
    cps = []
    for s in prog.body:
        events += [e for e, _ in lw.stmt(s)]
        live = frozenset(q for ids in lw.bound.values() for q in ids)
        cps.append((len(events), live, s.span))
    outputs = {}
    for o in prog.outputs:
        if o.cell is None or o.cell not in lw.bound:
            raise SynthError(f"output '{o.name}' is not initialized")
        outputs[o.name] = (lw.bound[o.cell], o.qtype or o.cell.qtype)
    phys, phys_cps, phys_out = to_physical(events, recycle, cps, outputs)
    return assemble(phys, phys_cps, phys_out)
