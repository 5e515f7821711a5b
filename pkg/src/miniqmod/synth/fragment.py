"""Circuit fragments over virtual qubit ids.

A fragment is a list of ``(event, fixed)`` entries. ``fixed`` marks gates
that belong to a compute/uncompute conjugation: taken alone, the fixed gates
of a fragment multiply to the identity, so adding a control to the fragment
only needs to touch the other (free) gates.

Every allocation made during lowering draws brand-new virtual ids. Replaying
a fragment (an adjoint, a repetition, a recomputation) reuses the same ids,
which is safe because the lifetimes of those replays never overlap. The
final :func:`to_physical` pass maps virtual ids onto a :class:`QubitPool`,
where recycling takes effect.
"""
from __future__ import annotations

from typing import Optional

from ..frontend.lexer import Span
from ..ir.circuit import Alloc, Checkpoint, CircuitIR, OutputRegister, QubitPool, Release
from ..ir.functors import control_gate
from ..ir.gates import Gate

Entry = tuple  # (Gate | Alloc | Release, bool)


class SynthError(RuntimeError):
    pass


class Emitter:
    """Hands out virtual ids and stamps gates with the current statement's position."""

    def __init__(self):
        self.next_vid = 0
        self.span: Optional[Span] = None
        self.origin = "main"

    def fresh(self, n: int) -> list[int]:
        ids = list(range(self.next_vid, self.next_vid + n))
        self.next_vid += n
        return ids

    def gate(self, kind: str, qubits, params=()) -> Entry:
        return (Gate(kind, tuple(qubits), tuple(params), self.span, self.origin), False)

    def alloc(self, ids) -> Entry:
        return (Alloc(tuple(ids), self.span, self.origin), False)

    def release(self, ids) -> Entry:
        return (Release(tuple(ids), self.span, self.origin), False)


def fixed(frag: list) -> list:
    return [(e, True) for e, _ in frag]


def adjoint(frag: list) -> list:
    out = []
    for e, fx in reversed(frag):
        if isinstance(e, Gate):
            out.append((e.inverse(), fx))
        elif isinstance(e, Alloc):
            out.append((Release(e.ids, e.span, e.origin), fx))
        else:
            out.append((Alloc(e.ids, e.span, e.origin), fx))
    return out


def conjugate(compute: list, body: list) -> list:
    """compute; body; compute^-1 with the compute parts marked fixed."""
    c = fixed(compute)
    return c + body + adjoint(c)


def control(frag: list, controls) -> list:
    controls = list(controls)
    if not controls:
        return frag
    out = []
    for e, fx in frag:
        if fx or not isinstance(e, Gate):
            out.append((e, fx))
        else:
            out.extend((g, False) for g in control_gate(e, controls))
    return out


def to_physical(events: list, recycle: bool = True, checkpoints=(), outputs=None):
    """Map virtual ids onto pool ids.

    ``checkpoints`` holds ``(index, live_virtual_ids, span)`` triples and
    ``outputs`` maps names to ``(virtual_ids, qtype)``. Returns the physical
    event list, checkpoints and output id tuples.
    """
    pool = QubitPool(recycle=recycle)
    vmap: dict[int, int] = {}
    out = []
    cps = sorted(checkpoints, key=lambda t: t[0])
    phys_cps = []
    k = 0

    def flush(index):
        nonlocal k
        while k < len(cps) and cps[k][0] == index:
            idx, live, span = cps[k]
            try:
                phys_cps.append(Checkpoint(idx, frozenset(vmap[v] for v in live), span))
            except KeyError as exc:
                raise SynthError(f"checkpoint refers to a qubit that is not live: {exc}") from None
            k += 1

    flush(0)
    for i, e in enumerate(events):
        if isinstance(e, Alloc):
            for v in e.ids:
                if v in vmap:
                    raise SynthError(f"virtual qubit {v} allocated twice")
            ids = pool.alloc(len(e.ids))
            vmap.update(zip(e.ids, ids))
            out.append(Alloc(tuple(ids), e.span, e.origin))
        elif isinstance(e, Release):
            try:
                ids = [vmap.pop(v) for v in e.ids]
            except KeyError as exc:
                raise SynthError(f"virtual qubit {exc} released while not live") from None
            pool.release(ids)
            out.append(Release(tuple(ids), e.span, e.origin))
        else:
            if not all(q in vmap for q in e.qubits):
                raise SynthError(f"gate {e} uses a qubit that is not live")
            out.append(e.remap(vmap))
        flush(i + 1)
    phys_out = {}
    for name, (vids, qtype) in (outputs or {}).items():
        phys_out[name] = (tuple(vmap[v] for v in vids), qtype)
    return out, phys_cps, phys_out


def assemble(events, checkpoints, outputs) -> CircuitIR:
    regs = {n: OutputRegister(n, ids, qt) for n, (ids, qt) in outputs.items()}
    return CircuitIR(list(events), regs, list(checkpoints))
