"""Rewrite multi-controlled gates into CCX ladders over clean ancillae."""
from __future__ import annotations

from .circuit import Alloc, Checkpoint, CircuitIR, Release
from .gates import Gate


def _and_ladder(qubits, ancillas, span, origin) -> list[Gate]:
    """CCX chain leaving AND(qubits) in ``ancillas[-1]`` (len(qubits) >= 2)."""
    gates = [Gate("CCX", (qubits[0], qubits[1], ancillas[0]), (), span, origin)]
    for i, q in enumerate(qubits[2:]):
        gates.append(Gate("CCX", (ancillas[i], q, ancillas[i + 1]), (), span, origin))
    return gates


def _expand(g: Gate, take) -> list:
    """Decomposition of one gate; ``take(n)`` supplies ``n`` clean ancilla ids."""
    sp, og = g.span, g.origin
    if g.kind == "MCX":
        ctrls, t = list(g.controls), g.target
        if len(ctrls) == 0:
            return [Gate("X", (t,), (), sp, og)]
        if len(ctrls) == 1:
            return [Gate("CX", (ctrls[0], t), (), sp, og)]
        if len(ctrls) == 2:
            return [Gate("CCX", (ctrls[0], ctrls[1], t), (), sp, og)]
        anc = take(len(ctrls) - 2)
        ladder = _and_ladder(ctrls[:-1], anc, sp, og)
        core = Gate("CCX", (anc[-1], ctrls[-1], t), (), sp, og)
        return [Alloc(tuple(anc), sp, og), *ladder, core, *reversed(ladder), Release(tuple(anc), sp, og)]
    if g.kind == "MCP":
        qs = list(g.qubits)
        if len(qs) == 1:
            return [Gate("P", (qs[0],), g.params, sp, og)]
        if len(qs) == 2:
            return [Gate("CP", tuple(qs), g.params, sp, og)]
        anc = take(len(qs) - 2)
        ladder = _and_ladder(qs[:-1], anc, sp, og)
        core = Gate("CP", (anc[-1], qs[-1]), g.params, sp, og)
        return [Alloc(tuple(anc), sp, og), *ladder, core, *reversed(ladder), Release(tuple(anc), sp, og)]
    return [g]


def decompose_multicontrol(c: CircuitIR, ancilla_policy: str = "reuse") -> CircuitIR:
    """Replace every MCX/MCP by CCX/CX/CP gates.

    An MCX with k >= 3 controls becomes a ladder of 2k - 3 CCX gates using
    k - 2 ancillae; an MCP over n >= 3 qubits becomes 2(n - 2) CCX around one
    CP using n - 2 ancillae. Ancillae are allocated right before and released
    right after the rewritten gate. With ``ancilla_policy="reuse"`` they take
    the smallest ids not live at that point, so the peak width grows only when
    no idle id exists; ``"fresh"`` always uses ids beyond the circuit's range.
    """
    if ancilla_policy not in ("reuse", "fresh"):
        raise ValueError(f"unknown ancilla policy {ancilla_policy!r}")
    live: set[int] = set()
    next_fresh = c.num_ids
    out = []

    def take(n):
        nonlocal next_fresh
        ids = []
        if ancilla_policy == "reuse":
            q = 0
            while len(ids) < n and q < next_fresh:
                if q not in live:
                    ids.append(q)
                q += 1
        while len(ids) < n:
            ids.append(next_fresh)
            next_fresh += 1
        return ids

    end_of = [0]  # end_of[i] = length of the output after the first i input events
    for e in c.events:
        if isinstance(e, Alloc):
            live.update(e.ids)
            out.append(e)
        elif isinstance(e, Release):
            live.difference_update(e.ids)
            out.append(e)
        elif e.kind in ("MCX", "MCP"):
            live_before = set(live)
            live.update(e.qubits)
            out.extend(_expand(e, take))
            live = live_before
        else:
            out.append(e)
        end_of.append(len(out))
    checkpoints = [Checkpoint(end_of[cp.index], cp.live, cp.span) for cp in c.checkpoints]
    return CircuitIR(out, dict(c.outputs), checkpoints)
