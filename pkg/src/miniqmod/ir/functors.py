"""Structural functors over circuits: adjoint, control and power."""
from __future__ import annotations

import math
from typing import Sequence

from .circuit import Alloc, CircuitIR, Release
from .gates import Gate


class OverlappingControl(ValueError):
    pass


def adjoint(c: CircuitIR) -> CircuitIR:
    """Reverse the events and invert each one; allocations and releases swap roles."""
    out = []
    for e in reversed(c.events):
        if isinstance(e, Gate):
            out.append(e.inverse())
        elif isinstance(e, Alloc):
            out.append(Release(e.ids, e.span, e.origin))
        else:
            out.append(Alloc(e.ids, e.span, e.origin))
    return CircuitIR(out, dict(c.outputs))


def _x_family(controls: list[int], target: int, span, origin) -> Gate:
    qs = (*controls, target)
    kind = {0: "X", 1: "CX", 2: "CCX"}.get(len(controls), "MCX")
    return Gate(kind, qs, (), span, origin)


def _phase_family(qubits: list[int], theta: float, span, origin) -> Gate:
    kind = {1: "P", 2: "CP"}.get(len(qubits), "MCP")
    return Gate(kind, tuple(qubits), (theta,), span, origin)


_PHASE_OF = {"Z": math.pi, "S": math.pi / 2, "Sdg": -math.pi / 2, "T": math.pi / 4, "Tdg": -math.pi / 4}


def control_gate(g: Gate, controls: Sequence[int]) -> list[Gate]:
    """Gates implementing ``g`` conditioned on every qubit in ``controls`` being 1."""
    controls = list(controls)
    if not controls:
        return [g]
    if set(controls) & set(g.qubits):
        raise OverlappingControl(f"control qubits {controls} overlap operands of {g}")
    sp, og = g.span, g.origin

    def one(kind, q, params=()):
        return Gate(kind, (q,), params, sp, og)

    k = g.kind
    if k in ("X", "CX", "CCX", "MCX"):
        return [_x_family(controls + list(g.controls), g.target, sp, og)]
    if k in ("P", "CP", "MCP"):
        return [_phase_family(controls + list(g.qubits), g.theta, sp, og)]
    if k in _PHASE_OF:
        return [_phase_family(controls + [g.target], _PHASE_OF[k], sp, og)]
    t = g.target
    if k in ("RZ", "RY"):
        flip = _x_family(controls, t, sp, og)
        return [one(k, t, (g.theta / 2,)), flip, one(k, t, (-g.theta / 2,)), flip]
    if k == "RX":
        return [one("H", t), *control_gate(one("RZ", t, g.params), controls), one("H", t)]
    if k == "Y":
        return [one("Sdg", t), _x_family(controls, t, sp, og), one("S", t)]
    if k == "H":
        return [*control_gate(one("Z", t), controls),
                *control_gate(one("RY", t, (math.pi / 2,)), controls)]
    if k == "SWAP":
        a, b = g.qubits
        cx = Gate("CX", (b, a), (), sp, og)
        return [cx, _x_family(controls + [a], b, sp, og), cx]
    raise ValueError(f"cannot control {g}")


def controlled(c: CircuitIR, ctrl) -> CircuitIR:
    """Add ``ctrl`` (an id or a list of ids) as a control of every gate.

    Allocation and release events are kept as they are: ancillae are
    allocated unconditionally and return to zero either way.
    """
    ctrls = [ctrl] if isinstance(ctrl, int) else list(ctrl)
    used = c.all_ids()
    clash = [q for q in ctrls if q in used]
    if clash:
        raise OverlappingControl(f"control qubit(s) {clash} are used inside the controlled circuit")
    out = []
    for e in c.events:
        out.extend(control_gate(e, ctrls) if isinstance(e, Gate) else [e])
    return CircuitIR(out, dict(c.outputs))


def power(c: CircuitIR, k: int) -> CircuitIR:
    if k < 0:
        raise ValueError(f"power count must be non-negative, got {k}")
    return CircuitIR(list(c.events) * k, dict(c.outputs))
