from __future__ import annotations

from .circuit import CircuitIR
from .gates import Gate


class UnsupportedGate(ValueError):
    pass


_NAMES = {
    "H": "h", "X": "x", "Y": "y", "Z": "z", "S": "s", "T": "t", "Sdg": "sdg", "Tdg": "tdg",
    "RX": "rx", "RY": "ry", "RZ": "rz", "P": "p", "CX": "cx", "CCX": "ccx", "CP": "cp",
    "SWAP": "swap",
}


def _gate_line(g: Gate) -> str:
    if g.kind not in _NAMES:
        raise UnsupportedGate(f"{g.kind} must be decomposed before emission")
    name = _NAMES[g.kind]
    if g.params:
        name += "(" + ", ".join(repr(float(p)) for p in g.params) + ")"
    return f"{name} {', '.join(f'q[{q}]' for q in g.qubits)};"


def emit_qasm3(c: CircuitIR) -> str:
    """OpenQASM 3 text for a decomposed circuit.

    Virtual ids are used directly as indices into one register ``q``; with
    recycling on, the register size equals the peak width. Allocation and
    release events need no instruction (qubits enter and leave in |0>).
    """
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{c.num_ids}] q;"]
    for name, reg in c.outputs.items():
        bits = ", ".join(f"q[{q}]" for q in reg.ids)
        lines.append(f"// output {name}: {reg.qtype} = [{bits}] (LSB first)")
    for e in c.gates:
        lines.append(_gate_line(e))
    return "\n".join(lines) + "\n"
