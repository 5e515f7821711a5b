from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .circuit import Alloc, CircuitIR, Release
from .gates import Gate


def cx_cost(g: Gate) -> int:
    """CX-equivalent cost under the textbook decompositions.

    CP = 2, SWAP = 3, CCX = 6; multi-controlled gates are costed as their
    CCX ladders (MCX with k controls: 2k - 3 CCX; MCP on n qubits:
    2(n - 2) CCX plus one CP).
    """
    n = len(g.qubits)
    k = g.kind
    if n == 1:
        return 0
    if k == "CX":
        return 1
    if k == "CP":
        return 2
    if k == "SWAP":
        return 3
    if k == "CCX":
        return 6
    if k == "MCX":
        return {2: 1, 3: 6}.get(n, 6 * (2 * (n - 1) - 3))
    if k == "MCP":
        return 2 if n == 2 else 12 * (n - 2) + 2
    return 0


@dataclass
class ResourceReport:
    gate_counts: dict[str, int] = field(default_factory=dict)
    total_gates: int = 0
    two_qubit_gates: int = 0
    cx_equivalent: int = 0
    depth: int = 0
    width: int = 0
    allocations: int = 0
    allocated_qubits: int = 0
    releases: int = 0
    released_qubits: int = 0

    def to_dict(self) -> dict:
        return {
            "gate_counts": dict(sorted(self.gate_counts.items())),
            "total_gates": self.total_gates,
            "two_qubit_gates": self.two_qubit_gates,
            "cx_equivalent": self.cx_equivalent,
            "depth": self.depth,
            "width": self.width,
            "allocations": self.allocations,
            "allocated_qubits": self.allocated_qubits,
            "releases": self.releases,
            "released_qubits": self.released_qubits,
        }

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"{k}\t{v}" for k, v in d.items() if k != "gate_counts"]
        lines += [f"gate.{k}\t{v}" for k, v in d["gate_counts"].items()]
        return "\n".join(lines) + "\n"


def resource_report(c: CircuitIR) -> ResourceReport:
    """Gate counts, CX-equivalent cost, greedy depth, peak width and allocation churn.

    Depth puts each gate one layer after the latest layer touching any of its
    qubits, regardless of arity.
    """
    counts: Counter = Counter()
    level: dict[int, int] = {}
    r = ResourceReport()
    for e in c.events:
        if isinstance(e, Alloc):
            r.allocations += 1
            r.allocated_qubits += len(e.ids)
        elif isinstance(e, Release):
            r.releases += 1
            r.released_qubits += len(e.ids)
        else:
            counts[e.kind] += 1
            if len(e.qubits) >= 2:
                r.two_qubit_gates += 1
            r.cx_equivalent += cx_cost(e)
            layer = 1 + max(level.get(q, 0) for q in e.qubits)
            for q in e.qubits:
                level[q] = layer
            r.depth = max(r.depth, layer)
    r.gate_counts = dict(counts)
    r.total_gates = sum(counts.values())
    r.width = c.width
    return r
