from .circuit import (Alloc, Checkpoint, CircuitIR, Event, InvalidCircuit, InvalidCount,
                      OutputRegister, PoolError, QubitPool, Release, validate)
from .decompose import decompose_multicontrol
from .functors import OverlappingControl, adjoint, control_gate, controlled, power
from .gates import DIAGONAL, GATE_KINDS, Gate, InvalidGate, gate_matrix, single_qubit_matrix
from .qasm import UnsupportedGate, emit_qasm3
from .report import ResourceReport, resource_report


def alloc(pool: QubitPool, n: int) -> list[int]:
    return pool.alloc(n)


__all__ = [
    "Alloc", "Checkpoint", "CircuitIR", "DIAGONAL", "Event", "GATE_KINDS", "Gate", "InvalidCircuit",
    "InvalidCount", "InvalidGate", "OutputRegister", "OverlappingControl", "PoolError", "QubitPool",
    "Release", "ResourceReport", "UnsupportedGate", "adjoint", "alloc", "control_gate", "controlled",
    "decompose_multicontrol", "emit_qasm3", "gate_matrix", "power", "resource_report",
    "single_qubit_matrix", "validate",
]
