from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..frontend.lexer import Span

# kind -> (fixed qubit count or None for variadic, number of angle parameters)
GATE_KINDS: dict[str, tuple[Optional[int], int]] = {
    "H": (1, 0), "X": (1, 0), "Y": (1, 0), "Z": (1, 0),
    "S": (1, 0), "T": (1, 0), "Sdg": (1, 0), "Tdg": (1, 0),
    "RX": (1, 1), "RY": (1, 1), "RZ": (1, 1), "P": (1, 1),
    "CX": (2, 0), "CCX": (3, 0), "CP": (2, 1), "SWAP": (2, 0),
    "MCX": (None, 0), "MCP": (None, 1),
}

SELF_INVERSE = {"H", "X", "Y", "Z", "CX", "CCX", "SWAP", "MCX"}
_INVERSE_NAME = {"S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T"}
ROTATIONS = {"RX", "RY", "RZ", "P", "CP", "MCP"}
DIAGONAL = {"Z", "S", "T", "Sdg", "Tdg", "RZ", "P", "CP", "MCP"}
PERMUTATION = {"X", "CX", "CCX", "MCX", "SWAP"}


class InvalidGate(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    """A gate on virtual qubit ids.

    For controlled kinds the controls come first and the target last
    (``CX(c, t)``, ``CCX(c1, c2, t)``, ``MCX(c1, ..., ck, t)``). ``CP`` and
    ``MCP`` are symmetric in their qubits.
    """
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)
    origin: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind not in GATE_KINDS:
            raise InvalidGate(f"unknown gate kind {self.kind!r}")
        n, k = GATE_KINDS[self.kind]
        if n is not None and len(self.qubits) != n:
            raise InvalidGate(f"{self.kind} acts on {n} qubits, got {len(self.qubits)}")
        if n is None and len(self.qubits) < 1:
            raise InvalidGate(f"{self.kind} needs at least one qubit")
        if len(self.params) != k:
            raise InvalidGate(f"{self.kind} takes {k} parameters, got {len(self.params)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidGate(f"{self.kind} has repeated operands {self.qubits}")
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidGate(f"{self.kind} has a non-finite angle")

    @property
    def theta(self) -> float:
        return self.params[0]

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[:-1]

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def inverse(self) -> "Gate":
        if self.kind in SELF_INVERSE:
            return self
        if self.kind in _INVERSE_NAME:
            return Gate(_INVERSE_NAME[self.kind], self.qubits, (), self.span, self.origin)
        return Gate(self.kind, self.qubits, tuple(-p for p in self.params), self.span, self.origin)

    def remap(self, mapping) -> "Gate":
        return Gate(self.kind, tuple(mapping.get(q, q) for q in self.qubits), self.params,
                    self.span, self.origin)

    def __str__(self):
        ps = f"({', '.join(repr(p) for p in self.params)})" if self.params else ""
        return f"{self.kind}{ps} {' '.join(map(str, self.qubits))}"


def single_qubit_matrix(kind: str, params=()) -> np.ndarray:
    s2 = 1 / math.sqrt(2)
    if kind == "H":
        return np.array([[s2, s2], [s2, -s2]], dtype=complex)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind == "Z":
        return np.diag([1, -1]).astype(complex)
    if kind in ("S", "Sdg", "T", "Tdg"):
        phi = {"S": math.pi / 2, "Sdg": -math.pi / 2, "T": math.pi / 4, "Tdg": -math.pi / 4}[kind]
        return np.diag([1, np.exp(1j * phi)])
    theta = params[0]
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    if kind == "P":
        return np.diag([1, np.exp(1j * theta)])
    raise InvalidGate(f"{kind} is not a single-qubit gate")


def gate_matrix(g: Gate) -> np.ndarray:
    """Dense unitary over ``g.qubits`` (first qubit = least significant index bit)."""
    n = len(g.qubits)
    if n == 1:
        return single_qubit_matrix(g.kind, g.params)
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> i) & 1 for i in range(n)]
        amp = 1.0 + 0j
        if g.kind in ("CX", "CCX", "MCX"):
            if all(bits[:-1]):
                bits[-1] ^= 1
        elif g.kind == "SWAP":
            bits[0], bits[1] = bits[1], bits[0]
        elif g.kind in ("CP", "MCP"):
            if all(bits):
                amp = np.exp(1j * g.theta)
        else:
            raise InvalidGate(f"no matrix for {g.kind}")
        row = sum(b << i for i, b in enumerate(bits))
        m[row, col] = amp
    return m
