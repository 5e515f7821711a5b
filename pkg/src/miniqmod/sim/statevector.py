"""Statevector simulation of CircuitIR with allocation tracking.

Two interchangeable backends hold the live register:

* ``DenseBackend`` stores all 2^n amplitudes (n = live qubits).
* ``SparseBackend`` stores only nonzero amplitudes as parallel arrays of
  basis indices and values. Arithmetic circuits keep states with small
  support, so this backend handles registers far wider than the dense one.

Physical positions are assigned in allocation order: a newly allocated
qubit becomes the most significant position, and a released qubit is
contracted out with the positions above it shifting down by one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..ir.circuit import Alloc, CircuitIR, Release
from ..ir.gates import Gate, gate_matrix, single_qubit_matrix

RELEASE_TOLERANCE = 1e-9
PRUNE = 1e-15
DEFAULT_MAX_QUBITS = 24
WIDE = 62  # beyond this many qubits basis indices are stored as Python ints


class SimulationError(RuntimeError):
    pass


class WidthExceeded(SimulationError):
    pass


class NonZeroRelease(SimulationError):
    def __init__(self, ids, probability: float, span=None, origin: str = ""):
        self.ids = tuple(ids)
        self.probability = probability
        self.span = span
        self.origin = origin
        where = f" at {span}" if span else ""
        inside = f" in '{origin}'" if origin else ""
        super().__init__(f"released qubit(s) {list(self.ids)}{where}{inside} are not in |0> "
                         f"(P(1) = {probability:.3g})")


class AncillaLeak(SimulationError):
    pass


class _Base:
    def __init__(self):
        self.pos: dict[int, int] = {}

    @property
    def n(self) -> int:
        return len(self.pos)

    def positions(self, ids):
        return [self.pos[q] for q in ids]

    def _forget(self, q: int):
        p = self.pos.pop(q)
        for k, v in self.pos.items():
            if v > p:
                self.pos[k] = v - 1
        return p


class SparseBackend(_Base):
    def __init__(self):
        super().__init__()
        self.idx = np.zeros(1, dtype=np.int64)
        self.amp = np.ones(1, dtype=complex)

    def alloc(self, q: int):
        if self.n == WIDE and self.idx.dtype != object:
            self.idx = self.idx.astype(object)
        self.pos[q] = self.n

    def one_probability(self, q: int) -> float:
        bit = 1 << self.pos[q]
        sel = (self.idx & bit) != 0
        return float(np.sum(np.abs(self.amp[sel]) ** 2))

    def release(self, q: int):
        p = self.pos[q]
        bit = 1 << p
        keep = (self.idx & bit) == 0
        idx, amp = self.idx[keep], self.amp[keep]
        low = idx & (bit - 1)
        self.idx = low | ((idx >> (p + 1)) << p)
        norm = math.sqrt(float(np.sum(np.abs(amp) ** 2)))
        self.amp = amp / norm if norm > 0 else amp
        self._forget(q)
        if self.n <= WIDE and self.idx.dtype == object:
            self.idx = self.idx.astype(np.int64)

    def apply(self, g: Gate):
        k = g.kind
        ps = self.positions(g.qubits)
        bits = [1 << p for p in ps]
        idx = self.idx
        if k in ("X", "CX", "CCX", "MCX"):
            cmask = sum(bits[:-1])
            if cmask:
                sel = (idx & cmask) == cmask
                idx[sel] ^= bits[-1]
            else:
                idx ^= bits[-1]
            return
        if k == "SWAP":
            a, b = bits
            differ = ((idx & a) != 0) != ((idx & b) != 0)
            idx[differ] ^= (a | b)
            return
        if k == "Y":
            t = bits[0]
            idx ^= t
            now_one = (idx & t) != 0
            self.amp = np.where(now_one, 1j * self.amp, -1j * self.amp)
            return
        if k in ("Z", "S", "T", "Sdg", "Tdg", "P", "CP", "MCP"):
            phase = g.theta if k in ("P", "CP", "MCP") else \
                {"Z": math.pi, "S": math.pi / 2, "T": math.pi / 4,
                 "Sdg": -math.pi / 2, "Tdg": -math.pi / 4}[k]
            mask = sum(bits)
            sel = (idx & mask) == mask
            self.amp[sel] *= np.exp(1j * phase)
            return
        if k == "RZ":
            one = (idx & bits[0]) != 0
            self.amp *= np.where(one, np.exp(0.5j * g.theta), np.exp(-0.5j * g.theta))
            return
        m = single_qubit_matrix(k, g.params)
        t = bits[0]
        is_one = (idx & t) != 0
        base = idx & ~t
        bases, inv = np.unique(base, return_inverse=True)
        a0 = np.zeros(len(bases), dtype=complex)
        a1 = np.zeros(len(bases), dtype=complex)
        a0[inv[~is_one]] = self.amp[~is_one]
        a1[inv[is_one]] = self.amp[is_one]
        n0 = m[0, 0] * a0 + m[0, 1] * a1
        n1 = m[1, 0] * a0 + m[1, 1] * a1
        idx = np.concatenate([bases, bases | t])
        amp = np.concatenate([n0, n1])
        keep = np.abs(amp) > PRUNE
        self.idx, self.amp = idx[keep], amp[keep]

    def support(self) -> int:
        return len(self.idx)

    def entries(self):
        order = np.argsort(self.idx, kind="stable")
        return self.idx[order], self.amp[order]


class DenseBackend(_Base):
    def __init__(self):
        super().__init__()
        self.psi = np.ones(1, dtype=complex)

    def alloc(self, q: int):
        self.pos[q] = self.n
        self.psi = np.concatenate([self.psi, np.zeros_like(self.psi)])

    def _split(self, p: int):
        return self.psi.reshape(-1, 2, 1 << p)

    def one_probability(self, q: int) -> float:
        return float(np.sum(np.abs(self._split(self.pos[q])[:, 1, :]) ** 2))

    def release(self, q: int):
        kept = self._split(self.pos[q])[:, 0, :].reshape(-1)
        norm = np.linalg.norm(kept)
        self.psi = kept / norm if norm > 0 else kept
        self._forget(q)

    def apply(self, g: Gate):
        n = self.n
        ps = self.positions(g.qubits)
        if g.kind in ("MCX", "MCP"):
            idx = np.arange(1 << n, dtype=np.int64)
            mask = sum(1 << p for p in ps)
            if g.kind == "MCP":
                sel = (idx & mask) == mask
                self.psi[sel] *= np.exp(1j * g.theta)
            else:
                cmask = mask ^ (1 << ps[-1])
                sel = (idx & cmask) == cmask
                src = idx.copy()
                src[sel] ^= 1 << ps[-1]
                self.psi = self.psi[src]
            return
        k = len(ps)
        u = gate_matrix(g).reshape((2,) * (2 * k))
        t = self.psi.reshape((2,) * n)
        axes = [n - 1 - ps[j] for j in reversed(range(k))]
        out = np.tensordot(u, t, axes=(list(range(k, 2 * k)), axes))
        self.psi = np.moveaxis(out, list(range(k)), axes).reshape(-1)

    def support(self) -> int:
        return int(np.count_nonzero(np.abs(self.psi) > PRUNE))

    def entries(self):
        nz = np.nonzero(np.abs(self.psi) > PRUNE)[0].astype(np.int64)
        return nz, self.psi[nz]


BACKENDS = {"sparse": SparseBackend, "dense": DenseBackend}


@dataclass
class ReleaseRecord:
    ids: tuple[int, ...]
    probability: float
    span: object = None
    origin: str = ""


@dataclass
class StateVector:
    """Final state over the live qubits.

    ``order`` lists the live ids; basis index bit ``i`` is the value of
    qubit ``order[i]``. Only amplitudes above 1e-15 in magnitude are kept.
    """
    order: list[int]
    indices: np.ndarray
    amplitudes: np.ndarray
    outputs: dict = field(default_factory=dict)

    @property
    def num_qubits(self) -> int:
        return len(self.order)

    def as_dict(self) -> dict[int, complex]:
        return {int(i): complex(a) for i, a in zip(self.indices, self.amplitudes)}

    def amplitude(self, index: int) -> complex:
        hit = np.nonzero(self.indices == index)[0]
        return complex(self.amplitudes[hit[0]]) if len(hit) else 0j

    def dense(self) -> np.ndarray:
        if self.num_qubits > DEFAULT_MAX_QUBITS:
            raise WidthExceeded(f"dense view of {self.num_qubits} qubits is too large")
        out = np.zeros(1 << self.num_qubits, dtype=complex)
        out[self.indices] = self.amplitudes
        return out

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def bits_of(self, index: int, ids) -> list[int]:
        where = {q: i for i, q in enumerate(self.order)}
        return [(int(index) >> where[q]) & 1 for q in ids]

    def register_index(self, ids) -> np.ndarray:
        """Value of the sub-register ``ids`` (LSB first) for every stored entry."""
        where = {q: i for i, q in enumerate(self.order)}
        out = np.zeros(len(self.indices), dtype=object if len(ids) > WIDE else np.int64)
        for j, q in enumerate(ids):
            out |= ((self.indices >> where[q]) & 1) << j
        return out


@dataclass
class RunResult:
    state: StateVector
    releases: list[ReleaseRecord]
    peak_width: int
    peak_support: int


def _canonical_order(c: CircuitIR, live: list[int]) -> list[int]:
    order = []
    for reg in c.outputs.values():
        order.extend(q for q in reg.ids if q in live and q not in order)
    order.extend(sorted(q for q in live if q not in order))
    return order


def run(c: CircuitIR, max_qubits: int = DEFAULT_MAX_QUBITS, seed: Optional[int] = None,
        backend: str = "sparse", check_hygiene: bool = True,
        initial: Optional[dict[int, int]] = None) -> RunResult:
    """Execute ``c`` from the all-zero state.

    The width cap bounds the dense backend's live qubit count. For the
    sparse backend it bounds the number of stored amplitudes to
    ``2**max_qubits`` (the memory a dense run of that width would use).
    Past 62 live qubits the sparse backend switches to arbitrary-precision
    indices, which is slower but keeps wide, low-support states exact.
    ``seed`` is accepted for interface symmetry; the run itself is
    deterministic. ``initial`` optionally flips chosen qubits to |1> right
    after their allocation, which tests use to prepare basis inputs.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    be = BACKENDS[backend]()
    dense = backend == "dense"
    releases: list[ReleaseRecord] = []
    peak_w = peak_s = 0
    cps = {cp.index: cp for cp in c.checkpoints} if check_hygiene else {}
    cap = 1 << max_qubits
    for i, e in enumerate(c.events):
        if isinstance(e, Alloc):
            for q in e.ids:
                if dense and be.n + 1 > max_qubits:
                    raise WidthExceeded(f"circuit needs more than {max_qubits} live qubits "
                                        f"(dense backend)")
                be.alloc(q)
                if initial and initial.get(q):
                    be.apply(Gate("X", (q,)))
            peak_w = max(peak_w, be.n)
        elif isinstance(e, Release):
            for q in e.ids:
                p1 = be.one_probability(q)
                if p1 >= RELEASE_TOLERANCE:
                    raise NonZeroRelease(e.ids, p1, e.span, e.origin)
            worst = max((be.one_probability(q) for q in e.ids), default=0.0)
            for q in e.ids:
                be.release(q)
            releases.append(ReleaseRecord(e.ids, worst, e.span, e.origin))
        else:
            be.apply(e)
            if not dense:
                s = be.support()
                peak_s = max(peak_s, s)
                if s > cap:
                    raise WidthExceeded(f"state support {s} exceeds 2^{max_qubits} amplitudes")
        cp = cps.get(i + 1)
        if cp is not None and set(be.pos) != set(cp.live):
            extra = sorted(set(be.pos) - set(cp.live))
            missing = sorted(set(cp.live) - set(be.pos))
            raise AncillaLeak(f"after the statement at {cp.span}: live qubits not bound to variables "
                              f"{extra}, expected but missing {missing}")
    idx, amp = be.entries()
    live = list(be.pos)
    order = _canonical_order(c, live)
    perm = [be.pos[q] for q in order]
    new_idx = np.zeros(len(idx), dtype=object if len(order) > WIDE else np.int64)
    for j, p in enumerate(perm):
        new_idx |= ((idx >> p) & 1) << j
    srt = np.argsort(new_idx, kind="stable")
    state = StateVector(order, new_idx[srt], amp[srt], dict(c.outputs))
    return RunResult(state, releases, peak_w, peak_s if not dense else 1 << peak_w)
