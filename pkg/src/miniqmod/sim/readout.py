"""Decoding, sampling and phase/amplitude inspection of final states."""
from __future__ import annotations

import math
from collections import Counter, namedtuple
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from ..sema.qtypes import QArray, QBit, QNum, QRecord
from ..types.fixedpoint import FixedPointFormat
from .statevector import StateVector

MAGNITUDE_FLOOR = 1e-12


class ZeroReference(ValueError):
    pass


class NotSeparable(ValueError):
    pass


@lru_cache(maxsize=None)
def _record_class(name: str, fields: tuple[str, ...]):
    return namedtuple(name, fields)


def _number(code: int, fmt: FixedPointFormat):
    v = fmt.value_of(code)
    return int(v) if v.denominator == 1 else float(v)


def decode_value(code: int, qtype):
    """Python value of a register holding ``code`` (LSB-first) under ``qtype``.

    qbit -> int, qnum -> int or float (exact dyadic), qarray -> tuple,
    struct -> namedtuple.
    """
    if isinstance(qtype, QBit):
        return code & 1
    if isinstance(qtype, QNum):
        fmt = qtype.fmt or FixedPointFormat(max(1, code.bit_length()), False, 0)
        return _number(code, fmt)
    if isinstance(qtype, QArray):
        w = qtype.element.size
        mask = (1 << w) - 1
        return tuple(decode_value((code >> (i * w)) & mask, qtype.element) for i in range(qtype.length))
    if isinstance(qtype, QRecord):
        vals, off = [], 0
        for _, ft in qtype.fields:
            vals.append(decode_value((code >> off) & ((1 << ft.size) - 1), ft))
            off += ft.size
        return _record_class(qtype.name, tuple(n for n, _ in qtype.fields))(*vals)
    raise TypeError(f"cannot decode {qtype!r}")


def format_value(v) -> str:
    if hasattr(v, "_fields"):
        return "{" + ", ".join(f"{k}: {format_value(x)}" for k, x in zip(v._fields, v)) + "}"
    if isinstance(v, tuple):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class SampleResult:
    shots: int
    seed: Optional[int]
    names: list[str]
    joint: Counter = field(default_factory=Counter)

    def counts(self, name: str) -> Counter:
        i = self.names.index(name)
        out: Counter = Counter()
        for key, n in self.joint.items():
            out[key[i]] += n
        return out

    def table(self, name: str) -> list[tuple[object, int, float]]:
        """(value, count, probability) rows sorted by value."""
        c = self.counts(name)
        return [(v, n, n / self.shots) for v, n in sorted(c.items(), key=lambda kv: _sort_key(kv[0]))]


def _sort_key(v):
    if isinstance(v, tuple):
        return tuple(_sort_key(x) for x in v)
    return v


def register_values(state: StateVector, names: Optional[Sequence[str]] = None):
    """Per stored entry, the decoded tuple of the named output registers."""
    names = list(state.outputs) if names is None else list(names)
    codes = [state.register_index(state.outputs[n].ids) for n in names]
    return names, [tuple(decode_value(int(c[k]), state.outputs[n].qtype) for c, n in zip(codes, names))
                   for k in range(len(state.indices))]


def distribution(state: StateVector, names: Optional[Sequence[str]] = None) -> dict:
    """Exact joint probability of decoded output values."""
    names, vals = register_values(state, names)
    probs = np.abs(state.amplitudes) ** 2
    out: dict = {}
    for v, p in zip(vals, probs):
        out[v] = out.get(v, 0.0) + float(p)
    return out


def sample(state: StateVector, shots: int, seed: Optional[int] = None,
           names: Optional[Sequence[str]] = None) -> SampleResult:
    """Multinomial measurement of the output registers, reproducible per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    names, vals = register_values(state, names)
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    res = SampleResult(shots, seed, names)
    for v, n in zip(vals, draws):
        if n:
            res.joint[v] += int(n)
    return res


def relative_phases(state: StateVector, reference: int = 0, ids: Optional[Sequence[int]] = None) -> dict[int, float]:
    """arg(a_v / a_ref) in [0, 2*pi) for every basis state above 1e-12 in magnitude.

    Basis indices are over ``ids`` (default: the state's full qubit order).
    When ``ids`` is a proper subset, the remaining qubits must be in one
    basis state per index, otherwise NotSeparable is raised.
    """
    if ids is None:
        keys = state.indices
    else:
        keys = state.register_index(ids)
    amps: dict[int, complex] = {}
    for k, a in zip(keys, state.amplitudes):
        if abs(a) <= MAGNITUDE_FLOOR:
            continue
        k = int(k)
        if k in amps:
            raise NotSeparable(f"basis state {k} is entangled with the remaining qubits")
        amps[k] = complex(a)
    ref = amps.get(reference, 0j)
    if abs(ref) <= MAGNITUDE_FLOOR:
        raise ZeroReference(f"reference basis state {reference} has zero amplitude")
    out = {}
    for k in sorted(amps):
        phi = math.atan2((amps[k] / ref).imag, (amps[k] / ref).real) % (2 * math.pi)
        if phi > 2 * math.pi - 1e-12:
            phi = 0.0
        out[k] = phi
    return out


def marginal_amplitude(state: StateVector, ids: Sequence[int], pattern) -> complex:
    """Amplitude of ``ids`` in ``pattern`` when the other qubits sit in one basis state.

    ``pattern`` is an int (LSB = ids[0]) or a bit sequence.
    """
    if not isinstance(pattern, int):
        pattern = sum(int(b) << j for j, b in enumerate(pattern))
    for q in ids:
        if q not in state.order:
            raise ValueError(f"qubit {q} is not live")
    sub = state.register_index(ids)
    hits = [(int(i), complex(a)) for i, s, a in zip(state.indices, sub, state.amplitudes)
            if int(s) == pattern and abs(a) > MAGNITUDE_FLOOR]
    if not hits:
        return 0j
    if len(hits) > 1:
        raise NotSeparable(f"{len(hits)} complement basis states carry pattern {pattern}")
    return hits[0][1]
