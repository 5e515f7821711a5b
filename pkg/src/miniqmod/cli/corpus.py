"""The shipped example programs with their bindings and expected behaviour.

Each entry's ``check`` receives the compiled program and the final state of
a sparse run and raises AssertionError when the program misbehaves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Callable, Optional

from ..pipeline import compile_source
from ..sim import distribution, marginal_amplitude, relative_phases
from .helpers import segment_coefs

PIECEWISE_SEGMENTS = 4
PIECEWISE_PRECISION = 5


@dataclass
class CorpusEntry:
    name: str
    summary: str
    args: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)
    check: Optional[Callable] = None

    @property
    def filename(self) -> str:
        return f"{self.name}.qmod"

    def source(self) -> str:
        return program_source(self.name)


def program_source(name: str) -> str:
    return resources.files("miniqmod.cli").joinpath("programs").joinpath(f"{name}.qmod").read_text(encoding="utf-8")


def _close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b}"


def _uniform(dist, values, tol=1e-9):
    assert set(dist) == set(values), f"support {sorted(dist)} != {sorted(values)}"
    for v in values:
        _close(dist[v], 1 / len(values), tol)


def _check_bell(compiled, state):
    dist = distribution(state)
    _uniform(dist, [((0, 0),), ((1, 1),)])


def _check_struct_sum(compiled, state):
    dist = distribution(state)
    assert len(dist) == 64, len(dist)
    for (rec,), p in dist.items():
        assert rec.sum == sum(rec.data) % 16, rec
        _close(p, 1 / 64)


def _phase_oracle_check(marked):
    def check(compiled, state):
        ids = compiled.circuit.outputs[next(iter(compiled.circuit.outputs))].ids
        amps = {int(k): complex(a) for k, a in zip(state.register_index(ids), state.amplitudes)}
        mags = {abs(a) for a in amps.values()}
        assert max(mags) - min(mags) < 1e-10, mags
        assert len(amps) == 1 << len(ids)
        negative = {k for k, a in amps.items() if a.real < 0}
        assert negative == marked(len(ids)), (sorted(negative), sorted(marked(len(ids))))
    return check


def _sorted_triples(nbits):
    out = set()
    for a, b, c in product(range(4), repeat=3):
        if a < b < c:
            out.add(a | b << 2 | c << 4)
    return out


def _check_digital(compiled, state):
    _uniform(distribution(state, ["res"]), [(0.75,), (1.125,), (1.5,), (1.875,)])


def _check_phase_square(compiled, state):
    ph = relative_phases(state, 0, compiled.circuit.outputs["x"].ids)
    want = {0: 0.0, 1: math.pi / 4, 2: math.pi, 3: math.pi / 4}
    for k, v in want.items():
        _close(ph[k], v)


def _check_tanh_amp(compiled, state):
    ind = compiled.circuit.outputs["ind"].ids
    # the truncated Taylor value at x = 0.8125 (174/256), derived independently in the tests
    _close(marginal_amplitude(state, ind, 1).real, 174 / 256)


def _check_piecewise(compiled, state):
    dist = distribution(state, ["x", "f_x"])
    assert len(dist) == 32
    for (x, fx), p in dist.items():
        _close(p, 1 / 32)
        assert 0 <= fx < 1


def _check_knapsack(compiled, state):
    _close(state.norm(), 1.0)
    assert len(distribution(state)) == 32


def _piecewise_args():
    a, b = segment_coefs(math.tanh, PIECEWISE_SEGMENTS)
    return {"p": PIECEWISE_PRECISION, "a_coefs": a, "b_coefs": b}


CORPUS: dict[str, CorpusEntry] = {e.name: e for e in [
    CorpusEntry("bell", "two-qubit entangled pair", check=_check_bell),
    CorpusEntry("struct_sum", "record of three 2-bit numbers and their 4-bit sum", check=_check_struct_sum),
    CorpusEntry("phase_flip", "phase flip of |11> via a predicate computed into an ancilla",
                check=_phase_oracle_check(lambda n: {3})),
    CorpusEntry("sorted_oracle", "phase oracle marking sorted triples of 2-bit numbers",
                check=_phase_oracle_check(_sorted_triples)),
    CorpusEntry("digital_arith", "out-of-place arithmetic with an inferred result format",
                check=_check_digital),
    CorpusEntry("phase_square", "phase encoding of x**2", check=_check_phase_square),
    CorpusEntry("tanh_amp", "amplitude encoding of a tanh Taylor polynomial", check=_check_tanh_amp),
    CorpusEntry("piecewise_tanh", "piecewise-linear tanh on four segments",
                args=_piecewise_args(), consts={"NUM_SEGS": PIECEWISE_SEGMENTS}, check=_check_piecewise),
    CorpusEntry("knapsack_qaoa", "one QAOA layer for a two-variable integer knapsack",
                args={"gammas": [0.1], "betas": [0.0]}, consts={"NUM_LAYERS": 1}, check=_check_knapsack),
]}


def compile_entry(entry: CorpusEntry, **kw):
    return compile_source(entry.source(), filename=entry.filename, args=entry.args, consts=entry.consts, **kw)

