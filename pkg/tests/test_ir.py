import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from miniqmod.ir import (Alloc, CircuitIR, Gate, InvalidCircuit, InvalidCount, InvalidGate, OverlappingControl,
                         QubitPool, Release, UnsupportedGate, adjoint, alloc, controlled,
                         decompose_multicontrol, emit_qasm3, gate_matrix, power, resource_report, validate)
from miniqmod.sim import run
from support import compiled


def circ(n, gates):
    return CircuitIR([Alloc(tuple(range(n))), *gates])


def G(kind, *qs, theta=None):
    return Gate(kind, qs, () if theta is None else (theta,))


def state_of(c, init=None):
    return run(c, initial=init, check_hygiene=False).state.dense()


# ---- pool ----

def test_alloc_fresh_then_lifo():
    pool = QubitPool()
    assert alloc(pool, 2) == [0, 1]
    pool.release([0, 1])
    assert alloc(pool, 1) == [1]
    assert alloc(pool, 2) == [0, 2]


def test_alloc_zero_is_rejected():
    with pytest.raises(InvalidCount):
        alloc(QubitPool(), 0)


def test_pool_without_recycling():
    pool = QubitPool(recycle=False)
    a = pool.alloc(2)
    pool.release(a)
    assert pool.alloc(2) == [2, 3]


@given(st.lists(st.tuples(st.booleans(), st.integers(1, 3)), max_size=40))
def test_pool_matches_replayed_policy(ops):
    pool, free, nxt, live = QubitPool(), [], 0, []
    for is_alloc, n in ops:
        if is_alloc or not live:
            got = pool.alloc(n)
            want = []
            for _ in range(n):
                if free:
                    want.append(free.pop())
                else:
                    want.append(nxt)
                    nxt += 1
            assert got == want
            live += got
        else:
            ids = live[-n:]
            del live[-n:]
            pool.release(ids)
            free += ids
        assert not set(pool.free) & pool.live


# ---- well-formedness ----

def test_validate_rejects_dead_operand_and_double_release():
    with pytest.raises(InvalidCircuit):
        validate(CircuitIR([Alloc((0,)), Release((0,)), G("X", 0)]))
    with pytest.raises(InvalidCircuit):
        validate(CircuitIR([Alloc((0,)), Release((0,)), Release((0,))]))


def test_gate_operands_must_be_distinct():
    with pytest.raises(InvalidGate):
        G("CX", 1, 1)


@pytest.mark.parametrize("name", ["bell", "struct_sum", "phase_flip", "sorted_oracle", "digital_arith",
                                  "phase_square", "tanh_amp", "piecewise_tanh", "knapsack_qaoa"])
def test_synthesized_circuits_validate(name):
    c = compiled(name).circuit
    validate(c)
    validate(decompose_multicontrol(c))


# ---- functors ----

def test_adjoint_examples():
    c = CircuitIR([G("H", 0), G("CX", 0, 1)])
    assert adjoint(c).events == [G("CX", 0, 1), G("H", 0)]
    assert adjoint(CircuitIR([G("RZ", 0, theta=0.3)])).events == [G("RZ", 0, theta=-0.3)]
    assert adjoint(CircuitIR([G("S", 0), G("T", 1)])).events == [G("Tdg", 1), G("Sdg", 0)]


def test_adjoint_swaps_alloc_and_release():
    c = CircuitIR([Alloc((2,)), G("CX", 0, 2), G("CX", 0, 2), Release((2,))])
    assert adjoint(c).events == [Alloc((2,)), G("CX", 0, 2), G("CX", 0, 2), Release((2,))]


def _random_circuit(rng, n, m):
    kinds = ["H", "X", "Y", "Z", "S", "T", "Sdg", "Tdg", "RX", "RY", "RZ", "P", "CX", "CCX", "CP", "SWAP"]
    out = []
    for _ in range(m):
        k = rng.choice(kinds)
        arity = {"CX": 2, "CP": 2, "SWAP": 2, "CCX": 3}.get(k, 1)
        qs = rng.sample(range(n), arity)
        out.append(G(k, *qs, theta=rng.uniform(-3, 3) if k in ("RX", "RY", "RZ", "P", "CP") else None))
    return out


@pytest.mark.parametrize("seed", range(5))
def test_adjoint_involution_and_identity(seed):
    rng = random.Random(seed)
    body = CircuitIR(_random_circuit(rng, 5, 50))
    assert adjoint(adjoint(body)).events == body.events
    prep = [G("RY", q, theta=rng.uniform(0, 3)) for q in range(5)]
    before = state_of(circ(5, prep))
    after = state_of(circ(5, prep + body.events + adjoint(body).events))
    assert abs(abs(np.vdot(before, after)) - 1) < 1e-10


def test_controlled_examples():
    assert controlled(CircuitIR([G("X", 1)]), 0).events == [G("CX", 0, 1)]
    c = controlled(CircuitIR([G("CX", 1, 2), G("P", 1, theta=0.5), G("CCX", 1, 2, 3)]), 0)
    assert [g.kind for g in c.events] == ["CCX", "CP", "MCX"]
    with pytest.raises(OverlappingControl):
        controlled(CircuitIR([G("X", 0)]), 0)


@pytest.mark.parametrize("seed", range(5))
def test_controlled_acts_only_when_control_is_set(seed):
    rng = random.Random(seed)
    body = CircuitIR([g for g in _random_circuit(rng, 4, 25)]).events
    shifted = [g.remap({q: q + 1 for q in range(4)}) for g in body]
    prep = [G("RY", q, theta=rng.uniform(0, 3)) for q in range(1, 5)]
    ctl = controlled(CircuitIR(shifted), 0).events
    plain = state_of(circ(5, prep + shifted), {0: 1})
    on = state_of(circ(5, prep + ctl), {0: 1})
    off = state_of(circ(5, prep + ctl))
    idle = state_of(circ(5, prep))
    assert np.allclose(on, plain, atol=1e-10)
    assert np.allclose(off, idle, atol=1e-10)


def test_power():
    c = CircuitIR([G("H", 0), G("T", 0)])
    assert power(c, 1).events == c.events
    assert power(c, 0).events == []
    theta = 0.37
    three = state_of(circ(1, [G("H", 0), *power(CircuitIR([G("RZ", 0, theta=theta)]), 3).events]))
    once = state_of(circ(1, [G("H", 0), G("RZ", 0, theta=3 * theta)]))
    assert abs(abs(np.vdot(three, once)) - 1) < 1e-12


# ---- decomposition ----

def test_mcx3_decomposition_shape_and_equivalence():
    c = circ(4, [G("MCX", 0, 1, 2, 3)])
    d = decompose_multicontrol(c)
    gates = d.gates
    assert sorted(g.kind for g in gates) == ["CCX", "CCX", "CCX"]
    anc = {q for e in d.events if isinstance(e, Alloc) for q in e.ids} - set(range(4))
    assert len(anc) == 1
    for code in range(16):
        init = {q: (code >> q) & 1 for q in range(4)}
        out = run(d, initial=init).state
        want = code ^ (8 if code & 7 == 7 else 0)
        assert abs(out.amplitude(want)) == pytest.approx(1.0)


def test_small_multicontrols_are_renamed_not_expanded():
    d = decompose_multicontrol(circ(3, [G("MCP", 0, 1, theta=0.4), G("MCX", 0, 1, 2)]))
    assert [g.kind for g in d.gates] == ["CP", "CCX"]


@pytest.mark.parametrize("k", [3, 4, 5])
def test_mcp_decomposition_is_equivalent(k):
    prep = [G("H", q) for q in range(k)]
    c = circ(k, prep + [G("MCP", *range(k), theta=0.9)])
    a = state_of(c)
    b = run(decompose_multicontrol(c)).state.dense()
    assert np.allclose(a, b, atol=1e-12)


def test_gate_matrices_are_unitary():
    for g in [G("H", 0), G("RX", 0, theta=0.3), G("CP", 0, 1, theta=1.1), G("CCX", 0, 1, 2),
              G("MCX", 0, 1, 2, 3), G("SWAP", 0, 1)]:
        m = gate_matrix(g)
        assert np.allclose(m @ m.conj().T, np.eye(len(m)))


# ---- report and emission ----

def test_bell_report():
    r = resource_report(compiled("bell").decomposed())
    assert r.gate_counts == {"H": 1, "CX": 1}
    assert (r.depth, r.width) == (2, 2)


def test_empty_report():
    r = resource_report(CircuitIR())
    assert (r.total_gates, r.depth, r.width, r.allocations) == (0, 0, 0, 0)


def test_qasm_bell_and_rotation():
    text = emit_qasm3(compiled("bell").decomposed())
    assert text.startswith("OPENQASM 3.0;")
    assert "qubit[2] q;" in text
    assert "h q[0];\ncx q[0], q[1];" in text
    rz = emit_qasm3(circ(1, [G("RZ", 0, theta=math.pi / 4)]))
    assert "rz(0.7853981633974483) q[0];" in rz


def test_qasm_requires_decomposition():
    with pytest.raises(UnsupportedGate):
        emit_qasm3(circ(4, [G("MCX", 0, 1, 2, 3)]))


def test_qasm_is_deterministic():
    a = emit_qasm3(compiled("sorted_oracle").decomposed())
    b = emit_qasm3(compiled("sorted_oracle").decomposed())
    assert a == b
