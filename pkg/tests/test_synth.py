import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from miniqmod.ir import Alloc, CircuitIR, Gate, validate
from miniqmod.pipeline import compile_source
from miniqmod.sema import SemaError
from miniqmod.sim import distribution, marginal_amplitude, relative_phases, run
from miniqmod.synth import Emitter, PhasePolynomial, Reg, expr_to_phase_polynomial, synth_phase
from miniqmod.types import Binary, Const, FixedPointFormat as F, Var, annotate
from support import basis_run, compiled, expression_circuit


def build(src, **kw):
    return compile_source(src, "t.qmod", **kw)


def outcome(src, **kw):
    c = build(src, **kw).circuit
    return c, run(c).state


# ---- digital operators ----

OPERATORS = ["add", "sub", "mul", "lt", "le", "gt", "ge", "eq", "ne", "bitand", "bitor", "bitxor"]


@pytest.mark.parametrize("op", OPERATORS)
def test_operator_truth_table(op):
    formats = {"a": F(2, True, 1), "b": F(3, False, 1)}
    node = annotate(Binary(op, Var("a"), Var("b")), formats, 8)
    c, ins, out = expression_circuit(node, formats, superpose=False)
    for ca in range(4):
        for cb in range(8):
            state = basis_run(c, ins["a"] + ins["b"], ca | cb << 2)
            (idx,) = state.indices
            res = sum(((idx >> state.order.index(q)) & 1) << j for j, q in enumerate(out))
            assert node.fmt.value_of(res) == oracles.code_eval_value(node, {"a": ca, "b": cb})


def test_xor_constant_sets_code():
    c, s = outcome("qfunc main(x: output qnum[5, unsigned, 5]) { allocate(x); x ^= 0.8125; }")
    assert distribution(s, ["x"]) == {(Fraction(13, 16),): pytest.approx(1.0)}
    x = c.outputs["x"].ids
    assert abs(marginal_amplitude(s, x, [(26 >> j) & 1 for j in range(5)])) == pytest.approx(1.0)


def test_assign_constant_infers_format():
    c, s = outcome("qfunc main(res: output qnum) { res |= 3; }")
    reg = c.outputs["res"]
    assert (reg.qtype.fmt.size, reg.qtype.fmt.signed, reg.qtype.fmt.fraction_digits) == (2, False, 0)
    assert abs(marginal_amplitude(s, reg.ids, [1, 1])) == pytest.approx(1.0)


def test_sorted_predicate_over_all_inputs():
    src = """
    qfunc main(arr: output qarray[qnum[2], 3], r: output qbit) {
      allocate(arr);
      r |= (arr[0] < arr[1]) & (arr[1] < arr[2]);
    }
    """
    c = build(src).circuit
    ids = list(c.outputs["arr"].ids)
    (rq,) = c.outputs["r"].ids
    for code in range(64):
        state = basis_run(c, ids, code)
        (idx,) = state.indices
        x = [(code >> 2 * k) & 3 for k in range(3)]
        assert (idx >> state.order.index(rq)) & 1 == (x[0] < x[1] < x[2])


def test_sorted_oracle_flips_exactly_sorted_triples():
    s = run(compiled("sorted_oracle").circuit).state
    ids = compiled("sorted_oracle").circuit.outputs["arr"].ids
    want = oracles.sorted_triples()
    for code in range(64):
        bits = [(code >> j) & 1 for j in range(6)]
        amp = marginal_amplitude(s, ids, bits)
        sign = -1 if code in want else 1
        assert amp == pytest.approx(sign / 8)


# ---- phase polynomials ----

def _poly(tree, formats):
    em = Emitter()
    env = {k: Reg(tuple(em.fresh(f.size)), f) for k, f in formats.items()}
    node = annotate(tree, formats, 8)
    return expr_to_phase_polynomial(node, env), env, em


def test_square_polynomial():
    x = Var("x")
    poly, env, _ = _poly(Binary("pow", x, Const(Fraction(2))), {"x": F(2)})
    b0, b1 = env["x"].ids
    assert poly.terms == {frozenset([b0]): 1, frozenset([b1]): 4, frozenset([b0, b1]): 4}
    assert poly.constant == 0


def test_negated_linear_polynomial():
    tree = Binary("sub", Const(Fraction(0)),
                  Binary("add", Binary("mul", Const(Fraction(3)), Var("a")),
                         Binary("mul", Const(Fraction(5)), Var("b"))))
    poly, env, _ = _poly(tree, {"a": F(3), "b": F(2)})
    want = {frozenset([q]): -3 * 2 ** j for j, q in enumerate(env["a"].ids)}
    want.update({frozenset([q]): -5 * 2 ** j for j, q in enumerate(env["b"].ids)})
    assert poly.terms == want


def test_constant_phase_emits_nothing():
    poly = PhasePolynomial.const(Fraction(7, 3))
    assert poly.terms == {} and poly.constant == Fraction(7, 3)
    assert synth_phase(Emitter(), poly, 1.3) == []


def test_zero_angle_emits_nothing():
    poly, _, em = _poly(Binary("pow", Var("x"), Const(Fraction(2))), {"x": F(2)})
    assert synth_phase(em, poly, 0.0) == []


def test_phase_gate_kinds():
    poly, _, em = _poly(Binary("pow", Var("x"), Const(Fraction(2))), {"x": F(2)})
    assert [e.kind for e, _ in synth_phase(em, poly, math.pi / 4)] == ["P", "P", "CP"]


@pytest.mark.parametrize("seed", range(4))
def test_random_cubic_phase_is_diagonal(seed):
    rng = random.Random(seed)
    coef = [Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(4)]
    x = Var("x")
    tree = Binary("add", Const(coef[0]), Binary("mul", Const(coef[1]), x))
    tree = Binary("add", tree, Binary("mul", Const(coef[2]), Binary("pow", x, Const(Fraction(2)))))
    tree = Binary("add", tree, Binary("mul", Const(coef[3]), Binary("pow", x, Const(Fraction(3)))))
    fmt = F(3, True, 1)
    poly, env, em = _poly(tree, {"x": fmt})
    theta = 0.7
    frag = synth_phase(em, poly, theta)
    ids = env["x"].ids
    c = CircuitIR([Alloc(ids), *[Gate("H", (q,)) for q in ids], *[e for e, _ in frag]])
    s = run(c).state
    phases = relative_phases(s, 0, list(ids))
    for code in range(8):
        v = fmt.value_of(code)
        exact = float(sum(c * v ** k for k, c in enumerate(coef)) - coef[0])
        want = cmath.phase(cmath.exp(1j * theta * exact))
        got = phases[code]
        assert abs(cmath.exp(1j * got) - cmath.exp(1j * want)) < 1e-9


# ---- amplitude encoding ----

def test_constant_one_amplitude_is_a_flip():
    src = """
    qfunc main(x: output qnum[1], ind: output qbit) {
      allocate(x);
      allocate(ind);
      assign_amplitude(x*0 + 1, ind);
    }
    """
    c, s = outcome(src)
    (q,) = c.outputs["ind"].ids
    assert abs(marginal_amplitude(s, [q], [1])) == pytest.approx(1.0)


def test_half_register_amplitude():
    src = """
    qfunc main(x: output qnum[2], ind: output qbit) {
      allocate(x);
      hadamard_transform(x);
      allocate(ind);
      assign_amplitude(x/2, ind);
    }
    """
    c, s = outcome(src)
    xs, (q,) = c.outputs["x"].ids, c.outputs["ind"].ids
    for code in range(4):
        g = min(code / 2, 1.0)
        bits = [code & 1, code >> 1]
        assert marginal_amplitude(s, [*xs, q], bits + [1]) == pytest.approx(g / 2)
        assert marginal_amplitude(s, [*xs, q], bits + [0]) == pytest.approx(math.sqrt(1 - g * g) / 2)


# ---- structure ----

def test_repeat_emits_body_per_iteration():
    c = build("qfunc main(q: output qbit) { allocate(q); repeat (i, 3) { X(q); } }").circuit
    assert [g.kind for g in c.gates] == ["X", "X", "X"]


def test_within_ancillas_are_reused():
    src = """
    qfunc flip(x: qbit) {
      aux: qbit;
      within { allocate(aux); CX(x, aux); } apply { Z(aux); }
    }
    qfunc main(x: output qbit) { allocate(x); H(x); flip(x); flip(x); }
    """
    on = build(src).circuit
    off = build(src, recycle=False).circuit
    assert on.width == 2 and off.num_ids == 3


def test_control_on_condition_only_acts_when_true():
    src = """
    qfunc main(x: output qnum[2], y: output qbit) {
      allocate(x);
      hadamard_transform(x);
      allocate(y);
      control (x == 2) { X(y); }
    }
    """
    assert distribution(outcome(src)[1], ["x", "y"]) == pytest.approx(
        {(0, 0): 0.25, (1, 0): 0.25, (2, 1): 0.25, (3, 0): 0.25})


# ---- fuzz: accepted programs never reference unbound qubits ----

STATEMENTS = [
    "H(c[0]);", "X(c[1]);", "CX(c[0], c[1]);", "{q} ^= {p} + 1;", "c[0] ^= {q} < 2;", "{q} += {p};",
    "control (c[0]) {{ {q} ^= 3; }}", "control ({q} == 1) {{ X(c[1]); }}",
    "within {{ {q} ^= 1; }} apply {{ Z(c[0]); }}", "phase({q} * {p}, 0.5);", "hadamard_transform({q});",
    "t: qnum[2]; within {{ t |= {q} + {p}; }} apply {{ phase(t, 0.3); }}",
    "repeat (i, 2) {{ H(c[i]); }}", "{p} ^= {q} * {q};",
]


@settings(max_examples=40)
@given(st.lists(st.tuples(st.sampled_from(STATEMENTS), st.booleans()), min_size=1, max_size=6))
def test_accepted_programs_are_well_formed(stmts):
    body = "\n".join(s.format(q="a", p="b") if flip else s.format(q="b", p="a") for s, flip in stmts)
    src = ("qfunc main(a: output qnum[2], b: output qnum[2], c: output qarray[qbit, 2]) {\n"
           "  allocate(a); allocate(b); allocate(c);\n" + body + "\n}")
    try:
        comp = build(src)
    except SemaError:
        return
    validate(comp.circuit)
    validate(comp.decomposed())
    run(comp.circuit)
