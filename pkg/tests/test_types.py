import itertools
import warnings
from fractions import Fraction
from math import floor

import pytest
from hypothesis import given, strategies as st

import oracles
from miniqmod.types import (Binary, Const, FixedPointFormat as F, LossyConstantWarning, NotRepresentable,
                            NumInterval, SizeMismatch, Unary, Var, annotate, decode, encode, evaluate,
                            infer_format, infer_interval, plan_alignment)
from support import random_annotated

formats = st.builds(
    lambda n, s, f: F(n, s and n >= 2, min(f, n - 1 if s and n >= 2 else n)),
    st.integers(1, 8), st.booleans(), st.integers(0, 8))


def test_decode_examples():
    assert decode([1, 1, 1, 1], F(4, False, 3)) == Fraction(15, 8)
    assert decode([0, 1], F(2, True, 1)) == -1
    assert decode([0] * 5, F(5, True, 2)) == 0


def test_decode_checks_width():
    with pytest.raises(SizeMismatch):
        decode([1, 0, 1], F(2))


def test_encode_examples():
    assert encode(Fraction(13, 16), F(5, False, 5)) == [0, 1, 0, 1, 1]
    assert encode(3, F(2)) == [1, 1]
    with pytest.raises(NotRepresentable):
        encode(2, F(1))
    with pytest.raises(NotRepresentable):
        encode(Fraction(1, 4), F(3, False, 1))


def test_format_domains_from_the_digital_example():
    assert F(4, False, 3).values() == [Fraction(k, 8) for k in range(16)]
    assert F(2, True, 1).values() == [-1, Fraction(-1, 2), 0, Fraction(1, 2)]


def test_invalid_formats_rejected():
    for args in [(0, False, 0), (2, False, 3), (2, True, 2)]:
        with pytest.raises(ValueError):
            F(*args)


@pytest.mark.parametrize("size", range(1, 9))
def test_encode_decode_inverse_exhaustive(size):
    for signed in (False, True):
        for frac in range(0, size + (0 if signed else 1)):
            fmt = F(size, signed, frac)
            for v in fmt.values():
                assert decode(encode(v, fmt), fmt) == v
            for code in range(1 << size):
                bits = [(code >> j) & 1 for j in range(size)]
                assert encode(decode(bits, fmt), fmt) == bits


def test_interval_of_the_digital_example():
    a, b = Var("a"), Var("b")
    e = Binary("add", Binary("mul", Binary("mul", Const(Fraction(1, 4)), a), b), Const(Fraction(3, 2)))
    fm = {"a": F(2), "b": F(2, True, 1)}
    iv = infer_interval(e, fm)
    # brute force over the 16 (a, b) pairs
    values = [Fraction(1, 4) * x * y + Fraction(3, 2) for x in fm["a"].values() for y in fm["b"].values()]
    assert (iv.lo, iv.hi, iv.frac) == (min(values), max(values), 3) == (Fraction(3, 4), Fraction(15, 8), 3)
    assert infer_format(iv, 8) == F(4, False, 3)


def test_relational_interval_is_boolean():
    iv = infer_interval(Binary("lt", Var("a"), Const(Fraction(3))), {"a": F(2)})
    assert (iv.lo, iv.hi, iv.frac) == (0, 1, 0)


def test_knapsack_objective_interval():
    e = Binary("add", Binary("mul", Const(Fraction(3)), Var("a")), Binary("mul", Const(Fraction(5)), Var("b")))
    fm = {"a": F(3), "b": F(2)}
    iv = infer_interval(e, fm)
    brute = [3 * a + 5 * b for a in range(8) for b in range(4)]
    assert (iv.lo, iv.hi, iv.frac) == (min(brute), max(brute), 0) == (0, 36, 0)


@pytest.mark.parametrize("iv,mp,fmt", [
    (NumInterval(Fraction(3, 4), Fraction(15, 8), 3), 8, F(4, False, 3)),
    (NumInterval(0, 0, 0), 8, F(1, False, 0)),
    (NumInterval(-1, Fraction(1, 2), 1), 8, F(2, True, 1)),
    (NumInterval(0, Fraction(255, 1024), 10), 8, F(8, False, 8)),
])
def test_infer_format_examples(iv, mp, fmt):
    assert infer_format(iv, mp) == fmt


def _covers(fmt, lo, hi):
    return fmt.min_value <= lo and hi <= fmt.max_value


@given(st.integers(-300, 300), st.integers(0, 300), st.integers(0, 6), st.integers(1, 8))
def test_infer_format_is_minimal(lo_k, width, frac, mp):
    iv = NumInterval(Fraction(lo_k, 1 << frac), Fraction(lo_k + width, 1 << frac), frac)
    fmt = infer_format(iv, mp)
    f = min(frac, mp)
    lo, hi = oracles.trunc(iv.lo, f), oracles.trunc(iv.hi, f)
    assert fmt.fraction_digits == f and fmt.signed == (lo < 0)
    assert _covers(fmt, lo, hi)
    smaller = fmt.size - 1
    if smaller >= max(1, f + fmt.signed):
        assert not _covers(F(smaller, fmt.signed, f), lo, hi)


def test_plan_alignment_examples():
    same = plan_alignment(F(4, False, 3), F(4, False, 3))
    assert (same.drop_low, same.extend_high) == (0, 0)
    ext = plan_alignment(F(2), F(4))
    assert (ext.drop_low, ext.extend_high) == (0, 2)
    assert [ext.apply(c) for c in range(4)] == [0, 1, 2, 3]


def test_plan_alignment_truncates_and_wraps_exhaustively():
    src, dst = F(6, True, 4), F(4, True, 2)
    plan = plan_alignment(src, dst)
    assert plan.drop_low == 2
    for code in range(64):
        v = src.value_of(code)
        expected = oracles.code_value(floor(v * 4), dst)
        assert dst.value_of(plan.apply(code)) == expected


@given(formats, formats)
def test_plan_alignment_matches_floor_and_wrap(src, dst):
    plan = plan_alignment(src, dst)
    for code in range(1 << src.size):
        v = src.value_of(code)
        expected = oracles.code_value(floor(v * (1 << dst.fraction_digits)), dst)
        assert dst.value_of(plan.apply(code)) == expected


def test_constant_snapping_warns():
    with pytest.warns(LossyConstantWarning):
        node = annotate(Binary("mul", Const(Fraction(3, 10)), Var("x")), {"x": F(2)}, 8)
    assert node.args[0].value == Fraction(77, 256)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        annotate(Binary("mul", Const(Fraction(1, 4)), Var("x")), {"x": F(2)}, 8)


@given(st.integers(0, 10 ** 6))
def test_interval_soundness_random(seed):
    ops = ["add", "sub", "mul", "lt", "ge", "eq", "and", "or"]
    tree, fm, node = random_annotated(seed, max_vars=3, max_size=3, ops=ops, mp=8, allow_unary=False)
    iv = infer_interval(tree, fm)
    names = list(fm)
    for combo in itertools.product(*(fm[k].values() for k in names)):
        v = oracles.exact_eval(tree, dict(zip(names, combo)))
        assert iv.contains(v)


@pytest.mark.parametrize("op", ["add", "sub"])
@given(a=formats, b=formats)
def test_endpoints_attained_for_add_sub(op, a, b):
    iv = infer_interval(Binary(op, Var("a"), Var("b")), {"a": a, "b": b})
    reached = {oracles.exact_eval(Binary(op, Var("a"), Var("b")), {"a": x, "b": y})
               for x in (a.min_value, a.max_value) for y in (b.min_value, b.max_value)}
    assert iv.lo in reached and iv.hi in reached


@given(formats)
def test_endpoints_attained_for_neg(a):
    iv = infer_interval(Unary("neg", Var("a")), {"a": a})
    assert (iv.lo, iv.hi) == (-a.max_value, -a.min_value)


@given(st.integers(0, 10 ** 6))
def test_evaluate_agrees_with_integer_oracle(seed):
    _, fm, node = random_annotated(seed, max_vars=2, max_size=3, mp=(3, 8)[seed % 2])
    names = list(fm)
    for codes in itertools.product(*(range(1 << fm[k].size) for k in names)):
        env = dict(zip(names, codes))
        got = evaluate(node, {k: fm[k].value_of(c) for k, c in env.items()})
        assert got == oracles.code_eval_value(node, env)
