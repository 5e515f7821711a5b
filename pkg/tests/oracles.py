"""Independent classical oracles for the test-suite.

Nothing here calls the synthesizer, the simulator or ``types.evaluate``;
each function recomputes an expected result from first principles so that
tests compare two separate routes.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from math import floor

from miniqmod.types import Binary, Const, Unary, Var

MP = 8


def trunc(v, frac):
    return Fraction(floor(Fraction(v) * (1 << frac)), 1 << frac)


def snap(v, frac=MP):
    return Fraction(round(Fraction(v) * (1 << frac)), 1 << frac)


# ---- fixed-point codes, by integer manipulation only ----

def to_signed(code, size, signed):
    code &= (1 << size) - 1
    if signed and code >> (size - 1):
        code -= 1 << size
    return code


def code_value(code, fmt):
    return Fraction(to_signed(code, fmt.size, fmt.signed), 1 << fmt.fraction_digits)


def _rescale(k, from_frac, to_frac):
    """Integer k * 2**-from_frac expressed at to_frac fraction digits, floored."""
    if to_frac >= from_frac:
        return k << (to_frac - from_frac)
    return k >> (from_frac - to_frac)  # python >> floors negative numbers


def code_eval(node, codes, strict=False):
    """Signed integer code of ``node`` (at node.fmt's fraction digits) under
    wrap-around register semantics, computed with shifts and masks.

    ``node`` is an annotated tree; only its formats, operators and folded
    constant values are used. ``codes`` maps variable names to raw codes.
    With ``strict`` a value outside its node's format range raises
    OverflowError instead of wrapping.
    """
    fmt = node.fmt
    f = fmt.fraction_digits
    if node.value is not None:
        num, den = node.value.numerator, node.value.denominator
        k = floor(Fraction(num * (1 << f), den))
        return to_signed(k, fmt.size, fmt.signed)
    op = node.op
    if op == "var":
        return to_signed(codes[node.expr.name], fmt.size, fmt.signed)
    kids = [(code_eval(a, codes, strict), a.fmt.fraction_digits) for a in node.args]
    if op in ("add", "sub"):
        g = max(kf for _, kf in kids)
        x, y = (_rescale(k, kf, g) for k, kf in kids)
        raw, rf = (x + y if op == "add" else x - y), g
    elif op == "mul":
        (x, xf), (y, yf) = kids
        raw, rf = x * y, xf + yf
    elif op == "neg":
        raw, rf = -kids[0][0], kids[0][1]
    elif op in ("lt", "le", "gt", "ge", "eq", "ne"):
        g = max(kf for _, kf in kids)
        x, y = (_rescale(k, kf, g) for k, kf in kids)
        raw = {"lt": x < y, "le": x <= y, "gt": x > y, "ge": x >= y, "eq": x == y, "ne": x != y}[op]
        raw, rf = int(raw), 0
    elif op in ("and", "or"):
        x, y = (k != 0 for k, _ in kids)
        raw, rf = int(x and y if op == "and" else x or y), 0
    elif op == "not":
        raw, rf = int(kids[0][0] == 0), 0
    elif op in ("bitand", "bitor", "bitxor"):
        x, y = (_rescale(k, kf, f) for k, kf in kids)
        mask = (1 << fmt.size) - 1
        x, y = x & mask, y & mask
        raw = {"bitand": x & y, "bitor": x | y, "bitxor": x ^ y}[op]
        rf = f
    elif op == "bitnot":
        a = node.args[0].fmt
        raw, rf = ~kids[0][0] & ((1 << a.size) - 1), a.fraction_digits
    else:
        raise ValueError(op)
    k = _rescale(raw, rf, f)
    if strict and op not in ("bitand", "bitor", "bitxor", "bitnot"):
        lo = -(1 << (fmt.size - 1)) if fmt.signed else 0
        hi = (1 << (fmt.size - 1)) - 1 if fmt.signed else (1 << fmt.size) - 1
        if not lo <= k <= hi:
            raise OverflowError(f"{op} produced code {k} outside {fmt}")
    return to_signed(k, fmt.size, fmt.signed)


def exact_eval(tree, values):
    """Unbounded-precision value of a raw expression tree (no bitwise operators)."""
    if isinstance(tree, Const):
        return Fraction(tree.value)
    if isinstance(tree, Var):
        return Fraction(values[tree.name])
    if isinstance(tree, Unary):
        v = exact_eval(tree.operand, values)
        return {"neg": lambda: -v, "not": lambda: Fraction(int(v == 0))}[tree.op]()
    assert isinstance(tree, Binary)
    x, y = exact_eval(tree.left, values), exact_eval(tree.right, values)
    table = {
        "add": lambda: x + y, "sub": lambda: x - y, "mul": lambda: x * y,
        "lt": lambda: x < y, "le": lambda: x <= y, "gt": lambda: x > y,
        "ge": lambda: x >= y, "eq": lambda: x == y, "ne": lambda: x != y,
        "and": lambda: bool(x) and bool(y), "or": lambda: bool(x) or bool(y),
    }
    return Fraction(table[tree.op]())


def code_eval_value(node, codes):
    return Fraction(code_eval(node, codes), 1 << node.fmt.fraction_digits)


# ---- program-level oracles ----

def tanh_taylor_truncated(x=Fraction(26, 32), mp=MP):
    """x - x**3/3 + 2*x**5/15 with snapped constants and every product
    truncated to ``mp`` fraction digits (powers multiply left to right)."""
    c3, c5 = snap(Fraction(1, 3), mp), snap(Fraction(2, 15), mp)
    powers = [x]
    for _ in range(4):
        powers.append(trunc(powers[-1] * x, mp))
    x3, x5 = powers[2], powers[4]
    return x - trunc(c3 * x3, mp) + trunc(c5 * x5, mp)


def tanh_taylor_exact(x=0.8125):
    return x - x ** 3 / 3 + 2 * x ** 5 / 15


def endpoint_line(f, lo, hi):
    a = (f(hi) - f(lo)) / (hi - lo)
    return a, f(lo) - a * lo


def piecewise_table(a_coefs, b_coefs, p=5, num_segs=4, mp=MP):
    """Expected f_x for each 5-bit input code of the piecewise program.

    label = top log2(num_segs) bits of x; f_x = (a*x + b) with snapped
    coefficients, truncated to p fraction digits and reduced mod 1.
    """
    out = {}
    seg_bits = num_segs.bit_length() - 1
    for code in range(32):
        x = Fraction(code, 32)
        i = code >> (5 - seg_bits)
        v = snap(a_coefs[i], mp) * x + snap(b_coefs[i], mp)
        out[code] = Fraction(floor(v * (1 << p)) % (1 << p), 1 << p)
    return out


def piecewise_interp_error(f, num_segs=4, samples=1 << 14):
    """Max distance between f and its endpoint-interpolating piecewise line on [0, 1)."""
    w = 1 / num_segs
    worst = 0.0
    for i in range(num_segs):
        a, b = endpoint_line(f, i * w, (i + 1) * w)
        for k in range(samples // num_segs + 1):
            x = i * w + w * k / (samples // num_segs)
            worst = max(worst, abs(a * x + b - f(x)))
    return worst


def sorted_triples(bits=2):
    n = 1 << bits
    return {a | b << bits | c << 2 * bits for a, b, c in product(range(n), repeat=3) if a < b < c}


def knapsack_phases(gamma):
    """Relative phase per v code (a in bits 0..2, b in bits 3..4)."""
    out = {}
    for a in range(8):
        for b in range(4):
            phi = -gamma * (3 * a + 5 * b) if 2 * a + 3 * b <= 12 else 0.0
            out[a | b << 3] = phi % (2 * math.pi)
    return out


def square_phases(theta, bits=2):
    return {x: (theta * x * x) % (2 * math.pi) for x in range(1 << bits)}


def phase_gap(a, b):
    """Distance between two angles on the circle."""
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def expand_square_unsigned2():
    """x**2 for x = b0 + 2 b1 expanded by hand with b*b = b."""
    return {(0,): 1, (1,): 4, (0, 1): 4}
