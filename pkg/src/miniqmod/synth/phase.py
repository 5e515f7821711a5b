"""Phase encoding: exp(i*theta*f(x)) as a product of (multi-)controlled phases."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..types.expr import UnsupportedOperator, Var
from ..types.interval import Annotated
from .arith import Reg
from .fragment import Emitter


class NonPolynomial(UnsupportedOperator):
    pass


@dataclass
class PhasePolynomial:
    """Multilinear polynomial over qubit ids: monomial (frozenset of ids) -> coefficient."""
    terms: dict = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    @classmethod
    def const(cls, v) -> "PhasePolynomial":
        return cls({}, Fraction(v))

    @classmethod
    def of_register(cls, reg: Reg) -> "PhasePolynomial":
        fmt = reg.fmt
        terms = {}
        for j, q in enumerate(reg.ids):
            w = Fraction(2) ** (j - fmt.fraction_digits)
            if fmt.signed and j == fmt.size - 1:
                w = -w
            terms[frozenset([q])] = w
        return cls(terms)

    def _items(self):
        yield frozenset(), self.constant
        yield from self.terms.items()

    @staticmethod
    def _build(pairs) -> "PhasePolynomial":
        out: dict = {}
        for m, c in pairs:
            out[m] = out.get(m, Fraction(0)) + c
        const = out.pop(frozenset(), Fraction(0))
        return PhasePolynomial({m: c for m, c in out.items() if c != 0}, const)

    def __add__(self, other):
        return self._build([*self._items(), *other._items()])

    def __neg__(self):
        return PhasePolynomial({m: -c for m, c in self.terms.items()}, -self.constant)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        # b*b = b for boolean variables, so monomials multiply by set union
        return self._build([(m1 | m2, c1 * c2) for m1, c1 in self._items() for m2, c2 in other._items()])

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def evaluate(self, bits: Mapping[int, int]) -> Fraction:
        return self.constant + sum((c for m, c in self.terms.items() if all(bits[q] for q in m)), Fraction(0))


def expr_to_phase_polynomial(node: Annotated, env: Mapping[str, Reg]) -> PhasePolynomial:
    """Exact (untruncated) polynomial of an annotated expression tree."""
    if node.is_const:
        return PhasePolynomial.const(node.value)
    if isinstance(node.expr, Var):
        return PhasePolynomial.of_register(env[node.expr.name])
    args = [expr_to_phase_polynomial(a, env) for a in node.args]
    op = node.op
    if op == "add":
        return args[0] + args[1]
    if op == "sub":
        return args[0] - args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "neg":
        return -args[0]
    raise NonPolynomial(f"'{op}' is not allowed in a phase expression; only + - * and powers are")


def synth_phase(em: Emitter, poly: PhasePolynomial, theta: float) -> list:
    """P / CP / MCP per monomial; the constant term is a global phase and is dropped."""
    out = []
    for m in sorted(poly.terms, key=lambda s: (len(s), sorted(s))):
        angle = math.remainder(theta * float(poly.terms[m]), 2 * math.pi)
        if abs(angle) < 1e-15:
            continue
        qs = sorted(m)
        kind = {1: "P", 2: "CP"}.get(len(qs), "MCP")
        out.append(em.gate(kind, qs, (angle,)))
    return out
