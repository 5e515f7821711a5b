"""Out-of-place evaluation of annotated expression trees into fresh registers.

``compute(node)`` returns ``(fragment, reg)``. The fragment allocates
``reg`` and leaves the node's value in it, with every intermediate register
computed, used and uncomputed inside the fragment (children are conjugated
around the node's own operation). Values follow the truncating register
semantics of :func:`miniqmod.types.interval.evaluate`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..types.expr import UnsupportedOperator, Var
from ..types.fixedpoint import FixedPointFormat
from ..types.interval import Annotated, NumInterval, infer_format
from .arith import (ONE, Reg, add_into, const_sources, controlled_add_into, is_zero_into,
                    mul_const_into, reg_sources, scaled_code, sub_into, xor_into)
from .fragment import Emitter, conjugate

BOOL = FixedPointFormat(1, False, 0)
_RELATIONAL = {"lt", "le", "gt", "ge", "eq", "ne"}


def _const_frac(v: Fraction) -> int:
    return v.denominator.bit_length() - 1


def _operand_frac(node: Annotated) -> int:
    return _const_frac(node.value) if node.is_const else node.fmt.fraction_digits


def _domain(node: Annotated, reg) -> tuple[Fraction, Fraction]:
    if node.is_const:
        return node.value, node.value
    return reg.fmt.min_value, reg.fmt.max_value


class ExprSynth:
    def __init__(self, em: Emitter, env: Mapping[str, Reg]):
        self.em = em
        self.env = env

    def sources(self, node: Annotated, reg, frac: int, n: int, shift: int = 0):
        if node.is_const:
            return const_sources(scaled_code(node.value, frac + shift), n)
        return reg_sources(reg, frac, n, shift)

    def operand(self, node: Annotated):
        """(fragment, reg or None) for an operand; constants and variables need no work."""
        if node.is_const:
            return [], None
        if isinstance(node.expr, Var):
            return [], self.env[node.expr.name]
        return self.compute(node)

    def compute(self, node: Annotated):
        em = self.em
        if node.is_const or isinstance(node.expr, Var):
            out = Reg(tuple(em.fresh(node.fmt.size)), node.fmt)
            alloc = [em.alloc(out.ids)]
        if node.is_const:
            return alloc + xor_into(em, out.ids, const_sources(scaled_code(node.value, node.fmt.fraction_digits),
                                                               node.fmt.size)), out
        if isinstance(node.expr, Var):
            src = self.env[node.expr.name]
            return alloc + xor_into(em, out.ids, reg_sources(src, node.fmt.fraction_digits, node.fmt.size)), out
        prep, regs = [], []
        for a in node.args:
            f, r = self.operand(a)
            prep += f
            regs.append(r)
        # the result register is allocated only once the operands exist, which
        # keeps a chain of nested results from being live all at once
        out = Reg(tuple(em.fresh(node.fmt.size)), node.fmt)
        body = [em.alloc(out.ids)] + self.apply(node, regs, out)
        return conjugate(prep, body), out

    # ---- node operations: write the node value into the zeroed register ``out`` ----

    def apply(self, node: Annotated, regs, out: Reg) -> list:
        op = node.op
        if op in ("add", "sub", "mul", "neg"):
            return self.numeric(node, regs, out)
        if op in _RELATIONAL:
            return self.relational(node, regs, out)
        if op in ("and", "or", "not"):
            return self.logical(node, regs, out)
        if op in ("bitand", "bitor", "bitxor", "bitnot"):
            return self.bitwise(node, regs, out)
        raise UnsupportedOperator(f"'{op}' cannot be synthesized")

    def numeric(self, node: Annotated, regs, out: Reg) -> list:
        """Exact value scaled to F fraction digits, modulo 2**N, with N chosen so
        that the top ``out.fmt.size`` bits are the truncated result."""
        em = self.em
        args = node.args
        if node.op == "mul":
            big = sum(_operand_frac(a) for a in args)
        else:
            big = max(_operand_frac(a) for a in args)
        drop = big - out.fmt.fraction_digits
        assert drop >= 0, (node, big)
        n = out.fmt.size + drop
        if drop == 0:
            acc = out.ids
            alloc_acc = []
        else:
            acc = tuple(em.fresh(n))
            alloc_acc = [em.alloc(acc)]
        body = []
        if node.op == "neg":
            body += sub_into(em, acc, self.sources(args[0], regs[0], big, n))
        elif node.op in ("add", "sub"):
            body += xor_into(em, acc, self.sources(args[0], regs[0], big, n))
            second = self.sources(args[1], regs[1], big, n)
            body += add_into(em, acc, second) if node.op == "add" else sub_into(em, acc, second)
        else:
            body += self.multiply(args, regs, acc, n)
        if drop == 0:
            return body
        copy = xor_into(em, out.ids, list(acc[drop:]))
        return alloc_acc + conjugate(body, copy) + [em.release(acc)]

    def multiply(self, args, regs, acc, n) -> list:
        em = self.em
        a, b = args
        ra, rb = regs
        if b.is_const:
            a, b, ra, rb = b, a, rb, ra
        if a.is_const:
            k = a.value.numerator  # the constant's code at its own fraction digits
            fb = rb.fmt.fraction_digits
            return mul_const_into(em, acc, lambda j: reg_sources(rb, fb, n, j), k)
        # shift-and-add over the bits of b, the top bit weighted negatively when signed
        body = []
        fa = ra.fmt.fraction_digits
        for k, q in enumerate(rb.ids):
            if k >= n:
                break
            neg = rb.fmt.signed and k == rb.fmt.size - 1
            body += controlled_add_into(em, q, acc, reg_sources(ra, fa, n, k), subtract=neg)
        return body

    def difference(self, x: Annotated, rx, y: Annotated, ry):
        """Fragment leaving x - y exactly in a fresh signed register, and that register."""
        em = self.em
        big = max(_operand_frac(x), _operand_frac(y))
        xlo, xhi = _domain(x, rx)
        ylo, yhi = _domain(y, ry)
        fmt = infer_format(NumInterval(min(xlo - yhi, Fraction(-1, 1 << big)), xhi - ylo, big), big)
        if not fmt.signed:
            fmt = FixedPointFormat(fmt.size + 1, True, big)
        d = tuple(em.fresh(fmt.size))
        frag = [em.alloc(d)]
        frag += xor_into(em, d, self.sources(x, rx, big, fmt.size))
        frag += sub_into(em, d, self.sources(y, ry, big, fmt.size))
        return frag, d

    def relational(self, node: Annotated, regs, out: Reg) -> list:
        em = self.em
        op = node.op
        (a, b), (ra, rb) = node.args, regs
        r = out.ids[0]
        if op in ("eq", "ne"):
            body = self.equality(a, ra, b, rb, r)
            return body + ([em.gate("X", (r,))] if op == "ne" else [])
        # a < b  <=>  sign(a - b);  a > b  <=>  sign(b - a);  le/ge are the negations
        if op in ("lt", "ge"):
            frag, d = self.difference(a, ra, b, rb)
        else:
            frag, d = self.difference(b, rb, a, ra)
        body = conjugate(frag, [em.gate("CX", (d[-1], r))])
        if op in ("le", "ge"):
            body.append(em.gate("X", (r,)))
        return body

    def equality(self, a: Annotated, ra, b: Annotated, rb, r: int) -> list:
        em = self.em
        if a.is_const:
            a, b, ra, rb = b, a, rb, ra
        if b.is_const:
            fmt = ra.fmt
            scaled = b.value * (1 << fmt.fraction_digits)
            if scaled.denominator != 1 or not fmt.code_min <= scaled.numerator <= fmt.code_max:
                return []
            return is_zero_into(em, ra.ids, r, fmt.code_of(b.value))
        frag, d = self.difference(a, ra, b, rb)
        return conjugate(frag, is_zero_into(em, d, r))

    def logical(self, node: Annotated, regs, out: Reg) -> list:
        em = self.em
        r = out.ids[0]
        if node.op == "not":
            return xor_into(em, [r], [regs[0].ids[0]]) + [em.gate("X", (r,))]
        (a, b), (ra, rb) = node.args, regs
        if a.is_const:
            a, b, ra, rb = b, a, rb, ra
        qa = ra.ids[0]
        if b.is_const:
            on = b.value != 0
            if node.op == "and":
                return xor_into(em, [r], [qa]) if on else []
            return [em.gate("X", (r,))] if on else xor_into(em, [r], [qa])
        qb = rb.ids[0]
        if qa == qb:
            return xor_into(em, [r], [qa])
        gates = [em.gate("CCX", (qa, qb, r))]
        if node.op == "or":
            gates = [em.gate("CX", (qa, r)), em.gate("CX", (qb, r))] + gates
        return gates

    def bitwise(self, node: Annotated, regs, out: Reg) -> list:
        em = self.em
        fmt = out.fmt
        f, n = fmt.fraction_digits, fmt.size
        if node.op == "bitnot":
            return xor_into(em, out.ids, reg_sources(regs[0], f, n)) + [em.gate("X", (q,)) for q in out.ids]
        sa = self.sources(node.args[0], regs[0], f, n)
        sb = self.sources(node.args[1], regs[1], f, n)
        gates = []
        for t, x, y in zip(out.ids, sa, sb):
            if x is None or y is None:
                other = y if x is None else x
                if node.op != "bitand":
                    gates += xor_into(em, [t], [other])
                continue
            if x is ONE or y is ONE:
                other = y if x is ONE else x
                if node.op == "bitand":
                    gates += xor_into(em, [t], [other])
                elif node.op == "bitor":
                    gates.append(em.gate("X", (t,)))
                else:
                    gates += xor_into(em, [t], [other]) + [em.gate("X", (t,))]
                continue
            if x == y:
                if node.op != "bitxor":
                    gates.append(em.gate("CX", (x, t)))
                continue
            if node.op == "bitand":
                gates.append(em.gate("CCX", (x, y, t)))
            elif node.op == "bitor":
                gates += [em.gate("CX", (x, t)), em.gate("CX", (y, t)), em.gate("CCX", (x, y, t))]
            else:
                gates += [em.gate("CX", (x, t)), em.gate("CX", (y, t))]
        return gates
