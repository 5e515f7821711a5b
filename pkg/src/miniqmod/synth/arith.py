"""Reversible fixed-point arithmetic on virtual qubits.

An *addend* is a list of bit sources, least significant first. A source is
a qubit id, ``None`` (constant 0) or :data:`ONE` (constant 1); the same
qubit may appear at several positions (sign extension). Addends are only
read, never written.

Every function returns a fragment (see :mod:`.fragment`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional, Sequence, Union

from ..types.fixedpoint import FixedPointFormat
from .fragment import Emitter, adjoint, conjugate, control


class _One:
    def __repr__(self):
        return "ONE"


ONE = _One()
Source = Union[int, None, _One]


@dataclass(frozen=True)
class Reg:
    """Qubit ids (LSB first) holding a number in ``fmt``."""
    ids: tuple[int, ...]
    fmt: FixedPointFormat

    def __post_init__(self):
        if len(self.ids) != self.fmt.size:
            raise ValueError(f"{len(self.ids)} qubits for format {self.fmt}")

    @property
    def sign(self) -> Optional[int]:
        return self.ids[-1] if self.fmt.signed else None


def const_sources(code: int, n: int) -> list[Source]:
    code &= (1 << n) - 1
    return [ONE if (code >> j) & 1 else None for j in range(n)]


def scaled_code(value, frac: int) -> int:
    """``value * 2**frac`` rounded toward -inf."""
    return floor(Fraction(value) * (1 << frac))


def reg_sources(reg: Reg, frac: int, n: int, shift: int = 0) -> list[Source]:
    """``reg`` rescaled to ``frac`` fraction digits, shifted up by ``shift`` and
    sign-extended or truncated to ``n`` bits (the value times 2**(frac+shift) mod 2**n)."""
    offset = frac - reg.fmt.fraction_digits + shift
    out: list[Source] = []
    for j in range(n):
        i = j - offset
        if i < 0:
            out.append(None)
        elif i < reg.fmt.size:
            out.append(reg.ids[i])
        else:
            out.append(reg.sign)
    return out


def xor_into(em: Emitter, target: Sequence[int], sources: Sequence[Source]) -> list:
    out = []
    for t, s in zip(target, sources):
        if s is ONE:
            out.append(em.gate("X", (t,)))
        elif s is not None:
            out.append(em.gate("CX", (s, t)))
    return out


def _and_into(em, s: Source, q: int, t: int) -> list:
    """t ^= s AND q."""
    if s is None:
        return []
    if s is ONE:
        return [em.gate("CX", (q, t))]
    return [em.gate("CCX", (s, q, t))]


def add_into(em: Emitter, target: Sequence[int], sources: Sequence[Source]) -> list:
    """target += addend (mod 2**len(target)) with a ripple of carry ancillae.

    Low positions where the addend is zero are skipped entirely.
    """
    if len(sources) != len(target):
        raise ValueError("addend and target widths differ")
    k = next((i for i, s in enumerate(sources) if s is not None), None)
    if k is None:
        return []
    t, a = list(target[k:]), list(sources[k:])
    n = len(t)
    if n == 1:
        return xor_into(em, t, a)
    if all(s is None or s is ONE for s in a):
        return add_const_into(em, t, a)
    c: list[Optional[int]] = [None, *em.fresh(n - 1)]
    out = [em.alloc(c[1:])]
    for i in range(n - 1):
        out += _and_into(em, a[i], t[i], c[i + 1])
        out += xor_into(em, [t[i]], [a[i]])
        if c[i] is not None:
            out.append(em.gate("CCX", (c[i], t[i], c[i + 1])))
    out += xor_into(em, [t[n - 1]], [a[n - 1]])
    if c[n - 1] is not None:
        out.append(em.gate("CX", (c[n - 1], t[n - 1])))
    for i in reversed(range(n - 1)):
        if c[i] is not None:
            out.append(em.gate("CCX", (c[i], t[i], c[i + 1])))
        out += xor_into(em, [t[i]], [a[i]])
        out += _and_into(em, a[i], t[i], c[i + 1])
        out += xor_into(em, [t[i]], [a[i]])
        if c[i] is not None:
            out.append(em.gate("CX", (c[i], t[i])))
    out.append(em.release(c[1:]))
    return out


def add_const_into(em: Emitter, target: Sequence[int], sources: Sequence[Source]) -> list:
    """target += constant by one ancilla-free increment of target[i:] per set bit i."""
    out = []
    for i, s in enumerate(sources):
        if s is ONE:
            t = target[i:]
            for j in reversed(range(len(t))):
                out.append(mcx(em, t[:j], t[j]))
    return out


def sub_into(em: Emitter, target, sources) -> list:
    """target -= addend (mod 2**len(target))."""
    return adjoint(add_into(em, target, sources))


def controlled_add_into(em: Emitter, ctrl: int, target, sources, subtract: bool = False) -> list:
    """target +=/-= (ctrl ? addend : 0); every adder gate gains ``ctrl`` as a control.

    An addend bit equal to ``ctrl`` itself reads as 1 under the control.
    """
    gated = [ONE if isinstance(s, int) and s == ctrl else s for s in sources]
    body = (sub_into if subtract else add_into)(em, target, gated)
    return control(body, [ctrl])


def mul_const_into(em: Emitter, target, reg_src_fn, k: int) -> list:
    """target += k * X where ``reg_src_fn(shift)`` gives X's addend shifted by ``shift``."""
    out = []
    n = len(target)
    mag = abs(k)
    j = 0
    while mag >> j and j < n:
        if (mag >> j) & 1:
            src = reg_src_fn(j)
            out += sub_into(em, target, src) if k < 0 else add_into(em, target, src)
        j += 1
    return out


def is_zero_into(em: Emitter, bits: Sequence[int], result: int, pattern: int = 0) -> list:
    """result ^= (bits == pattern), by X-conjugating the zero positions around an MCX."""
    flips = [em.gate("X", (q,)) for j, q in enumerate(bits) if not (pattern >> j) & 1]
    core = [em.gate(_mcx_kind(len(bits)), (*bits, result))]
    return conjugate(flips, core)


def _mcx_kind(nctrl: int) -> str:
    return {0: "X", 1: "CX", 2: "CCX"}.get(nctrl, "MCX")


def mcx(em: Emitter, controls: Sequence[int], target: int):
    return em.gate(_mcx_kind(len(controls)), (*controls, target))
