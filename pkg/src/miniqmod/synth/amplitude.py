"""Amplitude encoding through a rotation multiplexed over a value register."""
from __future__ import annotations

import math
from fractions import Fraction

from ..ir.functors import control_gate
from .arith import Reg
from .fragment import Emitter


def rotation_angle(v) -> float:
    """RY angle putting amplitude clamp(v, -1, 1) on |1>."""
    g = max(-1.0, min(1.0, float(v)))
    return 2.0 * math.asin(g)


def multiplexed_ry(em: Emitter, reg: Reg, target: int, lo: Fraction, hi: Fraction) -> list:
    """For every code of ``reg`` whose value lies in [lo, hi], an RY on ``target``
    controlled on that exact code. Codes outside the range never occur and are skipped.

    The X gates selecting each code form a chain that multiplies to the
    identity, so they are marked fixed.
    """
    fmt = reg.fmt
    scale = 1 << fmt.fraction_digits
    first = max(math.floor(lo * scale), fmt.code_min)
    last = min(math.floor(hi * scale), fmt.code_max)
    mask = (1 << fmt.size) - 1
    flipped = 0  # bits currently X-ed
    out = []
    for k in range(first, last + 1):
        alpha = rotation_angle(Fraction(k, scale))
        if alpha == 0:
            continue
        want = ~k & mask
        for j, q in enumerate(reg.ids):
            if (want ^ flipped) >> j & 1:
                out.append((em.gate("X", (q,))[0], True))
        flipped = want
        ry = em.gate("RY", (target,), (alpha,))[0]
        out.extend((g, False) for g in control_gate(ry, reg.ids))
    for j, q in enumerate(reg.ids):
        if flipped >> j & 1:
            out.append((em.gate("X", (q,))[0], True))
    return out
