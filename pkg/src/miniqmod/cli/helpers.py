"""Classical coefficient helpers for the piecewise-linear programs."""
from __future__ import annotations

import math
from typing import Callable


class DegenerateSegment(ValueError):
    pass


def linear_coefs(f: Callable[[float], float], lo: float, hi: float,
                 chebyshev: bool = False) -> tuple[float, float]:
    """Slope and intercept of a line approximating ``f`` on [lo, hi].

    By default the line interpolates the endpoints. With ``chebyshev`` it
    interpolates the two Chebyshev nodes of the segment instead, which
    halves the worst-case error for functions with small curvature.
    """
    if not lo < hi:
        raise DegenerateSegment(f"segment [{lo}, {hi}] is empty")
    if chebyshev:
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        x0, x1 = mid - half * math.cos(math.pi / 4), mid + half * math.cos(math.pi / 4)
    else:
        x0, x1 = lo, hi
    a = (f(x1) - f(x0)) / (x1 - x0)
    return a, f(x0) - a * x0


def segment_coefs(f: Callable[[float], float], num_segs: int, lo: float = 0.0, hi: float = 1.0,
                  chebyshev: bool = False) -> tuple[list[float], list[float]]:
    """Per-segment (a, b) lists over ``num_segs`` equal segments of [lo, hi]."""
    if num_segs < 1:
        raise DegenerateSegment("need at least one segment")
    w = (hi - lo) / num_segs
    pairs = [linear_coefs(f, lo + i * w, lo + (i + 1) * w, chebyshev) for i in range(num_segs)]
    return [a for a, _ in pairs], [b for _, b in pairs]
