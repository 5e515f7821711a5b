"""Fixed-point formats for quantum numeric registers.

A register of ``size`` qubits holds an integer code ``k`` (two's complement
when signed) and represents the value ``k * 2**-fraction_digits``. Bits are
always listed least-significant first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence


class SizeMismatch(ValueError):
    pass


class NotRepresentable(ValueError):
    pass


@dataclass(frozen=True)
class FixedPointFormat:
    size: int
    signed: bool = False
    fraction_digits: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"format size must be >= 1, got {self.size}")
        if self.fraction_digits < 0:
            raise ValueError("fraction_digits must be >= 0")
        if self.fraction_digits > self.size:
            raise ValueError(
                f"fraction_digits ({self.fraction_digits}) exceeds size ({self.size})")
        if self.signed and self.size < self.fraction_digits + 1:
            raise ValueError("signed format needs room for a sign bit")

    @property
    def code_min(self) -> int:
        return -(1 << (self.size - 1)) if self.signed else 0

    @property
    def code_max(self) -> int:
        return (1 << (self.size - 1)) - 1 if self.signed else (1 << self.size) - 1

    @property
    def ulp(self) -> Fraction:
        return Fraction(1, 1 << self.fraction_digits)

    @property
    def min_value(self) -> Fraction:
        return self.code_min * self.ulp

    @property
    def max_value(self) -> Fraction:
        return self.code_max * self.ulp

    def values(self) -> list[Fraction]:
        """Every representable value, ascending."""
        return [k * self.ulp for k in range(self.code_min, self.code_max + 1)]

    def code_of(self, value) -> int:
        """Integer code (two's complement reduced to ``size`` bits) of an exact value."""
        scaled = Fraction(value) * (1 << self.fraction_digits)
        if scaled.denominator != 1:
            raise NotRepresentable(f"{value} needs more than {self.fraction_digits} fraction digits")
        k = scaled.numerator
        if not self.code_min <= k <= self.code_max:
            raise NotRepresentable(f"{value} outside [{self.min_value}, {self.max_value}]")
        return k & ((1 << self.size) - 1)

    def value_of(self, code: int) -> Fraction:
        """Inverse of :meth:`code_of` for a raw ``size``-bit code."""
        code &= (1 << self.size) - 1
        if self.signed and code >> (self.size - 1):
            code -= 1 << self.size
        return code * self.ulp

    def wrap(self, value) -> Fraction:
        """Round ``value`` down to the grid and reduce it into range modulo 2**size."""
        k = floor(Fraction(value) * (1 << self.fraction_digits))
        return self.value_of(k)

    def __str__(self):
        return f"qnum[{self.size}, {'signed' if self.signed else 'unsigned'}, {self.fraction_digits}]"


def decode(bits: Sequence[int], fmt: FixedPointFormat) -> Fraction:
    if len(bits) != fmt.size:
        raise SizeMismatch(f"expected {fmt.size} bits, got {len(bits)}")
    code = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {j} is {b!r}")
        code |= b << j
    return fmt.value_of(code)


def encode(value, fmt: FixedPointFormat) -> list[int]:
    code = fmt.code_of(value)
    return [(code >> j) & 1 for j in range(fmt.size)]


def round_down(value, frac: int) -> Fraction:
    """Truncate toward -inf onto the grid of multiples of 2**-frac."""
    return Fraction(floor(Fraction(value) * (1 << frac)), 1 << frac)


def min_fraction_digits(value) -> int:
    """Smallest f such that value is a multiple of 2**-f (value must be dyadic)."""
    value = Fraction(value)
    den = value.denominator
    if den & (den - 1):
        raise NotRepresentable(f"{value} is not a dyadic rational")
    return den.bit_length() - 1


def snap(value, frac: int) -> Fraction:
    """Nearest multiple of 2**-frac (ties to even)."""
    return Fraction(round(Fraction(value) * (1 << frac)), 1 << frac)


@dataclass(frozen=True)
class AlignmentPlan:
    """How a source register is read into a target format.

    ``drop_low`` source LSBs are ignored (truncation), ``pad_low`` implicit zero
    bits sit below the source, and ``extend_high`` target bits above the source
    MSB receive copies of the sign bit (signed source) or zero. Anything above
    the target MSB wraps away.
    """
    drop_low: int
    extend_high: int
    source: FixedPointFormat
    target: FixedPointFormat
    pad_low: int = 0

    @property
    def sign_extend(self) -> bool:
        return self.source.signed

    def source_bit(self, j: int):
        """Source bit index feeding target bit ``j``, or None for a constant zero."""
        i = j + self.drop_low - self.pad_low
        if i < 0:
            return None
        if i >= self.source.size:
            return self.source.size - 1 if self.source.signed else None
        return i

    def apply(self, code: int) -> int:
        out = 0
        for j in range(self.target.size):
            i = self.source_bit(j)
            if i is not None:
                out |= ((code >> i) & 1) << j
        return out


def plan_alignment(src: FixedPointFormat, dst: FixedPointFormat) -> AlignmentPlan:
    drop = max(0, src.fraction_digits - dst.fraction_digits)
    pad = max(0, dst.fraction_digits - src.fraction_digits)
    covered = src.size - drop + pad
    return AlignmentPlan(drop_low=drop, extend_high=max(0, dst.size - covered),
                         source=src, target=dst, pad_low=pad)
