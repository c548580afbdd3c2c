"""Working-precision planning.

The alternating sum defining Lambda_n loses about log2(3 + 2*sqrt(2)) ~ 2.5431
bits per unit of n to cancellation. A plan reserves those guard bits on top of
the requested output digits, plus a fixed safety margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

GUARD_BITS_PER_N = 2.5431
GUARD_DIGITS_PER_N = 0.76555
SAFETY_MARGIN = 64

_LOG2_10 = math.log2(10)


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * _LOG2_10)


@dataclass(frozen=True)
class PrecisionPlan:
    n: int
    target_digits: int
    guard_bits: int
    working_bits: int

    @property
    def margin_bits(self) -> int:
        """Bits reserved beyond cancellation and output digits."""
        return self.working_bits - self.guard_bits - digits_to_bits(self.target_digits)

    @property
    def term_base_bits(self) -> int:
        """Fraction bits every summand needs even when its weight is O(1)."""
        return digits_to_bits(self.target_digits) + self.margin_bits

    def term_fraction_bits(self, log2_weight: int) -> int:
        """Absolute bits needed for a summand whose weight is ~2**log2_weight.

        Capped at ``working_bits``; summands with tiny weights need only the
        base precision.
        """
        return min(self.working_bits, max(0, log2_weight) + self.term_base_bits)

    def with_extra_bits(self, extra: int) -> "PrecisionPlan":
        return PrecisionPlan(self.n, self.target_digits, self.guard_bits,
                             self.working_bits + extra)


def plan_precision(n: int, target_digits: int) -> PrecisionPlan:
    """Plan the binary precision needed to get ``target_digits`` of Lambda_n."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"sequence index must be a positive integer, got {n!r}")
    if not isinstance(target_digits, int) or target_digits < 1:
        raise DomainError(f"target_digits must be a positive integer, got {target_digits!r}")
    guard = math.ceil(GUARD_BITS_PER_N * n)
    margin = SAFETY_MARGIN + math.ceil(math.log2(n + 1))
    working = guard + digits_to_bits(target_digits) + margin
    return PrecisionPlan(n=n, target_digits=target_digits, guard_bits=guard,
                         working_bits=working)
