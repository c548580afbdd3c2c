"""Finite-difference weights A_nm and the deformed-pole function F_n(x).

    A_nm = 2^(m-n) (2(n+m)-1)!! / ((2m-1) (n-m)! (2m)!)
         = C(2n+2m, 2m) C(2n, n-m) / (4^n (2m-1))

The second form is what the summation kernel uses: the integer part
K_nm = C(2n+2m, 2m) C(2n, n-m) follows an exact integer recurrence in m.
"""

from __future__ import annotations

from fractions import Fraction

from typing import Iterator

import mpmath
from gmpy2 import comb, mpz
from mpmath import mp, mpc, mpf

from .errors import BranchError, DomainError
from .precision import plan_precision
from .specials import double_factorial_odd


def _check_indices(n: int, m: int) -> None:
    if not isinstance(n, int) or not isinstance(m, int):
        raise DomainError("indices must be integers")
    if n < 0 or m < 0 or m > n:
        raise DomainError(f"need 0 <= m <= n, got n={n}, m={m}")


def a_coeff(n: int, m: int) -> Fraction:
    """Exact A_nm from the double-factorial formula."""
    _check_indices(n, m)
    num = double_factorial_odd(2 * (n + m) - 1)
    den = (2 * m - 1) * _factorial(n - m) * _factorial(2 * m)
    if m >= n:
        num <<= m - n
    else:
        den <<= n - m
    return Fraction(num, den)


def _factorial(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def _ratio(n: int, m: int) -> Fraction:
    # A_{n,m+1} / A_{n,m}
    return Fraction((2 * n + 2 * m + 1) * (2 * m - 1) * (n - m),
                    (2 * m + 1) ** 2 * (m + 1))


class CoeffStream:
    """Single-consumer iterator over A_n0, ..., A_nn in exact rationals."""

    def __init__(self, n: int) -> None:
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"coeff_stream needs n >= 1, got {n!r}")
        self.n = n
        self.m = -1
        self.value: Fraction | None = None

    def __len__(self) -> int:
        return self.n + 1

    def __iter__(self) -> "CoeffStream":
        return self

    def __next__(self) -> Fraction:
        if self.m >= self.n:
            raise StopIteration
        if self.m < 0:
            self.value = -Fraction(double_factorial_odd(2 * self.n - 1),
                                   _factorial(self.n) << self.n)
        else:
            self.value *= _ratio(self.n, self.m)
        self.m += 1
        return self.value


def coeff_stream(n: int) -> CoeffStream:
    return CoeffStream(n)


def scaled_coeffs(n: int, lo: int = 0, hi: int | None = None) -> Iterator[tuple[int, mpz]]:
    """Yield (m, K_nm) for lo <= m <= hi, where A_nm = K_nm / (4^n (2m - 1))."""
    hi = n if hi is None else hi
    if not 0 <= lo <= hi <= n:
        raise DomainError(f"bad m-range [{lo}, {hi}] for n={n}")
    k = comb(2 * n + 2 * lo, 2 * lo) * comb(2 * n, n - lo)
    for m in range(lo, hi + 1):
        yield m, k
        if m < hi:
            k = k * ((2 * n + 2 * m + 1) * (2 * n + 2 * m + 2) * (n - m)) \
                // ((2 * m + 1) * (2 * m + 2) * (n + m + 1))


def max_abs_location(n: int, bits: int = 64) -> tuple[int, mpf]:
    """argmax_m |A_nm| and the maximal magnitude."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"max_abs_location needs n >= 1, got {n!r}")
    best_m, best_k, best_d = 0, mpz(0), 1
    for m, k in scaled_coeffs(n):
        d = abs(2 * m - 1)
        # compare k/d against best_k/best_d without division
        if k * best_d > best_k * d:
            best_m, best_k, best_d = m, k, d
    with mp.workprec(bits):
        magnitude = mpf(best_k) / (mpf(4) ** n * best_d)
    return best_m, magnitude


def log2_weights(n: int) -> list[int]:
    """ceil-ish log2 of A_nm (2m-1) = K_nm / 4^n for m = 0..n, from integer bit lengths."""
    return [int(k.bit_length()) - 2 * n for _, k in scaled_coeffs(n)]


def fn_eval(n: int, x, bits: int | None = None) -> mpc:
    """F_n(x) on the plane cut along [0, 2n], principal logarithms throughout.

    F_n(x) = (-1)^n [ -(1/A_n0) log(x-1) + sum_m (-1)^m A_nm log(x-2m) ]
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"fn_eval needs n >= 1, got {n!r}")
    x = mpmath.mpmathify(x)
    if mpmath.im(x) == 0 and 0 <= mpmath.re(x) <= 2 * n:
        raise BranchError(f"x={x} lies on the cut [0, {2 * n}]")
    if bits is None:
        bits = plan_precision(n, 15).working_bits
    scale = mpz(4) ** n
    with mp.workprec(bits + 2 * int(mpmath.mag(x) if x else 0) + 32):
        x = mpc(x)
        # coefficients sum to zero, so the principal branches glue across x < 0
        total = mpc(0)
        a_n0 = None
        for m, k in scaled_coeffs(n):
            a = mpf(k) / (mpf(scale) * (2 * m - 1))
            if m == 0:
                a_n0 = a
            term = a * mpmath.log(x - 2 * m)
            total = total + term if m % 2 == 0 else total - term
        total -= mpmath.log(x - 1) / a_n0
        out = total if n % 2 == 0 else -total
    with mp.workprec(bits):
        return +out
