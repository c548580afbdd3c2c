"""Euler-Maclaurin evaluation of the Hurwitz and Riemann zeta functions."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mp, mpf

from .errors import BranchError, DomainError
from .specials import _BERNOULLI

_EM_COEFF_CACHE: dict[tuple[int, int], mpf] = {}


def _em_coeff(j: int, prec: int) -> mpf:
    """B_2j / (2j)! rounded to prec bits."""
    key = (j, prec)
    val = _EM_COEFF_CACHE.get(key)
    if val is None:
        b = _BERNOULLI.even(j)
        with mp.workprec(prec):
            val = mpf(b.numerator) / (b.denominator * factorial(2 * j))
        _EM_COEFF_CACHE[key] = val
    return val


def _as_shift(a) -> mpf:
    if isinstance(a, Fraction):
        return mpf(a.numerator) / a.denominator
    return mpmath.mpmathify(a)


def hurwitz_zeta(s, a=1, bits: int = 53):
    """zeta(s, a) = sum_{k>=0} (k + a)^-s continued to s != 1, for a > 0.

    Absolute accuracy is about 2^-bits relative to the size of the largest
    term kept. Returns an mpf for real s and an mpc otherwise.
    """
    s = mpmath.mpmathify(s)
    if s == 1:
        raise BranchError("zeta(s, a) has a pole at s = 1")
    work = bits + 32
    with mp.workprec(work):
        shift = _as_shift(a)
        if shift <= 0:
            raise DomainError(f"Hurwitz shift must be positive, got {a}")
        size = abs(s)
        n_head = 10 + int(0.1 * bits) + int(size)
        while True:
            value = _em_sum(s, shift, n_head, work, bits)
            if value is not None:
                break
            n_head *= 2
        if mpmath.im(value) == 0 and not isinstance(s, mpmath.mpc):
            value = mpmath.re(value)
    with mp.workprec(bits):
        return +value


def _em_sum(s, shift, n_head: int, work: int, bits: int):
    head = mpf(0)
    for k in range(n_head):
        head += mpmath.power(k + shift, -s)
    x = n_head + shift
    x_pow = mpmath.power(x, -s)  # x^-s
    tail = x * x_pow / (s - 1) + x_pow / 2
    scale = max(abs(head), abs(tail), mpf(1))
    eps = mpf(2) ** (-bits - 8) * scale
    inv_x2 = 1 / (x * x)
    poch = s            # (s)_{2j-1}
    power = x_pow / x   # x^(-s-2j+1)
    prev = None
    j = 1
    while True:
        term = _em_coeff(j, work) * poch * power
        mag = abs(term)
        tail += term
        if mag < eps or poch == 0:
            return head + tail
        if prev is not None and mag > prev:
            return None  # asymptotic series turned before converging
        prev = mag
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power *= inv_x2
        j += 1


def zeta_complex(s, bits: int = 53):
    """Riemann zeta(s) for s != 1."""
    return hurwitz_zeta(s, 1, bits)
