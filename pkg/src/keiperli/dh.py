"""Davenport-Heilbronn functions and their Lambda sequences.

f(x) = sum_k a_k k^-x with a_k repeating (1, tau, -tau, -1, 0) mod 5, where
tau_(+/-) = -phi +/- sqrt(1 + phi^2) and phi is the golden ratio. The
completion used here is

    G(x) = (pi/5)^(-(x+1)/2) Gamma((x+1)/2) f(x),

the odd-character gamma factor dictated by a_(5-k) = -a_k. G_+ is symmetric
under x -> 1 - x. G_- is antisymmetric (root number -1); see
:func:`functional_residual`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

import mpmath
from gmpy2 import mpz
from mpmath import mp, mpf

from .errors import DomainError
from .liseq import SequencePoint, compute_sequence, lambda_n, reference_constant
from .precision import PrecisionPlan
from .specials import MAX_SERIES_TERMS, PhiCache, series_terms
from .zeta import hurwitz_zeta

__all__ = [
    "DHVariant", "DH_PLUS", "DH_MINUS", "get_variant", "DHPhiCache", "MagnitudeWarning",
    "hurwitz_zeta", "f_dh", "completed_g", "log_completed_g", "dh_phi",
    "functional_residual", "lambda_dh", "dh_range", "magnitude_excess",
]

PROBE_POINTS = (mpmath.mpc(0.3, 2), mpmath.mpc(-0.2, 5), mpmath.mpc(2, 0.7))


class MagnitudeWarning(UserWarning):
    """|Lambda_-,n| is far above the RH-true reference."""


@dataclass(frozen=True)
class DHVariant:
    sign: str  # "+" or "-"

    def __post_init__(self) -> None:
        if self.sign not in ("+", "-"):
            raise DomainError(f"variant must be '+' or '-', got {self.sign!r}")

    @property
    def kind(self) -> str:
        return "dh" + self.sign

    def tau(self, bits: int = 53) -> mpf:
        with mp.workprec(bits + 10):
            phi = (1 + mpmath.sqrt(5)) / 2
            root = mpmath.sqrt(1 + phi * phi)
            value = -phi + root if self.sign == "+" else -phi - root
        with mp.workprec(bits):
            return +value

    def pattern(self, bits: int = 53) -> tuple[mpf, mpf, mpf, mpf, mpf]:
        """(a_1, ..., a_5); a_(k+5) = a_k."""
        t = self.tau(bits)
        return (mpf(1), t, -t, mpf(-1), mpf(0))


DH_PLUS = DHVariant("+")
DH_MINUS = DHVariant("-")

_ALIASES = {"+": DH_PLUS, "plus": DH_PLUS, "dh+": DH_PLUS,
            "-": DH_MINUS, "minus": DH_MINUS, "dh-": DH_MINUS}


def get_variant(v: "DHVariant | str") -> DHVariant:
    if isinstance(v, DHVariant):
        return v
    try:
        return _ALIASES[str(v).strip().lower()]
    except KeyError:
        raise DomainError(f"unknown DH variant {v!r}; use '+' or '-'") from None


# ------------------------------------------------------------------ f and G

def _f_at_one(variant: DHVariant, bits: int) -> mpf:
    # f(1) = (pi/5) [cot(pi/5) + tau cot(2 pi/5)]
    with mp.workprec(bits + 16):
        value = mp.pi / 5 * (mpmath.cot(mp.pi / 5) + variant.tau(bits + 16) * mpmath.cot(2 * mp.pi / 5))
    with mp.workprec(bits):
        return +value


def _f_series_fixed(m: int, frac: int) -> tuple[mpz, mpz]:
    """(S1, S2) * 2^frac, f(2m) = S1 + tau S2, summed in integers."""
    kmax = series_terms(2 * m, frac)
    one = mpz(1) << frac
    s1 = mpz(0)
    s2 = mpz(0)
    for k in range(1, kmax + 1):
        r = k % 5
        if r == 0:
            continue
        term = one // mpz(k) ** (2 * m)
        if r == 1:
            s1 += term
        elif r == 4:
            s1 -= term
        elif r == 2:
            s2 += term
        else:
            s2 -= term
    return s1, s2


def _f_hurwitz(x, variant: DHVariant, bits: int):
    # guard against the pole cancellation near x = 1 and the 5^-x scale
    gap = abs(x - 1)
    extra = max(0, -int(mpmath.mag(gap))) if gap else 0
    work = bits + extra + 16 + max(0, int(mpmath.re(x)) * 3)
    with mp.workprec(work):
        tau = variant.tau(work)
        parts = [hurwitz_zeta(x, Fraction(j, 5), work) for j in (1, 2, 3, 4)]
        value = mpf(5) ** (-x) * (parts[0] + tau * (parts[1] - parts[2]) - parts[3])
    return value


def f_dh(x, variant: "DHVariant | str", bits: int = 53):
    """f_(+/-)(x), entire in x."""
    variant = get_variant(variant)
    x = mpmath.mpmathify(x)
    if x == 1:
        return _f_at_one(variant, bits)
    xr = mpmath.re(x)
    if mpmath.im(x) == 0 and xr == int(xr) and xr >= 2 and int(xr) % 2 == 0:
        m = int(xr) // 2
        frac = bits + 24
        if series_terms(2 * m, frac) <= MAX_SERIES_TERMS:
            s1, s2 = _f_series_fixed(m, frac)
            with mp.workprec(bits + 16):
                value = (mpf(s1) + variant.tau(bits + 16) * mpf(s2)) / mpf(2) ** frac
            with mp.workprec(bits):
                return +value
    value = _f_hurwitz(x, variant, bits)
    with mp.workprec(bits):
        return +value


def _check_gamma_pole(x) -> None:
    if mpmath.im(x) == 0:
        h = (mpmath.re(x) + 1) / 2
        if h <= 0 and h == int(h):
            raise DomainError(f"Gamma((x+1)/2) has a pole at x={x}")


def completed_g(x, variant: "DHVariant | str", bits: int = 53):
    """G(x) = (pi/5)^(-(x+1)/2) Gamma((x+1)/2) f(x)."""
    variant = get_variant(variant)
    x = mpmath.mpmathify(x)
    _check_gamma_pole(x)
    work = bits + 24
    with mp.workprec(work):
        h = (x + 1) / 2
        value = (mp.pi / 5) ** (-h) * mpmath.gamma(h) * f_dh(x, variant, work)
    with mp.workprec(bits):
        return +value


def _log_gamma_half(m: int) -> mpf:
    # log Gamma(m + 1/2) = log((2m)! sqrt(pi) / (4^m m!))
    num = math.factorial(2 * m)
    den = math.factorial(m) << (2 * m)
    return mpmath.log(mpf(num) / den) + mpmath.log(mp.pi) / 2


def log_completed_g(m: int, variant: "DHVariant | str", bits: int) -> mpf:
    """log G(2m) with absolute error below 2^-bits."""
    variant = get_variant(variant)
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"need m >= 1, got {m!r}")
    size = max(1, int(m * math.log2(m + 1)).bit_length())
    work = bits + size + 24
    with mp.workprec(work):
        f = f_dh(2 * m, variant, work)
        if f <= 0:
            raise DomainError(f"f({2 * m}) is not positive; log G undefined")
        value = (-(2 * m + 1) * mpmath.log(mp.pi / 5) / 2 + _log_gamma_half(m)
                 + mpmath.log(f))
    return value


def _log_g1(variant: DHVariant, bits: int) -> mpf:
    with mp.workprec(bits + 16):
        g1 = 5 / mp.pi * _f_at_one(variant, bits + 16)
        if g1 <= 0:
            raise DomainError(f"G(1) = {mpmath.nstr(g1, 8)} is not positive")
        return mpmath.log(g1)


def dh_phi(variant: "DHVariant | str") -> Callable[[int, int], tuple[mpf, str]]:
    """Evaluator (m, bits) -> (Phi_m = log G(2m) - log G(1), provenance)."""
    variant = get_variant(variant)

    def evaluate(m: int, bits: int) -> tuple[mpf, str]:
        work = bits + 8
        with mp.workprec(work + max(1, int(m * math.log2(m + 1)).bit_length()) + 16):
            value = log_completed_g(m, variant, work) - _log_g1(variant, work)
        frac = work + 24
        prov = "series" if series_terms(2 * m, frac) <= MAX_SERIES_TERMS else "hurwitz-em"
        return value, prov

    return evaluate


class DHPhiCache(PhiCache):
    """Write-once Phi cache for one DH variant."""

    def __init__(self, variant: "DHVariant | str | None" = None,
                 checkpoint: str | Path | None = None, frozen: bool = False,
                 kind: str | None = None, evaluator=None) -> None:
        v = get_variant(variant if variant is not None else (kind or "+"))
        if kind is not None and kind != v.kind:
            raise DomainError(f"cache kind {kind!r} does not match variant {v.sign!r}")
        super().__init__(kind=v.kind, evaluator=evaluator or dh_phi(v),
                         checkpoint=checkpoint, frozen=frozen)
        self.variant = v


# ------------------------------------------------------------------ checks

def functional_residual(variant: "DHVariant | str", x, bits: int = 96,
                        root_number: int = 1) -> mpf:
    """|G(x) - w G(1-x)| / (|G(x)| + |G(1-x)|) with root number w."""
    x = mpmath.mpmathify(x)
    with mp.workprec(bits):
        a = completed_g(x, variant, bits)
        b = completed_g(1 - x, variant, bits)
        return abs(a - root_number * b) / (abs(a) + abs(b))


# ------------------------------------------------------------------ sequences

def lambda_dh(n: int, variant: "DHVariant | str", plan: PrecisionPlan | None = None,
              cache: DHPhiCache | None = None) -> mpf:
    """Lambda_(+/-),n with the same sign convention as the Riemann sequence."""
    v = get_variant(variant)
    if cache is None:
        cache = DHPhiCache(v)
    elif cache.kind != v.kind:
        raise DomainError(f"cache holds {cache.kind} values, not {v.kind}")
    return lambda_n(n, plan, cache)


def magnitude_excess(point: SequencePoint, bits: int = 64) -> float:
    """|Lambda_n| / |log n + c| for the DH reference."""
    with mp.workprec(bits):
        ref = mpmath.log(point.n) + reference_constant("dh-", bits)
        return float(abs(point.lam) / abs(ref))


def dh_range(n_list: Iterable[int], variant: "DHVariant | str", target_digits: int = 12,
             threads: int | None = 1, cache: DHPhiCache | None = None,
             on_point: Callable[[SequencePoint], None] | None = None,
             warn_factor: float = 10.0) -> list[SequencePoint]:
    """SequencePoints for one DH variant.

    For the minus variant a :class:`MagnitudeWarning` is issued once when some
    |Lambda_n| exceeds ``warn_factor`` times the RH-true reference.
    """
    v = get_variant(variant)
    cache = cache if cache is not None else DHPhiCache(v)
    if cache.kind != v.kind:
        raise DomainError(f"cache holds {cache.kind} values, not {v.kind}")
    points = compute_sequence(n_list, cache, target_digits, threads, on_point)
    if v.sign == "-":
        flagged = [p.n for p in points if magnitude_excess(p) > warn_factor]
        if flagged:
            warnings.warn(f"|Lambda_-,n| exceeds {warn_factor:g}x the reference at "
                          f"{len(flagged)} index(es), first n={flagged[0]}",
                          MagnitudeWarning, stacklevel=2)
    return points
