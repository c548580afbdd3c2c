"""Bernoulli numbers, odd double factorials and the special values Phi_m = log 2xi(2m).

Two evaluation paths are kept for Phi_m:

* the fast path, ``(m+1) log 2 + log m + log(2m-1) + log (m-1)! + log zeta(2m) - m log 2pi``,
  with ``zeta(2m) - 1`` summed as an integer fixed-point Dirichlet series;
* the Bernoulli path, ``log(|B_2m| (2pi)^m / (2m-3)!!)`` in exact rationals.

The fast path falls back to exact Bernoulli numbers only when the Dirichlet series
would need too many terms, which happens for small m at high precision.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

import mpmath
from gmpy2 import mpz
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError, SchemaError

MAX_SERIES_TERMS = 4096

# ---------------------------------------------------------------- Bernoulli


class BernoulliTable:
    """Exact even-order Bernoulli numbers B_0, B_2, ..., extended on demand.

    Built from tangent numbers (integer-only recurrence), then
    B_2k = (-1)^(k-1) 2k T_k / (4^k (4^k - 1)).
    """

    def __init__(self) -> None:
        self._even: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._even)

    def _extend(self, kmax: int) -> None:
        size = max(kmax, 2 * (len(self._even) - 1), 16)
        tangent = [0] * (size + 1)
        tangent[1] = 1
        for k in range(2, size + 1):
            tangent[k] = (k - 1) * tangent[k - 1]
        for k in range(2, size + 1):
            for j in range(k, size + 1):
                tangent[j] = (j - k) * tangent[j - 1] + (j - k + 2) * tangent[j]
        even = [Fraction(1)]
        for k in range(1, size + 1):
            four_k = 1 << (2 * k)
            b = Fraction(2 * k * tangent[k], four_k * (four_k - 1))
            even.append(b if k % 2 else -b)
        self._even = even

    def even(self, k: int) -> Fraction:
        """B_{2k}."""
        if k >= len(self._even):
            with self._lock:
                if k >= len(self._even):
                    self._extend(k)
        return self._even[k]


_BERNOULLI = BernoulliTable()


def bernoulli(order: int) -> Fraction:
    """Exact Bernoulli number B_order, with B_1 = -1/2."""
    if not isinstance(order, int) or order < 0:
        raise DomainError(f"Bernoulli order must be a non-negative integer, got {order!r}")
    if order == 1:
        return Fraction(-1, 2)
    if order % 2:
        return Fraction(0)
    return _BERNOULLI.even(order // 2)


def double_factorial_odd(k: int) -> int:
    """k!! for odd k >= -1, with (-1)!! = 1."""
    if not isinstance(k, int) or k < -1 or k % 2 == 0:
        raise DomainError(f"double_factorial_odd needs odd k >= -1, got {k!r}")
    out = 1
    for j in range(3, k + 1, 2):
        out *= j
    return out


# ---------------------------------------------------------------- zeta(2m)


def series_terms(exponent: int, frac_bits: int) -> int:
    """Number of Dirichlet terms k <= K making the tail of sum k^-exponent < 2^-frac_bits."""
    return int(2.0 ** (frac_bits / exponent)) + 1


def zeta_even_tail_fixed(m: int, frac_bits: int) -> int:
    """floor-summed fixed-point value of (zeta(2m) - 1) * 2**frac_bits.

    Truncation error is below (terms + 1) units in the last place.
    """
    s = 2 * m
    kmax = series_terms(s, frac_bits)
    one = mpz(1) << frac_bits
    total = mpz(0)
    for k in range(2, kmax + 1):
        total += one // mpz(k) ** s
    return int(total)


def _log_2pi() -> mpf:
    return mpmath.log(2 * mp.pi)


def _phi_work_bits(m: int, bits: int) -> int:
    return bits + 2 * m.bit_length() + 24


def phi_fast(m: int, bits: int) -> tuple[mpf, str]:
    """Phi_m with absolute error below 2^-bits, plus the provenance tag used."""
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"Phi_m is defined for m >= 1, got {m!r}")
    work = _phi_work_bits(m, bits)
    frac = bits + 16 + MAX_SERIES_TERMS.bit_length()
    with mp.workprec(work):
        if series_terms(2 * m, frac) <= MAX_SERIES_TERMS:
            zeta = 1 + mpf(zeta_even_tail_fixed(m, frac)) / mpf(2) ** frac
            prov = "series"
        else:
            b = abs(_BERNOULLI.even(m))
            zeta = (mpf(b.numerator) * (2 * mp.pi) ** (2 * m)
                    / (2 * mpf(b.denominator * math.factorial(2 * m))))
            prov = "bernoulli-zeta"
        integer_part = math.factorial(m - 1) * m * (2 * m - 1) << (m + 1)
        value = mpmath.log(mpf(integer_part) * zeta) - m * _log_2pi()
    return value, prov


def phi_bernoulli(m: int, bits: int) -> mpf:
    """Phi_m = log(|B_2m| (2pi)^m / (2m-3)!!) from exact Bernoulli numbers."""
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"Phi_m is defined for m >= 1, got {m!r}")
    b = abs(_BERNOULLI.even(m))
    with mp.workprec(_phi_work_bits(m, bits)):
        return (mpmath.log(mpf(b.numerator))
                - mpmath.log(mpf(b.denominator * double_factorial_odd(2 * m - 3)))
                + m * _log_2pi())


def phi(m: int, bits: int) -> mpf:
    """Phi_m = log 2xi(2m) with absolute error below 2^-bits."""
    return phi_fast(m, bits)[0]


# ---------------------------------------------------------------- PhiCache

_HEX_RE = re.compile(r"^([+-]?)0x([0-9a-fA-F]+)p([+-]?\d+)$")


def mpf_to_hex(x: mpf) -> str:
    """Portable exact text form sign-0x<mantissa>p<exponent> of an mpf."""
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:  # inf / nan have zero mantissa and nonzero special exponent
            raise ValueError("non-finite value cannot be serialized")
        return "0x0p0"
    return f"{'-' if sign else ''}0x{int(man):x}p{int(exp)}"


def hex_to_mpf(text: str) -> mpf:
    match = _HEX_RE.match(text.strip())
    if not match:
        raise SchemaError(f"not a hex float record: {text!r}")
    sign, man, exp = match.groups()
    man_int = int(man, 16)
    if sign == "-":
        man_int = -man_int
    # exact: the working precision covers every mantissa bit
    with mp.workprec(max(53, abs(man_int).bit_length() + 1)):
        return mpf((man_int, int(exp))) if man_int else mpf(0)


Evaluator = Callable[[int, int], "tuple[mpf, str]"]


class PhiCache:
    """Write-once table of special values keyed by (m, absolute bits).

    ``evaluator(m, bits)`` returns ``(value, provenance)`` with absolute error
    below 2^-bits. New entries are appended to ``checkpoint`` when one is set.
    """

    def __init__(self, kind: str = "riemann", evaluator: Evaluator | None = None,
                 checkpoint: str | Path | None = None, frozen: bool = False) -> None:
        self.kind = kind
        self._evaluator = evaluator or phi_fast
        self._entries: dict[int, dict[int, mpf]] = {}
        self.provenance: dict[tuple[int, int], str] = {}
        self.checkpoint = Path(checkpoint) if checkpoint is not None else None
        self.frozen = frozen
        self._lock = threading.Lock()
        self._fixed: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return sum(len(v) for v in self._entries.values())

    def __contains__(self, key: tuple[int, int]) -> bool:
        m, bits = key
        return bits in self._entries.get(m, {})

    def records(self) -> list[tuple[int, int, mpf]]:
        return sorted((m, bits, v) for m, d in self._entries.items() for bits, v in d.items())

    def best_bits(self, m: int) -> int:
        """Highest absolute precision stored for m, or -1."""
        return max(self._entries.get(m, {}), default=-1)

    def insert(self, m: int, bits: int, value: mpf, provenance: str = "external") -> None:
        with self._lock:
            slot = self._entries.setdefault(m, {})
            if bits in slot:
                if slot[bits] != value:
                    raise ValueError(f"conflicting Phi entry for m={m} at {bits} bits")
                return
            slot[bits] = value
            self.provenance[(m, bits)] = provenance
            if self.checkpoint is not None:
                with self.checkpoint.open("a", encoding="ascii") as fh:
                    fh.write(f"{m} {bits} {mpf_to_hex(value)}\n")

    def get(self, m: int, bits: int) -> mpf:
        """Phi_m with at least ``bits`` absolute bits; computes missing entries."""
        stored = self.best_bits(m)
        if stored >= bits:
            return self._entries[m][stored]
        if self.frozen:
            raise PrecisionError(
                f"cache holds Phi_{m} to {stored} bits, {bits} requested")
        value, prov = self._evaluator(m, bits)
        self.insert(m, bits, value, prov)
        return value

    def fill(self, requests: Iterable[tuple[int, int]]) -> None:
        for m, bits in requests:
            self.get(m, bits)

    def fixed_point(self, m: int, frac_bits: int) -> int:
        """round(Phi_m / (2m - 1) * 2**frac_bits) as an integer."""
        key = (m, frac_bits)
        cached = self._fixed.get(key)
        if cached is not None:
            return cached
        value = self.get(m, frac_bits + (2 * m).bit_length() + 2)
        with mp.workprec(frac_bits + int(mpmath.mag(value)) + 16):
            scaled = int(mpmath.nint(mpmath.ldexp(value, frac_bits) / (2 * m - 1)))
        self._fixed[key] = scaled
        return scaled

    # persistence ---------------------------------------------------------

    def save(self, path: str | Path) -> None:
        lines = [f"# keiperli phi-cache {self.kind}"]
        lines += [f"{m} {bits} {mpf_to_hex(v)}" for m, bits, v in self.records()]
        Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")

    @classmethod
    def load(cls, path: str | Path, kind: str | None = None,
             evaluator: Evaluator | None = None, attach: bool = False) -> "PhiCache":
        """Read a checkpoint; ``attach`` keeps appending new entries to it."""
        path = Path(path)
        text = path.read_text(encoding="ascii")
        if text and not text.endswith("\n"):
            # a write cut short by an interrupt; the record is recomputed later
            text = text[: text.rfind("\n") + 1]
            if attach:
                path.write_text(text, encoding="ascii")
        file_kind = None
        records = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) >= 3 and parts[:2] == ["keiperli", "phi-cache"]:
                    file_kind = parts[2]
                continue
            fields = line.split()
            if len(fields) != 3:
                raise SchemaError(f"{path}:{lineno}: expected 'm bits hexfloat'")
            try:
                m, bits = int(fields[0]), int(fields[1])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: bad integer field") from exc
            records.append((m, bits, hex_to_mpf(fields[2])))
        kind = kind or file_kind or "riemann"
        if file_kind is not None and file_kind != kind:
            raise SchemaError(f"{path} holds a {file_kind} cache, not {kind}")
        cache = cls(kind=kind, evaluator=evaluator)
        for m, bits, value in records:
            cache.insert(m, bits, value, "checkpoint")
        if kind == "riemann":
            cache._validate_phi1()
        if attach:
            cache.checkpoint = path
        return cache

    @classmethod
    def open_checkpoint(cls, path: str | Path, kind: str = "riemann",
                        evaluator: Evaluator | None = None) -> "PhiCache":
        """Resume from ``path`` if it exists, else start it with a header."""
        path = Path(path)
        if path.exists() and path.stat().st_size:
            return cls.load(path, kind=kind, evaluator=evaluator, attach=True)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(f"# keiperli phi-cache {kind}\n", encoding="ascii")
        cache = cls(kind=kind, evaluator=evaluator)
        cache.checkpoint = path
        return cache

    def _validate_phi1(self) -> None:
        for bits, value in self._entries.get(1, {}).items():
            with mp.workprec(bits + 32):
                err = abs(value - mpmath.log(mp.pi / 3))
                if err > mpf(2) ** (2 - bits):
                    raise SchemaError(f"Phi_1 entry at {bits} bits disagrees with log(pi/3)")
