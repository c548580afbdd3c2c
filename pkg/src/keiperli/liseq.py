"""The Lambda_n engine.

Lambda_n = (-1)^n sum_{m=1}^n (-1)^m A_nm Phi_m is evaluated as an exact
integer sum. With A_nm = K_nm / (4^n (2m-1)) and
R_m = round(Phi_m / (2m-1) * 2^f_m), every summand K_nm * R_m is an integer,
so the total is independent of chunking, worker count and reduction order.
Each summand keeps only the fraction bits its weight requires: f_m grows with
log2 A_nm and is capped at the plan's working precision.
"""

from __future__ import annotations

import concurrent.futures as cf
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import mpmath
from gmpy2 import mpz
from mpmath import mp, mpf

from . import __version__
from .coeffs import scaled_coeffs
from .errors import DomainError, PrecisionError
from .precision import PrecisionPlan, plan_precision
from .specials import PhiCache

CHUNK = 512
SIGN_CONVENTION = "(-1)^(n+m)"


@dataclass(frozen=True)
class SequencePoint:
    n: int
    lam: mpf
    delta: mpf
    bits: int
    elapsed: float  # milliseconds


@dataclass
class RunManifest:
    n_list: list[int]
    target_digits: int
    threads: int
    checkpoint: str | None
    output: str | None
    kind: str = "riemann"
    working_bits: int | None = None
    version: str = __version__
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "tool": "keiperli",
            "version": self.version,
            "kind": self.kind,
            "n_list": compress_ranges(self.n_list),
            "target_digits": self.target_digits,
            "threads": self.threads,
            "working_bits": self.working_bits,
            "checkpoint": self.checkpoint,
            "output": self.output,
            "sign_convention": SIGN_CONVENTION,
            **self.extra,
        }


def compress_ranges(ns: Sequence[int]) -> list[list[int]]:
    """[[start, stop_inclusive], ...] runs of consecutive integers."""
    runs: list[list[int]] = []
    for n in ns:
        if runs and n == runs[-1][1] + 1:
            runs[-1][1] = n
        else:
            runs.append([n, n])
    return runs


# ------------------------------------------------------------------ kernel

def term_fraction_bits(plan: PrecisionPlan, n: int) -> list[int]:
    """Fraction bits f_m (index m = 0..n) each summand of Lambda_n needs under plan."""
    return [plan.term_fraction_bits(int(k.bit_length()) - 2 * n)
            for _, k in scaled_coeffs(n)]


def alternating_sum(n: int, table: Sequence[tuple[int, int] | None], lo: int, hi: int,
                    base_bits: int, cap_bits: int, absolute: bool = False) -> mpz:
    """Integer S with sum_{m=lo..hi} (-1)^(n+m) A_nm Phi_m = S / (4^n 2^cap_bits).

    ``table[m] = (F_m, R_m)`` with R_m = round(Phi_m / (2m-1) * 2^F_m). With
    ``absolute`` every summand enters with a plus sign.
    """
    total = mpz(0)
    for m, k in scaled_coeffs(n, max(lo, 1), hi):
        entry = table[m]
        if entry is None:
            raise PrecisionError(f"no fixed-point value for Phi_{m}")
        frac, value = entry
        need = min(cap_bits, max(0, int(k.bit_length()) - 2 * n) + base_bits)
        if frac < need:
            raise PrecisionError(f"Phi_{m} held to {frac} bits, {need} needed for n={n}")
        term = (k * (value >> (frac - need))) << (cap_bits - need)
        if absolute:
            total += abs(term)
        elif (n + m) % 2:
            total -= term
        else:
            total += term
    return total


def _chunks(n: int, size: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + size - 1, n)) for lo in range(1, n + 1, size)]


_WORKER_TABLE: Sequence | None = None


def _worker_init(table) -> None:
    global _WORKER_TABLE
    _WORKER_TABLE = table


def _worker_sum(args) -> int:
    n, lo, hi, base, cap = args
    return alternating_sum(n, _WORKER_TABLE, lo, hi, base, cap)


# ------------------------------------------------------------------ cache fill

def _fixed_table(cache: PhiCache, fracs: Sequence[int]) -> list[tuple[int, int] | None]:
    table: list[tuple[int, int] | None] = [None]
    for m in range(1, len(fracs)):
        table.append((fracs[m], mpz(cache.fixed_point(m, fracs[m]))))
    return table


def prepare_table(cache: PhiCache, plan: PrecisionPlan,
                  progress: Callable[[int], None] | None = None) -> list[tuple[int, int] | None]:
    """Fill ``cache`` for m = 1..plan.n at the precision plan demands and
    return the fixed-point table used by :func:`alternating_sum`."""
    fracs = term_fraction_bits(plan, plan.n)
    table: list[tuple[int, int] | None] = [None]
    for m in range(1, plan.n + 1):
        table.append((fracs[m], mpz(cache.fixed_point(m, fracs[m]))))
        if progress is not None:
            progress(m)
    return table


def _to_mpf(total: int, n: int, plan: PrecisionPlan) -> mpf:
    with mp.workprec(plan.working_bits):
        return mpmath.ldexp(mpf(total), -(plan.working_bits + 2 * n))


# ------------------------------------------------------------------ public ops

def default_cache() -> PhiCache:
    return PhiCache("riemann")


def lambda_n(n: int, plan: PrecisionPlan | None = None, cache: PhiCache | None = None) -> mpf:
    """Lambda_n = (-1)^n sum_{m=1}^n (-1)^m A_nm Phi_m."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"Lambda_n needs n >= 1, got {n!r}")
    plan = plan or plan_precision(n, 15)
    if plan.n < n:
        raise PrecisionError(f"plan for n={plan.n} cannot serve n={n}")
    cache = cache if cache is not None else default_cache()
    fracs = term_fraction_bits(plan, n)
    table = _fixed_table(cache, fracs)
    total = alternating_sum(n, table, 1, n, plan.term_base_bits, plan.working_bits)
    return _to_mpf(total, n, plan)


def reference_constant(kind: str, bits: int) -> mpf:
    """Constant c in the RH-true asymptote log n + c."""
    with mp.workprec(bits):
        if kind == "riemann":
            return (mp.euler - mpmath.log(mp.pi) - 1) / 2
        if kind in ("dh+", "dh-"):
            return (mp.euler - mpmath.log(mp.pi / 5) - 1) / 2
    raise DomainError(f"unknown sequence kind {kind!r}")


def delta_n(n: int, lam: mpf, bits: int | None = None, kind: str = "riemann") -> mpf:
    """Remainder Lambda_n - log n - c at precision ``bits`` (default: current)."""
    bits = bits or mp.prec
    with mp.workprec(bits):
        return lam - mpmath.log(n) - reference_constant(kind, bits)


def resolve_threads(threads: int | None) -> int:
    if threads is None or threads == 0:
        env = os.environ.get("KEIPERLI_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    return threads


def compute_sequence(n_list: Iterable[int], cache: PhiCache, target_digits: int = 12,
                     threads: int | None = 1,
                     on_point: Callable[[SequencePoint], None] | None = None,
                     plan: PrecisionPlan | None = None) -> list[SequencePoint]:
    """Lambda_n for every n in ``n_list`` from one shared table.

    The table is filled once for the largest n; parallel work is split over
    distinct n and fixed m-chunks, and chunk sums are exact integers.
    """
    ns = list(n_list)
    if not ns:
        raise DomainError("empty n list")
    if any(not isinstance(n, int) or n < 1 for n in ns):
        raise DomainError("all n must be positive integers")
    threads = resolve_threads(threads)
    plan = plan or plan_precision(max(ns), target_digits)
    table = prepare_table(cache, plan)
    base, cap = plan.term_base_bits, plan.working_bits

    tasks = [(n, lo, hi, base, cap) for n in ns for lo, hi in _chunks(n)]
    points: list[SequencePoint] = []

    def finish(n: int, total: int, started: float) -> None:
        lam = _to_mpf(total, n, plan)
        point = SequencePoint(n, lam, delta_n(n, lam, cap, cache.kind), cap,
                              (time.perf_counter() - started) * 1e3)
        points.append(point)
        if on_point is not None:
            on_point(point)

    if threads == 1:
        for n in ns:
            started = time.perf_counter()
            total = sum(alternating_sum(n, table, lo, hi, base, cap) for lo, hi in _chunks(n))
            finish(n, total, started)
        return points

    with cf.ProcessPoolExecutor(max_workers=threads, initializer=_worker_init,
                                initargs=(table,)) as pool:
        started = time.perf_counter()
        results = pool.map(_worker_sum, tasks, chunksize=1)
        by_task = iter(results)
        for n in ns:
            total = 0
            for _ in _chunks(n):
                total += next(by_task)
            finish(n, total, started)
            started = time.perf_counter()
    return points


def lambda_range(n_list: Iterable[int], target_digits: int = 12, threads: int | None = 1,
                 cache: PhiCache | None = None,
                 on_point: Callable[[SequencePoint], None] | None = None) -> list[SequencePoint]:
    """SequencePoints for the Riemann case."""
    cache = cache if cache is not None else default_cache()
    return compute_sequence(n_list, cache, target_digits, threads, on_point)


def cancellation_audit(n: int, cache: PhiCache | None = None) -> float:
    """Decimal digits lost: log10(sum_m |A_nm Phi_m|) - log10|Lambda_n|."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"cancellation_audit needs n >= 1, got {n!r}")
    cache = cache if cache is not None else default_cache()
    plan = plan_precision(n, 15)
    table = _fixed_table(cache, term_fraction_bits(plan, n))
    base, cap = plan.term_base_bits, plan.working_bits
    signed = alternating_sum(n, table, 1, n, base, cap)
    absolute = alternating_sum(n, table, 1, n, base, cap, absolute=True)
    if not signed:
        return math.inf
    with mp.workprec(64):
        return float(mpmath.log10(mpf(absolute)) - mpmath.log10(mpf(abs(signed))))
