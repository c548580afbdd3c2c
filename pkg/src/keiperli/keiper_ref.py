"""Keiper's lambda_n^K by contour quadrature, and truncated zero sums.

lambda_n^K are the Taylor coefficients of Phi(z) = log 2xi(1/(1-z)) at z = 0.
Li's normalization is lambda_n^L = n lambda_n^K.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, ResolutionError, SchemaError
from .zeta import zeta_complex

__all__ = ["ZeroList", "NAMED_ZEROS", "parse_zero", "zeta_complex", "log_xi2",
           "keiper_lambda", "li_lambda", "zero_sum_lambda"]

NAMED_ZEROS: dict[str, tuple[str, str]] = {
    "riemann-first": ("0.5", "14.134725"),
    "dh-plus-online": ("0.5", "5.09416"),
    "dh-plus-offline": ("0.808517", "85.699348"),
    "dh-minus-offline": ("2.30862", "8.91836"),
}

_ZERO_RE = re.compile(r"^\s*([+-]?[\d.]+(?:[eE][+-]?\d+)?)\s*([+-])\s*([\d.]+(?:[eE][+-]?\d+)?)\s*[ij]\s*$")


def parse_zero(text: str) -> mpc:
    """A named constant, or ``beta+Ti`` / ``beta-Ti`` with an explicit ``i``."""
    key = text.strip().lower()
    if key in NAMED_ZEROS:
        beta, t = NAMED_ZEROS[key]
        return mpc(mpf(beta), mpf(t))
    match = _ZERO_RE.match(text)
    if not match:
        raise DomainError(f"cannot parse zero {text!r}; expected e.g. 0.808517+85.699348i")
    beta, sign, t = match.groups()
    imag = mpf(t)
    return mpc(mpf(beta), imag if sign == "+" else -imag)


@dataclass
class ZeroList:
    """Zeros kept in the upper half plane; :meth:`expanded` adds the mirror images."""

    zeros: list[mpc] = field(default_factory=list)
    source: str = "builtin"

    def __post_init__(self) -> None:
        self.zeros = [mpc(z) for z in self.zeros]
        for z in self.zeros:
            if z == 0 or z == 1:
                raise DomainError("rho = 0 and rho = 1 are not admissible zeros")

    def __len__(self) -> int:
        return len(self.zeros)

    def expanded(self) -> list[mpc]:
        """{rho, 1 - rho, conj rho, 1 - conj rho} per stored zero, with multiplicity.

        Coincident points (the on-line case) are kept once per stored zero.
        """
        out: list[mpc] = []
        for rho in self.zeros:
            group: list[mpc] = []
            for cand in (rho, 1 - rho, mpmath.conj(rho), 1 - mpmath.conj(rho)):
                if all(abs(cand - g) > mpf(10) ** (-mp.dps + 3) * (1 + abs(g)) for g in group):
                    group.append(cand)
            out.extend(group)
        return out

    @classmethod
    def builtin(cls, names: Iterable[str] | None = None) -> "ZeroList":
        names = list(names) if names is not None else list(NAMED_ZEROS)
        return cls([parse_zero(name) for name in names], source="builtin:" + ",".join(names))

    @classmethod
    def from_file(cls, path: str | Path) -> "ZeroList":
        """One ordinate T per line (rho = 1/2 + iT) or ``beta T`` pairs; ``#`` comments."""
        path = Path(path)
        zeros: list[mpc] = []
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.replace(",", " ").split()
            try:
                if len(fields) == 1:
                    zeros.append(mpc(mpf("0.5"), mpf(fields[0])))
                elif len(fields) == 2:
                    zeros.append(mpc(mpf(fields[0]), mpf(fields[1])))
                else:
                    raise ValueError
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: expected 'T' or 'beta T'") from exc
        return cls(zeros, source=str(path))


# ------------------------------------------------------------------ quadrature

def log_xi2_principal(x, bits: int) -> mpc:
    """Principal log of 2xi(x) = x(x-1) pi^(-x/2) Gamma(x/2) zeta(x)."""
    with mp.workprec(bits + 16):
        x = mpc(x)
        value = x * (x - 1) * mp.pi ** (-x / 2) * mpmath.gamma(x / 2) * zeta_complex(x, bits + 16)
        return mpmath.log(value)


log_xi2 = log_xi2_principal


def _needed_bits(n_max: int, r: mpf, digits: int = 20) -> int:
    return int(n_max * math.log2(1 / float(r))) + math.ceil(digits * math.log2(10)) + 64


def keiper_lambda(n_max: int, bits: int | None = None, r=0.5, M: int | None = None) -> list[mpf]:
    """[lambda_1^K, ..., lambda_n_max^K] from M contour samples on |z| = r.

    The log is continued along the contour; a step in its imaginary part
    above pi/2 between neighbours raises :class:`ResolutionError`.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max!r}")
    r = mpf(r)
    if not 0 < r < 1:
        raise DomainError("contour radius must lie in (0, 1)")
    M = M or max(256, 8 * n_max)
    if M < 2 * n_max + 2:
        raise DomainError(f"M={M} samples cannot resolve {n_max} coefficients")
    if M % 2:
        M += 1
    bits = bits or _needed_bits(n_max, r)
    with mp.workprec(bits + 16):
        half = M // 2
        samples: list[mpc] = []
        offset = mpf(0)
        prev = None
        for j in range(half + 1):
            z = r * mpmath.expjpi(mpf(2 * j) / M)
            value = log_xi2_principal(1 / (1 - z), bits)
            value = mpc(value.real, value.imag + offset)
            if prev is not None:
                step = value.imag - prev.imag
                wraps = mpmath.nint(step / (2 * mp.pi))
                if wraps:
                    offset -= 2 * mp.pi * wraps
                    value = mpc(value.real, value.imag - 2 * mp.pi * wraps)
                    step = value.imag - prev.imag
                if abs(step) > mp.pi / 2:
                    raise ResolutionError(
                        f"log branch jumps by {float(step):.3f} between samples {j - 1} and {j}; "
                        f"increase M (now {M})")
            samples.append(value)
            prev = value
        # the sample at z = -r is real, so a nonzero phase there means zeros inside
        if abs(samples[-1].imag) > mpf(2) ** (-bits // 2):
            raise ResolutionError("log 2xi winds around the contour; shrink r")
        out = []
        for n in range(1, n_max + 1):
            acc = samples[0].real + (samples[half].real if n % 2 == 0 else -samples[half].real)
            for j in range(1, half):
                angle = -2 * mp.pi * n * j / M
                acc += 2 * (samples[j] * mpmath.expj(angle)).real
            out.append(acc / (M * r ** n))
    with mp.workprec(bits):
        return [+v for v in out]


def li_lambda(keiper_values: Sequence[mpf]) -> list[mpf]:
    """Li's normalization lambda_n^L = n lambda_n^K."""
    return [n * v for n, v in enumerate(keiper_values, 1)]


def zero_sum_lambda(zeros: ZeroList, n: int, bits: int = 64) -> mpf:
    """Truncated sum over the expanded zeros of 1 - cos(n theta), theta = -i log(1 - 1/rho).

    A finite list gives a model value, not a converged lambda_n^L.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    with mp.workprec(bits + 16):
        total = mpc(0)
        for rho in zeros.expanded():
            if rho == 0 or rho == 1:
                raise DomainError("rho = 0 and rho = 1 are not admissible zeros")
            theta = -1j * mpmath.log(1 - 1 / rho)
            total += 1 - mpmath.cos(n * theta)
    with mp.workprec(bits):
        return +total.real
