"""Reference curves, RH-violation thresholds, oscillation amplitudes and
log-n wavelength fitting.

Thresholds are order-of-magnitude relations (read them as "n >~ value");
no hidden constants are added.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp, mpf
from scipy.optimize import minimize_scalar

from ._kernels import scan_rss
from .errors import DomainError, InsufficientDataError

L_MIN, L_MAX, L_STEPS = 0.02, 2.0, 2000


@dataclass(frozen=True)
class ZeroCandidate:
    """Off-line zero rho' = 1/2 + t + iT."""

    t: float
    T: float

    def __post_init__(self) -> None:
        if not self.t > 0 or not self.T > 0:
            raise DomainError(f"need t > 0 and T > 0, got t={self.t}, T={self.T}")
        if not abs(self.z) < 1:
            raise DomainError("|1 - 1/rho'| must be below 1")

    @property
    def rho(self) -> complex:
        return complex(0.5 + self.t, self.T)

    @property
    def z(self) -> complex:
        return 1 - 1 / self.rho

    @classmethod
    def from_zero(cls, rho) -> "ZeroCandidate":
        rho = complex(rho)
        return cls(rho.real - 0.5, abs(rho.imag))


# ------------------------------------------------------------------ references

_FAMILIES = ("keiper", "lambda_riemann", "lambda_dh")


def reference_curve(n, family: str, bits: int = 64) -> mpf:
    """RH-true asymptote of the chosen sequence at n."""
    if family not in _FAMILIES:
        raise DomainError(f"unknown family {family!r}; choose from {', '.join(_FAMILIES)}")
    with mp.workprec(bits):
        n = mpf(n)
        if n < 1:
            raise DomainError("reference curves need n >= 1")
        log_n = mpmath.log(n)
        if family == "keiper":
            return (log_n + mp.euler - mpmath.log(2 * mp.pi) - 1) / 2
        base = mp.pi if family == "lambda_riemann" else mp.pi / 5
        return log_n + (mp.euler - mpmath.log(base) - 1) / 2


@dataclass(frozen=True)
class Thresholds:
    keiper_n: mpf
    sufficient_n: mpf
    necessary_n: mpf

    def to_dict(self) -> dict:
        return {k: mpmath.nstr(v, 6, min_fixed=1, max_fixed=0)
                for k, v in asdict(self).items()}


def thresholds(zero: ZeroCandidate) -> Thresholds:
    """keiper ~ T^2/t, sufficient ~ T^(1+2/t), necessary ~ T e^(1/t) / 2."""
    with mp.workprec(64):
        t, T = mpf(zero.t), mpf(zero.T)
        return Thresholds(keiper_n=T * T / t,
                          sufficient_n=T ** (1 + 2 / t),
                          necessary_n=T * mpmath.exp(1 / t) / 2)


def oscillation_amplitude(n, zero: ZeroCandidate) -> float:
    """(2n)^t / (T^(2+t) log n)."""
    if n < 2:
        raise DomainError("oscillation_amplitude needs n >= 2")
    return (2 * n) ** zero.t / (zero.T ** (2 + zero.t) * math.log(n))


# ------------------------------------------------------------------ fitting

@dataclass(frozen=True)
class WavelengthFit:
    l: float
    amplitude: float
    phase: float
    residual: float
    input_norm: float
    window: tuple[float, float]
    samples: int

    def to_dict(self) -> dict:
        return {"l": self.l, "amplitude": self.amplitude, "phase": self.phase,
                "residual": self.residual, "input_norm": self.input_norm,
                "window": list(self.window), "samples": self.samples}


def u_window(n_lo: float, n_hi: float) -> tuple[float, float]:
    return (math.log(n_lo), math.log(n_hi))


def _prepare(ns, values, window) -> tuple[np.ndarray, np.ndarray]:
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ns.shape != values.shape or ns.ndim != 1:
        raise DomainError("ns and values must be 1-d arrays of equal length")
    if np.any(ns < 1):
        raise DomainError("indices must be >= 1")
    order = np.argsort(ns)
    u, y = np.log(ns[order]), values[order]
    if window is not None:
        lo, hi = window
        keep = (u >= lo - 1e-12) & (u <= hi + 1e-12)
        u, y = u[keep], y[keep]
    return u, y


def detrended_grid(ns, values, window=None, size: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Linear interpolation onto a uniform u = log n grid, minus a fitted line."""
    u, y = _prepare(ns, values, window)
    if u.size < 8:
        raise InsufficientDataError(f"only {u.size} samples in the window")
    span = u[-1] - u[0]
    if span < 3 * L_MIN:
        raise InsufficientDataError(f"window spans {span:.4f} in log n, below 3*l_min")
    size = size or int(np.clip(u.size, 256, 4096))
    grid = np.linspace(u[0], u[-1], size)
    resampled = np.interp(grid, u, y)
    slope, intercept = np.polyfit(grid, resampled, 1)
    return grid, resampled - (slope * grid + intercept)


def wavelength_fit(ns: Sequence[float], values: Sequence[float], window=None,
                   l_range: tuple[float, float] = (L_MIN, L_MAX), steps: int = L_STEPS,
                   backend: str | None = None) -> WavelengthFit:
    """Dominant log-n wavelength of ``values`` (the (-1)^n-signed remainders).

    ``window`` is a (u_lo, u_hi) range in u = log n.
    """
    grid, y = detrended_grid(ns, values, window)
    ls = np.geomspace(l_range[0], l_range[1], steps)
    rss = scan_rss(grid, y, ls, backend)
    k = int(np.argmin(rss))
    best_l = float(ls[k])
    if 0 < k < steps - 1:
        def objective(l):
            return float(scan_rss(grid, y, np.array([l]), backend)[0])

        res = minimize_scalar(objective, bracket=(ls[k - 1], ls[k], ls[k + 1]),
                              method="golden", tol=1e-10)
        if ls[k - 1] <= res.x <= ls[k + 1] and res.fun <= rss[k]:
            best_l = float(res.x)
    a, b, rss_best = _sinusoid(grid, y, best_l)
    return WavelengthFit(l=best_l, amplitude=math.hypot(a, b), phase=math.atan2(-b, a),
                         residual=math.sqrt(max(rss_best, 0.0)),
                         input_norm=float(np.linalg.norm(y)),
                         window=(float(grid[0]), float(grid[-1])), samples=int(grid.size))


def _sinusoid(u: np.ndarray, y: np.ndarray, l: float) -> tuple[float, float, float]:
    w = 2 * np.pi / l
    design = np.column_stack([np.cos(w * u), np.sin(w * u)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(coef[0]), float(coef[1]), float(resid @ resid)


def growth_exponent(ns: Sequence[float], values: Sequence[float], l: float, window=None,
                    p_range: tuple[float, float] = (-2.0, 6.0), steps: int = 801) -> float:
    """Exponent p best fitting values ~ n^p / log n * (a cos + b sin)(2 pi log n / l)."""
    u, y = _prepare(ns, values, window)
    if u.size < 8:
        raise InsufficientDataError(f"only {u.size} samples in the window")
    w = 2 * np.pi / l
    base = np.column_stack([np.cos(w * u), np.sin(w * u)]) / u[:, None]
    best_p, best_r = None, np.inf
    for p in np.linspace(p_range[0], p_range[1], steps):
        design = base * np.exp(p * u)[:, None]
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        r = y - design @ coef
        score = float(r @ r)
        if score < best_r:
            best_p, best_r = float(p), score
    return best_p
