"""Sinusoid-scan kernels for the wavelength fit.

For each trial wavelength l the kernel fits y ~ a cos(2 pi u / l) + b sin(2 pi u / l)
by least squares and returns the residual sum of squares. numba is used
when importable unless ``KEIPERLI_NUMBA=0``; the numpy version gives the
same numbers up to rounding.
"""

from __future__ import annotations

import os

import numpy as np

_TWO_PI = 2.0 * np.pi


def _rss_numpy(u: np.ndarray, y: np.ndarray, ls: np.ndarray, block: int = 256) -> np.ndarray:
    out = np.empty(ls.shape[0])
    yy = float(y @ y)
    for start in range(0, ls.shape[0], block):
        phase = np.outer(_TWO_PI / ls[start:start + block], u)
        c = np.cos(phase)
        s = np.sin(phase)
        cc = np.einsum("ij,ij->i", c, c)
        ss = np.einsum("ij,ij->i", s, s)
        cs = np.einsum("ij,ij->i", c, s)
        cy = c @ y
        sy = s @ y
        det = cc * ss - cs * cs
        with np.errstate(divide="ignore", invalid="ignore"):
            proj = (ss * cy * cy - 2.0 * cs * cy * sy + cc * sy * sy) / det
        out[start:start + block] = np.where(det > 0, yy - proj, yy)
    return out


def _rss_loop(u, y, ls):
    n = u.shape[0]
    out = np.empty(ls.shape[0])
    yy = 0.0
    for i in range(n):
        yy += y[i] * y[i]
    for k in range(ls.shape[0]):
        w = _TWO_PI / ls[k]
        cc = ss = cs = cy = sy = 0.0
        for i in range(n):
            c = np.cos(w * u[i])
            s = np.sin(w * u[i])
            cc += c * c
            ss += s * s
            cs += c * s
            cy += c * y[i]
            sy += s * y[i]
        det = cc * ss - cs * cs
        if det > 0.0:
            out[k] = yy - (ss * cy * cy - 2.0 * cs * cy * sy + cc * sy * sy) / det
        else:
            out[k] = yy
    return out


def _load_numba():
    if os.environ.get("KEIPERLI_NUMBA", "1").strip().lower() in ("0", "false", "no", "off"):
        return None
    try:
        import numba
    except ImportError:
        return None
    return numba.njit(cache=False, fastmath=False)(_rss_loop)


_rss_numba = _load_numba()
BACKEND = "numba" if _rss_numba is not None else "numpy"


def scan_rss(u, y, ls, backend: str | None = None) -> np.ndarray:
    """Residual sum of squares of the best two-term sinusoid at every l in ``ls``."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    ls = np.ascontiguousarray(ls, dtype=np.float64)
    backend = backend or BACKEND
    if backend == "numba":
        if _rss_numba is None:
            raise RuntimeError("numba backend requested but unavailable or disabled")
        return _rss_numba(u, y, ls)
    if backend == "numpy":
        return _rss_numpy(u, y, ls)
    raise ValueError(f"unknown backend {backend!r}")
