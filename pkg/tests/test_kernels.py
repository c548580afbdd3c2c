import os
import subprocess
import sys

import numpy as np
import pytest

from keiperli import _kernels


def test_numpy_kernel_exact_fit():
    u = np.linspace(0, 3, 400)
    y = 2 * np.cos(2 * np.pi * u / 0.5) - np.sin(2 * np.pi * u / 0.5)
    rss = _kernels.scan_rss(u, y, np.array([0.5, 0.7]), "numpy")
    assert rss[0] < 1e-9 and rss[1] > 1


@pytest.mark.skipif(_kernels._rss_numba is None, reason="numba unavailable")
def test_numba_matches_numpy():
    rng = np.random.default_rng(3)
    u = np.sort(rng.uniform(4, 8, 500))
    y = rng.standard_normal(500)
    ls = np.geomspace(0.02, 2, 300)
    a = _kernels.scan_rss(u, y, ls, "numba")
    b = _kernels.scan_rss(u, y, ls, "numpy")
    assert np.allclose(a, b, rtol=1e-10, atol=1e-10)


def test_env_flag_disables_numba():
    code = "from keiperli import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, KEIPERLI_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.scan_rss([0.0, 1.0], [1.0, 2.0], [0.5], "fortran")
