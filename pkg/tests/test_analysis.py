import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from keiperli.analysis import (ZeroCandidate, growth_exponent, oscillation_amplitude,
                               reference_curve, thresholds, u_window, wavelength_fit)
from keiperli.coeffs import fn_eval
from keiperli.errors import DomainError, InsufficientDataError

GAMMA = 0.5772156649015329
DH_PLUS = ZeroCandidate(0.308517, 85.699348)
DH_MINUS = ZeroCandidate(1.80862, 8.91836)


def test_reference_constants():
    assert abs(reference_curve(1, "lambda_riemann") - (GAMMA - math.log(math.pi) - 1) / 2) < 1e-15
    assert abs(reference_curve(math.e, "keiper") - (1 + GAMMA - math.log(2 * math.pi) - 1) / 2) < 1e-15
    diff = reference_curve(4000, "lambda_dh") - reference_curve(4000, "lambda_riemann")
    assert abs(diff - math.log(5) / 2) < 1e-15
    with pytest.raises(DomainError):
        reference_curve(10, "other")


def test_zero_candidate_validation():
    with pytest.raises(DomainError):
        ZeroCandidate(0, 10)
    with pytest.raises(DomainError):
        ZeroCandidate(0.2, -1)
    assert abs(DH_PLUS.z) < 1
    z = ZeroCandidate.from_zero(complex(0.808517, -85.699348))
    assert z.T == 85.699348 and abs(z.t - 0.308517) < 1e-12


def test_bundled_thresholds():
    plus = thresholds(ZeroCandidate(0.3085, 85.699348))
    assert 1.5e14 < plus.sufficient_n < 6e14
    assert 550 < plus.necessary_n < 2200
    assert 50 < thresholds(DH_MINUS).sufficient_n < 200
    for zero in (DH_PLUS, DH_MINUS):
        th = thresholds(zero)
        assert th.necessary_n <= th.sufficient_n


def test_threshold_monotone_in_t():
    values = [thresholds(ZeroCandidate(t, 85.7)).sufficient_n for t in (0.1, 0.3, 1.0, 2.0)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_extended_range():
    th = thresholds(ZeroCandidate(0.01, 1000.0))
    assert mpmath.log10(th.sufficient_n) > 600


def test_amplitude():
    assert abs(oscillation_amplitude(4000, DH_PLUS) / 6e-5 - 1) < 0.15
    ratio = oscillation_amplitude(800, DH_PLUS) / oscillation_amplitude(400, DH_PLUS)
    assert abs(ratio - 2 ** DH_PLUS.t * math.log(400) / math.log(800)) < 1e-12
    with pytest.raises(DomainError):
        oscillation_amplitude(1, DH_PLUS)


def test_amplitude_vs_fn_eval():
    rho = mpmath.mpc(0.5 + DH_MINUS.t, DH_MINUS.T)
    ratio = abs(fn_eval(400, rho)) / oscillation_amplitude(400, DH_MINUS)
    assert 0.5 < ratio < 2


def test_synthetic_wavelength():
    ns = np.arange(100, 4001)
    fit = wavelength_fit(ns, np.cos(2 * np.pi * np.log(ns) / 0.5))
    assert abs(fit.l - 0.5) / 0.5 < 0.01
    assert fit.residual <= fit.input_norm
    assert abs(fit.amplitude - 1) < 0.05


def test_backends_agree():
    ns = np.arange(200, 3000)
    y = np.cos(2 * np.pi * np.log(ns) / 0.3 + 1.0) + 0.3 * np.log(ns)
    a = wavelength_fit(ns, y, backend="numpy")
    b = wavelength_fit(ns, y, backend="numba")
    assert abs(a.l - b.l) < 1e-8


def test_window_too_short():
    ns = np.arange(1000, 1040)
    with pytest.raises(InsufficientDataError):
        wavelength_fit(ns, np.sin(ns))
    with pytest.raises(InsufficientDataError):
        wavelength_fit(np.arange(100, 200), np.ones(100), u_window(150, 153))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(0, 2 * math.pi), st.integers(0, 2**32 - 1))
def test_fit_stable_under_noise(l, phase, seed):
    ns = np.arange(300, 4001)
    u = np.log(ns)
    clean = np.cos(2 * np.pi * u / l + phase)
    noise = np.random.default_rng(seed).uniform(-0.01, 0.01, ns.size)
    a = wavelength_fit(ns, clean).l
    b = wavelength_fit(ns, clean + noise).l
    assert abs(a - b) / a < 0.02


def test_growth_exponent_synthetic():
    ns = np.arange(200, 481)
    u = np.log(ns)
    y = ns ** 1.8 / u * np.cos(2 * np.pi * u / 0.7 + 0.4)
    assert abs(growth_exponent(ns, y, 0.7) - 1.8) < 0.02
