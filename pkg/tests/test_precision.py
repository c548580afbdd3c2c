import math

import pytest
from hypothesis import given, strategies as st

from keiperli.errors import DomainError
from keiperli.precision import GUARD_BITS_PER_N, digits_to_bits, plan_precision


def test_guard_bits_follow_cancellation_law():
    plan = plan_precision(1000, 15)
    assert plan.guard_bits == math.ceil(2.5431 * 1000)
    assert plan.working_bits >= 2543 + 50 + 64
    # same law in decimal: 2.5431 bits ~ 0.76555 digits
    assert abs(GUARD_BITS_PER_N * math.log10(2) - 0.76555) < 1e-4


def test_digits_to_bits():
    assert digits_to_bits(15) == 50
    assert digits_to_bits(1) == 4


@pytest.mark.parametrize("n,digits", [(0, 10), (-3, 10), (5, 0), (2.5, 10)])
def test_invalid_plans(n, digits):
    with pytest.raises(DomainError):
        plan_precision(n, digits)


@given(st.integers(1, 20000), st.integers(1, 40), st.integers(0, 500))
def test_plan_monotone(n, digits, dn):
    a = plan_precision(n, digits)
    assert plan_precision(n + dn, digits).working_bits >= a.working_bits
    assert plan_precision(n, digits + 1).working_bits > a.working_bits
    assert a.margin_bits >= 64


def test_term_fraction_bits_capped():
    plan = plan_precision(200, 12)
    assert plan.term_fraction_bits(-50) == plan.term_base_bits
    assert plan.term_fraction_bits(10**6) == plan.working_bits
    extra = plan.with_extra_bits(128)
    assert extra.working_bits == plan.working_bits + 128
    assert extra.term_base_bits == plan.term_base_bits + 128
