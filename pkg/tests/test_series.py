import math
from fractions import Fraction

import pytest

from padicprob.errors import DomainError, OrderError
from padicprob.series import (
    FormalSeries,
    constant,
    cosh_scaled_sq,
    cosh_series,
    exp_scaled,
    exp_series,
    identity,
    log1p_series,
    one,
    sinh_series,
)


def test_exp_coefficients():
    e = exp_series(6)
    assert e.coeffs == tuple(Fraction(1, math.factorial(k)) for k in range(7))


def test_order_mismatch_raises():
    with pytest.raises(OrderError):
        exp_series(4) + exp_series(5)
    with pytest.raises(OrderError):
        exp_series(4) * one(6)


def test_empty_series_rejected():
    with pytest.raises(ValueError):
        FormalSeries([])


def test_mul_truncates():
    z = identity(4)
    assert (z * z).coeffs == (0, 0, 1, 0, 0)
    assert ((z * z) * (z * z)).coeffs == (0, 0, 0, 0, 1)


def test_cosh_sinh_decompose_exp():
    d = 8
    assert cosh_series(d) + sinh_series(d) == exp_series(d)
    # parity
    assert all(c == 0 for k, c in enumerate(cosh_series(d).coeffs) if k % 2 == 1)
    assert all(c == 0 for k, c in enumerate(sinh_series(d).coeffs) if k % 2 == 0)


def test_cosh_sq_identity():
    d = 10
    c, s = cosh_series(d), sinh_series(d)
    assert c * c - s * s == one(d)


def test_compose_exp_log_is_identity():
    d = 9
    lhs = (exp_series(d) - one(d)).compose(log1p_series(d))
    assert lhs == identity(d)
    rhs = log1p_series(d).compose(exp_series(d) - one(d))
    assert rhs == identity(d)


def test_compose_needs_zero_constant():
    with pytest.raises(DomainError):
        exp_series(4).compose(one(4))


def test_integer_power_matches_repeated_mul():
    b = one(6) + identity(6)
    assert b.integer_power(3) == b * b * b
    assert b.integer_power(0) == one(6)
    with pytest.raises(ValueError):
        b.integer_power(-1)


def test_exp_scaled_is_substitution():
    d = 7
    assert exp_scaled(Fraction(3), d).coeffs == tuple(
        Fraction(3**k, math.factorial(k)) for k in range(d + 1)
    )


def test_padic_power_integer_agrees():
    b = one(6) + identity(6)
    assert b.padic_power(4) == b.integer_power(4)


def test_padic_power_inverse():
    b = one(8) + identity(8)
    inv = b.padic_power(-1)
    assert inv * b == one(8)
    # alternating geometric series
    assert inv.coeffs == tuple(Fraction((-1) ** k) for k in range(9))


def test_padic_power_half_squares_back():
    b = one(8) + identity(8)
    h = b.padic_power(Fraction(1, 2))
    assert h * h == b


def test_padic_power_needs_unit_constant():
    with pytest.raises(DomainError):
        identity(4).padic_power(Fraction(1, 2))


def test_scale_and_neg():
    z = identity(3)
    assert z.scale(5).coeffs == (0, 5, 0, 0)
    assert (-z).coeffs == (0, -1, 0, 0)
    assert (z - z) == constant(0, 3)


def test_coefficient_bounds():
    with pytest.raises(IndexError):
        one(3).coefficient(4)


def test_cosh_scaled_sq_even_expansion():
    # coefficient of z^(2k) is 1 / (n^k (2k)!)
    s = cosh_scaled_sq(4, 8)
    for k in range(5):
        assert s.coefficient(2 * k) == Fraction(1, 4**k * math.factorial(2 * k))
    assert all(s.coefficient(j) == 0 for j in range(9) if j % 2 == 1)


def test_cosh_scaled_sq_at_one_is_cosh():
    assert cosh_scaled_sq(1, 10) == cosh_series(10)


def test_cosh_scaled_sq_rejects_zero():
    with pytest.raises(DomainError):
        cosh_scaled_sq(0, 4)
