from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from partition_bounds.numerics import PrecisionContext
from partition_bounds.series_oracle import (
    SeriesError,
    TruncatedSeries,
    binomial_pow,
    exp_series,
    oracle_inverse_series,
    oracle_ratio_series,
    oracle_shift_series,
)

CTX = PrecisionContext(128)


def approx(a, b, tol=1e-30):
    return abs(a - b) <= tol * max(1, abs(b))


def test_arithmetic():
    with CTX.work():
        a = TruncatedSeries.of([1, 2], 3)
        b = TruncatedSeries.of([0, 1, 1], 3)
        assert (a + b).coeffs == (1, 3, 1, 0)
        assert (a * b).coeffs == (0, 1, 3, 2)
        assert (-a).coeffs == (-1, -2, 0, 0)
        assert a.scale(3).coeffs == (3, 6, 0, 0)
        assert b.valuation() == 1
        assert b.divide_by_x().coeffs == (1, 1, 0)
        assert a.evaluate(mpmath.mpf(2)) == 5
        with pytest.raises(SeriesError):
            a + TruncatedSeries.of([1], 2)
        with pytest.raises(SeriesError):
            a.divide_by_x()


def test_exp_and_binomial():
    with CTX.work():
        x = TruncatedSeries.monomial(1, 1, 6)
        e = exp_series(x)
        assert all(approx(e[t], 1 / mpmath.factorial(t)) for t in range(7))
        root = binomial_pow(TruncatedSeries.of([1, 1], 4), Fraction(1, 2))
        assert approx(root[2], mpmath.mpf(-1) / 8)
        with pytest.raises(SeriesError):
            exp_series(TruncatedSeries.of([1], 3))
        with pytest.raises(SeriesError):
            binomial_pow(TruncatedSeries.of([2], 3), 2)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_exp_turns_sums_into_products(cs):
    with CTX.work():
        order = 6
        a = TruncatedSeries.of([0] + cs, order)
        b = TruncatedSeries.of([0] + cs[::-1], order)
        lhs, rhs = exp_series(a + b), exp_series(a) * exp_series(b)
        assert all(approx(lhs[t], rhs[t], 1e-25) for t in range(order + 1))


def test_oracle_leading_coefficients():
    with CTX.work():
        s = oracle_shift_series(1, 4, CTX)
        inv = oracle_inverse_series(4, CTX)
        r = oracle_ratio_series(1, 4, CTX)
        assert approx(s[0], 1) and approx(inv[0], 1) and approx(r[0], 1)
        assert approx(s[1], mpmath.mpf("0.839261853288282"), 1e-14)
        assert approx(inv[1], mpmath.mpf("0.443287976873582"), 1e-14)
        assert approx(r[1], mpmath.pi / mpmath.sqrt(6))


def test_ratio_oracle_equals_product_of_oracles():
    with CTX.work():
        for k in (1, 2, 3):
            prod = oracle_shift_series(k, 6, CTX) * oracle_inverse_series(6, CTX)
            direct = oracle_ratio_series(k, 6, CTX)
            assert all(approx(prod[t], direct[t], 1e-30) for t in range(7))


def test_first_ratio_coefficients_in_closed_form():
    # p(n+1)/p(n) = 1 + pi/sqrt(6n) + (pi^2/12 - 1)/n + O(n^(-3/2))
    with CTX.work():
        r = oracle_ratio_series(1, 4, CTX)
        assert approx(r[2], mpmath.pi**2 / 12 - 1)
