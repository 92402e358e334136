import mpmath
import pytest

from partition_bounds.inverse_expansion import (
    G_O1_T1_DENOMINATOR,
    SJ_CONSTANTS,
    ExcludedCase,
    S_j,
    approx_inv_p,
    g,
    g_convolution,
    g_envelopes,
    inverse_error_budget,
    inverse_prefactor,
    lehmer_band_check,
    lehmer_band_terms,
    sj_leading_term,
)
from partition_bounds.numerics import CutoffError
from partition_bounds.series_oracle import oracle_inverse_series


def test_g_values(ctx):
    expected = [1.0, 0.443287976873582, 0.132576336285424, 0.058161962934872, 0.0262452550122152]
    for t, e in enumerate(expected):
        assert abs(float(g(t, ctx)) - e) < 1e-14
    with ctx.work():
        g1 = (72 + mpmath.pi**2) / (24 * mpmath.sqrt(6) * mpmath.pi)
        g3 = (2239488 - 432 * mpmath.pi**4 + mpmath.pi**6) / (497664 * mpmath.sqrt(6) * mpmath.pi**3)
        assert abs(g(1, ctx) - g1) < mpmath.mpf(2) ** -240
        assert abs(g(3, ctx) - g3) < mpmath.mpf(2) ** -240


def test_closed_form_matches_convolution_and_oracle(ctx):
    assert G_O1_T1_DENOMINATOR == 2304
    series = oracle_inverse_series(20, ctx)
    with ctx.work():
        for t in range(21):
            ref = series[t]
            assert abs(g(t, ctx) - ref) <= mpmath.mpf(2) ** -200 * max(1, abs(ref))
            assert abs(g_convolution(t, ctx) - ref) <= mpmath.mpf(2) ** -200 * max(1, abs(ref))


def test_sums_small_t(ctx):
    assert S_j(2, 2, ctx) == 0
    with pytest.raises(ValueError):
        S_j(10, 3, ctx)
    with pytest.raises(ValueError):
        sj_leading_term(1, 0, ctx)
    assert set(SJ_CONSTANTS) == set(range(1, 10))


def test_g_envelopes(ctx):
    for t in range(1, 20):
        even, odd = g_envelopes(t, ctx)
        assert abs(g(2 * t, ctx)) <= even and abs(g(2 * t + 1, ctx)) <= odd


def test_budget(ctx):
    b = inverse_error_budget(1, ctx)
    assert abs(float(b.E2_N2) - 0.759908877317533) < 1e-12
    assert abs(float(b.E2_N) - 2.52368316241092) < 1e-12
    assert b.cutoff_n == 1
    # the quotient assembly uses E_N^[2] <= 4.1
    assert all(inverse_error_budget(N, ctx).E2_N <= 4.1 for N in range(1, 10))


def test_band(table, ctx):
    band = approx_inv_p(table, 1000, 3, ctx)
    with ctx.work():
        target = 1 / (table[1000] * inverse_prefactor(1000, ctx))
    assert band.check(target, ctx).passed
    with pytest.raises(CutoffError):
        approx_inv_p(None, 200, 4, ctx)


def test_lehmer(table, ctx):
    assert lehmer_band_check(table, 7, 2, ctx)
    assert lehmer_band_check(table, 500, 4, ctx)
    with pytest.raises(ExcludedCase):
        lehmer_band_check(table, 6, 2, ctx)
    # the excluded pair really violates the inequality
    lhs, rhs, _ = lehmer_band_terms(table, 6, 2, ctx)
    assert lhs > rhs
    with pytest.raises(CutoffError):
        lehmer_band_check(table, 100, 4, ctx)
