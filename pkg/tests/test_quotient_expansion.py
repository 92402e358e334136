import random

import mpmath
import pytest

from partition_bounds.exact_partition import exact_quotient
from partition_bounds.numerics import CutoffError, PASS, certify_le
from partition_bounds.quotient_expansion import (
    approx_ratio,
    c,
    consistency_band,
    expansion_table,
    quotient_cutoff,
    quotient_error_budget,
)
from partition_bounds.series_oracle import oracle_ratio_series
from partition_bounds.shift_expansion import omega1
from partition_bounds.inverse_expansion import g


def test_coefficients(ctx):
    assert c(1, 0, ctx) == 1
    with ctx.work():
        assert abs(c(1, 1, ctx) - (omega1(1, 1, ctx) + g(1, ctx))) < mpmath.mpf(2) ** -240
        for k in range(1, 11):
            assert abs(c(k, 1, ctx) - k * mpmath.pi / mpmath.sqrt(6)) < mpmath.mpf(2) ** -240
            assert c(k, 1, ctx) > 0
        series = oracle_ratio_series(1, 6, ctx)
        for m in range(7):
            assert abs(c(1, m, ctx) - series[m]) < mpmath.mpf(2) ** -200


def test_cutoffs(ctx):
    assert quotient_cutoff(1, 1, ctx) == 529
    assert quotient_cutoff(3, 4, ctx) == 5041


def test_budget_pieces(ctx):
    b = quotient_error_budget(1, 1, ctx)
    with ctx.work():
        assert abs(sum(b.pieces()) - b.E_N_total) < mpmath.mpf(2) ** -240
    assert abs(float(b.E_N_total) - 348.434344046118) < 1e-9
    totals = [quotient_error_budget(1, N, ctx).E_N_total for N in range(2, 7)]
    assert all(a > b for a, b in zip(totals, totals[1:]))


def test_budget_not_monotone_for_larger_k(ctx):
    # reported, not claimed: for k = 3 the constant grows again after N = 2
    totals = [quotient_error_budget(3, N, ctx).E_N_total for N in range(2, 7)]
    assert totals[1] > totals[0]


@pytest.mark.parametrize("n,k,N", [(600, 1, 1), (5100, 3, 4), (529, 1, 1), (5041, 3, 4)])
def test_band_contains_exact(n, k, N, table, ctx):
    def ev(cc):
        band = approx_ratio(table, n, k, N, cc)
        q = exact_quotient(table, n, k, cc)
        return abs(q - band.center), band.radius, q

    assert certify_le(ev, ctx).status == PASS


def test_band_errors(table, ctx):
    with pytest.raises(CutoffError):
        approx_ratio(table, 528, 1, 1, ctx)


def test_consistency_with_separate_bands(table, ctx):
    rng = random.Random(7)
    for k, N in ((1, 1), (2, 3), (3, 4)):
        cut = quotient_cutoff(k, N, ctx)
        for n in [cut] + rng.sample(range(cut + 1, cut + 8000), 5):
            band = consistency_band(n, k, N, ctx)
            with ctx.work():
                q = exact_quotient(table, n, k, ctx)
                assert band.lower <= q <= band.upper


def test_expansion_tables(ctx):
    ratio = expansion_table("ratio", 1, 3, ctx)
    assert ratio.coefficients[0] == 1 and len(ratio.coefficients) == 4 and ratio.cutoff == 529
    inv = expansion_table("inverse", None, 2, ctx)
    assert inv.k is None and inv.coefficients[0] == 1 and inv.error_constant > 0 and inv.cutoff >= 1
    shift = expansion_table("shift", 2, 2, ctx)
    assert shift.coefficients[0] == 1 and shift.cutoff == 2209
    with pytest.raises(ValueError):
        expansion_table("ratio", None, 2, ctx)
    with pytest.raises(ValueError):
        expansion_table("other", 1, 2, ctx)
