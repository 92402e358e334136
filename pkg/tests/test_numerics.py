from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from partition_bounds.numerics import (
    AMBIGUOUS,
    FAIL,
    PASS,
    AmbiguousComparison,
    BoundedApprox,
    PrecisionContext,
    ceil_certified,
    certify_close,
    certify_le,
    constants,
    decide_le,
    g_hat,
    gen_binomial,
    mu,
    nu,
    pochhammer_rational,
    stable_eval,
)


def close(a, b, tol=1e-9):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(32)
    with pytest.raises(ValueError):
        PrecisionContext(256, max_bits=128)
    c = PrecisionContext(256)
    assert c.margin_exponent == 128
    d = c.doubled()
    assert (d.bits, d.margin_exponent) == (512, 256)
    assert c.digits == int(256 * 0.30103) - 5


def test_constants(ctx):
    k = constants(ctx)
    assert abs(float(k.alpha) - 0.5235987755982988) < 1e-15
    with ctx.work():
        assert abs(mpmath.sqrt(36 + k.pi**2) - 6 / k.b_sub) < mpmath.mpf(2) ** -240


def test_mu_nu_ghat(ctx):
    with ctx.work():
        assert abs(mu(1, ctx) - mpmath.pi / 6 * mpmath.sqrt(23)) < mpmath.mpf(2) ** -240
    assert close(mu(1, ctx), 2.5110915135822645)
    assert close(nu(2, ctx), 2.3749809711600376)
    assert close(g_hat(2, ctx), 0.8989251317703492)
    # recomputed in double precision; see the README note on these values
    assert close(nu(5, ctx), 38.76031913240446)
    assert close(g_hat(5, ctx), 228.37336237475645)
    with pytest.raises(ValueError):
        nu(1, ctx)


@pytest.mark.parametrize("N", range(1, 60))
def test_ghat_dominates_half_square(N, ctx):
    assert g_hat(N + 1, ctx) >= mpmath.mpf(N * N) / 2


def test_pochhammer_and_binomial():
    assert pochhammer_rational(Fraction(-5, 2), 3) == Fraction(-15, 8)
    assert pochhammer_rational(-1, 1) == -1
    assert pochhammer_rational(Fraction(1, 3), 0) == 1
    assert gen_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gen_binomial(Fraction(-3, 2), 3) == Fraction(-35, 16)


@given(st.integers(0, 12), st.integers(0, 12))
def test_gen_binomial_matches_integer_binomial(a, j):
    from math import comb

    assert gen_binomial(Fraction(a), j) == comb(a, j)


def test_certify_le_statuses(ctx):
    assert certify_le(lambda c: (mpmath.mpf(1), mpmath.mpf(2), 1), ctx).status == PASS
    assert certify_le(lambda c: (mpmath.mpf(2), mpmath.mpf(1), 1), ctx).status == FAIL
    # an exact tie never leaves the margin
    tie = certify_le(lambda c: (mpmath.mpf(1), mpmath.mpf(1), 1), PrecisionContext(64, max_bits=256))
    assert tie.status == AMBIGUOUS and tie.bits == 256
    with pytest.raises(AmbiguousComparison):
        decide_le(lambda c: (mpmath.mpf(1), mpmath.mpf(1), 1), PrecisionContext(64, max_bits=128))


def test_certify_le_escalates_until_resolved():
    # the gap 2^-100 is invisible at 64 bits and clear at 256
    def ev(c):
        return mpmath.mpf(1), 1 + mpmath.ldexp(1, -100), 1

    cmp = certify_le(ev, PrecisionContext(64, max_bits=1024))
    assert cmp.status == PASS and cmp.bits > 64


def test_evaluator_runs_at_working_precision():
    seen = []
    certify_le(lambda c: (seen.append(mpmath.mp.prec) or mpmath.mpf(0), mpmath.mpf(1), 1), PrecisionContext(300))
    assert seen == [300]


def test_certify_close(ctx):
    ok = certify_close(lambda c: (mpmath.pi, 4 * mpmath.atan(1)), ctx)
    assert ok.status == PASS
    bad = certify_close(lambda c: (mpmath.mpf(1), 1 + mpmath.mpf(2) ** -100), ctx)
    assert bad.status == FAIL


def test_ceil_certified(ctx):
    assert ceil_certified(lambda c: g_hat(2, c), ctx) == 1
    assert ceil_certified(lambda c: g_hat(5, c), ctx) == 229
    with pytest.raises(AmbiguousComparison):
        ceil_certified(lambda c: mpmath.mpf(3), PrecisionContext(64, max_bits=128))


def test_stable_eval_recovers_cancelled_digits(ctx):
    # (1 + 2^-200) - 1 loses everything at 64 bits but settles with guard bits
    def f(c):
        return (1 + mpmath.ldexp(1, -200)) - 1

    with ctx.work():
        assert stable_eval(f, ctx) == mpmath.ldexp(1, -200)


def test_bounded_approx(ctx):
    with ctx.work():
        b = BoundedApprox(mpmath.mpf(1), mpmath.mpf(2), mpmath.mpf("0.5"))
        assert (b.lower, b.upper) == (1.5, 2.5)
        assert b.check(mpmath.mpf("2.4"), ctx).passed
        assert b.check(mpmath.mpf("2.6"), ctx).status == FAIL


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10**6))
def test_mu_positive_and_increasing(n):
    c = PrecisionContext(128)
    assert 0 < mu(n, c) < mu(n + 1, c)
