"""Expansion of 1/p(n) in powers of n^(-1/2) with an explicit error constant.

Coefficients come in two independent forms: the closed forms g_e1, g_e2,
g_o1, g_o2 assembled from the nine alternating sums S_1..S_9, and the Cauchy
product of the expansions of T_1 = exp(pi sqrt(2n/3) - mu(n)) and
T_2 = (1 - 1/(24n)) (1 - 1/mu(n))^(-1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath
from mpmath import mp

from .exact_partition import ExactPartitionTable
from .numerics import (
    AmbiguousComparison,
    BoundedApprox,
    CutoffError,
    PrecisionContext,
    certify_le,
    g_hat,
    gen_binomial,
    mu,
    pochhammer_rational,
    to_mpf,
)
from .shift_expansion import ghat_ceiling

HALF = Fraction(1, 2)

# Denominator of the closed-form t = 1 value of g_o1.  A denominator of 2306
# disagrees with the Cauchy product of the T_1, T_2 expansions; 2304 agrees.
G_O1_T1_DENOMINATOR = 2304

# C_j in |S_j(t)/L_j(t) - 1| <= C_j/t, indexed by j
SJ_CONSTANTS = {
    1: Fraction(26, 10),
    2: Fraction(549, 10),
    3: Fraction(153, 10),
    4: Fraction(67, 10),
    5: Fraction(12, 10),
    6: Fraction(2, 10),
    7: Fraction(14),
    8: Fraction(9),
    9: Fraction(77, 10),
}


def _mp(q: Fraction | int):
    return to_mpf(q)


def _alpha():
    return mp.pi / 6


def _poly_alpha2(coeffs: tuple[Fraction, ...], start: int):
    """sum_i coeffs[i] * alpha^(2 (i + start)) at the current precision."""
    a2 = _alpha() ** 2
    return mpmath.fsum(_mp(c) * a2 ** (i + start) for i, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# exact rational kernels


@lru_cache(maxsize=None)
def _a1_coeffs(s: int) -> tuple[Fraction, ...]:
    # coefficients of alpha^(2u), u = 1..s
    return tuple(
        (-1) ** u * pochhammer_rational(-s, u) / (factorial(s + u) * factorial(2 * u - 1))
        for u in range(1, s + 1)
    )


@lru_cache(maxsize=None)
def _a0_coeffs(s: int) -> tuple[Fraction, ...]:
    # coefficients of alpha^(2u), u = 0..s
    return tuple(
        (-1) ** u * pochhammer_rational(-s, u) / (factorial(s + u + 1) * factorial(2 * u))
        for u in range(s + 1)
    )


@lru_cache(maxsize=None)
def _a5_coeffs(t: int) -> tuple[Fraction, ...]:
    # coefficients of alpha^(2u), u = 0..t-1, in S_5
    return tuple(
        (-1) ** u * pochhammer_rational(-t + 1, u) / (factorial(t + u) * factorial(2 * u))
        for u in range(t)
    )


@lru_cache(maxsize=None)
def _cm_coeffs(m: int) -> tuple[Fraction, ...]:
    # coefficients of (-1/alpha^2)^r, r = 0..m, of C(-(2r+1)/2, m-r)
    return tuple(gen_binomial(Fraction(-(2 * r + 1), 2), m - r) for r in range(m + 1))


@lru_cache(maxsize=None)
def half_poch(s: int) -> Fraction:
    """(1/2 - s)_(s+1)."""
    return pochhammer_rational(HALF - s, s + 1)


@lru_cache(maxsize=None)
def _A1(s: int, bits: int):
    with mp.workprec(bits):
        return _poly_alpha2(_a1_coeffs(s), 1)


@lru_cache(maxsize=None)
def _A0(s: int, bits: int):
    with mp.workprec(bits):
        return _poly_alpha2(_a0_coeffs(s), 0)


@lru_cache(maxsize=None)
def _Cm(m: int, bits: int):
    with mp.workprec(bits):
        w = -1 / _alpha() ** 2
        return mpmath.fsum(_mp(c) * w**r for r, c in enumerate(_cm_coeffs(m)))


# ---------------------------------------------------------------------------
# the nine sums


def _S1(t: int, bits: int):
    if t < 1:
        return mpmath.mpf(0)
    return _mp(Fraction(-1, 24) ** t * half_poch(t) / t) * _A1(t, bits)


def _S2(t: int, bits: int):
    w = 1 + _alpha() ** -2
    return mpmath.fsum((-w) ** (-s) * _mp(half_poch(s) / s) * _A1(s, bits) for s in range(1, t - 1))


def _S3(t: int, bits: int):
    total = mpmath.fsum(_mp(half_poch(s)) * _A0(s, bits) * _Cm(t - s - 1, bits) for s in range(t - 1))
    return (-1) ** (t - 1) * total


def _S4(t: int, bits: int):
    terms = []
    for s in range(t - 1):
        d = t - s
        q = Fraction((-1) ** s * comb(2 * d - 3, d - 1), 4**d * (2 * d - 3)) * half_poch(s)
        terms.append(_mp(q) * _A0(s, bits))
    return mpmath.fsum(terms)


def _S5(t: int, bits: int):
    if t < 1:
        return mpmath.mpf(0)
    lead = (-1) ** (t - 1) * pochhammer_rational(Fraction(3, 2) - t, t)
    return _mp(lead) * _poly_alpha2(_a5_coeffs(t), 0)


def _S6(t: int, bits: int):
    return (-1) ** t * _Cm(t, bits)


def _S7(t: int, bits: int):
    total = mpmath.fsum(_mp(half_poch(s) / s) * _A1(s, bits) * _Cm(t - s, bits) for s in range(1, t))
    return (-1) ** t * total


def _S8(t: int, bits: int):
    terms = []
    for s in range(1, t):
        d = t - s
        q = Fraction((-1) ** s * comb(2 * d - 1, d), s * 4**d * (2 * d - 1)) * half_poch(s)
        terms.append(_mp(q) * _A1(s, bits))
    return mpmath.fsum(terms)


def _S9(t: int, bits: int):
    w = -1 / (1 + _alpha() ** -2)
    return mpmath.fsum(w**s * _mp(half_poch(s)) * _A0(s, bits) for s in range(t - 1))


_SUMS = {1: _S1, 2: _S2, 3: _S3, 4: _S4, 5: _S5, 6: _S6, 7: _S7, 8: _S8, 9: _S9}


@lru_cache(maxsize=None)
def _S_cached(j: int, t: int, bits: int):
    with mp.workprec(bits):
        return +_SUMS[j](t, bits)


def S_j(j: int, t: int, ctx: PrecisionContext):
    """The alternating sum S_j(t); empty summation ranges give 0."""
    if j not in _SUMS:
        raise ValueError(f"j must be in 1..9, got {j}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return _S_cached(j, t, ctx.bits)


def sj_leading_term(j: int, t: int, ctx: PrecisionContext):
    """Leading asymptotic term L_j(t) of S_j(t)."""
    if j not in _SUMS:
        raise ValueError(f"j must be in 1..9, got {j}")
    if t < 1:
        raise ValueError(f"leading terms are defined for t >= 1, got {t}")
    with ctx.work():
        a = _alpha()
        a2 = a**2
        s = mpmath.sqrt(1 + a2)
        sp = mpmath.sqrt(mp.pi)
        t32 = mpmath.mpf(t) ** mpmath.mpf(1.5)
        growth = ((1 + a2) / a2) ** t
        if j == 1:
            return a * mpmath.sinh(a) / (2 * sp) / (mpmath.mpf(24) ** t * t32)
        if j == 2:
            return mpmath.cosh(s - 1) - 1
        if j == 3:
            return mpmath.sinh(s - 1) / (1 + a2) * growth
        if j == 4:
            return (a * mpmath.cosh(a) + mpmath.sinh(a)) / (16 * sp * a) / t32
        if j == 5:
            return mpmath.cosh(a) / (2 * sp * t32)
        if j == 6:
            return growth / s
        if j == 7:
            return (mpmath.cosh(s - 1) - 1) / s * growth
        if j == 8:
            return (a * mpmath.sinh(a) + mpmath.cosh(a) - 1) / (4 * sp * t32)
        return s * mpmath.sinh(s - 1) / a2


# ---------------------------------------------------------------------------
# coefficient families of T_1 and T_2


def E1(t: int, ctx: PrecisionContext):
    if t == 0:
        return mpmath.mpf(1)
    return S_j(1, t, ctx)


def O1(t: int, ctx: PrecisionContext):
    with ctx.work():
        q = Fraction((-1) ** t, 24**t) * half_poch(t)
        return mp.pi / (12 * mpmath.sqrt(6)) * _mp(q) * _A0(t, ctx.bits)


def e2(t: int, ctx: PrecisionContext):
    if t == 0:
        return mpmath.mpf(1)
    with ctx.work():
        a = _alpha()
        return 36 / (mp.pi**2 + 36) * ((1 + a**-2) / 24) ** t


def o2(t: int, ctx: PrecisionContext):
    with ctx.work():
        return 6 / (mp.pi * mpmath.sqrt(24)) * mpmath.mpf(-1) ** t / mpmath.mpf(24) ** t * _Cm(t, ctx.bits)


def E2(t: int, ctx: PrecisionContext):
    if t == 0:
        return mpmath.mpf(1)
    with ctx.work():
        pi = mp.pi
        if t == 1:
            return (36 - pi**2) / (24 * pi**2)
        w = 1 + _alpha() ** -2
        return 54 / (pi**4 * w) * (w / 24) ** (t - 1)


def O2(t: int, ctx: PrecisionContext):
    if t == 0:
        return o2(0, ctx)
    with ctx.work():
        return o2(t, ctx) - o2(t - 1, ctx) / 24


def t1_coefficient(i: int, ctx: PrecisionContext):
    """Coefficient of n^(-i/2) in T_1."""
    return E1(i // 2, ctx) if i % 2 == 0 else O1(i // 2, ctx)


def t2_coefficient(i: int, ctx: PrecisionContext):
    """Coefficient of n^(-i/2) in T_2."""
    return E2(i // 2, ctx) if i % 2 == 0 else O2(i // 2, ctx)


def g_convolution(t: int, ctx: PrecisionContext):
    """g(t) as the Cauchy product of the T_1 and T_2 coefficient sequences."""
    with ctx.work():
        return mpmath.fsum(t1_coefficient(i, ctx) * t2_coefficient(t - i, ctx) for i in range(t + 1))


# ---------------------------------------------------------------------------
# closed-form g


@dataclass(frozen=True)
class GParts:
    g_e1: mpmath.mpf
    g_e2: mpmath.mpf
    g_o1: mpmath.mpf
    g_o2: mpmath.mpf

    @property
    def g_e(self):
        return self.g_e1 + self.g_e2

    @property
    def g_o(self):
        return self.g_o1 + self.g_o2


def _g_e1(t: int, bits: int):
    pi, a = mp.pi, _alpha()
    if t == 0:
        return mpmath.mpf(1)
    if t == 1:
        return (pi**4 - 288 * pi**2 + 10368) / (6912 * pi**2)
    w = 1 + a**-2
    return (
        _S_cached(1, t, bits)
        + 3 * (1 - a**2) / (2 * pi**2) * _S_cached(1, t - 1, bits)
        + 3 / (2 * pi**2 * (1 + a**2)) * (w / 24) ** (t - 1) * (1 + _S_cached(2, t, bits))
    )


def _g_e2(t: int, bits: int):
    a2 = _alpha() ** 2
    S = lambda j: _S_cached(j, t, bits)  # noqa: E731
    return (S(3) / (1 + a2) - 8 * S(4) / (1 + 1 / a2) + S(5)) / mpmath.mpf(24) ** t


def _g_o1(t: int, bits: int):
    pi, a2 = mp.pi, _alpha() ** 2
    r6 = mpmath.sqrt(6)
    if t == 0:
        return r6 / (2 * pi)
    if t == 1:
        return (pi**4 - 144 * pi**2 + 10368) / (G_O1_T1_DENOMINATOR * r6 * pi**3)
    S = lambda j: _S_cached(j, t, bits)  # noqa: E731
    central = _mp(Fraction(comb(2 * t - 1, t), 2 * t - 1))
    return r6 / (2 * pi) * (
        S(1)
        + (S(6) + S(7)) / (mpmath.mpf(24) ** t * (1 + a2))
        - 2 * central / ((1 + 1 / a2) * mpmath.mpf(96) ** t)
        - 2 * a2 * S(8) / ((1 + a2) * mpmath.mpf(24) ** t)
    )


def _g_o2(t: int, bits: int):
    pi, a2 = mp.pi, _alpha() ** 2
    r6 = mpmath.sqrt(6)
    if t == 0:
        return pi / (24 * r6)
    return pi / (12 * r6) / mpmath.mpf(24) ** t * (
        (1 + 1 / a2) ** t / (1 + a2) ** 2 * _S_cached(9, t, bits)
        + (1 - a2) / a2 * _S_cached(5, t, bits)
        + _S_cached(5, t + 1, bits)
    )


@lru_cache(maxsize=None)
def _g_parts(t: int, bits: int) -> GParts:
    with mp.workprec(bits):
        return GParts(_g_e1(t, bits), _g_e2(t, bits), _g_o1(t, bits), _g_o2(t, bits))


def g_parts(t: int, ctx: PrecisionContext) -> GParts:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return _g_parts(t, ctx.bits)


def g(t: int, ctx: PrecisionContext):
    """Coefficient of n^(-t/2) in 1/p(n) relative to 4 n sqrt 3 exp(-pi sqrt(2n/3))."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    parts = g_parts(t // 2, ctx)
    with ctx.work():
        return parts.g_e if t % 2 == 0 else parts.g_o


# ---------------------------------------------------------------------------
# envelopes and error budget


def _envelope_constants(ctx: PrecisionContext):
    with ctx.work():
        pi, a2 = mp.pi, _alpha() ** 2
        s = mpmath.sqrt(1 + a2)
        ch_sh = mpmath.cosh(s - 1) + mpmath.sinh(s - 1)
        c1 = 3 * ch_sh / (2 * pi**2 * (1 + a2))
        c2 = mpmath.sqrt(mpmath.mpf(3) / 2) / pi * ch_sh / (1 + a2) ** mpmath.mpf(1.5)
        ratio = (1 + a2) / (24 * a2)
        return c1, c2, ratio


def g_envelopes(t: int, ctx: PrecisionContext):
    """(bound on |g(2t)|, bound on |g(2t+1)|) for t >= 1."""
    if t < 1:
        raise ValueError(f"envelopes need t >= 1, got {t}")
    c1, c2, ratio = _envelope_constants(ctx)
    with ctx.work():
        even = c1 * ratio ** (t - 1) * (1 + mpmath.mpf(3.5) / t)
        odd = c2 * ratio**t * (1 + mpmath.mpf(0.5) / t)
        return even, odd


@dataclass(frozen=True)
class InverseErrorBudget:
    N: int
    E2_N2: mpmath.mpf
    E2_Ne: mpmath.mpf
    E2_No: mpmath.mpf
    E2_N: mpmath.mpf
    cutoff_n: int


@lru_cache(maxsize=None)
def _inverse_error_budget(N: int, bits: int) -> InverseErrorBudget:
    ctx = PrecisionContext(bits)
    c1, c2, ratio = _envelope_constants(ctx)
    with ctx.work():
        n2 = (6 / (mp.pi * mpmath.sqrt(24))) ** (N + 1) * (1 + mpmath.mpf(4) / N)
        ne = c1 * ratio ** (mpmath.mpf(N - 1) / 2) * (1 + mpmath.mpf(8) / N)
        no = c2 * ratio ** (mpmath.mpf(N) / 2) * (1 + mpmath.mpf(3) / N)
        total = ne + no + n2
    # first admissible n is the smallest integer strictly above g_hat(N+1)
    first = ghat_ceiling(N + 1, bits)
    return InverseErrorBudget(N, n2, ne, no, total, first)


def inverse_error_budget(N: int, ctx: PrecisionContext) -> InverseErrorBudget:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return _inverse_error_budget(N, ctx.bits)


def inverse_prefactor(n: int, ctx: PrecisionContext):
    """4 n sqrt 3 exp(-pi sqrt(2n/3))."""
    with ctx.work():
        return 4 * n * mpmath.sqrt(3) * mpmath.exp(-mp.pi * mpmath.sqrt(mpmath.mpf(2 * n) / 3))


def _above_ghat(n: int, m: int, ctx: PrecisionContext) -> bool:
    c = certify_le(lambda cc: (g_hat(m, cc), mpmath.mpf(n), max(n, 1)), ctx)
    if c.status == "ambiguous":
        raise AmbiguousComparison(f"cannot decide n={n} > g_hat({m})")
    return c.passed


def approx_inv_p(table: ExactPartitionTable | None, n: int, N: int, ctx: PrecisionContext) -> BoundedApprox:
    """Certified band for (1/p(n)) / prefactor, valid for n > g_hat(N+1)."""
    budget = inverse_error_budget(N, ctx)
    if n < 1 or not _above_ghat(n, N + 1, ctx):
        raise CutoffError(f"inverse bound for N={N} needs n > g_hat({N + 1}), got {n}")
    with ctx.work():
        x = 1 / mpmath.sqrt(n)
        center = mpmath.fsum(g(t, ctx) * x**t for t in range(N + 1))
        radius = budget.E2_N * x ** (N + 1)
        return BoundedApprox(inverse_prefactor(n, ctx), center, radius)


# ---------------------------------------------------------------------------
# Lehmer-type band for p(n) itself


class ExcludedCase(ValueError):
    """The pair (n, m) = (6, 2) is excluded from the Lehmer-type band."""


def lehmer_band_terms(table: ExactPartitionTable, n: int, m: int, ctx: PrecisionContext):
    """(|p(n)(24n-1)/(sqrt 12 e^mu) - (1 - 1/mu)|, mu^(-m), scale) at ctx precision."""
    table.require(n)
    with ctx.work():
        u = mu(n, ctx)
        normalized = table[n] * mpmath.mpf(24 * n - 1) / (mpmath.sqrt(12) * mpmath.exp(u))
        lhs = abs(normalized - (1 - 1 / u))
        return lhs, u ** (-m), max(abs(normalized), 1)


def lehmer_band_check(table: ExactPartitionTable, n: int, m: int, ctx: PrecisionContext) -> bool:
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if (n, m) == (6, 2):
        raise ExcludedCase("(n, m) = (6, 2) is excluded from the band")
    if n < 1 or not _above_ghat(n, m, ctx):
        raise CutoffError(f"Lehmer band for m={m} needs n > g_hat({m}), got {n}")
    c = certify_le(lambda cc: lehmer_band_terms(table, n, m, cc), ctx)
    if c.status == "ambiguous":
        raise AmbiguousComparison(f"Lehmer band at n={n}, m={m} undecided up to {c.bits} bits")
    return c.passed
