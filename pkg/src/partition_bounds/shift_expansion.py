"""Expansion of p(n+k) in powers of n^(-1/2) with an explicit error constant."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt

import mpmath
from mpmath import mp

from .exact_partition import ExactPartitionTable
from .numerics import (
    BoundedApprox,
    CutoffError,
    PrecisionContext,
    ceil_certified,
    g_hat,
    mu,
)


def _ceil_sqrt(k: int) -> int:
    r = isqrt(k)
    return r if r * r == k else r + 1


@lru_cache(maxsize=None)
def _omega_rational_terms(t: int) -> tuple[tuple[int, Fraction], ...]:
    # (ell, C(t+1, ell) (t+1-ell) / (t+1-2 ell)! (-1)^ell)
    return tuple(
        (ell, Fraction((-1) ** ell * comb(t + 1, ell) * (t + 1 - ell), factorial(t + 1 - 2 * ell)))
        for ell in range((t + 1) // 2 + 1)
    )


@lru_cache(maxsize=None)
def _omega1(k: int, t: int, bits: int):
    with mp.workprec(bits):
        a = mp.pi / 6
        q = 24 * k - 1
        total = mpmath.fsum(
            (mpmath.mpf(r.numerator) / r.denominator) * a ** (t - 2 * ell) / mpmath.mpf(q) ** ell
            for ell, r in _omega_rational_terms(t)
        )
        return (mpmath.mpf(q) / (4 * mpmath.sqrt(6))) ** t * total


def omega1(k: int, t: int, ctx: PrecisionContext):
    """Coefficient of n^(-t/2) in p(n+k) relative to exp(pi sqrt(2n/3))/(4 n sqrt 3)."""
    if k < 1 or t < 0:
        raise ValueError(f"need k >= 1 and t >= 0, got k={k}, t={t}")
    return _omega1(k, t, ctx.bits)


@dataclass(frozen=True)
class ShiftConstants:
    k: int
    alpha_k: mpmath.mpf
    C1: mpmath.mpf
    C2: mpmath.mpf
    C1_star: mpmath.mpf
    C2_star: mpmath.mpf
    Ce: mpmath.mpf
    Co: mpmath.mpf


@lru_cache(maxsize=None)
def _shift_constants(k: int, bits: int) -> ShiftConstants:
    ctx = PrecisionContext(bits)
    with ctx.work():
        a = mu(k, ctx)
        c = _ceil_sqrt(k)
        C1 = 3 * k * (3 * c + 1) ** 2 * a ** (6 * c + 4) / (2 * c * factorial(6 * c + 4))
        C2 = 9 * k * (3 * c + 1) ** 2 * a ** (6 * c + 3) / ((6 * c + 1) * factorial(6 * c + 3))
        cos_a, sin_a = abs(mpmath.cos(a)), abs(mpmath.sin(a))
        C1s = (a**2 * (mpmath.cosh(a) - 1) + 4 * C1) / (4 * cos_a)
        C2s = (1 + 3 * (a**2 * mpmath.sinh(a) + 4 * C2) / (4 * sin_a)) / 2
        q = 24 * k - 1
        Ce = 2 * C2s + q * (1 + C2s) / 6
        Co = 2 * C1s + q * (1 + 2 * C1s) / 6
        return ShiftConstants(k, a, C1, C2, C1s, C2s, Ce, Co)


def shift_constants(k: int, ctx: PrecisionContext) -> ShiftConstants:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return _shift_constants(k, ctx.bits)


def omega_odd_envelope(k: int, t: int, ctx: PrecisionContext):
    """Upper bound for |omega1(k, 2t+1)|."""
    if t < 1:
        raise ValueError(f"envelope needs t >= 1, got {t}")
    sc = shift_constants(k, ctx)
    with ctx.work():
        q = mpmath.mpf(24 * k - 1) / 24
        return (
            q**t * mpmath.sqrt(6 / mp.pi**3) * mpmath.sqrt(t + 1)
            * abs(mpmath.cos(sc.alpha_k)) * (1 + sc.C1_star / t)
        )


def omega_even_envelope(k: int, t: int, ctx: PrecisionContext):
    """Upper bound for |omega1(k, 2t)|."""
    if t < 1:
        raise ValueError(f"envelope needs t >= 1, got {t}")
    sc = shift_constants(k, ctx)
    with ctx.work():
        q = mpmath.mpf(24 * k - 1) / 24
        return (
            q**t * 2 * mpmath.sqrt(t) / (mpmath.sqrt(mp.pi) * sc.alpha_k)
            * abs(mpmath.sin(sc.alpha_k)) * (1 + sc.C2_star / t)
        )


@dataclass(frozen=True)
class ShiftErrorBudget:
    k: int
    N: int
    E_N1_e: mpmath.mpf
    E_N1_o: mpmath.mpf
    E_N1: mpmath.mpf
    E_N_total: mpmath.mpf
    cutoff_n: int


@lru_cache(maxsize=None)
def ghat_ceiling(m: int, bits: int) -> int:
    """Smallest integer >= g_hat(m)."""
    return ceil_certified(lambda c: g_hat(m, c), PrecisionContext(bits, max_bits=max(4096, bits)))


def shift_cutoff(k: int, N: int, ctx: PrecisionContext) -> int:
    return max(ghat_ceiling(N + 1, ctx.bits), (24 * k - 1) ** 2)


@lru_cache(maxsize=None)
def _shift_error_budget(k: int, N: int, bits: int) -> ShiftErrorBudget:
    ctx = PrecisionContext(bits)
    sc = shift_constants(k, ctx)
    with ctx.work():
        pi = mp.pi
        q = mpmath.mpf(24 * k - 1) / 24
        a = sc.alpha_k
        even = (
            mpmath.sqrt(2) * abs(mpmath.sin(a)) / (mpmath.sqrt(pi) * a)
            * q ** (mpmath.mpf(N + 1) / 2) * mpmath.sqrt(N + 1) * (1 + sc.Ce / N)
        )
        odd = (
            mpmath.sqrt(3 / pi**3) * abs(mpmath.cos(a))
            * q ** (mpmath.mpf(N) / 2) * mpmath.sqrt(N + 2) * (1 + sc.Co / N)
        )
        e1 = even + odd
        total = e1 + (1 + mpmath.mpf(37) / 10 * k / N) * (6 / (pi * mpmath.sqrt(24))) ** (N + 1)
    return ShiftErrorBudget(k, N, even, odd, e1, total, shift_cutoff(k, N, ctx))


def shift_error_budget(k: int, N: int, ctx: PrecisionContext) -> ShiftErrorBudget:
    if k < 1 or N < 1:
        raise ValueError(f"need k >= 1 and N >= 1, got k={k}, N={N}")
    return _shift_error_budget(k, N, ctx.bits)


def shift_prefactor(n: int, ctx: PrecisionContext):
    """exp(pi sqrt(2n/3)) / (4 n sqrt 3)."""
    with ctx.work():
        return mpmath.exp(mp.pi * mpmath.sqrt(mpmath.mpf(2 * n) / 3)) / (4 * n * mpmath.sqrt(3))


def approx_p_shift(
    table: ExactPartitionTable | None,
    n: int,
    k: int,
    N: int,
    ctx: PrecisionContext,
    inclusive: bool = False,
) -> BoundedApprox:
    """Certified band for p(n+k)/prefactor.

    The band is proven for n >= cutoff; by default only n > cutoff is accepted,
    ``inclusive=True`` admits the boundary integer.  ``table`` is unused here
    and accepted for a uniform call signature with the other approximations.
    """
    budget = shift_error_budget(k, N, ctx)
    if n < budget.cutoff_n or (n == budget.cutoff_n and not inclusive):
        rel = ">=" if inclusive else ">"
        raise CutoffError(f"shift bound for k={k}, N={N} needs n {rel} {budget.cutoff_n}, got {n}")
    with ctx.work():
        x = 1 / mpmath.sqrt(n)
        center = mpmath.fsum(omega1(k, t, ctx) * x**t for t in range(N + 1))
        radius = budget.E_N_total * x ** (N + 1)
        return BoundedApprox(shift_prefactor(n, ctx), center, radius)
