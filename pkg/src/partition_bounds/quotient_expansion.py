"""Expansion of p(n+k)/p(n) in powers of n^(-1/2) with an explicit error constant."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .exact_partition import ExactPartitionTable
from .inverse_expansion import approx_inv_p, g, inverse_error_budget
from .numerics import BoundedApprox, CutoffError, PrecisionContext
from .shift_expansion import (
    approx_p_shift,
    omega1,
    shift_constants,
    shift_cutoff,
    shift_error_budget,
)

__all__ = [
    "BoundedApprox",
    "ExpansionTable",
    "QuotientErrorBudget",
    "approx_ratio",
    "c",
    "consistency_band",
    "expansion_table",
    "product_band",
    "quotient_cutoff",
    "quotient_error_budget",
]

KINDS = ("ratio", "shift", "inverse")


@lru_cache(maxsize=None)
def _c(k: int, m: int, bits: int):
    ctx = PrecisionContext(bits)
    with ctx.work():
        return mpmath.fsum(omega1(k, s, ctx) * g(m - s, ctx) for s in range(m + 1))


def c(k: int, m: int, ctx: PrecisionContext):
    """Coefficient of n^(-m/2) in p(n+k)/p(n): the Cauchy product of omega1 and g."""
    if k < 1 or m < 0:
        raise ValueError(f"need k >= 1 and m >= 0, got k={k}, m={m}")
    return _c(k, m, ctx.bits)


@dataclass(frozen=True)
class QuotientErrorBudget:
    k: int
    N: int
    E_N1: mpmath.mpf
    E_N2: mpmath.mpf
    E_N3: mpmath.mpf
    E_N4: mpmath.mpf
    E_N_total: mpmath.mpf
    cutoff: int

    def pieces(self) -> tuple:
        return self.E_N1, self.E_N2, self.E_N3, self.E_N4


def quotient_cutoff(k: int, N: int, ctx: PrecisionContext) -> int:
    """max(ceil g_hat(N+1), (24k-1)^2)."""
    return shift_cutoff(k, N, ctx)


@lru_cache(maxsize=None)
def _quotient_error_budget(k: int, N: int, bits: int) -> QuotientErrorBudget:
    ctx = PrecisionContext(bits)
    sc = shift_constants(k, ctx)
    shift = shift_error_budget(k, N, ctx)
    inv = inverse_error_budget(N, ctx)
    with ctx.work():
        n = mpmath.mpf(N)
        e1 = (mpmath.mpf(11) / 10 + sc.Ce / 2 + 6 * sc.Co / 10 + 2 * mpmath.mpf(k) / 10) / n
        e2 = shift.E_N_total * (1 + 1 / n)
        e3 = inv.E2_N * (
            1 + (19 * mpmath.mpf(k) / 10 + 6 * (1 + sc.C2_star) / 100 + 5 * (1 + sc.C1_star) / 100) / n
        )
        # C*(k) is the larger of the two envelope constants at this k
        c_star = max(sc.C1_star, sc.C2_star)
        growth = (mpmath.mpf(24 * k - 1) / 24) ** (n / 2)
        e4a = (
            mpmath.mpf(3) / 100 + (1 + c_star) * (24 * k - 1) / 96 + 9 * mpmath.mpf(k) / (10 * mpmath.sqrt(n))
        ) * growth * mpmath.sqrt(n)
        e4b = 8 * (1 + c_star) / (10 * mpmath.sqrt(n)) * growth
        e4 = e4a + e4b
        total = e1 + e2 + e3 + e4
    return QuotientErrorBudget(k, N, e1, e2, e3, e4, total, quotient_cutoff(k, N, ctx))


def quotient_error_budget(k: int, N: int, ctx: PrecisionContext) -> QuotientErrorBudget:
    if k < 1 or N < 1:
        raise ValueError(f"need k >= 1 and N >= 1, got k={k}, N={N}")
    return _quotient_error_budget(k, N, ctx.bits)


def approx_ratio(
    table: ExactPartitionTable | None, n: int, k: int, N: int, ctx: PrecisionContext
) -> BoundedApprox:
    """Certified band for p(n+k)/p(n), valid for n >= cutoff (boundary included).

    ``table`` is only used to confirm the oracle covers n+k when given.
    """
    budget = quotient_error_budget(k, N, ctx)
    if n < budget.cutoff:
        raise CutoffError(f"ratio bound for k={k}, N={N} needs n >= {budget.cutoff}, got {n}")
    if table is not None:
        table.require(n + k)
    with ctx.work():
        x = 1 / mpmath.sqrt(n)
        center = mpmath.fsum(c(k, m, ctx) * x**m for m in range(N + 1))
        return BoundedApprox(mpmath.mpf(1), center, budget.E_N_total * x ** (N + 1))


def product_band(shift: BoundedApprox, inverse: BoundedApprox, ctx: PrecisionContext) -> BoundedApprox:
    """Band for p(n+k)/p(n) obtained by multiplying the shift and inverse bands.

    Both targets are positive, so a negative lower end is clipped to zero
    before multiplying.
    """
    with ctx.work():
        pref = shift.prefactor * inverse.prefactor
        lo = max(shift.lower, 0) * max(inverse.lower, 0) * pref
        hi = shift.upper * inverse.upper * pref
        return BoundedApprox(mpmath.mpf(1), (lo + hi) / 2, (hi - lo) / 2)


def consistency_band(n: int, k: int, N: int, ctx: PrecisionContext) -> BoundedApprox:
    """The ratio band implied by the separate shift and inverse bands at n."""
    return product_band(approx_p_shift(None, n, k, N, ctx, inclusive=True), approx_inv_p(None, n, N, ctx), ctx)


@dataclass(frozen=True)
class ExpansionTable:
    kind: str
    k: int | None
    N: int
    coefficients: tuple
    error_constant: mpmath.mpf
    cutoff: int


def expansion_table(kind: str, k: int | None, N: int, ctx: PrecisionContext) -> ExpansionTable:
    """Coefficients, error constant and first admissible n for one expansion."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if kind == "inverse":
        budget = inverse_error_budget(N, ctx)
        coeffs = tuple(g(t, ctx) for t in range(N + 1))
        return ExpansionTable(kind, None, N, coeffs, budget.E2_N, budget.cutoff_n)
    if k is None or k < 1:
        raise ValueError(f"{kind} expansion needs k >= 1, got {k}")
    if kind == "shift":
        sb = shift_error_budget(k, N, ctx)
        coeffs = tuple(omega1(k, t, ctx) for t in range(N + 1))
        return ExpansionTable(kind, k, N, coeffs, sb.E_N_total, sb.cutoff_n)
    qb = quotient_error_budget(k, N, ctx)
    return ExpansionTable(kind, k, N, tuple(c(k, m, ctx) for m in range(N + 1)), qb.E_N_total, qb.cutoff)
