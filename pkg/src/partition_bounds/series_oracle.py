"""Truncated power series in x = n^(-1/2) and the first-principles coefficient oracles.

The oracles expand the main terms of the partition asymptotics directly, so
their coefficients are independent of any closed-form coefficient formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .numerics import PrecisionContext, gen_binomial, to_mpf


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{t=0}^{order} coeffs[t] x^t, arithmetic modulo x^(order+1)."""

    coeffs: tuple

    @classmethod
    def of(cls, values: Iterable, order: int) -> "TruncatedSeries":
        vals = [mpmath.mpf(v) for v in values][: order + 1]
        vals += [mpmath.mpf(0)] * (order + 1 - len(vals))
        return cls(tuple(vals))

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls.of([c], order)

    @classmethod
    def monomial(cls, c, power: int, order: int) -> "TruncatedSeries":
        return cls.of([0] * power + [c], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, t: int):
        return self.coeffs[t]

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise SeriesError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def scale(self, c) -> "TruncatedSeries":
        return TruncatedSeries(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        m = self.order
        a, b = self.coeffs, other.coeffs
        return TruncatedSeries(tuple(mpmath.fsum(a[i] * b[t - i] for i in range(t + 1)) for t in range(m + 1)))

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries.of(self.coeffs, order)

    def valuation(self) -> int:
        for t, a in enumerate(self.coeffs):
            if a != 0:
                return t
        return self.order + 1

    def divide_by_x(self) -> "TruncatedSeries":
        """S/x for S with zero constant term; the result has order one less."""
        if self.coeffs[0] != 0:
            raise SeriesError("divide_by_x needs a zero constant term")
        return TruncatedSeries(self.coeffs[1:])

    def evaluate(self, x):
        return mpmath.polyval(list(reversed(self.coeffs)), x)


def add(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    return s + t


def mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    return s * t


def scale(s: TruncatedSeries, c) -> TruncatedSeries:
    return s.scale(c)


def _power_sum(s: TruncatedSeries, weights: Sequence) -> TruncatedSeries:
    # sum_j weights[j] * s^j; s has valuation >= 1 so powers beyond the order vanish
    m = s.order
    out = TruncatedSeries.constant(weights[0], m)
    power = TruncatedSeries.constant(1, m)
    for j in range(1, m + 1):
        power = power * s
        out = out + power.scale(weights[j])
    return out


def exp_series(s: TruncatedSeries) -> TruncatedSeries:
    if s.coeffs[0] != 0:
        raise SeriesError("exp_series needs a zero constant term")
    m = s.order
    weights = [mpmath.mpf(1)]
    for j in range(1, m + 1):
        weights.append(weights[-1] / j)
    return _power_sum(s, weights)


def binomial_pow(s: TruncatedSeries, r: Fraction | int) -> TruncatedSeries:
    """(1 + u)^r = sum_j C(r, j) u^j for s = 1 + u."""
    if s.coeffs[0] != 1:
        raise SeriesError("binomial_pow needs constant term 1")
    r = Fraction(r)
    u = s - TruncatedSeries.constant(1, s.order)
    return _power_sum(u, [to_mpf(gen_binomial(r, j)) for j in range(s.order + 1)])


# ---------------------------------------------------------------------------
# oracles


def _one_plus_cx2(c, order: int) -> TruncatedSeries:
    return TruncatedSeries.of([1, 0, c], order)


def _exponent_gap(c, order: int) -> TruncatedSeries:
    """pi sqrt(2/3) (sqrt(1 + c x^2) - 1)/x to the given order."""
    root = binomial_pow(_one_plus_cx2(c, order + 1), Fraction(1, 2))
    gap = (root - TruncatedSeries.constant(1, order + 1)).divide_by_x()
    return gap.scale(mp.pi * mpmath.sqrt(mpmath.mpf(2) / 3))


def _lehmer_tail(c, order: int) -> TruncatedSeries:
    """1 - 1/mu expressed in x for mu = pi sqrt(2/3) sqrt(1 + c x^2)/x."""
    lead = mpmath.sqrt(6) / (2 * mp.pi)
    inv_root = binomial_pow(_one_plus_cx2(c, order), Fraction(-1, 2))
    x_inv_root = TruncatedSeries.of((0,) + inv_root.coeffs, order)
    return TruncatedSeries.constant(1, order) - x_inv_root.scale(lead)


def oracle_shift_series(k: int, M: int, ctx: PrecisionContext) -> TruncatedSeries:
    """Expansion of the shifted main term relative to exp(pi sqrt(2n/3))/(4 n sqrt 3)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    with ctx.work():
        c = mpmath.mpf(24 * k - 1) / 24
        expo = exp_series(_exponent_gap(c, M))
        rational = binomial_pow(_one_plus_cx2(c, M), -1)
        return expo * rational * _lehmer_tail(c, M)


def oracle_inverse_series(M: int, ctx: PrecisionContext) -> TruncatedSeries:
    """Expansion of the reciprocal main term relative to 4 n sqrt 3 exp(-pi sqrt(2n/3))."""
    if M < 0:
        raise ValueError(f"order must be nonnegative, got {M}")
    with ctx.work():
        c = mpmath.mpf(-1) / 24
        expo = exp_series(-_exponent_gap(c, M))
        rational = _one_plus_cx2(c, M)
        return expo * rational * binomial_pow(_lehmer_tail(c, M), -1)


def oracle_ratio_series(k: int, M: int, ctx: PrecisionContext) -> TruncatedSeries:
    """Quotient of the shifted and unshifted main terms, expanded in one pass."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    with ctx.work():
        c = mpmath.mpf(24 * k - 1) / 24
        gap = _exponent_gap(c, M) - _exponent_gap(mpmath.mpf(-1) / 24, M)
        rational = _one_plus_cx2(mpmath.mpf(-1) / 24, M) * binomial_pow(_one_plus_cx2(c, M), -1)
        tails = _lehmer_tail(c, M) * binomial_pow(_lehmer_tail(mpmath.mpf(-1) / 24, M), -1)
        return exp_series(gap) * rational * tails
