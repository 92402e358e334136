"""High-precision arithmetic policy and the elementary functions mu, nu, g_hat.

All real-valued quantities are :class:`mpmath.mpf` numbers.  A
:class:`PrecisionContext` fixes the working precision and the margin inside
which a comparison is considered undecided; :func:`certify_le` re-evaluates
undecided comparisons at doubled precision until ``max_bits`` is exhausted.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import mpmath
from mpmath import mp

PASS = "pass"
FAIL = "fail"
AMBIGUOUS = "ambiguous"


class AmbiguousComparison(ArithmeticError):
    """A certified comparison stayed inside the margin up to ``max_bits``."""


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 256
    margin_exponent: int | None = None
    max_bits: int = 2048

    def __post_init__(self) -> None:
        if self.bits < 64:
            raise ValueError(f"bits must be >= 64, got {self.bits}")
        if self.max_bits < self.bits:
            raise ValueError(f"max_bits ({self.max_bits}) < bits ({self.bits})")
        if self.margin_exponent is None:
            # default margin: half the working precision
            object.__setattr__(self, "margin_exponent", self.bits // 2)

    @contextmanager
    def work(self) -> Iterator[None]:
        with mp.workprec(self.bits):
            yield

    def margin(self, scale) -> mpmath.mpf:
        """Absolute width of the undecided zone around a comparison of size ``scale``."""
        with self.work():
            return mpmath.ldexp(abs(mpmath.mpf(scale)), -self.bits + self.margin_exponent)

    def tolerance(self):
        """Relative agreement required between two routes to the same value."""
        with self.work():
            return mpmath.ldexp(mpmath.mpf(1), -(self.bits // 2))

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.bits, 2 * self.margin_exponent, self.max_bits)

    @property
    def digits(self) -> int:
        """Decimal digits used when serialising numbers at this precision."""
        return max(int(self.bits * math.log10(2)) - 5, 10)


@dataclass(frozen=True)
class Comparison:
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    margin: mpmath.mpf
    status: str
    bits: int
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS


def certify_le(evaluate: Callable[[PrecisionContext], tuple], ctx: PrecisionContext) -> Comparison:
    """Decide ``lhs <= rhs`` with margin escalation.

    ``evaluate(ctx)`` returns ``(lhs, rhs, scale)`` or ``(lhs, rhs, scale, extra)``
    computed at ``ctx.bits``.  ``scale`` is the magnitude of the quantities whose
    rounding errors enter ``rhs - lhs``.  The comparison is settled once
    ``|rhs - lhs|`` exceeds ``ctx.margin(scale)``; otherwise precision is doubled.
    Never raises: an unsettled comparison comes back with status ``ambiguous``.
    """
    c = ctx
    while True:
        with c.work():
            out = evaluate(c)
        lhs, rhs, scale = out[:3]
        extra = out[3] if len(out) > 3 else {}
        margin = c.margin(scale)
        with c.work():
            diff = rhs - lhs
        if diff > margin:
            return Comparison(lhs, rhs, margin, PASS, c.bits, extra)
        if diff < -margin:
            return Comparison(lhs, rhs, margin, FAIL, c.bits, extra)
        if 2 * c.bits > c.max_bits:
            return Comparison(lhs, rhs, margin, AMBIGUOUS, c.bits, extra)
        c = c.doubled()


def decide_le(evaluate: Callable[[PrecisionContext], tuple], ctx: PrecisionContext) -> bool:
    """Boolean form of :func:`certify_le`; raises on an undecided comparison."""
    cmp = certify_le(evaluate, ctx)
    if cmp.status == AMBIGUOUS:
        raise AmbiguousComparison(
            f"|rhs - lhs| stayed below the margin up to {cmp.bits} bits (max_bits={ctx.max_bits})"
        )
    return cmp.passed


def to_mpf(q: Fraction | int) -> mpmath.mpf:
    """Round an exact rational to the current working precision."""
    if isinstance(q, int):
        return mpmath.mpf(q)
    return mpmath.mpf(q.numerator) / q.denominator


def exact_ceil(x: Fraction | int) -> int:
    return -((-x.numerator) // x.denominator) if isinstance(x, Fraction) else int(x)


def ceil_certified(f: Callable[[PrecisionContext], mpmath.mpf], ctx: PrecisionContext) -> int:
    """Smallest integer >= f, with the floor decided by certified comparisons."""
    c = ctx
    while True:
        with c.work():
            x = f(c)
            fl = int(mpmath.floor(x))
            margin = c.margin(max(abs(x), 1))
            lo, hi = x - fl, fl + 1 - x
        if lo > margin and hi > margin:
            return fl + 1
        if 2 * c.bits > c.max_bits:
            raise AmbiguousComparison(f"cannot decide ceiling of {mpmath.nstr(x, 30)}")
        c = c.doubled()


# ---------------------------------------------------------------------------
# constants and elementary functions


@dataclass(frozen=True)
class Constants:
    pi: mpmath.mpf
    alpha: mpmath.mpf
    b_sub: mpmath.mpf


@lru_cache(maxsize=None)
def _constants(bits: int) -> Constants:
    with mp.workprec(bits):
        pi = +mp.pi
        return Constants(pi=pi, alpha=pi / 6, b_sub=6 / mpmath.sqrt(36 + pi**2))


def constants(ctx: PrecisionContext) -> Constants:
    return _constants(ctx.bits)


def mu(n: int, ctx: PrecisionContext) -> mpmath.mpf:
    """(pi/6) * sqrt(24 n - 1)."""
    if n < 1:
        raise ValueError(f"mu requires n >= 1, got {n}")
    with ctx.work():
        return mp.pi / 6 * mpmath.sqrt(24 * n - 1)


def nu(m: int, ctx: PrecisionContext) -> mpmath.mpf:
    if m < 2:
        raise ValueError(f"nu requires m >= 2, got {m}")
    with ctx.work():
        lm = mpmath.log(m)
        llm = mpmath.log(lm)
        return 2 * mpmath.log(6) + 2 * mpmath.log(2) * m + 2 * m * lm + 2 * m * llm + 5 * m * llm / lm


def g_hat(m: int, ctx: PrecisionContext) -> mpmath.mpf:
    """Cutoff beyond which p(n) obeys the Lehmer-type band of order m."""
    if m < 2:
        raise ValueError(f"g_hat requires m >= 2, got {m}")
    with ctx.work():
        v = nu(m, ctx)
        return (36 / mp.pi**2 * v**2 + 1) / 24


def g_hat_floor(m: int, ctx: PrecisionContext) -> int:
    """floor(g_hat(m)); the first admissible n in ``n > g_hat(m)`` is this plus one."""
    return ceil_certified(lambda c: g_hat(m, c), ctx) - 1


def pochhammer_rational(a: Fraction | int, j: int) -> Fraction:
    """Rising factorial (a)_j = a (a+1) ... (a+j-1), exact."""
    if j < 0:
        raise ValueError("pochhammer index must be nonnegative")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(j):
        out *= a + i
    return out


@lru_cache(maxsize=None)
def gen_binomial(a: Fraction, j: int) -> Fraction:
    """Generalised binomial coefficient C(a, j) for rational a, j >= 0."""
    if j < 0:
        return Fraction(0)
    if j == 0:
        return Fraction(1)
    return gen_binomial(a, j - 1) * (a - j + 1) / j


class CutoffError(ValueError):
    """n lies below the range where a bound is proven."""


@dataclass(frozen=True)
class BoundedApprox:
    """target / prefactor lies in [center - radius, center + radius]."""

    prefactor: mpmath.mpf
    center: mpmath.mpf
    radius: mpmath.mpf

    @property
    def lower(self):
        return self.center - self.radius

    @property
    def upper(self):
        return self.center + self.radius

    def check(self, normalized_target, ctx: PrecisionContext) -> Comparison:
        """Certified test of |normalized_target - center| <= radius.

        Only valid at the precision the band was computed at; callers wanting
        escalation recompute the band inside a :func:`certify_le` evaluator.
        """
        with ctx.work():
            lhs = abs(normalized_target - self.center)
            scale = max(abs(normalized_target), abs(self.center), self.radius)
        return certify_le(lambda c: (lhs, self.radius, scale), replace_bits(ctx, ctx.bits))


def replace_bits(ctx: PrecisionContext, max_bits: int) -> PrecisionContext:
    """Same precision, escalation capped at ``max_bits``."""
    return PrecisionContext(ctx.bits, ctx.margin_exponent, max(max_bits, ctx.bits))


@dataclass(frozen=True)
class Case:
    """One verified inequality: params, the two sides, the margin used and the verdict."""

    params: dict
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    margin: mpmath.mpf
    status: str
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_comparison(cls, params: dict, cmp: Comparison, **extra) -> "Case":
        return cls(dict(params), cmp.lhs, cmp.rhs, cmp.margin, cmp.status, {**cmp.extra, **extra})


def certify_close(evaluate: Callable[[PrecisionContext], tuple], ctx: PrecisionContext) -> Comparison:
    """Certified |a - b| <= 2^(-bits/2) max(|a|, |b|) for ``(a, b) = evaluate(ctx)``.

    The tolerance is pinned to the starting precision so escalation only
    sharpens the evaluation, never the requirement.
    """
    tol = ctx.tolerance()

    def terms(c: PrecisionContext):
        with c.work():
            a, b = evaluate(c)
            size = max(abs(a), abs(b))
            return abs(a - b), tol * size, size, {"a": a, "b": b}

    with ctx.work():
        c0 = terms(ctx)
    if c0[0] == 0:
        return Comparison(c0[0], c0[1], mpmath.mpf(0), PASS, ctx.bits, c0[3])
    return certify_le(terms, ctx)


def stable_eval(fn: Callable[[PrecisionContext], mpmath.mpf], ctx: PrecisionContext, max_factor: int = 16):
    """Evaluate a cancellation-prone expression until it is accurate to ctx.bits.

    ``fn`` is run at ctx.bits + 32 guard bits, then at doubled precision, until
    two consecutive results agree to 2^(-ctx.bits) relative.  The settled value
    is returned rounded to ctx.bits.
    """
    target = ctx.bits
    bits = target + 32
    prev = None
    while True:
        with mp.workprec(bits):
            val = fn(PrecisionContext(bits, None, bits))
            if prev is not None and abs(val - prev) <= mpmath.ldexp(abs(val), -target):
                break
        if bits > target * max_factor:
            raise AmbiguousComparison(f"expression did not settle below {bits} bits")
        prev = val
        bits *= 2
    with ctx.work():
        return +val
