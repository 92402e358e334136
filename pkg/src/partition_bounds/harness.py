"""Batch verification of every bound against the exact oracle, with JSON/CSV reports."""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

import jsonschema
import mpmath

from . import appendix_sums as app
from .exact_partition import (
    ExactPartitionTable,
    OracleTooSmall,
    brute_force_count,
    is_log_concave_at,
    load_or_build,
)
from .inverse_expansion import (
    SJ_CONSTANTS,
    S_j,
    g,
    g_envelopes,
    inverse_error_budget,
    approx_inv_p,
    lehmer_band_terms,
    sj_leading_term,
)
from .numerics import (
    AMBIGUOUS,
    FAIL,
    PASS,
    Case,
    PrecisionContext,
    certify_close,
    certify_le,
    g_hat_floor,
    to_mpf,
)
from .quotient_expansion import approx_ratio, c, quotient_cutoff
from .series_oracle import oracle_inverse_series, oracle_ratio_series, oracle_shift_series
from .shift_expansion import (
    approx_p_shift,
    omega1,
    omega_even_envelope,
    omega_odd_envelope,
    shift_cutoff,
    shift_prefactor,
)

DEFAULT_SEED = 20240101
SAMPLE_WINDOW = 10**4

SUITE_DEFAULTS: dict[str, dict] = {
    "main_theorem": {"k_max": 3, "N_max": 4, "samples": 50, "seed": DEFAULT_SEED},
    "shift_theorem": {"k_max": 3, "N_max": 4, "samples": 50, "seed": DEFAULT_SEED},
    "inverse_theorem": {"N_max": 4, "samples": 50, "seed": DEFAULT_SEED},
    "lehmer": {"m_max": 4, "width": 2000},
    "omega_envelopes": {"k_max": 5, "t_max": 40},
    "g_envelopes": {"t_max": 40},
    "sj_envelopes": {"t_max": 200},
    "appendix_identities": {"t_max": 30, "split_t_max": 50},
    "coefficient_oracle": {"k_max": 3, "omega_t_max": 12, "g_t_max": 10, "c_m_max": 6},
    "log_concavity": {"n_min": 26, "n_max": 1000},
}
SUITES = tuple(SUITE_DEFAULTS)


def resolve_params(suite: str, params: dict | None) -> dict:
    if suite not in SUITE_DEFAULTS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    merged = dict(SUITE_DEFAULTS[suite])
    for key, value in (params or {}).items():
        if value is None:
            continue
        if key not in merged:
            raise ValueError(f"suite {suite} takes no parameter {key!r}")
        merged[key] = int(value)
    return merged


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    bits: int
    params: dict
    cases: tuple[Case, ...]
    digits: int = 72
    notes: dict = field(default_factory=dict)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, AMBIGUOUS: 0}
        for case in self.cases:
            out[case.status] += 1
        return out

    @property
    def ok(self) -> bool:
        counts = self.counts()
        return counts[FAIL] == 0 and counts[AMBIGUOUS] == 0

    def max_tightness(self):
        """Smallest relative slack (rhs - lhs)/rhs over passing cases with rhs > 0."""
        with mpmath.workprec(self.bits):
            slacks = [(c.rhs - c.lhs) / c.rhs for c in self.cases if c.status == PASS and c.rhs > 0]
            return min(slacks) if slacks else None

    def summary(self) -> dict:
        counts = self.counts()
        return {
            "total": len(self.cases),
            "pass": counts[PASS],
            "fail": counts[FAIL],
            "ambiguous": counts[AMBIGUOUS],
            "max_tightness": _fmt(self.max_tightness(), self.digits),
        }

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ctx": {"bits": self.bits},
            "params": dict(self.params),
            "cases": [_case_dict(c, self.digits) for c in self.cases],
            "summary": self.summary(),
            **({"notes": self.notes} if self.notes else {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        keys: list[str] = []
        for case in self.cases:
            for key in case.params:
                if key not in keys:
                    keys.append(key)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys + ["lhs", "rhs", "margin", "status"])
        for case in self.cases:
            writer.writerow(
                [case.params.get(k, "") for k in keys]
                + [_fmt(case.lhs, self.digits), _fmt(case.rhs, self.digits), _fmt(case.margin, self.digits), case.status]
            )
        return buf.getvalue()

    def to_text(self) -> str:
        s = self.summary()
        lines = [
            f"suite {self.suite} at {self.bits} bits: {s['pass']} pass, {s['fail']} fail, "
            f"{s['ambiguous']} ambiguous of {s['total']}",
            f"smallest relative slack: {s['max_tightness']}",
        ]
        for case in self.cases:
            if case.status != PASS:
                lines.append(f"  {case.status}: {case.params} lhs={_fmt(case.lhs, 20)} rhs={_fmt(case.rhs, 20)}")
        return "\n".join(lines) + "\n"


def _fmt(x, digits: int) -> str | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, str, bool)):
        return str(x)
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False)


def _case_dict(case: Case, digits: int) -> dict:
    out = {
        "params": dict(case.params),
        "lhs": _fmt(case.lhs, digits),
        "rhs": _fmt(case.rhs, digits),
        "margin": _fmt(case.margin, digits),
        "status": case.status,
    }
    if case.extra:
        out["extra"] = {k: _fmt(v, digits) for k, v in case.extra.items()}
    return out


def load_schema() -> dict:
    text = resources.files("partition_bounds").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


def validate_report(data: dict) -> None:
    """Raise jsonschema.ValidationError if ``data`` does not match the shipped schema."""
    jsonschema.validate(data, load_schema())


# ---------------------------------------------------------------------------
# oracle sizing


def sample_ns(cutoff: int, samples: int, seed: int) -> list[int]:
    """The boundary n = cutoff followed by sorted distinct samples from (cutoff, cutoff + 10^4]."""
    picked = random.Random(seed).sample(range(cutoff + 1, cutoff + SAMPLE_WINDOW + 1), samples)
    return [cutoff] + sorted(picked)


def required_n_max(suite: str, params: dict, ctx: PrecisionContext) -> int:
    p = resolve_params(suite, params)
    if suite in ("main_theorem", "shift_theorem"):
        return max(
            (quotient_cutoff(k, N, ctx) + SAMPLE_WINDOW + k for k in range(1, p["k_max"] + 1) for N in range(1, p["N_max"] + 1)),
            default=0,
        )
    if suite == "inverse_theorem":
        return max((inverse_error_budget(N, ctx).cutoff_n + SAMPLE_WINDOW for N in range(1, p["N_max"] + 1)), default=0)
    if suite == "lehmer":
        return max((g_hat_floor(m, ctx) + p["width"] for m in range(2, p["m_max"] + 1)), default=0)
    if suite == "log_concavity":
        return p["n_max"] + 1
    return 60


def _oracle(suite: str, params: dict, ctx, table, cache) -> ExactPartitionTable:
    need = required_n_max(suite, params, ctx)
    if table is not None:
        if table.n_max < need:
            raise OracleTooSmall(need, table.n_max)
        return table
    return load_or_build(need, cache)


# ---------------------------------------------------------------------------
# suites


def _band_case(params: dict, evaluate: Callable, ctx: PrecisionContext) -> Case:
    return Case.from_comparison(params, certify_le(evaluate, ctx))


def _main_theorem(p: dict, ctx: PrecisionContext, table: ExactPartitionTable) -> list[Case]:
    cases = []
    for k in range(1, p["k_max"] + 1):
        for N in range(1, p["N_max"] + 1):
            cutoff = quotient_cutoff(k, N, ctx)
            for n in sample_ns(cutoff, p["samples"], p["seed"]):
                q = Fraction(table[n + k], table[n])

                def ev(cc, n=n, k=k, N=N, q=q):
                    band = approx_ratio(table, n, k, N, cc)
                    value = to_mpf(q)
                    return abs(value - band.center), band.radius, max(value, band.center), {
                        "center": band.center, "radius": band.radius}

                cases.append(Case.from_comparison(
                    {"k": k, "N": N, "n": n}, certify_le(ev, ctx), exact_quotient=_fraction_decimal(q, ctx.digits)))
    return cases


def _fraction_decimal(q: Fraction, digits: int) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(to_mpf(q), digits, strip_zeros=False)


def _shift_theorem(p: dict, ctx: PrecisionContext, table: ExactPartitionTable) -> list[Case]:
    cases = []
    for k in range(1, p["k_max"] + 1):
        for N in range(1, p["N_max"] + 1):
            cutoff = shift_cutoff(k, N, ctx)
            for n in sample_ns(cutoff, p["samples"], p["seed"]):
                def ev(cc, n=n, k=k, N=N):
                    band = approx_p_shift(table, n, k, N, cc, inclusive=True)
                    value = table[n + k] / shift_prefactor(n, cc)
                    return abs(value - band.center), band.radius, max(value, band.center)

                cases.append(_band_case({"k": k, "N": N, "n": n}, ev, ctx))
    return cases


def _inverse_theorem(p: dict, ctx: PrecisionContext, table: ExactPartitionTable) -> list[Case]:
    cases = []
    for N in range(1, p["N_max"] + 1):
        cutoff = inverse_error_budget(N, ctx).cutoff_n
        for n in sample_ns(cutoff, p["samples"], p["seed"]):
            def ev(cc, n=n, N=N):
                band = approx_inv_p(table, n, N, cc)
                value = 1 / (table[n] * band.prefactor)
                return abs(value - band.center), band.radius, max(value, band.center)

            cases.append(_band_case({"N": N, "n": n}, ev, ctx))
    return cases


def _lehmer(p: dict, ctx: PrecisionContext, table: ExactPartitionTable) -> list[Case]:
    cases = []
    for m in range(2, p["m_max"] + 1):
        start = g_hat_floor(m, ctx) + 1
        for n in range(start, start + p["width"]):
            if (n, m) == (6, 2):
                continue
            cases.append(_band_case({"m": m, "n": n}, lambda cc, n=n, m=m: lehmer_band_terms(table, n, m, cc), ctx))
    return cases


def _omega_envelopes(p: dict, ctx: PrecisionContext, table) -> list[Case]:
    cases = []
    for k in range(1, p["k_max"] + 1):
        for t in range(1, p["t_max"] + 1):
            for parity, index, env in (("even", 2 * t, omega_even_envelope), ("odd", 2 * t + 1, omega_odd_envelope)):
                def ev(cc, k=k, t=t, index=index, env=env):
                    bound = env(k, t, cc)
                    return abs(omega1(k, index, cc)), bound, bound

                cases.append(_band_case({"k": k, "t": t, "parity": parity}, ev, ctx))
    return cases


def _g_envelopes(p: dict, ctx: PrecisionContext, table) -> list[Case]:
    cases = []
    for t in range(1, p["t_max"] + 1):
        for parity, index, slot in (("even", 2 * t, 0), ("odd", 2 * t + 1, 1)):
            def ev(cc, t=t, index=index, slot=slot):
                bound = g_envelopes(t, cc)[slot]
                return abs(g(index, cc)), bound, bound

            cases.append(_band_case({"t": t, "parity": parity}, ev, ctx))
    return cases


def sj_envelope_terms(j: int, t: int, ctx: PrecisionContext, constant=None):
    """(|S_j(t) - L_j(t)|, C_j L_j(t)/t, scale) for the relative-error envelope."""
    const = SJ_CONSTANTS[j] if constant is None else constant
    with ctx.work():
        lead = sj_leading_term(j, t, ctx)
        rhs = to_mpf(Fraction(const)) * abs(lead) / t
        return abs(S_j(j, t, ctx) - lead), rhs, abs(lead)


def smallest_integer_constant(j: int, t_range, ctx: PrecisionContext) -> int:
    """Least integer C with |S_j/L_j - 1| <= C/t on the whole range."""
    worst = mpmath.mpf(0)
    with ctx.work():
        for t in t_range:
            lhs, _, lead = sj_envelope_terms(j, t, ctx, 1)
            worst = max(worst, t * lhs / lead)
        return int(mpmath.ceil(worst))


def _sj_envelopes(p: dict, ctx: PrecisionContext, table) -> list[Case]:
    cases = []
    for j in sorted(SJ_CONSTANTS):
        for t in range(2, p["t_max"] + 1):
            cases.append(_band_case({"j": j, "t": t}, lambda cc, j=j, t=t: sj_envelope_terms(j, t, cc), ctx))
    return cases


def _appendix_identities(p: dict, ctx: PrecisionContext, table) -> list[Case]:
    cases = []
    for t in range(3, p["t_max"] + 1):
        for u in range(1, t - 1):
            cmp = certify_close(
                lambda cc, t=t, u=u: (app.T_tilde_direct(t, u, None, cc), app.T_tilde_closed(t, u, None, cc)), ctx)
            cases.append(Case.from_comparison({"check": "T_tilde_closed", "t": t, "u": u}, cmp))
    for t in range(2, p["t_max"] + 1):
        for u in range(0, t - 1):
            cmp = certify_close(
                lambda cc, t=t, u=u: (app.T_prime_direct(t, u, None, cc), app.T_prime_closed(t, u, None, cc)), ctx)
            cases.append(Case.from_comparison({"check": "T_prime_closed", "t": t, "u": u}, cmp))
    for t in range(2, p["t_max"] + 1):
        cmp = certify_close(lambda cc, t=t: (app.S3_via_closed(t, cc), S_j(3, t, cc)), ctx)
        cases.append(Case.from_comparison({"check": "S3_via_closed", "t": t}, cmp))
        cmp = certify_close(lambda cc, t=t: (app.S2_via_closed(t, cc), S_j(2, t, cc)), ctx)
        cases.append(Case.from_comparison({"check": "S2_via_closed", "t": t}, cmp))
    for t in range(2, p["split_t_max"] + 1):
        cases.extend(app.s2_split_check(t, ctx))
    cases.extend(app.fact_checks(ctx))
    return cases


def _coefficient_oracle(p: dict, ctx: PrecisionContext, table) -> list[Case]:
    cases = []
    for k in range(1, p["k_max"] + 1):
        for t in range(p["omega_t_max"] + 1):
            cmp = certify_close(lambda cc, k=k, t=t: (omega1(k, t, cc), oracle_shift_series(k, t, cc)[t]), ctx)
            cases.append(Case.from_comparison({"family": "omega", "k": k, "index": t}, cmp))
    for t in range(p["g_t_max"] + 1):
        cmp = certify_close(lambda cc, t=t: (g(t, cc), oracle_inverse_series(t, cc)[t]), ctx)
        cases.append(Case.from_comparison({"family": "g", "k": 0, "index": t}, cmp))
    for k in range(1, p["k_max"] + 1):
        for m in range(p["c_m_max"] + 1):
            cmp = certify_close(lambda cc, k=k, m=m: (c(k, m, cc), oracle_ratio_series(k, m, cc)[m]), ctx)
            cases.append(Case.from_comparison({"family": "c", "k": k, "index": m}, cmp))
    return cases


def _log_concavity(p: dict, ctx: PrecisionContext, table: ExactPartitionTable) -> list[Case]:
    cases = []
    with ctx.work():
        for n in range(p["n_min"], p["n_max"] + 1):
            lhs, rhs = table[n - 1] * table[n + 1], table[n] ** 2
            status = PASS if is_log_concave_at(table, n) else FAIL
            cases.append(Case({"n": n}, mpmath.mpf(lhs), mpmath.mpf(rhs), mpmath.mpf(0), status))
    return cases


_RUNNERS = {
    "main_theorem": _main_theorem,
    "shift_theorem": _shift_theorem,
    "inverse_theorem": _inverse_theorem,
    "lehmer": _lehmer,
    "omega_envelopes": _omega_envelopes,
    "g_envelopes": _g_envelopes,
    "sj_envelopes": _sj_envelopes,
    "appendix_identities": _appendix_identities,
    "coefficient_oracle": _coefficient_oracle,
    "log_concavity": _log_concavity,
}
_NEEDS_TABLE = {"main_theorem", "shift_theorem", "inverse_theorem", "lehmer", "log_concavity"}


def run_suite(
    name: str,
    params: dict | None = None,
    ctx: PrecisionContext | None = None,
    table: ExactPartitionTable | None = None,
    cache: str | Path | None = None,
) -> VerificationReport:
    """Evaluate every case of one suite; cases come out in parameter order."""
    ctx = ctx or PrecisionContext()
    p = resolve_params(name, params)
    oracle = _oracle(name, p, ctx, table, cache) if name in _NEEDS_TABLE else None
    cases = _RUNNERS[name](p, ctx, oracle)
    return VerificationReport(name, ctx.bits, p, tuple(cases), ctx.digits)


def brute_force_cases(table: ExactPartitionTable, n_max: int = 60) -> list[Case]:
    out = []
    for n in range(n_max + 1):
        brute = brute_force_count(n)
        out.append(Case({"n": n}, mpmath.mpf(table[n]), mpmath.mpf(brute), mpmath.mpf(0),
                        PASS if table[n] == brute else FAIL))
    return out


# ---------------------------------------------------------------------------
# tightness


@dataclass(frozen=True)
class TightnessRow:
    params: dict
    ratio: mpmath.mpf

    @property
    def flagged(self) -> bool:
        return self.ratio > 1


def tightness_profile(
    suite: str,
    params: dict | None = None,
    ctx: PrecisionContext | None = None,
    table: ExactPartitionTable | None = None,
    cache: str | Path | None = None,
) -> list[TightnessRow]:
    """actual error / bound for every case with a positive bound.

    Ratios above 1 are violations and are flagged on the row.
    """
    report = run_suite(suite, params, ctx, table, cache)
    rows = []
    with mpmath.workprec(report.bits):
        for case in report.cases:
            if case.rhs > 0:
                rows.append(TightnessRow(dict(case.params), case.lhs / case.rhs))
    return rows


def decreasing_in_n(rows: list[TightnessRow], group: tuple[str, ...] = ("k", "N")) -> dict:
    """Per parameter group, whether the ratio is nonincreasing in n (reported, never asserted)."""
    groups: dict[tuple, list[TightnessRow]] = {}
    for row in rows:
        groups.setdefault(tuple(row.params.get(k) for k in group), []).append(row)
    out = {}
    for key, members in groups.items():
        members.sort(key=lambda r: r.params["n"])
        out[key] = all(a.ratio >= b.ratio for a, b in zip(members, members[1:]))
    return out
