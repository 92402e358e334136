import csv
import io
import json

import jsonschema
import pytest

from partition_bounds.exact_partition import OracleTooSmall, build_table
from partition_bounds.harness import (
    SUITES,
    decreasing_in_n,
    load_schema,
    required_n_max,
    run_suite,
    sample_ns,
    smallest_integer_constant,
    tightness_profile,
    validate_report,
)
from partition_bounds.numerics import PrecisionContext

SMALL = {"k_max": 1, "N_max": 2, "samples": 4}


def test_sampling_is_seeded():
    a = sample_ns(529, 10, 1)
    assert a == sample_ns(529, 10, 1)
    assert a[0] == 529 and a[1:] == sorted(a[1:]) and len(set(a)) == 11
    assert all(529 < n <= 10529 for n in a[1:])
    assert sample_ns(529, 10, 2) != a


def test_report_shape(table, ctx):
    rep = run_suite("main_theorem", SMALL, ctx, table=table)
    assert len(rep.cases) == 2 * 5 and rep.ok
    data = rep.to_dict()
    validate_report(data)
    assert data["ctx"] == {"bits": 256}
    s = data["summary"]
    assert (s["total"], s["pass"], s["fail"], s["ambiguous"]) == (10, 10, 0, 0)
    first = data["cases"][0]
    assert first["params"] == {"k": 1, "N": 1, "n": 529}
    assert {"center", "radius", "exact_quotient"} <= set(first["extra"])
    assert first["extra"]["exact_quotient"].startswith("1.05")


def test_json_is_deterministic(table, ctx):
    a = run_suite("main_theorem", SMALL, ctx, table=table).to_json()
    b = run_suite("main_theorem", SMALL, ctx, table=table).to_json()
    assert a == b
    assert json.loads(a)["suite"] == "main_theorem"


def test_csv(table, ctx):
    text = run_suite("lehmer", {"m_max": 2, "width": 20}, ctx, table=table).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["m", "n", "lhs", "rhs", "margin", "status"]
    # n = 6 is skipped for m = 2
    assert len(rows) == 1 + 19
    assert all(r[-1] == "pass" for r in rows[1:])


def test_schema_rejects_bad_status(table, ctx):
    data = run_suite("log_concavity", {"n_max": 30}, ctx, table=table).to_dict()
    data["cases"][0]["status"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)
    assert load_schema()["title"] == "verification report"


def test_errors(ctx):
    with pytest.raises(ValueError):
        run_suite("nope", None, ctx)
    with pytest.raises(ValueError):
        run_suite("lehmer", {"seed": 3}, ctx)
    small = build_table(100)
    with pytest.raises(OracleTooSmall) as info:
        run_suite("main_theorem", SMALL, ctx, table=small)
    assert info.value.required == required_n_max("main_theorem", SMALL, ctx)


def test_cache_is_built_on_demand(tmp_path, ctx):
    path = tmp_path / "p.bin"
    rep = run_suite("log_concavity", {"n_max": 100}, ctx, cache=path)
    assert rep.ok and path.exists()


def test_every_suite_is_registered():
    assert set(SUITES) == {
        "main_theorem", "shift_theorem", "inverse_theorem", "lehmer", "omega_envelopes",
        "g_envelopes", "sj_envelopes", "appendix_identities", "coefficient_oracle", "log_concavity",
    }


def test_small_suites_pass(table, ctx):
    for name, params in [
        ("shift_theorem", SMALL),
        ("inverse_theorem", {"N_max": 2, "samples": 4}),
        ("omega_envelopes", {"k_max": 2, "t_max": 6}),
        ("g_envelopes", {"t_max": 6}),
        ("sj_envelopes", {"t_max": 8}),
        ("coefficient_oracle", {"k_max": 1, "omega_t_max": 4, "g_t_max": 4, "c_m_max": 4}),
        ("appendix_identities", {"t_max": 6, "split_t_max": 6}),
    ]:
        rep = run_suite(name, params, ctx, table=table)
        assert rep.ok and rep.cases, name


def test_tightness(table, ctx):
    rows = tightness_profile("main_theorem", {"k_max": 1, "N_max": 1, "samples": 10}, ctx, table=table)
    assert rows and all(0 < r.ratio < 1 and not r.flagged for r in rows)
    trend = decreasing_in_n(rows)
    assert set(trend) == {(1, 1)}
    assert tightness_profile("main_theorem", {"k_max": 0}, ctx, table=table) == []


def test_smallest_constant_for_S2(ctx):
    # S_2(2) = 0 makes t |S_2/L_2 - 1| equal to 2 at t = 2
    assert smallest_integer_constant(2, range(2, 60), ctx) == 2


def test_ambiguous_never_counts_as_pass():
    from partition_bounds.harness import VerificationReport
    from partition_bounds.numerics import AMBIGUOUS, Case
    import mpmath

    case = Case({"n": 1}, mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(0), AMBIGUOUS)
    rep = VerificationReport("x", 64, {}, (case,))
    assert not rep.ok and rep.summary()["ambiguous"] == 1 and rep.summary()["pass"] == 0
