"""Command-line front end: exact values, coefficient tables, bands and verification reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import mpmath

from .exact_partition import OracleRangeError, load_or_build
from .harness import SUITES, resolve_params, run_suite, tightness_profile, validate_report
from .inverse_expansion import approx_inv_p
from .numerics import CutoffError, PrecisionContext
from .quotient_expansion import KINDS, approx_ratio, expansion_table
from .shift_expansion import approx_p_shift

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

# verify/tightness flags forwarded to the suite when given
SUITE_FLAGS = ("k_max", "N_max", "samples", "seed", "t_max", "m_max", "n_max")


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, default=256, help="working precision in bits (default 256, at least 64)")
    common.add_argument("--max-bits", type=int, default=2048, help="cap for precision escalation (default 2048)")
    common.add_argument(
        "--format", choices=("json", "csv", "text"), default=None,
        help="output format (default text for exact, json otherwise)",
    )
    common.add_argument("--cache", default=None, help="binary file holding the exact partition table")

    parser = argparse.ArgumentParser(
        prog="partition-bounds",
        description="Expansions of p(n+k), 1/p(n) and p(n+k)/p(n) with certified error bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", parents=[common], help="print p(n) from the exact table")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("coeffs", parents=[common], help="coefficients, error constant and cutoff")
    p.add_argument("--kind", choices=KINDS, default="ratio")
    p.add_argument("--k", type=int, default=None, help="shift (ratio and shift kinds)")
    p.add_argument("--N", type=int, required=True, help="truncation order")

    p = sub.add_parser("approx", parents=[common], help="certified band at one n, checked against the exact value")
    p.add_argument("--kind", choices=KINDS, default="ratio")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--N", type=int, required=True)

    for name, text in (("verify", "run a verification suite"), ("tightness", "actual error / bound per case")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--suite", choices=SUITES, required=True)
        p.add_argument("--k-max", dest="k_max", type=int, default=None)
        p.add_argument("--N-max", dest="N_max", type=int, default=None)
        p.add_argument("--samples", type=int, default=None, help="sampled n per (k, N) besides the boundary")
        p.add_argument("--seed", type=int, default=None, help="seed for Python's random.Random sampler")
        p.add_argument("--t-max", dest="t_max", type=int, default=None)
        p.add_argument("--m-max", dest="m_max", type=int, default=None)
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
    return parser


def _num(x, ctx: PrecisionContext) -> str:
    return mpmath.nstr(x, ctx.digits, strip_zeros=False)


def _emit(obj: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key in sorted(obj):
            writer.writerow([key, json.dumps(obj[key]) if isinstance(obj[key], (list, dict)) else obj[key]])
    else:
        for key in sorted(obj):
            out.write(f"{key}: {obj[key]}\n")


def _cmd_exact(args, ctx, out) -> int:
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    table = load_or_build(args.n, args.cache)
    value = table[args.n]
    if args.format == "text":
        out.write(f"{value}\n")
    else:
        _emit({"n": args.n, "p": str(value)}, args.format, out)
    return EXIT_OK


def _cmd_coeffs(args, ctx, out) -> int:
    if args.kind != "inverse" and args.k is None:
        raise UsageError(f"--k is required for kind {args.kind}")
    table = expansion_table(args.kind, args.k, args.N, ctx)
    obj = {
        "kind": table.kind,
        "k": table.k,
        "N": table.N,
        "bits": ctx.bits,
        "coefficients": [_num(x, ctx) for x in table.coefficients],
        "error_constant": _num(table.error_constant, ctx),
        "cutoff": table.cutoff,
    }
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["index", "coefficient"])
        for i, x in enumerate(obj["coefficients"]):
            writer.writerow([i, x])
        writer.writerow(["error_constant", obj["error_constant"]])
        writer.writerow(["cutoff", obj["cutoff"]])
    else:
        _emit(obj, args.format, out)
    return EXIT_OK


def _cmd_approx(args, ctx, out) -> int:
    if args.kind != "inverse" and args.k is None:
        raise UsageError(f"--k is required for kind {args.kind}")
    k = args.k or 0
    table = load_or_build(args.n + k, args.cache)
    with ctx.work():
        if args.kind == "ratio":
            band = approx_ratio(table, args.n, k, args.N, ctx)
            target = mpmath.mpf(table[args.n + k]) / table[args.n]
        elif args.kind == "shift":
            band = approx_p_shift(table, args.n, k, args.N, ctx, inclusive=True)
            target = table[args.n + k] / band.prefactor
        else:
            band = approx_inv_p(table, args.n, args.N, ctx)
            target = 1 / (table[args.n] * band.prefactor)
    cmp = band.check(target, ctx)
    obj = {
        "kind": args.kind,
        "n": args.n,
        "k": args.k,
        "N": args.N,
        "bits": ctx.bits,
        "prefactor": _num(band.prefactor, ctx),
        "center": _num(band.center, ctx),
        "radius": _num(band.radius, ctx),
        "normalized_exact": _num(target, ctx),
        "status": cmp.status,
    }
    _emit(obj, args.format, out)
    return EXIT_OK if cmp.passed else EXIT_VIOLATION


def _suite_params(args) -> dict:
    return {flag: getattr(args, flag) for flag in SUITE_FLAGS if getattr(args, flag) is not None}


def _cmd_verify(args, ctx, out) -> int:
    report = run_suite(args.suite, _suite_params(args), ctx, cache=args.cache)
    if args.format == "json":
        data = report.to_dict()
        validate_report(data)
        out.write(report.to_json())
    elif args.format == "csv":
        out.write(report.to_csv())
    else:
        out.write(report.to_text())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_tightness(args, ctx, out) -> int:
    rows = tightness_profile(args.suite, _suite_params(args), ctx, cache=args.cache)
    digits = 12
    if args.format == "json":
        payload = {
            "suite": args.suite,
            "ctx": {"bits": ctx.bits},
            "rows": [{"params": r.params, "ratio": mpmath.nstr(r.ratio, digits), "flagged": r.flagged} for r in rows],
        }
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        keys: list[str] = []
        for r in rows:
            keys.extend(k for k in r.params if k not in keys)
        if args.format == "csv":
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(keys + ["ratio", "flagged"])
            for r in rows:
                writer.writerow([r.params.get(k, "") for k in keys] + [mpmath.nstr(r.ratio, digits), r.flagged])
        else:
            out.write("  ".join(f"{k:>8}" for k in keys + ["ratio"]) + "\n")
            for r in rows:
                cells = [f"{r.params.get(k, ''):>8}" for k in keys] + [mpmath.nstr(r.ratio, 6)]
                out.write("  ".join(cells) + (" !" if r.flagged else "") + "\n")
    return EXIT_VIOLATION if any(r.flagged for r in rows) else EXIT_OK


COMMANDS = {
    "exact": _cmd_exact,
    "coeffs": _cmd_coeffs,
    "approx": _cmd_approx,
    "verify": _cmd_verify,
    "tightness": _cmd_tightness,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.bits < 64:
            raise UsageError("--bits must be at least 64")
        if args.max_bits < args.bits:
            raise UsageError("--max-bits must be at least --bits")
        ctx = PrecisionContext(args.bits, max_bits=args.max_bits)
        if args.format is None:
            args.format = "text" if args.command == "exact" else "json"
        if args.command in ("verify", "tightness"):
            resolve_params(args.suite, _suite_params(args))
        buf = io.StringIO()
        code = COMMANDS[args.command](args, ctx, buf)
    except (UsageError, CutoffError, OracleRangeError, ValueError) as exc:
        print(f"partition-bounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
