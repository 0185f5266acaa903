"""Command-line interface: generation, verification suites, zeros, limits.

JSON goes to standard output (stable key order, canonical scalar strings);
a human-readable summary goes to standard error unless --quiet.  Exit codes:
0 all checks passed, 1 a verification failed, 2 invalid arguments or
parameter validation failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import time
from fractions import Fraction

from . import classical, relations, zeros
from .constructors import build, build_linear_system
from .qkernels import (
    LatticePoly,
    MultiIndex,
    QContext,
    ValidationError,
    to_falling_basis,
)
from .scalars import format_scalar, parse_scalar

DEFAULT_T = "9/10"
DEFAULT_ALPHAS = ("1/2", "3/5", "7/10")
SUITES = ("orthogonality", "raising", "lowering", "diffeq", "nn", "stepline", "all")
METHOD_NAMES = {
    "rodrigues": "rodrigues",
    "explicit": "explicit_r2",
    "system": "linear_system",
    "recurrence": "recurrence",
}

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcharlier",
        description="Exact engine for q-deformed multiple Charlier polynomials",
    )
    sub = parser.add_subparsers(dest="command")

    gen = sub.add_parser("gen", help="construct one polynomial and print it as JSON")
    _context_flags(gen)
    gen.add_argument("--n", required=True, help="multi-index, comma separated (e.g. 2,1)")
    gen.add_argument("--method", choices=sorted(METHOD_NAMES), default="system")
    gen.add_argument("--basis", choices=("monomial", "falling"), default="monomial")
    gen.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="run identity suites over a multi-index grid")
    verify.add_argument("--t", default=DEFAULT_T, help="rational t, q = t^2 (default 9/10)")
    verify.add_argument("--alpha", action="append", help="weight parameter p/r (repeatable)")
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--rmax", type=int, default=2, help="run r = 1..rmax (default 2)")
    verify.add_argument("--nmax", type=int, default=3, help="grid bound per component (default 3)")
    verify.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    verify.add_argument("--inject-defect", help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)

    zeros_cmd = sub.add_parser("zeros", help="locate the real zeros (float backend)")
    _context_flags(zeros_cmd)
    zeros_cmd.add_argument("--n", required=True, help="multi-index, comma separated")
    zeros_cmd.set_defaults(func=cmd_zeros)

    limit = sub.add_parser("limit", help="compare against the classical family as q -> 1")
    limit.add_argument("--alpha", action="append", help="weight parameter p/r (repeatable)")
    limit.add_argument("--n", default="2,1", help="multi-index, comma separated")
    limit.add_argument("--m-list", default="2,3,4", help="exponents m for q = 1 - 10^-m")
    limit.add_argument("--quiet", action="store_true")
    limit.set_defaults(func=cmd_limit)

    return parser


def _context_flags(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--t", help="rational t (exact backend, q = t^2)")
    group.add_argument("--q", type=float, help="float q (approximate backend)")
    sub.add_argument("--alpha", action="append", help="weight parameter (repeatable)")


def _parse_index(text) -> MultiIndex:
    return MultiIndex(tuple(int(p) for p in str(text).split(",")))


def _make_context(args, r: int) -> QContext:
    alphas = args.alpha or list(DEFAULT_ALPHAS[:r])
    if len(alphas) != r:
        raise ValueError(f"need {r} weight parameters, got {len(alphas)}")
    if getattr(args, "q", None) is not None:
        return QContext.from_q_float(args.q, [float(Fraction(a)) for a in alphas])
    return QContext.from_t(args.t or DEFAULT_T, alphas)


def _emit(document) -> None:
    print(json.dumps(document, indent=2))


def _context_json(ctx: QContext) -> dict:
    return {
        "t": format_scalar(ctx.t),
        "q": format_scalar(ctx.q),
        "alphas": [format_scalar(a) for a in ctx.alphas],
        "backend": "exact" if ctx.exact else "approx",
    }


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    index = _parse_index(args.n)
    ctx = _make_context(args, len(index))
    result = build(index, ctx, method=METHOD_NAMES[args.method])
    poly = result.poly
    if args.basis == "falling":
        poly = to_falling_basis(poly, ctx)
    document = {
        "t": format_scalar(ctx.t),
        "q": format_scalar(ctx.q),
        "alphas": [format_scalar(a) for a in ctx.alphas],
        "multi_index": list(index.parts),
        "method": args.method,
        "basis": args.basis,
        "coefficients": [format_scalar(c) for c in poly.coeffs],
    }
    _emit(document)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _defect_builder(spec: str):
    """Builder that perturbs one coefficient of one polynomial, selected as
    "n1,n2,..:coeff_index[:amount]" (amount defaults to 1/10^6).  The target
    index is corrupted wherever it is built, in every parameter context a
    verifier touches; a negative control proving the checks are not vacuous."""
    loc, _, rest = spec.partition(":")
    target = tuple(int(p) for p in loc.split(","))
    coeff_str, _, amount_str = rest.partition(":")
    coeff_index = int(coeff_str)
    amount = parse_scalar(amount_str) if amount_str else Fraction(1, 10 ** 6)

    def builder(index, context):
        poly = build_linear_system(index, context).poly
        if index.parts == target:
            bumped = list(poly.coeffs)
            while len(bumped) <= coeff_index:
                bumped.append(context.zero())
            bumped[coeff_index] += amount
            poly = LatticePoly.monomial(bumped)
        return poly

    return builder


def _grid(r: int, nmax: int):
    return itertools.product(range(nmax + 1), repeat=r)


def cmd_verify(args) -> int:
    base_alphas = args.alpha or list(DEFAULT_ALPHAS)
    if args.rmax < 1:
        raise ValueError("rmax must be at least 1")
    if args.rmax > len(base_alphas):
        raise ValueError(
            f"rmax = {args.rmax} needs that many weight parameters, got {len(base_alphas)}"
        )
    checks = []
    failed = False

    for r in range(1, args.rmax + 1):
        ctx = QContext.from_t(args.t, base_alphas[:r])
        builder = _defect_builder(args.inject_defect) if args.inject_defect else None
        suites = _suites_for(args.suite, r)
        for suite in suites:
            for entry in _run_suite(suite, ctx, args.nmax, builder):
                checks.append(entry)
                failed = failed or entry["status"] != "pass"

    report = {
        "command": "verify",
        "suite": args.suite,
        "rmax": args.rmax,
        "nmax": args.nmax,
        "context": {
            "t": args.t,
            "alphas": base_alphas,
        },
        "checks": checks,
        "status": "fail" if failed else "pass",
    }
    _emit(report)
    if not args.quiet:
        counts = {}
        for entry in checks:
            key = (entry["identity"], entry["status"])
            counts[key] = counts.get(key, 0) + 1
        for (identity, status), count in sorted(counts.items()):
            print(f"{identity}: {count} {status}", file=sys.stderr)
        print(f"overall: {report['status']}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _suites_for(selected: str, r: int):
    if selected == "all":
        suites = ["orthogonality", "raising", "lowering", "diffeq", "nn"]
        if r == 2:
            suites.append("stepline")
        return suites
    if selected == "stepline" and r != 2:
        return []
    return [selected]


def _run_suite(suite: str, ctx: QContext, nmax: int, builder):
    r = ctx.r
    for parts in _grid(r, nmax):
        index = MultiIndex(parts)
        if suite == "orthogonality":
            start = time.perf_counter()
            defining, boundary = relations.orthogonality_residuals(index, ctx, builder=builder)
            bad = [key for key, value in defining.items() if value != 0]
            bad += [("boundary", i) for i, value in boundary.items() if value == 0]
            yield _entry(suite, ctx, index, None, not bad, len(bad), start)
        elif suite == "raising":
            for i in range(r):
                start = time.perf_counter()
                residual = relations.verify_raising(index, i, ctx, builder=builder)
                yield _entry(suite, ctx, index, i, residual.is_zero, len(residual.coeffs), start)
        elif suite == "lowering":
            start = time.perf_counter()
            residual = relations.verify_lowering(index, ctx, builder=builder)
            yield _entry(suite, ctx, index, None, residual.is_zero, len(residual.coeffs), start)
        elif suite == "diffeq":
            start = time.perf_counter()
            residual = relations.diff_eq_residual(index, ctx, builder=builder)
            yield _entry(suite, ctx, index, None, residual.is_zero, len(residual.coeffs), start)
        elif suite == "nn":
            for k in range(r):
                start = time.perf_counter()
                residual = relations.verify_nn_recurrence(index, k, ctx, builder=builder)
                yield _entry(suite, ctx, index, k, residual.is_zero, len(residual.coeffs), start)
        elif suite == "stepline":
            n1, n2 = parts
            if not relations.stepline_valid(n1, n2):
                continue
            start = time.perf_counter()
            residual = relations.verify_stepline(n1, n2, ctx, builder=builder)
            yield _entry(suite, ctx, index, None, residual.is_zero, len(residual.coeffs), start)


def _entry(identity, ctx, index, component, passed, residual_terms, start):
    entry = {
        "identity": identity,
        "r": ctx.r,
        "n": list(index.parts),
        "status": "pass" if passed else "fail",
        "residual_terms": residual_terms,
        "ms": round(1000 * (time.perf_counter() - start), 3),
    }
    if component is not None:
        entry["component"] = component + 1
    return entry


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def cmd_zeros(args) -> int:
    index = _parse_index(args.n)
    alphas = args.alpha or list(DEFAULT_ALPHAS[: len(index)])
    if getattr(args, "q", None) is not None:
        q = float(args.q)
    else:
        q = float(Fraction(args.t or DEFAULT_T)) ** 2
    ctx = QContext.from_q_float(q, [float(Fraction(a)) for a in alphas])
    ctx.require_convergent_measures()
    # coefficients are computed in exact rational arithmetic (the construction
    # needs only q and the alphas, all exactly representable) and floated for
    # the root scan: float-arithmetic construction loses the tiny constant
    # term long before the scan would
    shadow = _exact_shadow(ctx)
    poly = build(index, shadow, method="linear_system").poly
    roots = zeros.find_positive_roots([float(c) for c in poly.coeffs], index.weight)
    document = {
        "q": format_scalar(ctx.q),
        "alphas": [format_scalar(a) for a in ctx.alphas],
        "multi_index": list(index.parts),
        "roots": [format_scalar(root) for root in roots],
    }
    _emit(document)
    return EXIT_OK


def _exact_shadow(ctx: QContext) -> QContext:
    """Exact-rational twin of a float context for t-free construction paths.

    Fraction(float) is exact, so q and the alphas carry over losslessly; t is
    only a rational approximation of sqrt(q), which the polynomial
    construction never touches."""
    shadow = QContext(
        t=Fraction(ctx.t),
        q=Fraction(ctx.q),
        alphas=tuple(Fraction(a) for a in ctx.alphas),
        exact=True,
    )
    shadow.validate()
    return shadow


# ---------------------------------------------------------------------------
# limit
# ---------------------------------------------------------------------------

def cmd_limit(args) -> int:
    index = _parse_index(args.n)
    r = len(index)
    alpha_strs = args.alpha or list(DEFAULT_ALPHAS[:r])
    alphas_exact = [Fraction(a) for a in alpha_strs]
    classical_poly = classical.classical_build(index, alphas_exact)
    classical_coeffs = [float(c) for c in classical_poly.coeffs]

    entries = []
    coeff_errors = []
    for m in [int(v) for v in args.m_list.split(",")]:
        q = 1.0 - 10.0 ** (-m)
        ctx = QContext.from_q_float(q, [float(a) for a in alphas_exact])
        poly = build(index, ctx, method="recurrence").poly
        coeffs = [float(c) for c in poly.coeffs]
        coeff_err = max(
            abs(a - b) for a, b in itertools.zip_longest(coeffs, classical_coeffs, fillvalue=0.0)
        )
        b_errors = []
        d_errors = []
        for k in range(r):
            got = relations.nn_recurrence_coeffs(index, k, ctx)
            b_classical = float(alphas_exact[k]) + index.weight
            b_errors.append(abs(got.b - b_classical))
            for i in range(r):
                d_classical = float(alphas_exact[i]) * index[i]
                d_errors.append(abs(got.d[i] - d_classical))
        entries.append(
            {
                "m": m,
                "q": format_scalar(q),
                "coeff_error": format_scalar(coeff_err),
                "b_error_max": format_scalar(max(b_errors)),
                "d_error_max": format_scalar(max(d_errors)),
            }
        )
        coeff_errors.append((coeff_err, max(b_errors), max(d_errors)))

    orders = []
    for (e0, b0, d0), (e1, b1, d1) in zip(coeff_errors, coeff_errors[1:]):
        orders.append(
            {
                "coeff": format_scalar(math.log10(e0 / e1)) if e1 else None,
                "b": format_scalar(math.log10(b0 / b1)) if b1 else None,
                "d": format_scalar(math.log10(d0 / d1)) if d1 else None,
            }
        )
    decreasing = all(
        later < earlier
        for seq in zip(*[(e, b, d) for e, b, d in coeff_errors])
        for earlier, later in zip(seq, seq[1:])
    )
    report = {
        "command": "limit",
        "alphas": alpha_strs,
        "multi_index": list(index.parts),
        "entries": entries,
        "empirical_orders": orders,
        "status": "pass" if decreasing else "fail",
    }
    _emit(report)
    if not args.quiet:
        print(f"limit check: {report['status']}", file=sys.stderr)
    return EXIT_OK if decreasing else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
