"""Command line front end.

Exit codes: 0 success, 1 invalid configuration or failed check, 2 usage error.
Numbers on the command line are exact rationals, ``num/den`` or integers.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import random
import sys
from decimal import Context
from fractions import Fraction

from . import analysis, codec, evaluator, params, probability, selfaffine
from .codec import NegaDigits


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def digits(text: str) -> NegaDigits:
    try:
        if text.lstrip().startswith("{"):
            return NegaDigits.from_json(json.loads(text))
        return NegaDigits.parse(text)
    except (ValueError, KeyError):
        raise argparse.ArgumentTypeError(f"bad digit string {text!r}; use e.g. '1,0,2:lowhigh'") from None


def dec(v: Fraction, digits: int = 30) -> str:
    return str(Context(prec=digits).divide(v.numerator, v.denominator))


def emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


@contextlib.contextmanager
def output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _format(args) -> str:
    if args.format:
        return args.format
    return "json" if args.out.endswith(".json") else "csv"


# -- commands ----------------------------------------------------------------

def cmd_validate(P, args):
    emit(params.validate(P).to_json())
    return 0


def cmd_encode(P, args):
    x = codec.encode(P.base, args.x, args.depth)
    lo, hi = codec.decode(P.base, x)
    emit({**x.to_json(), "lo": str(lo), "hi": str(hi)})
    return 0


def cmd_decode(P, args):
    lo, hi = codec.decode(P.base, args.digits)
    emit({"lo": str(lo), "hi": str(hi), "lo_dec": dec(lo), "hi_dec": dec(hi), "exact": lo == hi})
    return 0


def cmd_eval(P, args):
    print(evaluator.evaluate(P, args.x, args.tol))
    return 0


def cmd_integral(P, args):
    r = analysis.integral_closed_form(P, args.tol)
    doc = {"value": str(r.value), "value_dec": dec(r.value), "error_bound": str(r.error_bound)}
    if args.quadrature_depth:
        lo, hi = analysis.integral_quadrature(P, args.quadrature_depth)
        doc["quadrature"] = {"lo": str(lo), "hi": str(hi), "contains": lo <= r.value <= hi}
    emit(doc)
    return 0


def cmd_cylinder(P, args):
    prefix = args.prefix.digits
    lo, hi = codec.cylinder_interval(P.base, prefix)
    inc = analysis.cylinder_increment(P, prefix)
    prod = analysis.cylinder_measure(P, prefix)
    emit({"left": str(lo), "right": str(hi), "increment": str(inc), "product": str(prod), "agree": inc == prod})
    return 0 if inc == prod else 1


def cmd_derivative(P, args):
    if args.random:
        x = analysis.random_germ(P, args.depth or 50, random.Random(args.seed))
    elif args.digits is not None:
        x = args.digits
    else:
        raise UsageError("derivative needs digits or --random")
    cls = analysis.derivative_limit(P, x, args.depth)
    emit({"digits": x.to_json(), **cls.to_json()})
    return 0


def cmd_quotients(P, args):
    pairs = analysis.quotient_sequences(P, args.x0, args.kmax)
    report = analysis.nowhere_diff_condition(P)
    if args.out:
        with output(args.out) as fh:
            if _format(args) == "csv":
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["k", "b_prime", "b_doubleprime", "b_prime_exact", "b_doubleprime_exact"])
                for q in pairs:
                    w.writerow([q.k, dec(q.b_prime), dec(q.b_doubleprime), str(q.b_prime), str(q.b_doubleprime)])
            else:
                json.dump({"condition": report.to_json(), "pairs": [q.to_json() for q in pairs]}, fh, indent=1)
                fh.write("\n")
    else:
        emit({"condition": report.to_json(), "pairs": [q.to_json() for q in pairs]})
    return 0


def cmd_graph(P, args):
    pts = selfaffine.graph_points(P, args.depth)
    with output(args.out) as fh:
        if _format(args) == "csv":
            selfaffine.write_csv(pts, fh)
        else:
            selfaffine.write_json(pts, fh, selfaffine.within_hypothesis(P))
    if not selfaffine.within_hypothesis(P):
        print("note: matrix is not strictly positive; outside the self-affinity hypothesis", file=sys.stderr)
    return 0


def cmd_sample_cdf(P, args):
    cmp = probability.cdf_distance(P, args.n, args.grid, args.seed, args.depth)
    if args.out:
        with output(args.out) as fh:
            if _format(args) == "csv":
                cmp.write_csv(fh)
            else:
                json.dump(cmp.to_json(), fh, indent=1)
                fh.write("\n")
    if args.out != "-":
        emit(cmp.to_json())
    return 0


def cmd_selftest(P, args):
    from .selftest import run
    results = run(P)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="negacantor", description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--config", help="JSON config with 'base' and 'matrix'")
    src.add_argument("--preset", choices=sorted(params.PRESETS), help="built-in matrix")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    sub.add_parser("validate", help="check properties 1-4").set_defaults(func=cmd_validate)

    p = sub.add_parser("encode", help="nega digits of a rational")
    p.add_argument("x", type=rational)
    p.add_argument("--depth", type=int, default=32)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="value of a digit string")
    p.add_argument("digits", type=digits)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval", help="F~(x) to absolute tolerance")
    p.add_argument("x", type=rational)
    p.add_argument("--tol", type=rational, default=Fraction(1, 10**12))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("integral", help="integral of F~ over [0, 1]")
    p.add_argument("--tol", type=rational, default=Fraction(1, 10**9))
    p.add_argument("--quadrature-depth", type=int)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("cylinder", help="interval and increment of a cylinder")
    p.add_argument("prefix", type=digits)
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("derivative", help="classify the derivative along a digit path")
    p.add_argument("digits", type=digits, nargs="?")
    p.add_argument("--random", action="store_true")
    p.add_argument("--depth", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("quotients", help="one-sided difference quotients at a nega-rational point")
    p.add_argument("x0", type=digits)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_quotients)

    p = sub.add_parser("graph", help="points of the graph from composed affine maps")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("sample-cdf", help="empirical CDF of eta against F~")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--depth", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_sample_cdf)

    sub.add_parser("selftest", help="run the invariant suite").set_defaults(func=cmd_selftest)
    return ap


def load(args) -> params.MatrixP:
    if args.config:
        return params.load_config(args.config)
    return params.PRESETS[args.preset or "uniform"]()


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # exits 2 on usage errors
    try:
        P = load(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except (params.StructuralError, ValueError, TypeError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 1
    report = params.validate(P)
    if not report.ok:
        for c in report.checks:
            if not c.ok:
                where = ", ".join(f"(i={i}, n={n})" for i, n in c.failures)
                print(f"error: property {c.name} violated ({c.detail}) at {where or 'period'}", file=sys.stderr)
        if args.command == "validate":
            emit(report.to_json())
        return 1
    try:
        return args.func(P, args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
