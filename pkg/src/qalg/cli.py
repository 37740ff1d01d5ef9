"""Command-line front end.

Commands:
  qalg eval SUBJECT --r 2 [--a 1/2 --p 4 ...]    evaluate one quantity
  qalg analyze FILE --max-period 12              Taylor coefficients -> period report
  qalg recognize --expr agile-star --a 1 ...     algebraic recognition
  qalg verify --suite paper-core                 run an identity suite

Rational parameters are given as n/d strings (decimals are rejected for
the parameters the mathematics needs exact).  Global: --digits N (env
QALG_DIGITS), --json, --out PATH.  Exit codes: 0 ok/pass, 1 usage,
2 domain error, 3 verification failure, 4 not periodic.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

import mpmath as mp

from . import harness
from .errors import InsufficientPrecision, QalgError
from .precision import PrecisionContext
from .qengine import (
    AgileSpec,
    ThetaSpec,
    agile,
    agile_star,
    eta_paper,
    make_nome,
    theta2,
    theta3,
    theta_general,
)
from .elliptic import (
    elliptic_alpha,
    ellint_K,
    inverse_singular_modulus,
    j_invariant,
    multiplier,
    singular_modulus,
)
from .moebius import TaylorInput, detect_period, extract_X, represent_product, represent_theta
from .modular import rrcf, sextic_theta
from .recognize import EXPRESSION_EVALUATORS, recognize, recognize_expression

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY_FAIL = 3
EXIT_NOT_PERIODIC = 4

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def _rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise argparse.ArgumentTypeError(
            f"{text!r} is not an exact rational; write it as n or n/d")
    return Fraction(text)


def _display(value, digits: int) -> str:
    # show digits-10 significant digits so guard noise never reaches users
    shown = max(10, digits - 10)
    return mp.nstr(value, shown, strip_zeros=False)


def _emit(payload: dict, value, args) -> None:
    digits = payload["digits"]
    if args.json:
        payload = dict(payload)
        payload["value"] = _display(value, digits)
        text = json.dumps(payload, indent=2)
    else:
        text = _display(value, digits)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_eval(args) -> int:
    ctx = PrecisionContext(args.digits)
    subject = args.subject
    params = {}

    def need(name):
        v = getattr(args, name, None)
        if v is None:
            raise QalgError(f"subject {subject!r} needs --{name}")
        params[name] = str(v)
        return v

    with ctx.workdps():
        if subject == "agile":
            value = agile(AgileSpec(need("a"), need("p")), make_nome(need("r"), ctx))
        elif subject == "agile-star":
            value = agile_star(AgileSpec(need("a"), need("p")), make_nome(need("r"), ctx))
        elif subject == "theta":
            value = theta_general(ThetaSpec(need("a"), need("b")), make_nome(need("r"), ctx))
        elif subject == "theta2":
            value = theta2(make_nome(need("r"), ctx))
        elif subject == "theta3":
            value = theta3(make_nome(need("r"), ctx))
        elif subject == "eta-paper":
            mult = args.mult or Fraction(1)
            params["mult"] = str(mult)
            value = eta_paper(mult, make_nome(need("r"), ctx))
        elif subject == "k":
            value = singular_modulus(need("r"), ctx)
        elif subject == "ki":
            value = inverse_singular_modulus(need("x"), ctx)
        elif subject == "K":
            if args.k is not None:
                params["k"] = str(args.k)
                value = ellint_K(mp.mpf(args.k.numerator) / args.k.denominator, ctx)
            else:
                value = ellint_K(singular_modulus(need("r"), ctx), ctx)
        elif subject == "alpha":
            value = elliptic_alpha(need("r"), ctx)
        elif subject == "j":
            params["via"] = args.via
            value = j_invariant(need("r"), ctx, via=args.via)
        elif subject == "rrcf":
            params["method"] = args.method
            value = rrcf(make_nome(need("r"), ctx), method=args.method)
        elif subject == "sextic-theta":
            value = sextic_theta(make_nome(need("r"), ctx))
        elif subject == "multiplier":
            value = multiplier(need("r"), int(need("n")), ctx)
        else:
            raise QalgError(f"unknown subject {subject!r}")

    _emit({"subject": subject, "params": params, "digits": args.digits}, value, args)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    ctx = PrecisionContext(args.digits)
    with open(args.series_file) as fh:
        inp = TaylorInput.from_json(fh.read())
    X = extract_X(inp)
    max_period = args.max_period
    if len(X) < 3 * max_period:
        max_period = len(X) // 3
        if max_period < 1:
            print("input too short to detect any period", file=sys.stderr)
            return EXIT_NOT_PERIODIC
    pc = detect_period(X, max_period)
    payload: dict = {
        "X": [str(v) for v in X[: min(len(X), 24)]],
        "digits": args.digits,
    }
    if pc is None:
        support = [n + 1 for n, v in enumerate(X) if v != 0]
        if support and max(support) <= len(X) // 3:
            # finitely supported exponents: exp(-f) is the plain finite
            # product, no period and no algebraic normalisation claim
            payload.update({
                "degenerate": True, "period": 1, "catoptric": True, "A": "0",
                "product": [[f"(1-q^{n})", str(X[n - 1])] for n in support],
            })
            if args.json:
                print(json.dumps(payload, indent=2))
            else:
                print("degenerate: finitely many nonzero exponents; period 1, A = 0")
                print("product:", " * ".join(f"(1-q^{n})^({X[n-1]})" for n in support))
            return EXIT_OK
        if args.json:
            payload["period"] = None
            print(json.dumps(payload, indent=2))
        else:
            print("not periodic within the scanned range")
        return EXIT_NOT_PERIODIC
    prod = represent_product(pc)
    theta = represent_theta(pc)
    payload.update({
        "period": pc.period,
        "catoptric": pc.catoptric,
        "A": str(pc.A),
        "values": [str(v) for v in pc.values],
        "product": [[f"[{spec.a},{spec.p}]", str(w)] for spec, w in prod],
        "theta": {
            "eta_exponent": str(theta.eta_exponent),
            "factors": [[f"theta({s.a},{s.b})", str(w)] for s, w in theta.factors],
        },
    })
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"period T = {pc.period}, catoptric = {pc.catoptric}, A = {pc.A}")
        print("values:", ", ".join(str(v) for v in pc.values))
        print("product:", " * ".join(f"[{s.a},{s.p}]^({w})" for s, w in prod))
        print(f"theta form: eta({pc.period})^({theta.eta_exponent}) * "
              + " * ".join(f"theta({s.a},{s.b})^({w})" for s, w in theta.factors))
    return EXIT_OK


def _cmd_recognize(args) -> int:
    ctx = PrecisionContext(args.digits)
    if args.expr == "const":
        if args.value is None:
            raise QalgError("const recognition needs --value")
        with ctx.workdps():
            x = mp.mpf(args.value)
        rec = recognize(x, args.degree, args.height_digits, ctx,
                        provenance="const")
    else:
        pipeline = args.expr.replace("-", "_")
        if pipeline not in EXPRESSION_EVALUATORS:
            raise QalgError(
                f"unknown expression {args.expr!r}; choose from "
                + ", ".join(sorted(k.replace('_', '-') for k in EXPRESSION_EVALUATORS))
                + ", const")
        params = {}
        for name in ("a", "p", "r", "x"):
            v = getattr(args, name, None)
            if v is not None:
                params[name] = str(v)
        if args.power != 1:
            params["power"] = str(args.power)
        rec = recognize_expression(pipeline, params, args.degree,
                                   args.height_digits, ctx)
    doc = rec.to_json_dict()
    if args.json:
        text = json.dumps(doc, indent=2)
    else:
        lines = [f"status: {rec.status}"]
        if rec.poly:
            lines.append(f"poly: {rec.poly}")
            lines.append(f"residual: {doc['residual']}")
            lines.append(f"verified_residual: {doc['verified_residual']}")
        lines.append(f"digits: {rec.digits_used}")
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if rec.status == "recognized" else EXIT_VERIFY_FAIL


def _cmd_verify(args) -> int:
    digits = args.digits or harness.DEFAULT_DIGITS.get(args.suite, 120)
    reports = harness.run_suite(args.suite, digits, parallelism=args.parallelism)
    fmt = "json" if args.json else "text"
    text = harness.emit_report(reports, fmt, suite=args.suite, digits=digits)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    failed = harness.summarize(reports)["fail"]
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qalg",
        description="High-precision q-product / theta / elliptic evaluation "
                    "with algebraic-number recognition.")
    default_digits = int(os.environ.get("QALG_DIGITS", "120"))
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--digits", type=int, default=default_digits,
                       help="working precision in decimal digits (env QALG_DIGITS)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="write output to a file")

    p_eval = sub.add_parser("eval", help="evaluate one quantity")
    p_eval.add_argument("subject", choices=[
        "agile", "agile-star", "theta", "theta2", "theta3", "eta-paper",
        "k", "ki", "K", "alpha", "j", "rrcf", "sextic-theta", "multiplier"])
    for name in ("a", "b", "p", "r", "x", "k", "mult"):
        p_eval.add_argument(f"--{name}", type=_rational)
    p_eval.add_argument("--n", type=int, help="multiplier index")
    p_eval.add_argument("--via", choices=["modulus", "eta"], default="modulus")
    p_eval.add_argument("--method", choices=["product", "continued_fraction"],
                        default="product")
    common(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_an = sub.add_parser("analyze", help="Taylor coefficients -> periodic report")
    p_an.add_argument("series_file", help="JSON file {\"coeffs\": [\"1/1\", ...]}")
    p_an.add_argument("--max-period", type=int, default=12)
    common(p_an)
    p_an.set_defaults(func=_cmd_analyze)

    p_rec = sub.add_parser("recognize", help="recognize a value as algebraic")
    p_rec.add_argument("--expr", required=True,
                       help="agile-star | agile-star-ki | rrcf | theta-quotient | "
                            "periodic-normalized | const")
    for name in ("a", "p", "r", "x"):
        p_rec.add_argument(f"--{name}", type=_rational)
    p_rec.add_argument("--power", type=int, default=1)
    p_rec.add_argument("--value", help="decimal string for --expr const")
    p_rec.add_argument("--degree", type=int, default=8)
    p_rec.add_argument("--height-digits", type=int, default=4)
    common(p_rec)
    p_rec.set_defaults(func=_cmd_recognize)

    p_ver = sub.add_parser("verify", help="run an identity suite")
    p_ver.add_argument("--suite", choices=list(harness.SUITES), default="paper-core")
    p_ver.add_argument("--digits", type=int, default=None)
    p_ver.add_argument("--parallelism", type=int,
                       default=max(1, os.cpu_count() or 1))
    p_ver.add_argument("--json", action="store_true")
    p_ver.add_argument("--out", help="write the report to a file")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InsufficientPrecision as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except QalgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
