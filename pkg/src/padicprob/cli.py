"""Command line front end: exact p-adic probability reports.

Every subcommand prints a machine-readable report to stdout (CSV for
plotting, JSON lines for pipelines; rationals always serialize as
num/den, never as floats) and mirrors a one-line verdict summary plus a
reproducible config echo to stderr.

Exit codes (EXIT_CODES): 0 success, 2 argument or parse problem,
3 limit-theorem hypothesis violation, 4 insufficient sequence data,
5 domain/convergence error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import limits
from .cylinder import UniformMeasure, digit_weight_map, integrate_continuous
from .errors import (
    DigitRange,
    HypothesisViolation,
    InsufficientData,
    InvalidLabel,
    InvalidTarget,
    PadicProbError,
    RangeError,
)
from .frequency import Collective, conditional_s_probability, parse_selector, s_probability
from .padic import PadicApprox, Prime, abs_p, as_fraction, to_approx, vp
from .reports import format_exponent, format_rational, json_exponent

EXIT_CODES = {"ok": 0, "parse": 2, "hypothesis": 3, "data": 4, "domain": 5}

#: errors that mean the request itself was malformed
_PARSE_TYPES = (InvalidTarget, InvalidLabel, RangeError, DigitRange, ValueError, ZeroDivisionError)


def _default_digits() -> int:
    return int(os.environ.get("PADICPROB_PRECISION", "12"))


def _emit(lines, path):
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _say(msg):
    print(msg, file=sys.stderr)


def _echo_config(args):
    cfg = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    _say("config " + json.dumps(cfg, sort_keys=True, default=str))


def _value_repr(value):
    if value is None:
        return None
    if isinstance(value, PadicApprox):
        return str(value)
    return format_rational(value)


def _collective_from_args(args, allow_adversarial=False):
    if getattr(args, "input", None):
        return Collective.from_file(args.input, getattr(args, "alphabet", "01"))
    if getattr(args, "periodic", None):
        return Collective.periodic(args.periodic)
    if getattr(args, "random_bits", None) is not None:
        return Collective.random_bits(args.random_bits)
    if allow_adversarial and getattr(args, "adversarial", False):
        p = Prime(args.prime)
        selector = parse_selector(args.scheme, p)
        terms = selector.terms(args.kmax)
        return Collective.checkpoint_forcing(p, args.l, args.r, terms, mode=args.mode)
    raise ValueError("no input source given")


def _add_source_flags(sub, adversarial=False):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="FILE", help="read symbols from FILE (whitespace ignored)")
    group.add_argument("--periodic", metavar="WORD", help="repeat WORD forever")
    group.add_argument("--random-bits", type=int, metavar="SEED", help="seeded fair random bits")
    if adversarial:
        group.add_argument(
            "--adversarial",
            action="store_true",
            help="checkpoint-forcing sequence built for these test parameters",
        )


def _add_common(sub):
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")


# -- subcommand handlers ---------------------------------------------------


def _cmd_valuation(args):
    p = Prime(args.prime)
    x = as_fraction(args.value)
    v = vp(x, p)
    a = abs_p(x, p).as_fraction()
    if args.format == "csv":
        lines = [
            "value,prime,valuation,abs",
            f"{format_rational(x)},{p},{format_exponent(v)},{format_rational(a)}",
        ]
    else:
        lines = [
            json.dumps(
                {
                    "value": format_rational(x),
                    "prime": int(p),
                    "valuation": json_exponent(v),
                    "abs": format_rational(a),
                    "expansion": str(to_approx(x, p, args.digits)),
                },
                sort_keys=True,
            )
        ]
    _emit(lines, args.output)
    _say(f"valuation: v_{p}({format_rational(x)}) = {format_exponent(v)}, abs = {format_rational(a)}")


def _outcome_lines(outcome, fmt):
    lines = list(outcome.trace.csv_lines() if fmt == "csv" else outcome.trace.jsonl_lines())
    if fmt == "json":
        lines.append(
            json.dumps(
                {
                    "verdict": outcome.verdict,
                    "value": _value_repr(outcome.value),
                    "note": outcome.note,
                    "params": outcome.params,
                },
                sort_keys=True,
            )
        )
    return lines


def _cmd_freq(args):
    p = Prime(args.prime)
    collective = _collective_from_args(args)
    selector = parse_selector(args.scheme, p)
    kwargs = dict(window=args.window, cauchy_threshold=args.threshold, topology=args.topology)
    if args.given:
        outcome = conditional_s_probability(
            collective, args.given, args.labels, selector, args.kmax, **kwargs
        )
    else:
        outcome = s_probability(collective, args.labels, selector, args.kmax, **kwargs)
    _emit(_outcome_lines(outcome, args.format), args.output)
    _say(f"freq: {outcome.verdict} value={_value_repr(outcome.value)} ({outcome.note})")


def _trace_lines(traces, fmt):
    lines = []
    for trace in traces:
        lines.extend(trace.csv_lines() if fmt == "csv" else trace.jsonl_lines())
        if fmt == "json":
            lines.append(trace.verdict_json())
    return lines


def _summarize_trace(name, trace):
    _say(f"{name}: {trace.verdict} final_valuation={format_exponent(trace.final_valuation)}")


def _cmd_thm31(args):
    selector = parse_selector(args.scheme, args.prime) if args.scheme else None
    trace = limits.binomial_ball_trace(
        args.prime, args.m, args.r, args.l,
        kmax=args.kmax, t=args.t, selector=selector, threshold=args.threshold,
    )
    _emit(_trace_lines([trace], args.format), args.output)
    _summarize_trace("thm31", trace)


def _cmd_eq5(args):
    divisible, rest = limits.divisibility_balance_traces(
        args.prime, kmax=args.kmax, t=args.t, threshold=args.threshold
    )
    _emit(_trace_lines([divisible, rest], args.format), args.output)
    _summarize_trace("eq5[divisible]", divisible)
    _summarize_trace("eq5[not-divisible]", rest)


def _cmd_thm32(args):
    trace = limits.prime_edge_trace(
        args.prime, args.r, args.l, kmax=args.kmax, t=args.t, threshold=args.threshold
    )
    _emit(_trace_lines([trace], args.format), args.output)
    _summarize_trace("thm32", trace)


def _cmd_lln(args):
    p = Prime(args.prime)
    params = limits.BernoulliParams(p, Fraction(args.q))
    selector = parse_selector(args.scheme, p)
    traces = limits.mahler_lln_traces(
        params, selector, args.mmax, args.kmax, threshold=args.threshold
    )
    ordered = [traces[m] for m in sorted(traces)]
    _emit(_trace_lines(ordered, args.format), args.output)
    for m in sorted(traces):
        _summarize_trace(f"lln[m={m}]", traces[m])


def _cmd_clt(args):
    a = Fraction(args.a)
    prime = args.prime if args.prime is not None else None
    series = limits.clt_series(a, args.order, prime)
    if args.format == "csv":
        lines = ["k,coeff_num,coeff_den"]
        lines += [
            f"{k},{c.numerator},{c.denominator}" for k, c in enumerate(series.coeffs)
        ]
    else:
        lines = [
            json.dumps(
                {
                    "a": format_rational(a),
                    "order": args.order,
                    "coefficients": [format_rational(c) for c in series.coeffs],
                },
                sort_keys=True,
            )
        ]
    _emit(lines, args.output)
    _say(f"clt: a={format_rational(a)} order={args.order} z2={format_rational(series.coefficient(2))}")


def _cmd_mahler(args):
    p = Prime(args.prime)
    if args.clt_check:
        a = Fraction(args.a)
        count = args.count
        if a == 1:
            report = limits.clt_mahler_bound_check(p, count)
            seq = report.seq
        else:
            # exploratory: coefficient valuations only, no verdict
            order = count if count % 2 == 0 else count + 1
            seq = limits.charfun_to_mahler(limits.clt_series(a, order, p), count)
            report = None
        if args.format == "csv":
            lines = ["m,lambda_num,lambda_den,vp"]
            lines += [
                f"{m},{c.numerator},{c.denominator},{format_exponent(vp(c, p))}"
                for m, c in enumerate(seq.coefficients)
            ]
        else:
            payload = {
                "a": format_rational(a),
                "prime": int(p),
                "coefficients": [format_rational(c) for c in seq.coefficients],
                "valuations": [json_exponent(vp(c, p)) for c in seq.coefficients],
            }
            if report is not None:
                payload["bounded"] = report.bounded
                payload["note"] = report.note
            lines = [json.dumps(payload, sort_keys=True)]
        _emit(lines, args.output)
        if report is not None:
            _say(
                f"mahler: bounded={report.bounded} max_abs={report.max_abs.as_fraction()}"
                f" ({report.note})"
            )
        else:
            _say("mahler: exploratory run, coefficient valuations only, no verdict")
        return
    params = limits.BernoulliParams(p, Fraction(args.q))
    a = Fraction(args.a)
    rows = []
    for m in range(args.mmax + 1):
        lam = limits.mahler_lambda(params, a, m)
        row = {"m": m, "lambda": format_rational(lam)}
        if args.n is not None:
            row["empirical"] = format_rational(limits.empirical_mahler(params, args.n, m))
        rows.append(row)
    if args.format == "csv":
        head = "m,lambda_num,lambda_den" + (",empirical_num,empirical_den" if args.n is not None else "")
        lines = [head]
        for r in rows:
            lam = Fraction(r["lambda"])
            line = f"{r['m']},{lam.numerator},{lam.denominator}"
            if args.n is not None:
                emp = Fraction(r["empirical"])
                line += f",{emp.numerator},{emp.denominator}"
            lines.append(line)
    else:
        lines = [json.dumps(r, sort_keys=True) for r in rows]
    _emit(lines, args.output)
    _say(f"mahler: q={format_rational(params.q)} a={format_rational(a)} mmax={args.mmax}")


def _cmd_integrate(args):
    p = Prime(args.prime)
    measure = UniformMeasure(args.q, p)
    result = integrate_continuous(measure, digit_weight_map(args.q, p), args.depth)
    if args.format == "csv":
        s = result.riemann_sum
        lines = [
            "depth,value_num,value_den,error_exponent",
            f"{result.depth},{s.numerator},{s.denominator},{result.error_exponent}",
        ]
    else:
        lines = [result.to_json()]
    _emit(lines, args.output)
    _say(f"integrate: value={result.value!s} error_exponent={result.error_exponent}")


def _cmd_test(args):
    p = Prime(args.prime)
    collective = _collective_from_args(args, allow_adversarial=True)
    selector = parse_selector(args.scheme, p)
    result = limits.sphere_randomness_test(
        collective, p, args.l, args.r, selector, args.eps_exp, args.kmax,
        kmin=args.kmin, mode=args.mode,
    )
    if args.format == "csv":
        lines = ["k,N_k,S,hit,prob_num,prob_den,vp_prob"]
        for row in result.rows:
            lines.append(
                f"{row.k},{row.n},{row.sum_value},{int(row.hit)},"
                f"{row.event_prob.numerator},{row.event_prob.denominator},"
                f"{format_exponent(row.prob_exponent)}"
            )
    else:
        lines = [
            json.dumps(
                {
                    "k": row.k,
                    "N_k": row.n,
                    "S": row.sum_value,
                    "hit": row.hit,
                    "prob": format_rational(row.event_prob),
                    "vp_prob": json_exponent(row.prob_exponent),
                },
                sort_keys=True,
            )
            for row in result.rows
        ]
        lines.append(
            json.dumps(
                {
                    "verdict": result.verdict,
                    "k_eps": result.k_eps,
                    "first_hit_k": result.first_hit_k,
                    "params": result.params,
                },
                sort_keys=True,
            )
        )
    _emit(lines, args.output)
    _say(f"test: {result.verdict} (k_eps={result.k_eps}, first_hit_k={result.first_hit_k})")


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicprob",
        description="Exact p-adic and group-valued probability reports.",
        epilog="PADICPROB_PRECISION sets the default digit count for expansions.",
    )
    subs = parser.add_subparsers(dest="cmd", required=True)

    s = subs.add_parser("valuation", help="p-adic valuation and absolute value of a rational")
    s.add_argument("value", help="rational, e.g. 12 or 5/16")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--digits", type=int, default=_default_digits())
    _add_common(s)
    s.set_defaults(func=_cmd_valuation)

    s = subs.add_parser("freq", help="relative-frequency trace along a selector")
    _add_source_flags(s)
    s.add_argument("--alphabet", default="01")
    s.add_argument("--labels", required=True, help="symbols counted as the event")
    s.add_argument("--given", help="condition on these symbols (Bayes quotient)")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--scheme", required=True, help="selector: 'm+t*p^k' | 't*p^k' | 'trunc(m)' | 'list:...'")
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--threshold", type=int, default=8)
    s.add_argument("--topology", choices=("padic", "real"), default="padic")
    _add_common(s)
    s.set_defaults(func=_cmd_freq)

    s = subs.add_parser("thm31", help="ball-probability limit trace toward C(m,r)/2^m")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--l", type=int, required=True, help="ball depth")
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--threshold", type=int, default=4)
    s.add_argument("--scheme", help="override the default selector m+t*p^k")
    _add_common(s)
    s.set_defaults(func=_cmd_thm31)

    s = subs.add_parser("eq5", help="divisibility of S_n by p balances at 1/2")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--kmax", type=int, default=5)
    s.add_argument("--threshold", type=int, default=4)
    _add_common(s)
    s.set_defaults(func=_cmd_eq5)

    s = subs.add_parser("thm32", help="ball limit at the m = p edge")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--l", type=int, required=True, help="ball depth")
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--threshold", type=int, default=4)
    _add_common(s)
    s.set_defaults(func=_cmd_thm32)

    s = subs.add_parser("lln", help="Mahler-coefficient law of large numbers traces")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--q", default="1/2", help="success parameter as a rational")
    s.add_argument("--scheme", required=True, help="selector carrying the limit target")
    s.add_argument("--mmax", type=int, default=5)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--threshold", type=int, default=4)
    _add_common(s)
    s.set_defaults(func=_cmd_lln)

    s = subs.add_parser("clt", help="normalized-sum characteristic series coefficients")
    s.add_argument("--a", default="1", help="exponent: natural count or p-adic unit rational")
    s.add_argument("--order", type=int, default=8, help="even truncation order")
    s.add_argument("--prime", type=int, help="needed for non-natural exponents")
    _add_common(s)
    s.set_defaults(func=_cmd_clt)

    s = subs.add_parser("mahler", help="Mahler coefficient tables and the boundedness desk check")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--q", default="1/2")
    s.add_argument("--a", default="1")
    s.add_argument("--mmax", type=int, default=8)
    s.add_argument("--n", type=int, help="also tabulate empirical coefficients at this n")
    s.add_argument("--clt-check", action="store_true",
                   help="Mahler coefficients of the normalized-sum series; verdict only at a=1")
    s.add_argument("--count", type=int, default=30, help="coefficients checked by --clt-check")
    _add_common(s)
    s.set_defaults(func=_cmd_mahler)

    s = subs.add_parser("integrate", help="Riemann integral of the digit-weight map")
    s.add_argument("--q", type=int, required=True, help="digit alphabet size")
    s.add_argument("--prime", type=int, required=True, help="value prime (must differ from q)")
    s.add_argument("--depth", type=int, default=8)
    _add_common(s)
    s.set_defaults(func=_cmd_integrate)

    s = subs.add_parser("test", help="sphere-membership randomness test at checkpoints")
    _add_source_flags(s, adversarial=True)
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--l", type=int, required=True, help="sphere radius exponent")
    s.add_argument("--r", type=int, required=True, help="sphere center")
    s.add_argument("--scheme", required=True, help="checkpoint selector, e.g. '1+p^k'")
    s.add_argument("--eps-exp", type=int, required=True, help="significance = p^-E")
    s.add_argument("--kmin", type=int, default=1)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--mode", choices=("sphere", "residue"), default="sphere")
    _add_common(s)
    s.set_defaults(func=_cmd_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _echo_config(args)
    try:
        args.func(args)
    except HypothesisViolation as exc:
        _say(f"error: {exc}")
        return EXIT_CODES["hypothesis"]
    except InsufficientData as exc:
        _say(f"error: {exc}")
        return EXIT_CODES["data"]
    except _PARSE_TYPES as exc:
        _say(f"error: {exc}")
        return EXIT_CODES["parse"]
    except PadicProbError as exc:
        _say(f"error: {exc}")
        return EXIT_CODES["domain"]
    return EXIT_CODES["ok"]


if __name__ == "__main__":
    sys.exit(main())
