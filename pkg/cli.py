"""Command-line front end: check, reduce, gen, table, plot-data, fit, cmp."""

import argparse
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import mpmath
from pydantic import ValidationError

from analysis import families, fitter, hardy
from analysis.errors import BigOhError
from analysis.expressions import format_term, parse_sum, print_sum
from analysis.independence import is_irreducible, reduce
from analysis.rationals import format_rational, parse_rational_list, significant, to_rational
from models.families import Family
from models.verdicts import Verdict
from models.terms import TermSum
from utils.logger import get_logger, set_level

log = get_logger("cli")

# Default family: integer exponents, k = 6, alpha = 1/3, beta = 1/2
DEFAULT_FAMILY = dict(k=6, p_alpha=1, q_alpha=3, p_beta=1, q_beta=2)


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _rational_list(text: str) -> list[Fraction]:
    try:
        return parse_rational_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from e
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


# ---------------------------------------------------------------------------
# Verb handlers: each returns the full stdout text
# ---------------------------------------------------------------------------
def _describe_verdict(s: TermSum, v: Verdict) -> str:
    head = f"term {v.term_index + 1} ({format_term(s.terms[v.term_index])})"
    if v.independent:
        z = v.witness.z
        return f"{head}: independent, witness z = {format_rational(z)} (x = y^{significant(z)})"
    d = v.domination
    if d.j == d.l:
        return f"{head}: dependent, dominated by term {d.j + 1}"
    return (
        f"{head}: dependent, dominated by terms {d.l + 1} and {d.j + 1} "
        f"with lambda = {format_rational(d.lam)}"
    )


def cmd_check(args: argparse.Namespace) -> str:
    s = parse_sum(args.expression)
    irreducible, verdicts = is_irreducible(s)
    if args.json:
        return json.dumps(
            {
                "expression": print_sum(s),
                "irreducible": irreducible,
                "terms": [
                    {"text": format_term(s.terms[v.term_index]), **v.to_json()} for v in verdicts
                ],
            },
            indent=2,
        ) + "\n"
    lines = [f"sum: {print_sum(s)}"]
    lines += [_describe_verdict(s, v) for v in verdicts]
    lines.append(f"irreducible: {'yes' if irreducible else 'no'}")
    return "\n".join(lines) + "\n"


def cmd_reduce(args: argparse.Namespace) -> str:
    s = parse_sum(args.expression)
    result = reduce(s)
    if args.json:
        return json.dumps(
            {
                "expression": print_sum(s),
                "reduced": print_sum(result.reduced),
                "constant": format_rational(result.constant),
                "kept": [i + 1 for i in result.kept],
                "removed": [v.to_json() for v in result.removed],
            },
            indent=2,
        ) + "\n"
    lines = [print_sum(result.reduced), f"constant: {format_rational(result.constant)}"]
    lines += [_describe_verdict(s, v) for v in result.removed]
    return "\n".join(lines) + "\n"


def _family_text(family: Family, z: Optional[tuple[Fraction, ...]] = None) -> str:
    spec = family.spec
    header = (
        f"# theorem {family.theorem}, k={family.k}, alpha={format_rational(spec.alpha)}, "
        f"beta={format_rational(spec.beta)}, a1={format_rational(spec.a1)}, b1={format_rational(spec.b1)}"
    )
    lines = [header]
    if spec.valuation_cap is not None:
        bound = families.theorem3_bound(spec.alpha, spec.beta, spec.a1, spec.b1, spec.valuation_cap)
        lines.append(f"# cap={format_rational(spec.valuation_cap)}, k bound={mpmath.nstr(bound, 10)}")
    lines.append("j,a_j,b_j" + (",z_j" if z is not None else ""))
    for j, (a, b) in enumerate(family.exponents):
        row = f"{j + 1},{format_rational(a)},{format_rational(b)}"
        if z is not None:
            row += f",{format_rational(z[j])}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def cmd_gen(args: argparse.Namespace) -> str:
    a1 = args.a1 if args.a1 is not None else Fraction(1)
    b1 = args.b1 if args.b1 is not None else Fraction(1)
    z = None
    if args.theorem == 1:
        family = families.gen_theorem1(args.k, args.alpha, args.beta, a1, b1)
    elif args.theorem == 2:
        family = families.gen_theorem2(
            args.k, args.alpha.numerator, args.alpha.denominator,
            args.beta.numerator, args.beta.denominator,
        )
    else:
        family, plan = families.gen_theorem3(args.k, args.cap, a1, b1, args.alpha, args.beta)
        z = plan.z
    if args.out:
        Path(args.out).write_text(family.model_dump_json(indent=2) + "\n")
        log.info("wrote family to %s", args.out)
    return _family_text(family, z)


def _load_family(source: Optional[str]) -> Family:
    if source is None:
        return families.gen_theorem2(**DEFAULT_FAMILY)
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return Family.model_validate_json(text)


def cmd_table(args: argparse.Namespace) -> str:
    family = _load_family(args.family)
    z = args.z if args.z is not None else families.witness_plan(family).z
    return families.to_csv(families.envelope_frame(family, z))


def cmd_plot_data(args: argparse.Namespace) -> str:
    family = _load_family(args.family)
    plot = families.plot_data(family)
    outputs = {
        Path(f"{args.out}_ratios.csv"): families.to_csv(families.ratio_frame(plot)),
        Path(f"{args.out}_witnesses.csv"): families.to_csv(families.witness_frame(plot)),
    }
    for path, text in outputs.items():
        path.write_text(text)
    return (
        f"wrote {len(plot.ratios)} ratio(s) to {args.out}_ratios.csv\n"
        f"wrote {len(plot.witnesses)} witness(es) to {args.out}_witnesses.csv\n"
    )


def cmd_fit(args: argparse.Namespace) -> str:
    data = fitter.load_measurements(args.data)
    result = fitter.fit(
        data,
        args.max_terms,
        args.max_degree,
        args.lattice,
        robust=args.robust,
        slack_tolerance=args.slack_tolerance,
        workers=args.workers,
    )
    report = fitter.validate_bound(data, result)
    if args.json:
        return json.dumps(report.to_json(), indent=2) + "\n"
    lines = [
        f"bound: {report.bound}",
        f"constant: {report.constant:.6g}",
        f"slack: {report.slack:.6g}",
        f"candidates: {result.candidates_evaluated} ({result.admissible} admissible)",
        f"violations: {len(report.violations)}",
    ]
    return "\n".join(lines) + "\n"


def cmd_cmp(args: argparse.Namespace) -> str:
    f = hardy.reduce_single(hardy.parse_uni_sum(args.f))
    g = hardy.reduce_single(hardy.parse_uni_sum(args.g))
    order = hardy.compare(f, g)
    return f"{hardy.format_uni_term(f)} {order.value} {hardy.format_uni_term(g)}\n"


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bigoh",
        description="Independence, reduction and irreducible families of two-variable big-oh sums",
    )
    p.add_argument("--verbose", "-v", action="store_true", help="Log debug detail to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    check = sub.add_parser("check", help="Decide independence of every term")
    check.add_argument("expression")
    check.add_argument("--json", action="store_true")
    check.set_defaults(handler=cmd_check)

    red = sub.add_parser("reduce", help="Drop dependent terms, report the constant")
    red.add_argument("expression")
    red.add_argument("--json", action="store_true")
    red.set_defaults(handler=cmd_reduce)

    gen = sub.add_parser("gen", help="Generate an irreducible family")
    gen.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--alpha", type=_rational)
    gen.add_argument("--beta", type=_rational)
    gen.add_argument("--a1", type=_rational)
    gen.add_argument("--b1", type=_rational)
    gen.add_argument("--cap", type=_rational)
    gen.add_argument("--out", help="Write the family as JSON to this file")
    gen.set_defaults(handler=cmd_gen)

    table = sub.add_parser("table", help="Envelope table a_j*z_i + b_j as CSV")
    table.add_argument("--family", help="Family JSON written by gen --out, or - for stdin")
    table.add_argument("--z", type=_rational_list, help="Comma-separated witness values")
    table.set_defaults(handler=cmd_table)

    plot = sub.add_parser("plot-data", help="Write ratio and witness CSVs for plotting")
    plot.add_argument("--family", help="Family JSON written by gen --out, or - for stdin")
    plot.add_argument("--out", required=True, metavar="PREFIX")
    plot.set_defaults(handler=cmd_plot_data)

    fit = sub.add_parser("fit", help="Infer an irreducible bound from x,y,t measurements")
    fit.add_argument("data", metavar="DATA.csv")
    fit.add_argument("--max-terms", type=int, required=True)
    fit.add_argument("--max-degree", type=_rational, required=True)
    fit.add_argument("--lattice", type=_int_list, default=[1])
    fit.add_argument("--robust", action="store_true")
    fit.add_argument("--slack-tolerance", type=float, default=fitter.DEFAULT_SLACK_TOLERANCE)
    fit.add_argument("--workers", type=int, default=1)
    fit.add_argument("--json", action="store_true")
    fit.set_defaults(handler=cmd_fit)

    cmp_ = sub.add_parser("cmp", help="Compare the growth of two single-variable sums")
    cmp_.add_argument("f")
    cmp_.add_argument("g")
    cmp_.set_defaults(handler=cmd_cmp)
    return p


def _check_gen_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.verb != "gen":
        return
    if args.theorem in (1, 2) and (args.alpha is None or args.beta is None):
        parser.error(f"gen --theorem {args.theorem} requires --alpha and --beta")
    if args.theorem == 2 and (args.a1 is not None or args.b1 is not None):
        parser.error("gen --theorem 2 derives a1 and b1 from the denominators")
    if args.theorem == 3 and args.cap is None:
        parser.error("gen --theorem 3 requires --cap")
    if args.theorem != 3 and args.cap is not None:
        parser.error("--cap only applies to --theorem 3")


def _error_message(e: Exception) -> str:
    if isinstance(e, ValidationError):
        first = e.errors()[0]
        return str(first.get("msg", e)).removeprefix("Value error, ")
    return str(e).splitlines()[0] if str(e) else type(e).__name__


def main(argv: Optional[list[str]] = None, stdout: Optional[io.TextIOBase] = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_gen_args(parser, args)
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose:
        set_level("DEBUG")
    handler: Callable[[argparse.Namespace], str] = args.handler
    try:
        text = handler(args)
    except (BigOhError, ValidationError, OSError) as e:
        print(f"error: {_error_message(e)}", file=sys.stderr)
        return 1
    out.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
