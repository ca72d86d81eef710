"""Asymptotic comparison for a product fragment of the logarithmico-exponential class.

Any two such functions are comparable, so a single-variable sum always
collapses to its fastest-growing term. The fragment is
``c * n^p * log(n)^l * b^(n^e)``; differences, nested logarithms and
iterated exponentials are outside it.
"""

from fractions import Fraction
from typing import Iterable

import mpmath

from analysis.errors import ParameterError, TermValueError
from analysis.evaluate import DEFAULT_PRECISION, to_mpf
from analysis.expressions import TokenStream
from analysis.rationals import format_rational
from models.growth import Order, UniTerm
from utils.logger import get_logger

log = get_logger("hardy")

VARIABLE = "n"


def compare(f: UniTerm, g: UniTerm) -> Order:
    """f << g, f ~ g or f >> g; coefficients never matter."""
    kf, kg = f.growth_key, g.growth_key
    if kf < kg:
        return Order.LESS
    if kf > kg:
        return Order.GREATER
    return Order.SAME


def reduce_single(terms: Iterable[UniTerm]) -> UniTerm:
    """The dominant term of a sum, with coefficients of growth-tied terms added."""
    terms = list(terms)
    if not terms:
        raise ParameterError("cannot reduce an empty sum")
    top = max(t.growth_key for t in terms)
    tied = [t for t in terms if t.growth_key == top]
    head = tied[0]
    coeff = sum((t.coeff for t in tied), Fraction(0))
    log.debug("reduced %d term(s) to growth class %s", len(terms), top)
    return head.model_copy(update={"coeff": coeff})


def log_value(term: UniTerm, n: int, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Natural log of ``term`` at ``n`` (n >= 3 so that log log n > 0)."""
    with mpmath.workprec(precision):
        ln = mpmath.log(n)
        value = mpmath.log(to_mpf(term.coeff)) + to_mpf(term.poly_exp) * ln
        value += to_mpf(term.log_exp) * mpmath.log(ln)
        if term.exp_base != 1:
            value += mpmath.power(n, to_mpf(term.exp_arg_exp)) * mpmath.log(to_mpf(term.exp_base))
        return +value


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------
def _exp_argument(stream: TokenStream) -> Fraction | None:
    """After ``base^``: ``n`` or ``(n[^e])`` gives e; anything else is a plain power (None)."""
    tok = stream.current
    if tok.kind == "name" and tok.text == VARIABLE:
        stream.index += 1
        return Fraction(1)
    nxt = stream.tokens[stream.index + 1] if stream.index + 1 < len(stream.tokens) else None
    if tok.kind == "op" and tok.text == "(" and nxt is not None and nxt.kind == "name":
        stream.expect("(")
        _expect_variable(stream)
        arg = stream.exponent() if stream.accept("^") else Fraction(1)
        stream.expect(")")
        if arg <= 0:
            raise TermValueError(f"exponential argument exponent must be positive, got {arg}")
        return arg
    return None


def _expect_variable(stream: TokenStream) -> None:
    tok = stream.current
    if tok.kind != "name":
        raise stream.error(f"expected {VARIABLE!r}")
    if tok.text != VARIABLE:
        raise TermValueError(f"unknown variable {tok.text!r} at position {tok.position} (only n is allowed)")
    stream.index += 1


def _parse_uni_product(stream: TokenStream) -> UniTerm:
    start = stream.current.position
    coeff = Fraction(1)
    poly = Fraction(0)
    logs = Fraction(0)
    exps: dict[Fraction, Fraction] = {}

    while True:
        negative = stream.accept("-") is not None
        tok = stream.current
        if tok.kind == "number":
            stream.index += 1
            value = Fraction(int(tok.text))
            slash = stream.accept("/")
            if slash is not None:
                value = stream.fraction(int(tok.text), slash)
            if stream.accept("^"):
                arg = _exp_argument(stream)
                if arg is None:
                    power = stream.exponent()
                    if power.denominator != 1:
                        raise TermValueError(f"constant {value} raised to non-integer power {power}")
                    value = value ** int(power)
                else:
                    if value < 1:
                        raise TermValueError(
                            f"exponential base {format_rational(value)} below 1 at position {tok.position}"
                        )
                    exps[arg] = exps.get(arg, Fraction(1)) * value
                    value = Fraction(1)
            coeff *= -value if negative else value
        elif tok.kind == "name" and tok.text == "log":
            stream.index += 1
            stream.expect("(")
            _expect_variable(stream)
            stream.expect(")")
            logs += stream.exponent() if stream.accept("^") else Fraction(1)
            coeff *= -1 if negative else 1
        elif tok.kind == "name":
            _expect_variable(stream)
            poly += stream.exponent() if stream.accept("^") else Fraction(1)
            coeff *= -1 if negative else 1
        else:
            raise stream.error("expected a number, n or log(n)")
        if not stream.accept("*"):
            break

    if coeff <= 0:
        raise TermValueError(f"nonpositive coefficient {coeff} in term at position {start}")
    live = {arg: base for arg, base in exps.items() if base != 1}
    if len(live) > 1:
        raise TermValueError(f"term at position {start} mixes exponentials of different growth")
    arg, base = next(iter(live.items()), (Fraction(0), Fraction(1)))
    return UniTerm(coeff=coeff, poly_exp=poly, log_exp=logs, exp_base=base, exp_arg_exp=arg)


def parse_uni_sum(text: str) -> list[UniTerm]:
    """Parse e.g. ``"4*n^3 + log(n)^5 + 2^(n^2)"`` into its terms, in input order."""
    stream = TokenStream(text)
    terms = [_parse_uni_product(stream)]
    while stream.accept("+"):
        terms.append(_parse_uni_product(stream))
    if not stream.at_end():
        raise stream.error("expected '+', '*' or end of input")
    return terms


def _power(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({format_rational(q)})"


def format_uni_term(term: UniTerm) -> str:
    factors = []
    if term.poly_exp != 0:
        factors.append(VARIABLE if term.poly_exp == 1 else f"{VARIABLE}^{_power(term.poly_exp)}")
    if term.log_exp != 0:
        factors.append(f"log({VARIABLE})" if term.log_exp == 1 else f"log({VARIABLE})^{_power(term.log_exp)}")
    if term.exp_base != 1:
        base = format_rational(term.exp_base)
        if term.exp_arg_exp == 1:
            factors.append(f"{base}^{VARIABLE}")
        else:
            factors.append(f"{base}^({VARIABLE}^{_power(term.exp_arg_exp)})")
    if term.coeff != 1 or not factors:
        factors.insert(0, format_rational(term.coeff))
    return "*".join(factors)


def format_uni_sum(terms: Iterable[UniTerm]) -> str:
    return " + ".join(format_uni_term(t) for t in terms)
