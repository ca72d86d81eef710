"""Parsing and printing of two-variable sum-of-terms expressions.

Grammar (ASCII, whitespace insignificant)::

    sum      := product ('+' product)*
    product  := factor ('*' factor)*
    factor   := rational | var | var '^' exponent
    var      := 'x' | 'y'
    exponent := integer | '(' integer '/' integer ')'
    rational := integer | integer '/' integer

A leading ``-`` is tokenized so that negative values are reported as
coefficient/exponent errors instead of bare syntax errors.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from analysis.errors import ExpressionSyntaxError, TermValueError
from analysis.rationals import format_rational
from models.terms import Term, TermSum
from utils.logger import get_logger

log = get_logger("expressions")

_TOKEN_RE = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")

VARIABLES = ("x", "y")


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "name" | "op" | "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, ending with an ``end`` token."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            pos = len(text)
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append(Token(kind=kind, text=m.group(kind), position=m.start(kind)))
        pos = m.end()
    tokens.append(Token(kind="end", text="", position=len(text)))
    return tokens


class TokenStream:
    """Cursor over a token list with the small helpers a recursive-descent parser needs."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def accept(self, op: str) -> Token | None:
        tok = self.current
        if tok.kind == "op" and tok.text == op:
            self.index += 1
            return tok
        return None

    def expect(self, op: str) -> Token:
        tok = self.accept(op)
        if tok is None:
            raise self.error(f"expected {op!r}")
        return tok

    def expect_integer(self) -> int:
        tok = self.current
        if tok.kind != "number":
            raise self.error("expected an integer")
        self.index += 1
        return int(tok.text)

    def signed_integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        return sign * self.expect_integer()

    def fraction(self, numerator: int, at: Token) -> Fraction:
        denominator = self.expect_integer()
        if denominator == 0:
            raise ExpressionSyntaxError("zero denominator", at.position)
        return Fraction(numerator, denominator)

    def exponent(self) -> Fraction:
        """``integer`` or ``'(' integer ['/' integer] ')'``; signs are allowed and checked by callers."""
        if self.accept("("):
            numerator = self.signed_integer()
            value = Fraction(numerator)
            slash = self.accept("/")
            if slash is not None:
                value = self.fraction(numerator, slash)
            self.expect(")")
            return value
        return Fraction(self.signed_integer())

    def at_end(self) -> bool:
        return self.current.kind == "end"

    def error(self, message: str) -> ExpressionSyntaxError:
        tok = self.current
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ExpressionSyntaxError(f"{message}, found {found}", tok.position)


def _parse_factor(stream: TokenStream, exps: dict[str, Fraction]) -> Fraction:
    """Parse one factor, folding exponents into ``exps``; returns the coefficient factor."""
    negative = stream.accept("-") is not None
    tok = stream.current
    if tok.kind == "number":
        stream.index += 1
        value = Fraction(int(tok.text))
        slash = stream.accept("/")
        if slash is not None:
            value = stream.fraction(int(tok.text), slash)
        return -value if negative else value
    if tok.kind == "name":
        if tok.text not in VARIABLES:
            raise TermValueError(
                f"unknown variable {tok.text!r} at position {tok.position} (only x and y are allowed)"
            )
        stream.index += 1
        power = Fraction(1)
        if stream.accept("^"):
            at = stream.current
            power = stream.exponent()
            if power < 0:
                raise TermValueError(f"negative exponent {power} at position {at.position}")
        exps[tok.text] += power
        return Fraction(-1) if negative else Fraction(1)
    raise stream.error("expected a number or a variable")


def _parse_product(stream: TokenStream) -> tuple[Term | None, int]:
    start = stream.current.position
    exps = {v: Fraction(0) for v in VARIABLES}
    coeff = _parse_factor(stream, exps)
    while stream.accept("*"):
        coeff *= _parse_factor(stream, exps)
    if coeff <= 0:
        if coeff == 0 and exps["x"] == 0 and exps["y"] == 0:
            return None, start
        raise TermValueError(f"nonpositive coefficient {coeff} in term at position {start}")
    return Term(coeff=coeff, exp_a=exps["x"], exp_b=exps["y"]), start


def parse_sum(text: str) -> TermSum:
    """Parse an expression into its canonical TermSum.

    The literal ``"0"`` denotes the empty sum (so that ``print_sum`` output
    always parses back); any other zero coefficient is an error.
    """
    stream = TokenStream(text)
    products = [_parse_product(stream)]
    while stream.accept("+"):
        products.append(_parse_product(stream))
    if not stream.at_end():
        raise stream.error("expected '+', '*' or end of input")

    zeros = [start for term, start in products if term is None]
    if zeros and len(products) > 1:
        raise TermValueError(f"nonpositive coefficient 0 in term at position {zeros[0]}")
    result = TermSum.of(term for term, _ in products if term is not None)
    log.debug("parsed %r into %d term(s)", text, len(result.terms))
    return result


def format_power(var: str, power: Fraction) -> str | None:
    if power == 0:
        return None
    if power == 1:
        return var
    if power.denominator == 1:
        return f"{var}^{power.numerator}"
    return f"{var}^({power.numerator}/{power.denominator})"


def format_term(term: Term) -> str:
    factors = [f for f in (format_power("x", term.exp_a), format_power("y", term.exp_b)) if f]
    if term.coeff != 1 or not factors:
        factors.insert(0, format_rational(term.coeff))
    return "*".join(factors)


def print_sum(s: TermSum) -> str:
    """Render ``s`` highest x-degree first, e.g. ``"x^2 + 2*x*y + y^2"``."""
    if not s.terms:
        return "0"
    return " + ".join(format_term(t) for t in reversed(s.terms))
