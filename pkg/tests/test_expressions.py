from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analysis.errors import ExpressionSyntaxError, TermValueError
from analysis.expressions import parse_sum, print_sum, tokenize
from analysis.rationals import format_rational, parse_rational_list, round_half_up, significant, to_rational
from models.terms import Term, TermSum


def triples(s: TermSum):
    return [(t.coeff, t.exp_a, t.exp_b) for t in s.terms]


def test_parse_canonical_order():
    s = parse_sum("x^2 + 2*x*y + y^2")
    assert triples(s) == [(1, 0, 2), (2, 1, 1), (1, 2, 0)]


def test_parse_rational_exponents():
    s = parse_sum("x^(3/2)*y^(3/2)")
    assert triples(s) == [(1, Fraction(3, 2), Fraction(3, 2))]


def test_duplicates_merge():
    assert triples(parse_sum("x*y + x*y")) == [(2, 1, 1)]


def test_products_fold_repeated_factors():
    s = parse_sum("3/2 * x * x^2 * y * 2")
    assert triples(s) == [(3, 3, 1)]


def test_print_sum():
    assert print_sum(TermSum.from_exponents([(2, 0), (0, 2)])) == "x^2 + y^2"
    assert print_sum(TermSum()) == "0"
    assert print_sum(TermSum.of([Term(coeff=2, exp_a=1, exp_b=1)])) == "2*x*y"
    assert print_sum(parse_sum("x^(3/2)*y^(3/2) + 7")) == "x^(3/2)*y^(3/2) + 7"


def test_zero_is_the_empty_sum():
    assert parse_sum("0") == TermSum()
    with pytest.raises(TermValueError):
        parse_sum("0 + x")


@pytest.mark.parametrize(
    "text, position",
    [
        ("x^", 2),
        ("x + + y", 4),
        ("x $ y", 2),
        ("x^(1/0)", 4),
        ("(x)", 0),
        ("x y", 2),
    ],
)
def test_syntax_errors_report_position(text, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_sum(text)
    assert info.value.position == position
    assert f"at position {position}" in str(info.value)


@pytest.mark.parametrize("text", ["-3*x", "0*x", "x^(-1/2)", "x^-2", "z^2", "x*log"])
def test_value_errors(text):
    with pytest.raises(TermValueError):
        parse_sum(text)


def test_tokenize_ends_with_end_token():
    tokens = tokenize("  x^2 ")
    assert [t.kind for t in tokens] == ["name", "op", "number", "end"]
    assert tokens[-1].position == 6


def test_model_rejects_invalid_terms():
    with pytest.raises(ValueError):
        Term(coeff=0)
    with pytest.raises(ValueError):
        Term(exp_a=Fraction(-1))
    with pytest.raises(ValueError):
        Term(coeff=0.5)


def test_rational_helpers():
    assert to_rational("0.05") == Fraction(1, 20)
    assert to_rational(" 3/2 ") == Fraction(3, 2)
    assert format_rational(Fraction(8, 81)) == "8/81"
    assert format_rational(Fraction(4)) == "4"
    assert parse_rational_list("0.05, 7/10") == [Fraction(1, 20), Fraction(7, 10)]
    with pytest.raises(TermValueError):
        to_rational(True)
    with pytest.raises(TermValueError):
        to_rational("abc")
    with pytest.raises(TermValueError):
        to_rational(0.5)
    with pytest.raises(TermValueError):
        parse_rational_list(" , ")


def test_round_half_up_and_significant():
    assert round_half_up(Fraction(4415, 100)) == "44.15"
    assert round_half_up(Fraction(1, 8)) == "0.13"
    assert round_half_up(Fraction(-1, 8)) == "-0.13"
    assert round_half_up(Fraction(7, 10)) == "0.70"
    assert significant(Fraction(8, 81)) == "0.0987654"
    assert significant(Fraction(1, 2)) == "0.5"
    assert significant(Fraction(12345675, 10)) == "1234570"


exponents = st.builds(Fraction, st.integers(0, 40), st.integers(1, 4))
terms = st.builds(
    lambda c, a, b: Term(coeff=c, exp_a=a, exp_b=b),
    st.builds(Fraction, st.integers(1, 50), st.integers(1, 5)),
    exponents,
    exponents,
)


@given(st.lists(terms, max_size=8))
@settings(max_examples=200, deadline=None)
def test_print_then_parse_is_identity(ts):
    s = TermSum.of(ts)
    assert parse_sum(print_sum(s)) == s


@given(st.lists(terms, min_size=1, max_size=6), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_term_order_does_not_matter(ts, rng):
    shuffled = list(ts)
    rng.shuffle(shuffled)
    assert TermSum.of(ts) == TermSum.of(shuffled)
    assert parse_sum(" + ".join(print_sum(TermSum.of([t])) for t in shuffled)) == TermSum.of(ts)
