import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analysis.errors import ExpressionSyntaxError, ParameterError, TermValueError
from analysis.hardy import compare, format_uni_sum, format_uni_term, log_value, parse_uni_sum, reduce_single
from models.growth import Order, UniTerm
from oracles import random_uniterm


def one(text: str) -> UniTerm:
    terms = parse_uni_sum(text)
    assert len(terms) == 1
    return terms[0]


def test_parse_factors():
    t = one("4*n^3*log(n)^5*2^(n^2)")
    assert (t.coeff, t.poly_exp, t.log_exp, t.exp_base, t.exp_arg_exp) == (4, 3, 5, 2, 2)
    t = one("3^n")
    assert (t.exp_base, t.exp_arg_exp) == (3, 1)
    t = one("n^(1/2)*log(n)^(-1)")
    assert (t.poly_exp, t.log_exp) == (Fraction(1, 2), -1)
    assert one("2^3*n").coeff == 8
    assert one("2^n*3^n").exp_base == 6


def test_constant_exponential_folds_into_coefficient():
    t = UniTerm(coeff=2, exp_base=3, exp_arg_exp=0)
    assert (t.coeff, t.exp_base, t.exp_arg_exp) == (6, 1, 0)
    assert UniTerm(exp_base=1, exp_arg_exp=5).exp_arg_exp == 0


@pytest.mark.parametrize(
    "text, error",
    [
        ("2^n*2^(n^2)", TermValueError),
        ("x^2", TermValueError),
        ("log(log(n))", TermValueError),
        ("-n", TermValueError),
        ("2^(n^(-1))", TermValueError),
        ("2^(1/2)", TermValueError),
        ("n^", ExpressionSyntaxError),
        ("log n", ExpressionSyntaxError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_uni_sum(text)


@pytest.mark.parametrize("text", ["1/2^n", "0^n", "n^2 + 3/4^(n^2)", "2^n*1/3^n"])
def test_base_below_one_rejected(text):
    with pytest.raises(TermValueError, match="below 1 at position"):
        parse_uni_sum(text)


def test_fractional_base_above_one_is_kept():
    t = one("3/2^n*n")
    assert (t.exp_base, t.exp_arg_exp, t.poly_exp) == (Fraction(3, 2), 1, 1)


def test_format():
    assert format_uni_term(one("2^(n^2)")) == "2^(n^2)"
    assert format_uni_term(one("4*n^3")) == "4*n^3"
    assert format_uni_term(one("n*log(n)")) == "n*log(n)"
    assert format_uni_term(one("n^(1/2)*log(n)^(-2)*3^n")) == "n^(1/2)*log(n)^(-2)*3^n"
    assert format_uni_term(UniTerm(coeff=5)) == "5"
    assert format_uni_sum(parse_uni_sum("n + 1")) == "n + 1"


def test_compare_examples():
    assert compare(one("n*log(n)"), one("n^2")) is Order.LESS
    assert compare(one("n"), one("7*n")) is Order.SAME
    assert compare(one("n^100"), one("2^n")) is Order.LESS
    assert compare(one("3^n"), one("2^n*n^50")) is Order.GREATER
    assert compare(one("2^(n^2)"), one("100^n")) is Order.GREATER
    assert compare(one("log(n)^9"), one("n^(1/10)")) is Order.LESS


def test_reduce_single_examples():
    assert format_uni_term(reduce_single(parse_uni_sum("4*n^3 + log(n)^5 + 2^(n^2)"))) == "2^(n^2)"
    assert reduce_single(parse_uni_sum("n^2")) == one("n^2")
    assert format_uni_term(reduce_single(parse_uni_sum("n^2 + 3*n^2"))) == "4*n^2"
    with pytest.raises(ParameterError):
        reduce_single([])


def test_reduce_single_random_sums():
    rng = random.Random(5)
    checked = 0
    while checked < 100:
        terms = [random_uniterm(rng) for _ in range(rng.randint(2, 6))]
        if len({t.growth_key for t in terms}) < 2:
            continue
        top = reduce_single(terms)
        assert all(compare(top, t) is not Order.LESS for t in terms)
        assert sum(1 for t in terms if compare(top, t) is Order.SAME) >= 1
        checked += 1


def test_transitivity():
    rng = random.Random(500)
    for _ in range(500):
        f, g, h = (random_uniterm(rng) for _ in range(3))
        if compare(f, g) is not Order.GREATER and compare(g, h) is not Order.GREATER:
            assert compare(f, h) is not Order.GREATER
        if compare(f, g) is Order.LESS and compare(g, h) is Order.LESS:
            assert compare(f, h) is Order.LESS


uniterms = st.builds(
    UniTerm,
    coeff=st.builds(Fraction, st.integers(1, 20)),
    poly_exp=st.builds(Fraction, st.integers(-5, 10), st.integers(1, 3)),
    log_exp=st.builds(Fraction, st.integers(-5, 10)),
    exp_base=st.builds(Fraction, st.integers(1, 6)),
    exp_arg_exp=st.builds(Fraction, st.integers(0, 3), st.integers(1, 2)),
)


@given(uniterms, uniterms)
@settings(max_examples=300, deadline=None)
def test_compare_is_antisymmetric(f, g):
    assert compare(g, f) is compare(f, g).mirror()
    assert (compare(f, g) is Order.SAME) == (f.growth_key == g.growth_key)


@given(uniterms)
@settings(max_examples=100, deadline=None)
def test_format_then_parse_is_identity(t):
    assert one(format_uni_term(t)) == t


CURATED_PAIRS = [
    ("n*log(n)", "n^2"),
    ("n^100", "2^n"),
    ("log(n)^5", "n"),
    ("n^3", "n^3*log(n)"),
    ("2^n", "3^n"),
    ("5^n*n^40", "2^(n^2)"),
    ("n^(1/2)", "n^(2/3)*log(n)^(-1)"),
]


@pytest.mark.parametrize("small, large", CURATED_PAIRS)
def test_sampled_ratio_increases(small, large):
    f, g = one(small), one(large)
    assert compare(f, g) is Order.LESS
    logs = [log_value(g, n) - log_value(f, n) for n in (2**8, 2**12, 2**16)]
    assert logs[0] < logs[1] < logs[2]


SAMPLE_POINTS = (2**8, 2**12, 2**16)
# Geometric grid over [2^8, 2^16] in steps of 2^(1/16)
SLOPE_GRID = [mpmath.mpf(2) ** (mpmath.mpf(k) / 16) for k in range(128, 257)]


def _log_slope(t: UniTerm, n: mpmath.mpf) -> mpmath.mpf:
    """n * d/dn of ln t(n)."""
    ln = mpmath.log(n)
    slope = mpmath.mpf(t.poly_exp.numerator) / t.poly_exp.denominator
    slope += mpmath.mpf(t.log_exp.numerator) / t.log_exp.denominator / ln
    if t.exp_base != 1:
        e = mpmath.mpf(t.exp_arg_exp.numerator) / t.exp_arg_exp.denominator
        slope += mpmath.log(mpmath.mpf(t.exp_base.numerator) / t.exp_base.denominator) * e * n**e
    return slope


def _settled_by_first_sample(f: UniTerm, g: UniTerm) -> bool:
    with mpmath.workprec(256):
        return all(_log_slope(g, n) - _log_slope(f, n) > mpmath.mpf("0.001") for n in SLOPE_GRID)


def test_sampled_ratio_increases_for_random_pairs():
    rng = random.Random(2024)
    checked = skipped = 0
    for _ in range(600):
        f, g = random_uniterm(rng), random_uniterm(rng)
        order = compare(f, g)
        if order is Order.SAME:
            continue
        if order is Order.GREATER:
            f, g = g, f
        if not _settled_by_first_sample(f, g):
            skipped += 1
            continue
        logs = [log_value(g, n, 256) - log_value(f, n, 256) for n in SAMPLE_POINTS]
        assert logs[0] < logs[1] < logs[2], (format_uni_term(f), format_uni_term(g))
        checked += 1
    assert checked >= 200
    assert skipped < checked
