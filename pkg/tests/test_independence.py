import math
import random
from fractions import Fraction

import pytest

from analysis.errors import ParameterError
from analysis.expressions import parse_sum, print_sum
from analysis.independence import (
    check_term,
    choose_witness,
    exponent_gap,
    feasible_interval,
    is_irreducible,
    ratio_r,
    reduce,
    upper_right_chain,
    verify_verdict,
)
from models.terms import TermSum
from models.verdicts import DominationCert, FeasibleInterval, Verdict, Witness
from oracles import oracle_independent, random_sum

SIX_TERM = TermSum.from_exponents([(243, 32), (405, 16), (459, 8), (477, 4), (483, 2), (485, 1)])


def test_ratio_r():
    assert ratio_r(243, 32, 405, 16) == Fraction(8, 81)
    assert ratio_r(483, 2, 485, 1) == Fraction(1, 2)
    assert ratio_r(405, 16, 243, 32) == ratio_r(243, 32, 405, 16)
    with pytest.raises(ZeroDivisionError):
        ratio_r(1, 2, 1, 3)


def test_feasible_interval_six_term_ends():
    first = feasible_interval(SIX_TERM, 0)
    assert (first.lower, first.lower_strict, first.upper) == (0, False, Fraction(8, 81))
    assert first.contains(Fraction(1, 20))
    last = feasible_interval(SIX_TERM, 5)
    assert last.lower == Fraction(1, 2) and last.lower_strict and last.upper is None
    assert last.x_direction
    assert last.contains(Fraction(7, 10))
    assert not last.contains(Fraction(1, 2))


def test_single_term_interval_is_everything():
    interval = feasible_interval(parse_sum("x^3"), 0)
    assert interval == FeasibleInterval(lower=0, lower_strict=False, upper=None, x_direction=True)
    assert choose_witness(interval) == 1


def test_equal_a_is_empty():
    s = parse_sum("x*y + x*y^2")
    assert feasible_interval(s, 0).is_empty
    assert not feasible_interval(s, 1).is_empty


def test_textbook_square():
    s = parse_sum("x^2 + 2*x*y + y^2")
    irreducible, verdicts = is_irreducible(s)
    assert not irreducible
    assert [v.independent for v in verdicts] == [True, False, True]
    cert = verdicts[1].domination
    assert (cert.j, cert.l, cert.lam) == (2, 0, Fraction(1, 2))
    assert verdicts[1].to_json() == {
        "term": 2,
        "independent": False,
        "domination": {"j": 3, "l": 1, "lambda": "1/2"},
    }


def test_textbook_square_reduces():
    result = reduce(parse_sum("x^2 + 2*x*y + y^2"))
    assert print_sum(result.reduced) == "x^2 + y^2"
    assert result.constant == 2
    assert result.kept == (0, 2)
    assert [v.term_index for v in result.removed] == [1]


def test_three_term_family():
    s = parse_sum("x^2 + y^2 + x^(3/2)*y^(3/2)")
    irreducible, _ = is_irreducible(s)
    assert irreducible
    middle = next(i for i, t in enumerate(s.terms) if t.exp_a == Fraction(3, 2))
    assert feasible_interval(s, middle).contains(Fraction(1))


def test_four_term_family_with_known_witnesses():
    s = parse_sum("x^485*y + x^477*y^4 + x^459*y^8 + x^243*y^32")
    irreducible, _ = is_irreducible(s)
    assert irreducible
    known = {485: "0.7", 477: "0.31", 459: "0.21", 243: "0.05"}
    for i, term in enumerate(s.terms):
        z = Fraction(known[int(term.exp_a)])
        assert feasible_interval(s, i).contains(z)
        assert verify_verdict(s, Verdict(term_index=i, independent=True, witness=Witness(kind="finite-z", z=z)))


def test_irreducible_examples():
    assert is_irreducible(parse_sum("x^2 + y^2"))[0]
    assert is_irreducible(parse_sum("5*x^7*y^(1/3)"))[0]


def test_componentwise_domination():
    s = parse_sum("x^2*y + x*y")
    verdict = check_term(s, 0)
    assert not verdict.independent
    assert (verdict.domination.j, verdict.domination.l, verdict.domination.lam) == (1, 1, 1)
    assert print_sum(reduce(s).reduced) == "x^2*y"
    assert reduce(s).constant == 2


def test_identity_reduction():
    result = reduce(parse_sum("x^3"))
    assert print_sum(result.reduced) == "x^3" and result.constant == 1 and result.removed == ()


def test_index_out_of_range():
    with pytest.raises(ParameterError):
        check_term(parse_sum("x"), 1)
    with pytest.raises(ParameterError):
        feasible_interval(parse_sum("x"), -1)


def test_upper_right_chain_drops_collinear_points():
    points = [(Fraction(0), Fraction(2)), (Fraction(1), Fraction(1)), (Fraction(2), Fraction(0)), (Fraction(1), Fraction(0))]
    assert upper_right_chain(points) == [0, 2]


def test_verify_verdict_rejects_bad_certificates():
    s = parse_sum("x^2 + 2*x*y + y^2")
    assert not verify_verdict(s, Verdict(term_index=1, independent=True, witness=Witness(kind="finite-z", z=1)))
    assert not verify_verdict(s, Verdict(term_index=1, independent=False, domination=DominationCert(j=2, l=0, lam=Fraction(1, 3))))
    assert not verify_verdict(s, Verdict(term_index=1, independent=False, domination=DominationCert(j=1, l=0, lam=Fraction(1, 2))))
    assert verify_verdict(s, Verdict(term_index=2, independent=True, witness=Witness(kind="x-direction")))
    assert not verify_verdict(s, Verdict(term_index=0, independent=True, witness=Witness(kind="x-direction")))


def test_verdict_requires_matching_certificate():
    with pytest.raises(ValueError):
        Verdict(term_index=0, independent=True)
    with pytest.raises(ValueError):
        Verdict(term_index=0, independent=False, witness=Witness(kind="finite-z", z=1))
    with pytest.raises(ValueError):
        Witness(kind="x-direction", z=1)
    with pytest.raises(ValueError):
        DominationCert(j=0, l=1, lam=2)


def _log_term(t, log_x, log_y):
    return math.log(t.coeff) + float(t.exp_a) * log_x + float(t.exp_b) * log_y


def _check_certificate(s: TermSum, verdict: Verdict, rng: random.Random) -> None:
    assert verify_verdict(s, verdict)
    i = verdict.term_index
    if verdict.independent:
        z = verdict.witness.z
        assert exponent_gap(s, i, z) is None or exponent_gap(s, i, z) > 0
        return
    d = verdict.domination
    ti, tj, tl = s.terms[i], s.terms[d.j], s.terms[d.l]
    for _ in range(100):
        log_x, log_y = math.log(rng.uniform(1, 1e6)), math.log(rng.uniform(1, 1e6))
        lhs = _log_term(ti, log_x, log_y) - math.log(ti.coeff)
        rhs = math.log(
            math.exp(_log_term(tj, log_x, log_y) - math.log(tj.coeff) - lhs)
            + math.exp(_log_term(tl, log_x, log_y) - math.log(tl.coeff) - lhs)
        )
        assert rhs >= -1e-9


def test_checker_agrees_with_breakpoint_oracle():
    rng = random.Random(20240611)
    for _ in range(200):
        s = random_sum(rng)
        irreducible, verdicts = is_irreducible(s)
        for v in verdicts:
            assert v.independent == oracle_independent(s, v.term_index)
            _check_certificate(s, v, rng)
        assert irreducible == all(oracle_independent(s, i) for i in range(len(s.terms)))


def test_witness_ratio_grows_along_the_ray():
    s = parse_sum("x^2 + y^2 + x^(3/2)*y^(3/2)")
    middle = next(i for i, t in enumerate(s.terms) if t.exp_a == Fraction(3, 2))
    z = check_term(s, middle).witness.z
    ratios = []
    for e in (2, 3, 4):
        log_y = e * math.log(10)
        log_x = float(z) * log_y
        mine = _log_term(s.terms[middle], log_x, log_y)
        rest = [_log_term(t, log_x, log_y) for k, t in enumerate(s.terms) if k != middle]
        ratios.append(-math.log(sum(math.exp(r - mine) for r in rest)))
    assert ratios[0] < ratios[1] < ratios[2]


def test_reduce_properties():
    rng = random.Random(99)
    for _ in range(200):
        s = random_sum(rng)
        result = reduce(s)
        again = reduce(result.reduced)
        assert again.reduced == result.reduced and again.constant == 1
        assert is_irreducible(result.reduced)[0]
        independent = {i for i in range(len(s.terms)) if check_term(s, i).independent}
        assert independent == set(result.kept)
        for verdict in result.removed:
            assert verify_verdict(s, verdict)
            assert {verdict.domination.j, verdict.domination.l} <= set(result.kept)


def test_reduce_sandwich_holds_pointwise():
    rng = random.Random(3)
    for _ in range(50):
        s = random_sum(rng)
        result = reduce(s)
        for _ in range(20):
            log_x, log_y = math.log(rng.uniform(1, 1e4)), math.log(rng.uniform(1, 1e4))
            logs = [_log_term(t, log_x, log_y) for t in s.terms]
            kept = [logs[i] for i in result.kept]
            top = max(logs)
            total = sum(math.exp(v - top) for v in logs)
            core = sum(math.exp(v - top) for v in kept)
            assert core <= total * (1 + 1e-12)
            assert total <= float(result.constant) * core * (1 + 1e-9)
