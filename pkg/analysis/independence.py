"""Per-term independence, irreducibility and reduction of monomial sums.

Along a valuation x = y^z a term x^a y^b grows like y^(a*z + b), so term i
beats term j on that ray exactly when a_i*z + b_i > a_j*z + b_j. Term i is
independent when some z >= 0 (or the x-direction, z -> infinity) makes it
beat every other term; otherwise its exponent pair lies under the
upper-right hull of the others and a two-point domination certificate
exists. Everything here is exact rational arithmetic; coefficients never
enter a decision.
"""

from fractions import Fraction
from typing import Sequence

from analysis.errors import ParameterError
from models.terms import TermSum
from models.verdicts import DominationCert, FeasibleInterval, Reduction, Verdict, Witness
from utils.logger import get_logger

log = get_logger("independence")

Point = tuple[Fraction, Fraction]


def ratio_r(ai: Fraction, bi: Fraction, aj: Fraction, bj: Fraction) -> Fraction:
    """Crossing abscissa r(i, j) = (b_i - b_j) / (a_j - a_i) of two exponent lines."""
    if ai == aj:
        raise ZeroDivisionError(f"r(i, j) is undefined for equal a exponents ({ai})")
    return Fraction(bi - bj) / Fraction(aj - ai)


def _check_index(s: TermSum, i: int) -> None:
    if not 0 <= i < len(s.terms):
        raise ParameterError(f"term index {i} out of range for a sum of {len(s.terms)} term(s)")


def exponent_gap(s: TermSum, i: int, z: Fraction) -> Fraction | None:
    """min over j != i of (a_i*z + b_i) - (a_j*z + b_j); None for a single-term sum."""
    _check_index(s, i)
    ai, bi = s.terms[i].exponents
    gaps = [
        (ai * z + bi) - (aj * z + bj)
        for j, (aj, bj) in enumerate(s.exponents)
        if j != i
    ]
    return min(gaps) if gaps else None


def feasible_interval(s: TermSum, i: int) -> FeasibleInterval:
    """Exact set of strict witness exponents z in [0, inf) for term ``i``.

    Every other term j contributes one half-line: z > r(i, j) when
    a_i > a_j, z < r(i, j) when a_i < a_j, and nothing or everything when
    a_i = a_j depending on whether b_i > b_j. The returned interval also
    reports whether a_i is strictly maximal (the x-direction witness).
    """
    _check_index(s, i)
    ai, bi = s.terms[i].exponents
    lower, lower_strict = Fraction(0), False
    upper: Fraction | None = None
    x_direction = True

    for j, (aj, bj) in enumerate(s.exponents):
        if j == i:
            continue
        if aj >= ai:
            x_direction = False
        if aj == ai:
            if bj >= bi:
                return FeasibleInterval(
                    lower=Fraction(0), lower_strict=True, upper=Fraction(0), upper_strict=True
                )
            continue
        r = ratio_r(ai, bi, aj, bj)
        if ai > aj:
            if r > lower or (r == lower and not lower_strict):
                lower, lower_strict = r, True
        elif upper is None or r < upper:
            upper = r

    return FeasibleInterval(
        lower=lower,
        lower_strict=lower_strict,
        upper=upper,
        upper_strict=True,
        x_direction=x_direction,
    )


def choose_witness(interval: FeasibleInterval) -> Fraction:
    """Midpoint of a bounded interval, lower + 1 otherwise (z = 1 for all of [0, inf))."""
    if interval.is_empty:
        raise ParameterError("cannot choose a witness from an empty interval")
    if interval.upper is not None:
        return (interval.lower + interval.upper) / 2
    return interval.lower + 1


def _cross(o: Point, p: Point, q: Point) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def upper_right_chain(points: Sequence[Point], indices: Sequence[int] | None = None) -> list[int]:
    """Indices of the strict vertices of the upper-right hull, ordered by a ascending.

    A point survives when no other point weakly dominates it and it is not
    on or below a segment joining two surviving neighbours. Points must be
    pairwise distinct.
    """
    if indices is None:
        indices = range(len(points))
    ordered = sorted(indices, key=lambda k: (points[k][0], points[k][1]), reverse=True)

    frontier: list[int] = []
    best_b: Fraction | None = None
    for k in ordered:
        if best_b is None or points[k][1] > best_b:
            frontier.append(k)
            best_b = points[k][1]
    frontier.reverse()

    hull: list[int] = []
    for k in frontier:
        while len(hull) >= 2 and _cross(points[hull[-2]], points[hull[-1]], points[k]) >= 0:
            hull.pop()
        hull.append(k)
    return hull


def domination_cert(points: Sequence[Point], i: int, candidates: Sequence[int]) -> DominationCert | None:
    """Certificate that point ``i`` lies under the upper-right hull of ``candidates``.

    Prefers a single dominating point (j = l, lambda = 1); otherwise uses the
    hull edge spanning a_i, with j the right endpoint and l the left one.
    Returns None when ``i`` is strictly outside the hull.
    """
    ai, bi = points[i]
    others = [k for k in candidates if k != i]
    for k in others:
        if points[k][0] >= ai and points[k][1] >= bi:
            return DominationCert(j=k, l=k, lam=Fraction(1))

    chain = upper_right_chain(points, others)
    for left, right in zip(chain, chain[1:]):
        (al, bl), (aj, bj) = points[left], points[right]
        if al < ai < aj:
            lam = (ai - al) / (aj - al)
            if lam * bj + (1 - lam) * bl >= bi:
                return DominationCert(j=right, l=left, lam=lam)
            return None
    return None


def check_term(s: TermSum, i: int) -> Verdict:
    """Decide whether term ``i`` is independent in ``s`` and certify the answer."""
    _check_index(s, i)
    interval = feasible_interval(s, i)
    if not interval.is_empty:
        z = choose_witness(interval)
        log.debug("term %d independent, witness z=%s", i, z)
        return Verdict(term_index=i, independent=True, witness=Witness(kind="finite-z", z=z))

    points = s.exponents
    cert = domination_cert(points, i, range(len(points)))
    if cert is None:
        raise RuntimeError(f"term {i} has an empty witness interval but no domination certificate")
    log.debug("term %d dependent, dominated by (%d, %d) lambda=%s", i, cert.j, cert.l, cert.lam)
    return Verdict(term_index=i, independent=False, domination=cert)


def is_irreducible(s: TermSum) -> tuple[bool, list[Verdict]]:
    """True when every term is independent, with the per-term verdicts."""
    verdicts = [check_term(s, i) for i in range(len(s.terms))]
    return all(v.independent for v in verdicts), verdicts


def verify_verdict(s: TermSum, verdict: Verdict) -> bool:
    """Re-check a certificate from scratch with exact arithmetic."""
    i = verdict.term_index
    if not 0 <= i < len(s.terms):
        return False
    points = s.exponents
    ai, bi = points[i]

    if verdict.independent:
        w = verdict.witness
        if w.kind == "x-direction":
            return all(aj < ai for j, (aj, _) in enumerate(points) if j != i)
        gap = exponent_gap(s, i, w.z)
        return gap is None or gap > 0

    d = verdict.domination
    if not (0 <= d.j < len(points) and 0 <= d.l < len(points)) or i in (d.j, d.l):
        return False
    (aj, bj), (al, bl) = points[d.j], points[d.l]
    return ai <= d.lam * aj + (1 - d.lam) * al and bi <= d.lam * bj + (1 - d.lam) * bl


def _removal_weight(s: TermSum, i: int, cert: DominationCert) -> Fraction:
    """Multiple of the reduced sum that bounds term i pointwise on x, y >= 1."""
    ci = s.terms[i].coeff
    cj, cl = s.terms[cert.j].coeff, s.terms[cert.l].coeff
    if cert.j == cert.l:
        return ci / cj
    return ci * max(cert.lam / cj, (1 - cert.lam) / cl)


def reduce(s: TermSum) -> Reduction:
    """Keep the strict hull vertices; return them with a Theta-equivalence constant.

    reduced <= s <= constant * reduced holds pointwise on x, y >= 1.
    """
    points = s.exponents
    kept = sorted(upper_right_chain(points))
    removed: list[Verdict] = []
    constant = Fraction(1)
    for i in range(len(points)):
        if i in kept:
            continue
        cert = domination_cert(points, i, kept)
        if cert is None:
            raise RuntimeError(f"term {i} is off the hull but not dominated by it")
        removed.append(Verdict(term_index=i, independent=False, domination=cert))
        constant += _removal_weight(s, i, cert)

    log.debug("reduced %d term(s) to %d, constant %s", len(points), len(kept), constant)
    return Reduction(
        reduced=s.subsum(kept),
        constant=constant,
        kept=tuple(kept),
        removed=tuple(removed),
    )
