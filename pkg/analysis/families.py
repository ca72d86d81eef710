"""Constructions of arbitrarily large irreducible two-variable families.

A family has a_i = a1 * (2 - alpha^(i-1)) and b_i = b1 * beta^(i-1) with
0 < alpha < beta < 1 - alpha < 1. Under that chain the crossing ratios
satisfy r(i, j) < r(i, j+1) and r(i-1, k) < r(i, i+1), which leaves a
non-empty witness window for every term.
"""

from fractions import Fraction

import mpmath
import pandas as pd

from analysis.errors import ParameterError
from analysis.evaluate import DEFAULT_PRECISION, to_mpf
from analysis.independence import feasible_interval, ratio_r
from analysis.rationals import format_rational, round_half_up, significant, to_rational
from models.families import (
    Family,
    FamilySpec,
    PlotData,
    RatioRecord,
    WitnessPlan,
    WitnessRecord,
    constraint_violation,
)
from utils.logger import get_logger

log = get_logger("families")

ALPHA_GRID = tuple(Fraction(1, 4) + Fraction(m, 100) for m in range(25))
INITIAL_EPSILON = Fraction(1, 4)
MAX_HALVINGS = 64


def _spec(k: int, alpha, beta, a1, b1, cap=None) -> FamilySpec:
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    alpha, beta = to_rational(alpha), to_rational(beta)
    a1, b1 = to_rational(a1), to_rational(b1)
    problem = constraint_violation(alpha, beta)
    if problem:
        raise ParameterError(problem)
    if a1 <= 0 or b1 <= 0:
        raise ParameterError(f"a1 and b1 must be positive (a1 = {a1}, b1 = {b1})")
    if cap is not None:
        cap = to_rational(cap)
        if cap <= 0:
            raise ParameterError(f"cap must be positive, got {cap}")
        if not b1 < cap * a1:
            raise ParameterError(f"b1 < cap * a1 fails (b1 = {b1}, cap * a1 = {cap * a1})")
    return FamilySpec(k=k, alpha=alpha, beta=beta, a1=a1, b1=b1, valuation_cap=cap)


def _exponents(spec: FamilySpec) -> tuple[tuple[Fraction, Fraction], ...]:
    return tuple(
        (spec.a1 * (2 - spec.alpha**n), spec.b1 * spec.beta**n)
        for n in range(spec.k)
    )


def gen_theorem1(k: int, alpha, beta, a1, b1) -> Family:
    """Family with free positive a1, b1."""
    spec = _spec(k, alpha, beta, a1, b1)
    family = Family(theorem=1, spec=spec, exponents=_exponents(spec))
    log.debug("theorem 1 family, k=%d alpha=%s beta=%s", k, spec.alpha, spec.beta)
    return family


def gen_theorem2(k: int, p_alpha: int, q_alpha: int, p_beta: int, q_beta: int) -> Family:
    """Integer-exponent family: a1 = q_alpha^(k-1), b1 = q_beta^(k-1)."""
    if q_alpha <= 0 or q_beta <= 0:
        raise ParameterError("denominators q_alpha and q_beta must be positive")
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    alpha, beta = Fraction(p_alpha, q_alpha), Fraction(p_beta, q_beta)
    spec = _spec(k, alpha, beta, Fraction(q_alpha) ** (k - 1), Fraction(q_beta) ** (k - 1))
    exponents = _exponents(spec)
    if any(a.denominator != 1 or b.denominator != 1 for a, b in exponents):
        raise RuntimeError("integer family produced a non-integer exponent")
    return Family(theorem=2, spec=spec, exponents=exponents)


def last_ratio(spec: FamilySpec) -> Fraction | None:
    """r(k-1, k) in closed form, None when k < 2."""
    if spec.k < 2:
        return None
    n = spec.k - 2
    rise = spec.b1 * spec.beta**n * (1 - spec.beta)
    run = spec.a1 * spec.alpha**n * (1 - spec.alpha)
    return rise / run


def theorem3_bound(alpha, beta, a1, b1, cap, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Largest admissible k is below 2 + log_{beta/alpha}((a1/b1) * ((1-alpha)/(1-beta)) * cap)."""
    alpha, beta = to_rational(alpha), to_rational(beta)
    a1, b1, cap = to_rational(a1), to_rational(b1), to_rational(cap)
    with mpmath.workprec(precision):
        arg = to_mpf((a1 / b1) * ((1 - alpha) / (1 - beta)) * cap)
        return 2 + mpmath.log(arg) / mpmath.log(to_mpf(beta / alpha))


def _search_theorem3(k: int, cap: Fraction, a1: Fraction, b1: Fraction) -> FamilySpec:
    """Smallest-alpha, largest-epsilon pair with beta = alpha*(1+epsilon) and r(k-1, k) < cap."""
    epsilon = INITIAL_EPSILON
    for halving in range(MAX_HALVINGS + 1):
        for alpha in ALPHA_GRID:
            beta = alpha * (1 + epsilon)
            if constraint_violation(alpha, beta):
                continue
            spec = FamilySpec(k=k, alpha=alpha, beta=beta, a1=a1, b1=b1, valuation_cap=cap)
            r = last_ratio(spec)
            if r is None or r < cap:
                log.info(
                    "theorem 3 search: k=%d cap=%s -> alpha=%s epsilon=%s after %d halving(s)",
                    k, cap, alpha, epsilon, halving,
                )
                return spec
        epsilon /= 2
    raise ParameterError(
        f"no alpha, beta found for k={k}, cap={cap} within {MAX_HALVINGS} halvings"
    )


def gen_theorem3(k: int, cap, a1, b1, alpha=None, beta=None) -> tuple[Family, WitnessPlan]:
    """Family whose whole witness plan stays below ``cap``.

    With ``alpha`` and ``beta`` given the pair is only checked; otherwise it
    is searched for on a fixed grid.
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    cap, a1, b1 = to_rational(cap), to_rational(a1), to_rational(b1)
    if cap <= 0:
        raise ParameterError(f"cap must be positive, got {cap}")
    if not b1 < cap * a1:
        raise ParameterError(f"b1 < cap * a1 fails (b1 = {b1}, cap * a1 = {cap * a1})")

    if alpha is not None or beta is not None:
        if alpha is None or beta is None:
            raise ParameterError("alpha and beta must be given together")
        spec = _spec(k, alpha, beta, a1, b1, cap)
        r = last_ratio(spec)
        if r is not None and not r < cap:
            raise ParameterError(
                f"r(k-1, k) = {format_rational(r)} is not below cap {format_rational(cap)}; "
                f"k={k} exceeds the admissible bound for alpha={spec.alpha}, beta={spec.beta}"
            )
    else:
        spec = _search_theorem3(k, cap, a1, b1)

    family = Family(theorem=3, spec=spec, exponents=_exponents(spec))
    return family, witness_plan(family)


def witness_plan(f: Family) -> WitnessPlan:
    """Witness exponents following the window recipe.

    z_1 = r(1,2)/2, z_k = r(k-1,k) + min(1, (cap - r(k-1,k))/2), and interior
    z_i the midpoint of (r(i-1,k), r(i,i+1)).
    """
    s = f.to_sum()
    cap = f.spec.valuation_cap
    k = f.k
    if k < 2:
        z = [Fraction(1) if cap is None or cap > 1 else cap / 2]
    else:
        ex = f.exponents

        def r(i: int, j: int) -> Fraction:
            return ratio_r(ex[i][0], ex[i][1], ex[j][0], ex[j][1])

        last = r(k - 2, k - 1)
        step = Fraction(1) if cap is None else min(Fraction(1), (cap - last) / 2)
        z = [r(0, 1) / 2]
        z += [(r(i - 1, k - 1) + r(i, i + 1)) / 2 for i in range(1, k - 1)]
        z.append(last + step)

    intervals = [feasible_interval(s, i) for i in range(k)]
    for i, (zi, interval) in enumerate(zip(z, intervals)):
        if not interval.contains(zi):
            raise ParameterError(f"witness z_{i + 1} = {zi} falls outside its window; not a theorem family")
    return WitnessPlan(z=tuple(z), intervals=tuple(intervals))


def envelope_table(f: Family, z) -> list[list[Fraction]]:
    """M[j][i] = a_j * z_i + b_j, exact."""
    zs = [to_rational(v) for v in z]
    if len(zs) != f.k:
        raise ParameterError(f"expected {f.k} witness values, got {len(zs)}")
    return [[a * zi + b for zi in zs] for a, b in f.exponents]


def plot_data(f: Family, z=None) -> PlotData:
    """Every r(i, j), i < j, plus the witness list, exact and at 6 significant digits."""
    zs = list(witness_plan(f).z) if z is None else [to_rational(v) for v in z]
    ex = f.exponents
    ratios = []
    for i in range(f.k):
        for j in range(i + 1, f.k):
            r = ratio_r(ex[i][0], ex[i][1], ex[j][0], ex[j][1])
            ratios.append(RatioRecord(i=i + 1, j=j + 1, r=r, r_decimal=significant(r)))
    witnesses = [
        WitnessRecord(i=i + 1, z=zi, z_decimal=significant(zi)) for i, zi in enumerate(zs)
    ]
    return PlotData(ratios=tuple(ratios), witnesses=tuple(witnesses))


# ---------------------------------------------------------------------------
# Tabular emission
# ---------------------------------------------------------------------------
def envelope_frame(f: Family, z) -> pd.DataFrame:
    """Envelope table laid out as rows j with a_j, b_j, then one column per i."""
    zs = [to_rational(v) for v in z]
    matrix = envelope_table(f, zs)
    columns = {
        "j": [str(j + 1) for j in range(f.k)],
        "a_j": [format_rational(a) for a, _ in f.exponents],
        "b_j": [format_rational(b) for _, b in f.exponents],
    }
    for i, zi in enumerate(zs):
        columns[f"{i + 1}: {round_half_up(zi)}"] = [round_half_up(row[i]) for row in matrix]
    return pd.DataFrame(columns)


def ratio_frame(plot: PlotData) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "i": [str(rec.i) for rec in plot.ratios],
            "j": [str(rec.j) for rec in plot.ratios],
            "r_exact": [format_rational(rec.r) for rec in plot.ratios],
            "r_decimal": [rec.r_decimal for rec in plot.ratios],
        },
        columns=["i", "j", "r_exact", "r_decimal"],
    )


def witness_frame(plot: PlotData) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "i": [str(rec.i) for rec in plot.witnesses],
            "z_exact": [format_rational(rec.z) for rec in plot.witnesses],
            "z_decimal": [rec.z_decimal for rec in plot.witnesses],
        },
        columns=["i", "z_exact", "z_decimal"],
    )


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")
