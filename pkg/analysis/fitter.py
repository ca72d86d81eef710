"""Concise irreducible polynomial bounds inferred from (x, y, t) measurements.

Candidates are unit-coefficient sums whose exponent pairs all come from a
rational lattice and are all independent. Each candidate g is scored on the
data by the big-oh constant max t/g and by its slack, the spread of t/g over
the data. The chosen bound is the most concise admissible candidate.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, TextIO

import mpmath
import numpy as np
import pandas as pd

from analysis.errors import FitError, ParameterError
from analysis.evaluate import DEFAULT_PRECISION, eval_sum
from analysis.expressions import print_sum
from analysis.rationals import to_rational
from models.fits import FitReport, FitResult, Measurement, Violation
from models.terms import TermSum
from utils.logger import get_logger

log = get_logger("fitter")

MIN_MEASUREMENTS = 8
MIN_SPREAD = 4.0
DEFAULT_SLACK_TOLERANCE = 2.0
ROBUST_QUANTILE = 0.99
MAX_CANDIDATES = 500_000
BLOCK_SIZE = 2048
VIOLATION_RTOL = 1e-9
# log-slack values closer than this are treated as equal when ranking
SLACK_RESOLUTION = 12

Point = tuple[Fraction, Fraction]
Candidate = tuple[Point, ...]
ProgressCallback = Callable[[int, int], None]


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------
def load_measurements(source: str | Path | TextIO) -> list[Measurement]:
    """Read a CSV with header ``x,y,t``; extra columns are ignored."""
    try:
        frame = pd.read_csv(source)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise FitError(f"cannot read measurements: {e}") from e
    missing = [c for c in ("x", "y", "t") if c not in frame.columns]
    if missing:
        raise FitError(f"measurement CSV lacks column(s): {', '.join(missing)}")
    values = frame[["x", "y", "t"]].apply(pd.to_numeric, errors="coerce").astype(float)
    bad = values.isna().any(axis=1)
    if bad.any():
        row = int(bad.idxmax()) + 2  # header is line 1
        raise FitError(f"non-numeric measurement on line {row}")
    try:
        return [Measurement(x=x, y=y, t=t) for x, y, t in values.itertuples(index=False)]
    except ValueError as e:
        raise FitError(f"invalid measurement: {e}") from e


def _coerce(data: Iterable[Measurement | dict]) -> list[Measurement]:
    return [m if isinstance(m, Measurement) else Measurement.model_validate(m) for m in data]


def _check_data(data: Sequence[Measurement]) -> None:
    if len(data) < MIN_MEASUREMENTS:
        raise FitError(f"need at least {MIN_MEASUREMENTS} measurements, got {len(data)}")
    for name in ("x", "y"):
        values = [getattr(m, name) for m in data]
        spread = max(values) / min(values)
        if spread < MIN_SPREAD:
            raise FitError(
                f"{name} spans only a {spread:.3g}x range; at least {MIN_SPREAD:g}x is required"
            )


# ---------------------------------------------------------------------------
# Candidate space
# ---------------------------------------------------------------------------
def lattice_values(max_degree, lattice: Iterable[int]) -> list[Fraction]:
    """Sorted {p/q : 0 <= p/q <= max_degree, q in lattice}."""
    bound = to_rational(max_degree)
    denominators = sorted(set(lattice))
    if bound < 0:
        raise ParameterError(f"max degree must be nonnegative, got {bound}")
    if not denominators or any(not isinstance(q, int) or q < 1 for q in denominators):
        raise ParameterError(f"lattice denominators must be positive integers, got {denominators}")
    return sorted({Fraction(p, q) for q in denominators for p in range(math.floor(bound * q) + 1)})


def _concave(o: Point, p: Point, q: Point) -> bool:
    """p is a strict vertex between o and q on an upper-right chain."""
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]) < 0


def enumerate_candidates(max_terms: int, max_degree, lattice: Iterable[int] = (1,)) -> list[Candidate]:
    """Every irreducible exponent set within the limits, in lexicographic order.

    A set is irreducible exactly when, sorted by a ascending, its b values
    strictly decrease and every consecutive triple turns strictly clockwise,
    so the search only ever extends a chain that is already irreducible.
    """
    if not isinstance(max_terms, int) or max_terms < 1:
        raise ParameterError(f"max terms must be a positive integer, got {max_terms!r}")
    values = lattice_values(max_degree, lattice)
    points = [(a, b) for a in values for b in values]
    out: list[Candidate] = []

    def extend(chain: list[Point], start: int) -> None:
        out.append(tuple(chain))
        if len(chain) == max_terms:
            return
        last = chain[-1]
        for idx in range(start, len(points)):
            p = points[idx]
            if p[0] <= last[0] or p[1] >= last[1]:
                continue
            if len(chain) >= 2 and not _concave(chain[-2], last, p):
                continue
            chain.append(p)
            extend(chain, idx + 1)
            chain.pop()

    for idx, p in enumerate(points):
        extend([p], idx + 1)
    return out


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------
class _Scorer:
    """Log-space evaluation of candidates against fixed data."""

    def __init__(self, data: Sequence[Measurement], robust: bool) -> None:
        self.log_x = np.log(np.array([m.x for m in data], dtype=float))
        self.log_y = np.log(np.array([m.y for m in data], dtype=float))
        self.log_t = np.log(np.array([m.t for m in data], dtype=float))
        self.robust = robust
        self._rows: dict[Point, np.ndarray] = {}

    def _row(self, p: Point) -> np.ndarray:
        row = self._rows.get(p)
        if row is None:
            row = float(p[0]) * self.log_x + float(p[1]) * self.log_y
            self._rows[p] = row
        return row

    def prime(self, candidates: Sequence[Candidate]) -> None:
        for cand in candidates:
            for p in cand:
                self._row(p)

    def score(self, cand: Candidate) -> tuple[float, float]:
        """(log constant, log slack) of one candidate."""
        log_g = np.logaddexp.reduce(np.stack([self._rows[p] for p in cand]), axis=0)
        log_ratio = self.log_t - log_g
        if self.robust:
            top = float(np.quantile(log_ratio, ROBUST_QUANTILE))
            bottom = float(np.quantile(log_ratio, 1 - ROBUST_QUANTILE))
        else:
            top, bottom = float(log_ratio.max()), float(log_ratio.min())
        return top, max(0.0, top - bottom)

    def score_block(self, block: Sequence[Candidate]) -> list[tuple[float, float]]:
        return [self.score(c) for c in block]


def _blocks(items: Sequence[Candidate], size: int) -> list[Sequence[Candidate]]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def fit(
    data: Iterable[Measurement | dict],
    max_terms: int,
    max_degree,
    lattice: Iterable[int] = (1,),
    *,
    robust: bool = False,
    slack_tolerance: float = DEFAULT_SLACK_TOLERANCE,
    workers: int = 1,
    on_progress: Optional[ProgressCallback] = None,
    max_candidates: int = MAX_CANDIDATES,
) -> FitResult:
    """Pick the most concise irreducible bound for ``data``.

    A candidate is admissible when its slack is within ``slack_tolerance``
    times the best slack of any candidate. Admissible candidates are ranked
    by (term count, log slack, total degree), ties going to the earlier
    candidate in enumeration order. The result does not depend on
    ``workers``.
    """
    data = _coerce(data)
    _check_data(data)
    if slack_tolerance < 1:
        raise ParameterError(f"slack tolerance must be >= 1, got {slack_tolerance}")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")

    candidates = enumerate_candidates(max_terms, max_degree, lattice)
    if not candidates:
        raise FitError("empty candidate space")
    if len(candidates) > max_candidates:
        raise FitError(
            f"{len(candidates)} candidates exceed the limit of {max_candidates}; "
            "lower max terms or max degree, or coarsen the lattice"
        )
    log.info("fitting %d measurement(s) against %d candidate(s)", len(data), len(candidates))

    scorer = _Scorer(data, robust)
    scorer.prime(candidates)
    total = len(candidates)
    scores: list[tuple[float, float]] = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for block_scores in pool.map(scorer.score_block, _blocks(candidates, BLOCK_SIZE)):
            scores.extend(block_scores)
            if on_progress is not None:
                on_progress(len(scores), total)

    best_log_slack = min(s for _, s in scores)
    limit = best_log_slack + math.log(slack_tolerance) if math.isfinite(slack_tolerance) else math.inf
    admissible = [idx for idx, (_, s) in enumerate(scores) if s <= limit + 10.0**-SLACK_RESOLUTION]

    def rank(idx: int) -> tuple:
        cand = candidates[idx]
        degree = sum((a + b for a, b in cand), Fraction(0))
        return (len(cand), round(scores[idx][1], SLACK_RESOLUTION), degree, idx)

    chosen = min(admissible, key=rank)
    log_constant, log_slack = scores[chosen]
    bound = TermSum.from_exponents(candidates[chosen])
    log.info(
        "chose %s (constant %.6g, slack %.6g) among %d admissible candidate(s)",
        print_sum(bound), math.exp(log_constant), math.exp(log_slack), len(admissible),
    )
    return FitResult(
        bound=bound,
        constant=math.exp(log_constant),
        slack=max(1.0, math.exp(log_slack)),
        robust=robust,
        candidates_evaluated=total,
        admissible=len(admissible),
    )


def validate_bound(
    data: Iterable[Measurement | dict],
    result: FitResult,
    precision: int = DEFAULT_PRECISION,
) -> FitReport:
    """Recompute validity and slack of ``result`` on ``data`` from scratch.

    A point violates the bound when t exceeds constant * g by more than a
    relative 1e-9.
    """
    data = _coerce(data)
    violations: list[Violation] = []
    ratios: list[mpmath.mpf] = []
    with mpmath.workprec(precision):
        c = mpmath.mpf(result.constant)
        for idx, m in enumerate(data):
            g = eval_sum(result.bound, Fraction(m.x), Fraction(m.y), precision)
            ratio = mpmath.mpf(m.t) / g
            ratios.append(ratio)
            excess = ratio / c
            if excess > 1 + VIOLATION_RTOL:
                violations.append(
                    Violation(
                        index=idx, x=m.x, y=m.y, t=m.t,
                        bound_value=float(c * g), excess=float(excess),
                    )
                )
        slack = float(max(ratios) / min(ratios)) if ratios else 1.0
    if violations:
        log.info("%d of %d point(s) exceed the bound", len(violations), len(data))
    return FitReport(
        bound=print_sum(result.bound),
        constant=result.constant,
        slack=slack,
        violations=violations,
    )
