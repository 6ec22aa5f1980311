"""Exact trimmed-squares and covariance-determinant minima by enumeration.

Evaluates every h-row subset, so it is only feasible for small inputs; the
randomized estimators can never beat these values, which makes this module
the ground truth for their tests. Deliberately naive by design.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core_stats import cholesky_solve, cholesky_spd, determinant, mean_and_cov
from .errors import AllSubsetsDegenerate, NotPositiveDefinite, TooLarge
from .ols import Dataset

MAX_SUBSETS = 10**6


@dataclass(eq=False)
class OracleResult:
    """Global optimum over all non-degenerate h-subsets.

    coefficients_or_moments is the coefficient vector for the regression
    oracle and the (center, covariance) pair for the covariance oracle.
    """

    best_subset: np.ndarray
    best_objective: float
    coefficients_or_moments: object
    n_subsets_evaluated: int


def _check_budget(n: int, h: int):
    if math.comb(n, h) > MAX_SUBSETS:
        raise TooLarge(f"C({n}, {h}) = {math.comb(n, h)} exceeds {MAX_SUBSETS} subsets")


def exact_lts(data: Dataset, h: int) -> OracleResult:
    """Exhaustive minimum of the sum of the h smallest squared residuals.

    The optimum coincides with the OLS fit of some h-subset, so OLS on
    every subset (in lexicographic order, first minimum wins) finds the
    global minimum exactly. Rank-deficient subsets are skipped.
    """
    x = data.design_matrix()
    y = data.response_vector()
    n, k = x.shape
    if h < k + 1:
        raise ValueError(f"h={h} is below k+1={k + 1}")
    _check_budget(n, h)

    best = None
    evaluated = 0
    for combo in itertools.combinations(range(n), h):
        rows = np.array(combo)
        xs = x[rows]
        try:
            low = cholesky_spd(xs.T @ xs)
        except NotPositiveDefinite:
            continue
        beta = cholesky_solve(low, xs.T @ y[rows])
        r = y - x @ beta
        r2 = r * r
        objective = float(r2[np.argsort(r2, kind="stable")[:h]].sum())
        evaluated += 1
        if best is None or objective < best[0]:
            best = (objective, rows, beta)
    if best is None:
        raise AllSubsetsDegenerate(f"all C({n}, {h}) subsets were rank deficient")
    objective, rows, beta = best
    return OracleResult(
        best_subset=rows,
        best_objective=objective,
        coefficients_or_moments=beta,
        n_subsets_evaluated=evaluated,
    )


def exact_mcd(x: np.ndarray, h: int) -> OracleResult:
    """Exhaustive minimum covariance determinant over all h-subsets.

    Subsets whose rows span a lower-dimensional affine subspace are
    degenerate and skipped, so an exact-fit configuration falls through to
    the best non-degenerate subset.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    if h < p + 1:
        raise ValueError(f"h={h} is below p+1={p + 1}")
    _check_budget(n, h)

    best = None
    evaluated = 0
    for combo in itertools.combinations(range(n), h):
        rows = np.array(combo)
        center, cov = mean_and_cov(x[rows])
        try:
            cholesky_spd(cov)
        except NotPositiveDefinite:
            continue
        det = determinant(cov)
        evaluated += 1
        if best is None or det < best[0]:
            best = (det, rows, center, cov)
    if best is None:
        raise AllSubsetsDegenerate(f"all C({n}, {h}) subsets were degenerate")
    det, rows, center, cov = best
    return OracleResult(
        best_subset=rows,
        best_objective=det,
        coefficients_or_moments=(center, cov),
        n_subsets_evaluated=evaluated,
    )
