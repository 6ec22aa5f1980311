"""Least trimmed squares regression via a randomized concentration-step search.

The estimator minimizes the sum of the h smallest squared residuals. Each
concentration step selects the h best-fitting rows under the current
coefficients and refits OLS on exactly those rows, which provably never
increases the objective; the search runs many cheap starts, concentrates
each briefly, and iterates only the most promising trials to convergence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core_stats import cholesky_solve, cholesky_spd, gaussian_quantile
from .errors import AllStartsDegenerate, NotPositiveDefinite, RankDeficientSubset
from .ols import Dataset

# Subset-OLS optima repeat bitwise at a fixed point, so convergence is
# declared when a step changes the objective by <= this relative amount.
CONVERGENCE_RTOL = 1e-12

# Below these sizes every (K+1)-row start is enumerated, removing all
# seed dependence on the instances the exhaustive oracle can check.
EXHAUSTIVE_MAX_N = 16
EXHAUSTIVE_MAX_K = 3


@dataclass(frozen=True)
class LtsConfig:
    """Search parameters: trimming fraction, start budget, determinism."""

    alpha: float = 0.25
    n_starts: int = 500
    n_best_kept: int = 10
    seed: int = 0
    max_csteps: int = 100

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 0.5:
            raise ValueError(f"alpha must lie in [0, 0.5], got {self.alpha}")
        if min(self.n_starts, self.n_best_kept, self.max_csteps) < 1:
            raise ValueError("n_starts, n_best_kept and max_csteps must be >= 1")


@dataclass(eq=False)
class LtsFit:
    """Result of the trimmed-squares search.

    objective is the sum of the h smallest squared residuals at the
    returned coefficients; h_subset holds exactly the rows attaining them
    (ties broken toward the lowest index). robust_scale is 0.0 only in the
    degenerate exact-fit case, where standardized residuals are 0 for rows
    on the fit and +/-inf sentinels elsewhere.
    """

    coefficients: np.ndarray
    objective: float
    h_subset: np.ndarray
    raw_residuals: np.ndarray
    robust_scale: float
    standardized_residuals: np.ndarray
    n_csteps_total: int
    converged: bool
    h: int


def trimmed_size(n: int, k: int, alpha: float) -> int:
    """Subset size h = n - floor(alpha*n), clamped to [k+1, n]."""
    h = n - math.floor(alpha * n)
    return max(min(h, n), k + 1)


def consistency_factor(h: int, n: int) -> float:
    """Correction making sqrt(objective/h) consistent for sigma under Gaussian errors.

    Equals 1/sqrt(variance of a standard normal truncated to its central
    h/n probability mass); 1.0 when nothing is trimmed.
    """
    if h >= n:
        return 1.0
    q = h / n
    k = gaussian_quantile((q + 1.0) / 2.0)
    phi = math.exp(-0.5 * k * k) / math.sqrt(2.0 * math.pi)
    return 1.0 / math.sqrt(1.0 - 2.0 * k * phi / q)


def _subset_ols(x: np.ndarray, y: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """OLS coefficients on the given rows; RankDeficientSubset if collinear."""
    xs = x[rows]
    try:
        low = cholesky_spd(xs.T @ xs)
    except NotPositiveDefinite as err:
        raise RankDeficientSubset(str(err)) from err
    return cholesky_solve(low, xs.T @ y[rows])


def _squared_residuals(x: np.ndarray, y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    r = y - x @ beta
    return r * r


def _h_smallest(r2: np.ndarray, h: int) -> np.ndarray:
    """Row indices of the h smallest values, ties to the lowest index, ascending."""
    return np.sort(np.argsort(r2, kind="stable")[:h])


def _objective(r2: np.ndarray, h: int) -> float:
    """Sum of the h smallest squared residuals, accumulated in sorted order."""
    return float(r2[np.argsort(r2, kind="stable")[:h]].sum())


def _c_step(
    x: np.ndarray, y: np.ndarray, beta: np.ndarray, h: int
) -> tuple[np.ndarray, float, np.ndarray]:
    subset = _h_smallest(_squared_residuals(x, y, beta), h)
    new_beta = _subset_ols(x, y, subset)
    return new_beta, _objective(_squared_residuals(x, y, new_beta), h), subset


def lts_objective(data: Dataset, beta: np.ndarray, h: int) -> float:
    """Sum of the h smallest squared residuals of data under beta."""
    if not 1 <= h <= data.n:
        raise ValueError(f"h must lie in [1, {data.n}], got {h}")
    r2 = _squared_residuals(data.design_matrix(), data.response_vector(), np.asarray(beta, float))
    return _objective(r2, h)


def c_step(
    data: Dataset, beta: np.ndarray, h: int
) -> tuple[np.ndarray, float, np.ndarray]:
    """One concentration step from beta.

    Selects the h rows with the smallest squared residuals under beta
    (ties toward the lowest index), refits OLS on exactly those rows, and
    returns (new_beta, new_objective, selected_rows). The new objective
    never exceeds lts_objective(data, beta, h); RankDeficientSubset means
    the selected rows are collinear and the trial should be discarded.
    """
    return _c_step(
        data.design_matrix(), data.response_vector(), np.asarray(beta, float), h
    )


def _starts(n: int, k: int, h: int, config: LtsConfig):
    """Initial row subsets: everything for small instances, else seeded draws."""
    if h >= n:
        return [np.arange(n)]
    if n <= EXHAUSTIVE_MAX_N and k <= EXHAUSTIVE_MAX_K:
        return [np.array(c) for c in itertools.combinations(range(n), k + 1)]
    rng = np.random.default_rng(config.seed)
    return [np.sort(rng.choice(n, size=k + 1, replace=False)) for _ in range(config.n_starts)]


def fit_lts(data: Dataset, config: LtsConfig | None = None) -> LtsFit:
    """Trimmed-squares fit: randomized starts, concentration, refinement.

    Every start subset gets an OLS fit and two concentration steps; the
    n_best_kept lowest-objective trials iterate to convergence and the
    winner is chosen by (objective, trial index), which makes the result
    deterministic for a given seed. Trials whose selected rows turn
    collinear are discarded; AllStartsDegenerate means none survived.
    """
    config = config or LtsConfig()
    x = data.design_matrix()
    y = data.response_vector()
    n, k = x.shape
    h = trimmed_size(n, k, config.alpha)

    n_csteps = 0
    survivors = []
    for trial, start in enumerate(_starts(n, k, h, config)):
        try:
            beta = _subset_ols(x, y, start)
            for _ in range(2):
                beta, objective, _ = _c_step(x, y, beta, h)
                n_csteps += 1
        except RankDeficientSubset:
            continue
        survivors.append((objective, trial, beta))
    if not survivors:
        raise AllStartsDegenerate("every start subset was collinear")

    survivors.sort(key=lambda item: (item[0], item[1]))
    best: tuple[float, int, np.ndarray, bool] | None = None
    for objective, trial, beta in survivors[: config.n_best_kept]:
        converged = False
        try:
            for _ in range(config.max_csteps):
                beta, new_objective, _ = _c_step(x, y, beta, h)
                n_csteps += 1
                if objective - new_objective <= CONVERGENCE_RTOL * objective:
                    objective = new_objective
                    converged = True
                    break
                objective = new_objective
        except RankDeficientSubset:
            continue
        if best is None or (objective, trial) < (best[0], best[1]):
            best = (objective, trial, beta, converged)
    if best is None:
        raise AllStartsDegenerate("every refined trial hit a collinear subset")

    _, _, beta, converged = best
    raw = y - x @ beta
    r2 = raw * raw
    h_subset = _h_smallest(r2, h)
    objective = _objective(r2, h)
    scale, standardized = standardize_residuals(objective, raw, h, n)
    return LtsFit(
        coefficients=beta,
        objective=objective,
        h_subset=h_subset,
        raw_residuals=raw,
        robust_scale=scale,
        standardized_residuals=standardized,
        n_csteps_total=n_csteps,
        converged=converged,
        h=h,
    )


def standardize_residuals(
    objective: float, raw_residuals: np.ndarray, h: int, n: int
) -> tuple[float, np.ndarray]:
    """Robust scale and standardized residuals from a trimmed objective.

    scale = consistency_factor(h, n) * sqrt(objective / h). An exact fit
    (objective 0) yields scale 0; rows with zero residual standardize to 0
    and every other row gets a +/-inf sentinel.
    """
    raw_residuals = np.asarray(raw_residuals, dtype=float)
    scale = consistency_factor(h, n) * math.sqrt(objective / h)
    if scale == 0.0:
        standardized = np.where(
            raw_residuals == 0.0, 0.0, np.where(raw_residuals > 0.0, np.inf, -np.inf)
        )
        return 0.0, standardized
    return scale, raw_residuals / scale
