"""Minimum covariance determinant location/scatter and robust distances.

Mirrors the trimmed-squares search: many cheap starts, two concentration
steps each, full refinement of the best few. A concentration step ranks
rows by Mahalanobis distance under the current estimate and recomputes
classical moments from the h closest rows, which never increases the
covariance determinant. The returned scatter carries a consistency factor
so that distances of clean Gaussian data are approximately chi(p).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core_stats import (
    chi2_cdf,
    chi2_quantile,
    cholesky_spd,
    determinant,
    mean_and_cov,
)
from .errors import AllStartsDegenerate, ConstantColumn, NotPositiveDefinite, SingularSubset

CONVERGENCE_RTOL = 1e-12
EXHAUSTIVE_MAX_N = 16
EXHAUSTIVE_MAX_P = 3


@dataclass(frozen=True)
class McdConfig:
    """Search parameters: subset fraction, start budget, determinism."""

    h_fraction: float = 0.75
    n_starts: int = 500
    n_best_kept: int = 10
    seed: int = 0
    max_csteps: int = 100

    def __post_init__(self):
        if not 0.5 < self.h_fraction <= 1.0:
            raise ValueError(f"h_fraction must lie in (0.5, 1], got {self.h_fraction}")
        if min(self.n_starts, self.n_best_kept, self.max_csteps) < 1:
            raise ValueError("n_starts, n_best_kept and max_csteps must be >= 1")


@dataclass(eq=False)
class McdEstimate:
    """Robust center, consistency-corrected scatter, and per-row distances.

    raw_determinant is the minimized objective: the determinant of the
    uncorrected covariance of best_subset.
    """

    center: np.ndarray
    scatter: np.ndarray
    best_subset: np.ndarray
    raw_determinant: float
    robust_distances: np.ndarray
    consistency_factor: float
    h: int


def subset_size(n: int, h_fraction: float) -> int:
    return math.floor(h_fraction * n)


def scatter_consistency_factor(h: int, n: int, p: int) -> float:
    """Correction q / F_chi2(p+2)(chi2_quantile(q, p)) with q = h/n.

    Makes squared robust distances of clean Gaussian data approximately
    chi-square(p), which the diagnostic distance cutoff presumes.
    """
    if h >= n:
        return 1.0
    q = h / n
    return q / chi2_cdf(chi2_quantile(q, p), p + 2)


def _mahalanobis_sq(x: np.ndarray, center: np.ndarray, low: np.ndarray) -> np.ndarray:
    """Squared Mahalanobis distances given the scatter's lower Cholesky factor."""
    n = low.shape[0]
    z = np.empty((n, x.shape[0]))
    d = (x - center).T
    for i in range(n):
        z[i] = (d[i] - low[i, :i] @ z[:i]) / low[i, i]
    return np.sum(z * z, axis=0)


def _subset_moments(x: np.ndarray, rows: np.ndarray):
    """Mean, covariance, Cholesky factor and determinant of the given rows.

    SingularSubset when the rows lie in a lower-dimensional affine subspace.
    """
    center, cov = mean_and_cov(x[rows])
    try:
        low = cholesky_spd(cov)
    except NotPositiveDefinite as err:
        raise SingularSubset(str(err)) from err
    return center, cov, low, determinant(cov)


def _h_closest(d2: np.ndarray, h: int) -> np.ndarray:
    return np.sort(np.argsort(d2, kind="stable")[:h])


def mcd_c_step(
    x: np.ndarray, center: np.ndarray, scatter: np.ndarray, h: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """One concentration step from (center, scatter).

    Selects the h rows closest in Mahalanobis distance (ties toward the
    lowest index) and returns their classical mean, covariance, the row
    subset, and the covariance determinant; starting from the moments of
    any h-row subset the determinant never increases. SingularSubset means
    the selection collapsed onto a lower-dimensional subspace and the
    trial should be discarded.
    """
    x = np.asarray(x, dtype=float)
    try:
        low = cholesky_spd(np.asarray(scatter, dtype=float))
    except NotPositiveDefinite as err:
        raise SingularSubset(f"input scatter not positive definite: {err}") from err
    subset = _h_closest(_mahalanobis_sq(x, np.asarray(center, float), low), h)
    new_center, new_cov, _, det = _subset_moments(x, subset)
    return new_center, new_cov, subset, det


def _validate(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected an n x p matrix, got shape {x.shape}")
    n, p = x.shape
    if n < 2 * (p + 1):
        raise ValueError(f"need at least 2(p+1)={2 * (p + 1)} rows, got {n}")
    for j in range(p):
        if np.ptp(x[:, j]) == 0.0:
            raise ConstantColumn(f"column {j} is constant")
    return x


def _starts(n: int, p: int, config: McdConfig):
    if n <= EXHAUSTIVE_MAX_N and p <= EXHAUSTIVE_MAX_P:
        return [np.array(c) for c in itertools.combinations(range(n), p + 1)]
    rng = np.random.default_rng(config.seed)
    return [np.sort(rng.choice(n, size=p + 1, replace=False)) for _ in range(config.n_starts)]


def fit_mcd(x: np.ndarray, config: McdConfig | None = None) -> McdEstimate:
    """Randomized concentration search for the minimum covariance determinant.

    Starts are (p+1)-row subsets (all of them on small instances, seeded
    draws otherwise); each surviving start gets two concentration steps,
    the n_best_kept lowest-determinant trials iterate to convergence, and
    the winner is chosen by (determinant, trial index). The scatter is
    multiplied by the consistency factor before distances are computed.
    """
    config = config or McdConfig()
    x = _validate(x)
    n, p = x.shape
    h = subset_size(n, config.h_fraction)
    if h < p + 1:
        raise ValueError(f"h={h} from h_fraction={config.h_fraction} is below p+1={p + 1}")

    survivors = []
    for trial, start in enumerate(_starts(n, p, config)):
        try:
            center, cov, _, det = _subset_moments(x, start)
            for _ in range(2):
                center, cov, subset, det = mcd_c_step(x, center, cov, h)
        except SingularSubset:
            continue
        survivors.append((det, trial, center, cov, subset))
    if not survivors:
        raise AllStartsDegenerate("every start subset was degenerate")

    survivors.sort(key=lambda item: (item[0], item[1]))
    best = None
    for det, trial, center, cov, subset in survivors[: config.n_best_kept]:
        try:
            for _ in range(config.max_csteps):
                center, cov, subset, new_det = mcd_c_step(x, center, cov, h)
                if det - new_det <= CONVERGENCE_RTOL * det:
                    det = new_det
                    break
                det = new_det
        except SingularSubset:
            continue
        if best is None or (det, trial) < (best[0], best[1]):
            best = (det, trial, center, cov, subset)
    if best is None:
        raise AllStartsDegenerate("every refined trial collapsed onto a degenerate subset")

    det, _, center, cov, subset = best
    factor = scatter_consistency_factor(h, n, p)
    scatter = cov * factor
    distances = np.sqrt(_mahalanobis_sq(x, center, cholesky_spd(scatter)))
    return McdEstimate(
        center=center,
        scatter=scatter,
        best_subset=subset,
        raw_determinant=det,
        robust_distances=distances,
        consistency_factor=factor,
        h=h,
    )


def robust_distances(x: np.ndarray, estimate: McdEstimate) -> np.ndarray:
    """Mahalanobis distances of each row under the corrected estimate."""
    x = np.asarray(x, dtype=float)
    low = cholesky_spd(estimate.scatter)
    return np.sqrt(_mahalanobis_sq(x, estimate.center, low))
