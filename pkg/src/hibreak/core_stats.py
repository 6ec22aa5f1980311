"""Shared numerical primitives: SPD solves, distribution functions, moments.

Everything here is a pure function, safe to call from any thread.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import chdtr, chdtri, ndtri, stdtr

from .errors import DomainError, NotPositiveDefinite

# Relative Cholesky pivot below which regressors are reported as collinear.
PIVOT_RTOL = 1e-12


def cholesky_spd(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises NotPositiveDefinite when a pivot falls at or below
    PIVOT_RTOL * max(diag(a)), the signature of collinear input.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    max_diag = float(np.max(np.diag(a))) if n else 0.0
    tol = PIVOT_RTOL * max_diag
    low = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot <= tol or not np.isfinite(pivot):
            raise NotPositiveDefinite(
                f"pivot {pivot:.3e} at column {j} is at or below {tol:.3e}"
            )
        low[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low


def cholesky_solve(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (L @ L.T) x = b by substitution given the lower factor L.

    Plain loops: for the small systems this package solves in bulk they
    beat the call overhead of the LAPACK wrappers by a wide margin.
    """
    n = low.shape[0]
    z = np.empty(n)
    for i in range(n):
        z[i] = (b[i] - low[i, :i] @ z[:i]) / low[i, i]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (z[i] - low[i + 1 :, i] @ x[i + 1 :]) / low[i, i]
    return x


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b for symmetric positive-definite a via Cholesky.

    a must be square and symmetric to 1e-10 relative; NotPositiveDefinite
    signals collinearity (near-zero pivot).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: a is {a.shape}, b has length {b.shape[0]}")
    scale = float(np.max(np.abs(a))) or 1.0
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-10 * scale):
        raise ValueError("matrix is not symmetric within 1e-10 relative")
    return cholesky_solve(cholesky_spd(a), b)


def spd_inverse_diag(low: np.ndarray) -> np.ndarray:
    """Diagonal of inv(L @ L.T) given the lower Cholesky factor L."""
    inv_l = solve_triangular(low, np.eye(low.shape[0]), lower=True)
    return np.sum(inv_l * inv_l, axis=0)


def student_t_cdf(t: float, df: int) -> float:
    """CDF of Student's t with df degrees of freedom (regularized incomplete beta)."""
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    return float(stdtr(df, t))


def chi2_cdf(x: float, df: int) -> float:
    """Chi-square CDF with df degrees of freedom."""
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    if x <= 0.0:
        return 0.0
    return float(chdtr(df, x))


def chi2_quantile(p: float, df: int) -> float:
    """Inverse chi-square CDF; strictly increasing in p over (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    return float(chdtri(df, 1.0 - p))


def gaussian_quantile(p: float) -> float:
    """Inverse standard normal CDF."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    return float(ndtri(p))


def mean_and_cov(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columnwise mean and sample covariance (denominator n-1) of an n x p matrix."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected an n x p matrix, got shape {x.shape}")
    n, p = x.shape
    if n < p + 1:
        raise ValueError(f"need at least p+1={p + 1} rows for a p={p} covariance, got {n}")
    center = x.mean(axis=0)
    centered = x - center
    scatter = centered.T @ centered / (n - 1)
    return center, (scatter + scatter.T) / 2.0


def determinant(a: np.ndarray) -> float:
    """Determinant of a square matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return float(np.linalg.det(a))
