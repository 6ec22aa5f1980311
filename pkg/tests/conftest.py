import numpy as np
import pytest

from hibreak import Dataset


def make_dataset(x, y, has_intercept=True):
    return Dataset.from_xy(np.asarray(x, float), np.asarray(y, float), has_intercept)


def random_regression(rng, n, k, noise=1.0, outlier_fraction=0.0):
    """Random linear instance with k coefficients (intercept included)."""
    x = rng.normal(size=(n, k - 1))
    beta = rng.normal(size=k)
    y = beta[0] + x @ beta[1:] + noise * rng.normal(size=n)
    n_out = int(outlier_fraction * n)
    if n_out:
        rows = rng.choice(n, size=n_out, replace=False)
        y[rows] += rng.choice([-1.0, 1.0], size=n_out) * rng.uniform(20, 60, size=n_out)
    return make_dataset(x, y)


def random_points(rng, n, p, outliers=0, shift=12.0):
    x = rng.normal(size=(n, p))
    if outliers:
        rows = rng.choice(n, size=outliers, replace=False)
        x[rows] += shift
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
