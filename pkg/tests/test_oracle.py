import math

import numpy as np
import pytest

from hibreak import exact_lts, exact_mcd, fit_ols
from hibreak.errors import AllSubsetsDegenerate, TooLarge

from conftest import make_dataset, random_points, random_regression


class TestExactLts:
    def test_h_equals_n_is_ols(self, rng):
        data = random_regression(rng, 12, 3)
        result = exact_lts(data, 12)
        ols = fit_ols(data)
        np.testing.assert_allclose(
            result.coefficients_or_moments, ols.coefficients, rtol=1e-10
        )
        r = data.response_vector() - data.design_matrix() @ ols.coefficients
        assert np.isclose(result.best_objective, float(r @ r), rtol=1e-10)
        assert result.n_subsets_evaluated == 1

    def test_staircase_hand_enumeration(self):
        # C(4,3)=4 subsets; rows {0,1,2} lie exactly on y=x, objective 0
        data = make_dataset([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0, 100.0])
        result = exact_lts(data, 3)
        np.testing.assert_array_equal(result.best_subset, [0, 1, 2])
        np.testing.assert_allclose(result.coefficients_or_moments, [0.0, 1.0], atol=1e-12)
        assert result.best_objective <= 1e-24
        assert result.n_subsets_evaluated == 4

    def test_permutation_invariant_objective(self, rng):
        data = random_regression(rng, 10, 2, outlier_fraction=0.2)
        perm = rng.permutation(10)
        shuffled = make_dataset(
            data.predictor_matrix()[perm], data.response_vector()[perm]
        )
        a = exact_lts(data, 8)
        b = exact_lts(shuffled, 8)
        assert np.isclose(a.best_objective, b.best_objective, rtol=1e-10)

    def test_budget_guard(self, rng):
        data = random_regression(rng, 40, 2)
        with pytest.raises(TooLarge):
            exact_lts(data, 20)

    def test_all_subsets_degenerate(self):
        data = make_dataset(np.ones(6), np.arange(6.0))
        with pytest.raises(AllSubsetsDegenerate):
            exact_lts(data, 4)

    def test_h_below_k_plus_one(self, rng):
        data = random_regression(rng, 8, 2)
        with pytest.raises(ValueError):
            exact_lts(data, 2)


class TestExactMcd:
    def test_skips_degenerate_exact_fit(self):
        # the all-identical 4-subset has zero variance: degenerate, skipped;
        # the winner must include the far point
        x = np.array([[5.0], [5.0], [5.0], [5.0], [100.0]])
        result = exact_mcd(x, 4)
        assert 4 in result.best_subset
        assert result.best_objective > 0.0
        assert result.n_subsets_evaluated == math.comb(5, 4) - 1

    def test_cluster_wins(self, rng):
        x = np.vstack([0.1 * rng.normal(size=(8, 2)), 50.0 + rng.normal(size=(2, 2))])
        result = exact_mcd(x, 6)
        assert set(result.best_subset) <= set(range(8))
        center, cov = result.coefficients_or_moments
        assert np.linalg.norm(center) < 1.0
        assert cov.shape == (2, 2)

    def test_permutation_invariant_objective(self, rng):
        x = random_points(rng, 10, 2, outliers=2)
        perm = rng.permutation(10)
        a = exact_mcd(x, 7)
        b = exact_mcd(x[perm], 7)
        assert np.isclose(a.best_objective, b.best_objective, rtol=1e-10)

    def test_budget_guard(self, rng):
        with pytest.raises(TooLarge):
            exact_mcd(rng.normal(size=(45, 2)), 22)

    def test_h_below_p_plus_one(self, rng):
        with pytest.raises(ValueError):
            exact_mcd(rng.normal(size=(8, 3)), 3)
