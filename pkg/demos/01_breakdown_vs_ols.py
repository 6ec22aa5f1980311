"""How a cluster of bad observations silently destroys OLS, and why the
trimmed fit does not care.

We plant the line y = 2 + 3x with modest noise, then replace 30% of the
rows with a tight cluster far away in both x and y. OLS chases the
cluster; the trimmed fit keeps reporting the line it was shown.
"""

import numpy as np

from hibreak import Dataset, LtsConfig, fit_lts, fit_ols

rng = np.random.default_rng(7)

n = 100
x = rng.uniform(-5, 5, size=n)
y = 2.0 + 3.0 * x + rng.normal(scale=0.5, size=n)

# 30 corrupted rows: a believable-looking cluster, not lone wild points.
# Clustered outliers mask each other in single-deletion diagnostics.
bad = rng.choice(n, size=30, replace=False)
x[bad] = 10.0 + 0.1 * rng.normal(size=30)
y[bad] = -30.0 + 0.5 * rng.normal(size=30)

data = Dataset.from_xy(x, y)

ols = fit_ols(data)
print(f"OLS:  intercept {ols.coefficients[0]:+7.3f}   slope {ols.coefficients[1]:+7.3f}")
print(f"      (true line is +2.000 / +3.000; R^2 = {ols.r_squared:.3f})")

# alpha = 0.3 keeps h = 70 rows, exactly the clean majority here
lts = fit_lts(data, LtsConfig(alpha=0.3, seed=0))
print(f"LTS:  intercept {lts.coefficients[0]:+7.3f}   slope {lts.coefficients[1]:+7.3f}")
print(f"      h = {lts.h} rows kept, objective {lts.objective:.3f}, converged = {lts.converged}")

# every corrupted row stands out in standardized units
worst_clean = np.abs(lts.standardized_residuals[np.setdiff1d(np.arange(n), bad)]).max()
best_bad = np.abs(lts.standardized_residuals[bad]).min()
print(f"\nstandardized residuals: clean rows all below {worst_clean:.2f},")
print(f"corrupted rows all above {best_bad:.1f} (flagging band is 2.5)")
