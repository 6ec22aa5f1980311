"""The four-way observation taxonomy on a constructed instance.

One observation of each kind is planted around the line y = 1 + 2x:
a bad leverage point (far in x, off the line), a good leverage point
(far in x, on the line), and a vertical outlier (usual x, wrong y).
Robust distances come from the MCD fit over the predictor columns;
residual flags come from the standardized LTS residuals.
"""

import numpy as np

from hibreak import (
    Dataset,
    LtsConfig,
    McdConfig,
    classify_all,
    fit_lts,
    fit_mcd,
    outlier_map,
)

rng = np.random.default_rng(3)

x = rng.uniform(-2, 2, size=40)
y = 1.0 + 2.0 * x + rng.normal(scale=0.1, size=40)
x[0], y[0] = 9.0, -30.0              # bad leverage: pulls OLS hard
x[1], y[1] = 9.5, 1.0 + 2.0 * 9.5    # good leverage: far out but on the line
y[2] = 1.0 + 2.0 * x[2] + 3.0        # vertical outlier, mild

data = Dataset.from_xy(x, y)
lts = fit_lts(data, LtsConfig(seed=0))
mcd = fit_mcd(data.predictor_matrix(), McdConfig(seed=0))
records = classify_all(lts, mcd, data)

print(f"{'row':>4}  {'std. residual':>14}  {'robust dist':>12}  {'class':<16} drop")
for rec in records[:6]:
    print(
        f"{rec.row_label:>4}  {rec.standardized_residual:>14.2f}  "
        f"{rec.robust_distance:>12.2f}  {rec.classification.value:<16} "
        f"{'yes' if rec.drop_recommended else 'no'}"
    )
print("...")

counts = {}
for rec in records:
    counts[rec.classification.value] = counts.get(rec.classification.value, 0) + 1
print("\ncounts:", counts)
print(f"cutoffs: |residual| >= {records[0].residual_cutoff}, "
      f"distance >= {records[0].distance_cutoff:.3f}")

# the outlier map is plain data, ready for any plotting front end
plot = outlier_map(records)
with open("outlier_map.json", "w") as fh:
    fh.write(plot.to_json())
print("\nwrote outlier_map.json "
      f"({len(plot.points)} points, cutoffs {plot.rd_cutoff:.3f} / {plot.sr_cutoff})")
