"""The whole pipeline on a CSV file, exactly as the CLI drives it.

Writes a small dataset to disk, loads it back with a model spec, runs
OLS -> LTS -> MCD -> classify -> drop -> refit, and prints the two-panel
markdown report. The same analysis from a shell:

    hibreak analyze growth.csv --response y --predictors x1 --format markdown
"""

import numpy as np

from hibreak import load_csv, render_report, run_analysis
from hibreak.pipeline import AnalysisConfig, ModelSpec

rng = np.random.default_rng(12)

n = 40
x = rng.uniform(0, 3, size=n)
y = 2.0 + 3.0 * x + rng.normal(scale=0.3, size=n)
x[:4] = 10.0   # four bad leverage points, pulled far off the line
y[:4] = -20.0

with open("growth.csv", "w") as fh:
    fh.write("row,y,x1\n")
    for i in range(n):
        fh.write(f"r{i},{float(y[i])!r},{float(x[i])!r}\n")

model = ModelSpec(response="y", predictors=("x1",))
data = load_csv("growth.csv", model)
report = run_analysis(data, AnalysisConfig(model=model))

print(render_report(report, "markdown"))

# the JSON rendering is lossless and byte-stable for fixed seeds
as_json = render_report(report, "json")
print(f"JSON rendering: {len(as_json)} bytes, "
      f"{len(report.dropped)} rows dropped, "
      f"OLS slope {report.ols_fit.coefficients[1]:+.3f} -> "
      f"robust slope {report.robust_fit.coefficients[1]:+.3f}")
