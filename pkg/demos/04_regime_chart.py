"""A small two-parameter regime chart around the hyperchaotic region.

Seed-column-first traversal: the seed cell is continued vertically, then
every row walks left and right from its column cell. A 24x24 grid with
short per-cell runs finishes in a few minutes on two cores; the acceptance
suite runs the full 60x60 version. chart.csv feeds the heatmap:
`render --kind heatmap --in demo_out/chart.csv --out chart.svg`.
"""

import os
import time

import numpy as np

from bubblepair import (
    AnalysisConfig,
    ChartConfig,
    IntegratorConfig,
    PhysicalParams,
    State,
    chart,
)
from bubblepair.runio import write_chart_csv

OUT = os.path.join(os.path.dirname(__file__), "demo_out")
os.makedirs(OUT, exist_ok=True)

cc = ChartConfig(
    x_param="d_ratio", x_lo=6.0, x_hi=35.0, nx=24,
    y_param="pac", y_lo=1.2e6, y_hi=1.8e6, ny=24,
    seed_x=17.5, seed_y=1.52e6,
    seed_state=State(1.09, -0.47, 0.77, 0.49),
    analysis=AnalysisConfig(
        integrator=IntegratorConfig(rtol=1e-9, atol=1e-11),
        transient_periods=300,
        measure_periods=1200,
        conv_tol=2e-3,
        poincare_collect=200,
        max_extensions=0,
    ),
    threads=2,
)

t0 = time.perf_counter()
grid = chart(cc, PhysicalParams().with_drive(eps=1.024))
print(f"24x24 chart in {time.perf_counter() - t0:.0f}s")

codes, counts = np.unique(grid.class_code, return_counts=True)
names = {-1: "failed", 0: "periodic", 1: "quasiperiodic", 2: "chaotic", 3: "hyperchaotic"}
for c, n in zip(codes, counts):
    print(f"  {names[int(c)]:13s}: {n:4d} cells")

write_chart_csv(grid, os.path.join(OUT, "chart.csv"))
print(f"chart written to {OUT}/chart.csv")
