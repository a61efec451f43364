"""
Random partitions and the limit shape
=====================================

Uniform partitions of n in an m x l box are drawn by conditioning the
geometric ensemble (exact rejection).  Rescaled by 1/m, their boundaries
settle onto the curve y(x).  Curve and sample boundaries are written to
CSV files for plotting.
"""

import csv
import os
from pathlib import Path

import numpy as np

from boxpart.params import AspectFill
from boxpart.shape import boundary_distance, limit_curve, petrov_endpoints, sample_boxed_many

out = Path(os.environ.get("BOXPART_OUTPUT_DIR", "."))
out.mkdir(parents=True, exist_ok=True)

reg = AspectFill(1.0, 1 / 3)
curve = limit_curve(reg)
print("max implicit residual:", np.abs(curve.implicit_residual()).max())

fit = petrov_endpoints(reg)
print(f"arc of e^-x + e^-y = 1 runs from {fit.s1:.6f} to {fit.s2:.6f} (c = {curve.c:.6f})")

with open(out / "limit_curve.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["x", "y"])
    w.writerows(zip(curve.x, curve.y))

for m in (40, 120, 300):
    res = sample_boxed_many(m, m, m * m // 3, 50, seed=m)
    dist = boundary_distance(res.parts, curve)
    print(f"m = {m:3d}: median distance {np.median(dist):.4f} ({res.tries} proposals)")
    with open(out / f"sample_m{m}.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["x", "y"])
        parts = np.concatenate([[m], res.parts[0]])
        w.writerows(zip(np.arange(m + 1) / m, parts / m))
