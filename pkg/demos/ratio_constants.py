"""Noise-to-reach feasibility ratios.

How much sampling noise (relative to the reach) can each reconstruction
guarantee absorb before its hypothesis set becomes unsatisfiable at
every radius?  The answer is a small constant per complex family and
noise regime; this script computes the four of them, compares against
the closed-form constants of earlier ball-based guarantees, and writes
the full feasibility curve for one case as plot-ready CSV.
"""
import csv
import math

import numpy as np

from reconcheck.constants import (RatioProblem, comparison_constants,
                                  max_ratio, ratio_curve)

print("maximal eps/tau with satisfiable hypotheses (limiting dimension):")
for kind in ("cech", "rips"):
    for regime in ("general", "noisy-asymptotic"):
        problem = RatioProblem(kind, regime)
        value = max_ratio(problem)
        print(f"  {kind:4s} / {regime:16s}: {float(value):.5f}")
print()

closed = {"nsw_cech": 3.0 - math.sqrt(8.0),
          "attali_cech": (-3.0 + math.sqrt(22.0)) / 13.0,
          "attali_rips": ((2.0 * math.sqrt(2.0 - math.sqrt(2.0))
                           - math.sqrt(2.0)) / (2.0 + math.sqrt(2.0)))}
print("closed-form comparison constants (ambient-ball guarantees):")
for name, value in sorted(comparison_constants().items()):
    print(f"  {name:12s}: {value:.8f}  (closed form {closed[name]:.8f})")
print()

problem = RatioProblem("cech", "general")
grid = np.linspace(1e-4, 0.05, 60)
path = "cech_general_feasibility.csv"
with open(path, "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["rho", "feasible", "best_slack", "scan_argmax"])
    for point in ratio_curve(problem, grid):
        writer.writerow([point.rho, point.feasible, point.best_slack,
                         point.scan_argmax])
print(f"feasibility curve written to {path} "
      f"(feasible up to rho = {float(max_ratio(problem)):.5f})")
