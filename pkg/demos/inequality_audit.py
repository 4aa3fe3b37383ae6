"""Monte Carlo audit of the projection inequalities.

Each registered check draws admissible random configurations on a shape
with known reach, evaluates its inequality, and counts violations below
the shared margin tolerance.  Two of the checks also log a stated
variant that the audit shows to be false — the log column records how
often the variant fails while the asserted form holds.
"""
import time

from reconcheck.inequalities import LEMMAS, MARGIN_TOL, run_monte_carlo
from reconcheck.shapes import Circle, Sphere

cases = 500
print(f"{cases} cases per check per shape, margin tolerance {MARGIN_TOL}")
print(f"{'check':28s} {'shape':7s} {'viol':>5s} {'worst margin':>13s} "
      f"{'variant log':>11s}")
t0 = time.perf_counter()
for lemma in sorted(LEMMAS):
    for shape in (Circle(1.0), Sphere(1.0)):
        run = run_monte_carlo(lemma, shape, cases, seed=7)
        print(f"{lemma:28s} {shape.kind:7s} {run.violations:5d} "
              f"{run.worst_margin:13.2e} {run.logged_violations:11d}")
print(f"({time.perf_counter() - t0:.1f}s)")
