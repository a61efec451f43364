"""
The local limit theorem, checked exactly
========================================

(S, T) = (sum X_j, sum j X_j) for independent geometrics has an exact joint
pmf we can tabulate.  Its distance to the matching bivariate normal, scaled
by m^2, shrinks with m; differences in T are smaller still, about m^-4.
"""

import math

from boxpart.exact import coeff
from boxpart.lclt import GeometricFamily, diff_sup_error, sup_error, tilted_count
from boxpart.params import AspectFill, solve_tilt

t = solve_tilt(AspectFill(1.0, 1 / 3))
for name, make in [("fair", GeometricFamily.fair),
                   ("tilted", lambda m: GeometricFamily.tilted(t.c, t.d, m))]:
    for m in (10, 20, 40):
        fam = make(m)
        print(f"{name:6s} m = {m:2d}: m^2 sup|p - N| = {sup_error(fam):.4f}, "
              f"m^4 sup|diff| = {m ** 4 * diff_sup_error(fam):.3f}")

# Under the tilted ensemble every boxed partition of n has the same
# probability, so the exact pmf at (l, n) times the tilting factor is N_n.
m, ell, n = 12, 12, 48
print("\ntilted pmf route:", tilted_count(m, ell, n), " exact:", coeff(m, ell, n))
