"""
The tilt parameters
===================

For a regime (A, B) = (l/m, n/m^2) the continuum tilt (c, d) makes the
geometric ensemble hit aspect A and fill B on average.  The discrete tilt
(c_m, d_m) does the same for a finite box, and approaches (c, d) at rate 1/m.
"""

import math

from boxpart.params import (AspectFill, delta, expansion_coefficients, jacobian,
                            solve_discrete_tilt, solve_tilt)

reg = AspectFill(1.0, 1 / 3)
t = solve_tilt(reg)
print(f"c = {t.c:.12f}, d = {t.d:.12f}, Delta = {delta(t):.12f}")
print("Jacobian eigenvalues:", jacobian(t).eigenvalues())

# at B = A/2 the tilt is elementary
center = solve_tilt(AspectFill(1.0, 0.5))
print("center:", center.c, "= log 2 =", math.log(2), " d =", center.d)

# d decreases as the box fills up
for B in (0.05, 0.15, 0.25, 0.35, 0.45):
    print(f"B = {B:.2f}: d = {solve_tilt(AspectFill(1.0, B)).d:.6f}")

# the discrete tilt drifts towards the continuum one like u/m and v/m
u, v = expansion_coefficients(reg)
print(f"predicted u = {u:.5f}, v = {v:.5f}")
for m in (50, 200, 800):
    td = solve_discrete_tilt(m, m, m * m / 3)
    print(f"m = {m:4d}: m(c_m - c) = {m * (td.c - t.c):.5f}, m(d_m - d) = {m * (td.d - t.d):.5f}")
