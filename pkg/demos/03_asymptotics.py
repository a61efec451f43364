"""
Asymptotic estimates against exact counts
=========================================

The continuum estimate, its discrete-tilt variant and the fair-coin
Gaussian estimate are compared with exact N_n(m, m) at n = m^2/3.  The last
block prints the exponential rates of the continuum and fair-coin
estimates across B, the data behind the usual rate-versus-fill plot.
"""

import math

from boxpart.asym import (estimate_difference, estimate_theorem1, estimate_theorem1prime,
                          takacs_estimate, takacs_rate, theorem1_rate)
from boxpart.exact import coeff, kronecker_diff
from boxpart.params import AspectFill

print(" m   exact/t1   exact/t1p  exact/takacs")
for m in (12, 24, 48, 96):
    n = m * m // 3
    log_n = math.log(coeff(m, m, n))
    ratios = [math.exp(log_n - f(m, m, n).log_value)
              for f in (estimate_theorem1, estimate_theorem1prime, takacs_estimate)]
    print(f"{m:3d}  " + "  ".join(f"{r:9.5f}" for r in ratios))

# the difference N_{n+1} - N_n is about d/m times N_n
print("\n m   exact diff / estimate")
for m in (12, 24, 48, 96):
    n = m * m // 3
    est = estimate_difference(m, m, n)
    print(f"{m:3d}  {math.exp(math.log(kronecker_diff(m, m, n)) - est.log_value):.5f}")

print("\n  B    theorem1   fair-coin")
for k in range(1, 11):
    reg = AspectFill(1.0, k / 20)
    print(f"{reg.B:5.2f}  {theorem1_rate(reg):.6f}  {takacs_rate(reg):.6f}")
# the two meet only at B = 1/2, where both equal 2 log 2
