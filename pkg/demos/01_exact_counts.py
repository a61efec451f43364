"""
Counting partitions in a box
============================

N_n(l, m) is the number of partitions of n with at most m parts, each at
most l.  They are the coefficients of the Gaussian binomial, and the
sequence over n is symmetric and unimodal.
"""

from boxpart.exact import brute_force_coeff, coeff, coeff_vector, kronecker_diff

# the whole sequence for a 4 x 5 box
v = coeff_vector(4, 5)
print("N_n(5, 4):", list(v))
print("sum =", sum(v), "= C(9, 4)")

# the product formula against plain enumeration
assert all(v[n] == brute_force_coeff(4, 5, n) for n in range(len(v)))

# a single coefficient only needs the product up to degree n, so large
# boxes stay cheap as long as n is moderate
big = coeff(96, 96, 96 * 96 // 3)
print(f"N_3072(96, 96) has {len(str(big))} digits")

# consecutive differences are Kronecker coefficients of two rectangles and
# a two-row shape; unimodality says they are nonnegative below the middle
print("differences in the 6 x 6 box:", [kronecker_diff(6, 6, n) for n in range(18)])
