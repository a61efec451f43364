"""Exact coefficients of the Gaussian binomial ``[m + l choose m]_q``.

``N_n(l, m)`` counts partitions of ``n`` with at most ``m`` parts, each at
most ``l``.  The whole coefficient vector is built as the product

    prod_{i=1}^{k} (1 - q^{K - k + i}) / (1 - q^i),   K = m + l, k = min(m, l),

one factor at a time on a numpy object array of Python ints, so every value
is exact.  Multiplication by ``1 - q^e`` is a shifted subtraction and
division by ``1 - q^i`` a strided cumulative sum.  Both only look at lower
degrees, so the product can be truncated at any degree without error.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, DomainError

DEFAULT_SIZE_CAP = 250_000
BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class CoefficientVector:
    """The coefficients ``N_0(l, m), ..., N_top(l, m)`` as Python ints."""

    m: int
    ell: int
    coeffs: tuple

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def complete(self):
        return len(self.coeffs) == self.m * self.ell + 1


def _check_box(m, ell):
    if not (isinstance(m, (int, np.integer)) and isinstance(ell, (int, np.integer))):
        raise DomainError("m and l must be integers")
    if m < 1 or ell < 1:
        raise DomainError(f"need m, l >= 1, got m={m}, l={ell}")


def _gaussian_binomial(m, ell, top):
    big, k = max(m, ell), min(m, ell)
    poly = np.zeros(top + 1, dtype=object)
    poly[0] = 1
    for i in range(1, k + 1):
        e = big + i
        if e <= top:
            poly[e:] = poly[e:] - poly[:top + 1 - e]
        if i == 1:
            poly = np.cumsum(poly)
            continue
        # divide by (1 - q^i): independent running sums along each residue class
        pad = (-len(poly)) % i
        block = np.concatenate([poly, np.zeros(pad, dtype=object)]).reshape(-1, i)
        poly = np.cumsum(block, axis=0).reshape(-1)[:top + 1]
    return poly


def coeff_vector(m, ell, *, degree=None, cap=DEFAULT_SIZE_CAP):
    """All coefficients of ``[m + l choose m]_q``, optionally up to ``degree``.

    Parameters
    ----------
    m, ell : int
        Box dimensions (maximum number of parts, maximum part size).
    degree : int, optional
        Truncate at this degree; the returned coefficients are still exact.
    cap : int
        Maximum number of coefficients to compute.

    Examples
    --------
    >>> list(coeff_vector(2, 2))
    [1, 1, 2, 1, 1]
    """
    _check_box(m, ell)
    top = m * ell if degree is None else min(int(degree), m * ell)
    if top < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    if top + 1 > cap:
        raise CapExceededError(
            f"{top + 1} coefficients requested, cap is {cap}", required=top + 1)
    poly = _gaussian_binomial(int(m), int(ell), top)
    return CoefficientVector(int(m), int(ell), tuple(int(v) for v in poly))


def coeff(m, ell, n, *, cap=DEFAULT_SIZE_CAP):
    """Exact ``N_n(l, m)``; the product is truncated at ``min(n, l*m - n)``."""
    _check_box(m, ell)
    if not 0 <= n <= m * ell:
        raise DomainError(f"need 0 <= n <= l*m, got n={n}")
    n = min(n, m * ell - n)
    return coeff_vector(m, ell, degree=n, cap=cap)[n]


def kronecker_diff(m, ell, n, *, cap=DEFAULT_SIZE_CAP):
    """``N_{n+1}(l, m) - N_n(l, m)``, the Kronecker coefficient
    ``g((m^l), (m^l), (l*m - n - 1, n + 1))``.

    Only defined for ``0 <= n < l*m/2``, where unimodality makes it
    nonnegative; reflect larger ``n`` first.
    """
    _check_box(m, ell)
    if not (0 <= n and 2 * n < m * ell):
        raise DomainError(f"need 0 <= n < l*m/2, got n={n}")
    v = coeff_vector(m, ell, degree=n + 1, cap=cap)
    return v[n + 1] - v[n]


def brute_force_coeff(m, ell, n):
    """Count partitions in the box by explicit recursive enumeration.

    Independent of the product formula; meant as a test oracle only, so
    both sides are limited to ``BRUTE_FORCE_LIMIT``.
    """
    _check_box(m, ell)
    if m > BRUTE_FORCE_LIMIT or ell > BRUTE_FORCE_LIMIT:
        raise CapExceededError(
            f"brute force limited to m, l <= {BRUTE_FORCE_LIMIT}",
            required=max(m, ell))
    if not 0 <= n <= m * ell:
        return 0

    def count(remaining, largest, slots):
        # partitions of `remaining` into at most `slots` parts, each <= largest
        if remaining == 0:
            return 1
        if slots == 0 or remaining > largest * slots:
            return 0
        return sum(count(remaining - part, part, slots - 1)
                   for part in range(min(largest, remaining), 0, -1))

    return count(n, ell, m)


def binomial_total(m, ell):
    """Value of the q-binomial at ``q = 1``."""
    return math.comb(m + ell, m)
