"""Real special functions used throughout the package.

The dilogarithm here follows the convention

    dilog(x) = int_1^x log(t) / (1 - t) dt = sum_{k>=1} (1 - x)^k / k^2,

which is the classical Li2 evaluated at ``1 - x``.  Both forms are exposed:
:func:`li2` takes the classical argument and avoids the cancellation in
``1 - x`` when callers already hold ``z = exp(-s)``.
"""

import math

import numpy as np

from .errors import DomainError

PI2_6 = math.pi ** 2 / 6.0

_TERM_FLOOR = 1e-17
_MAX_TERMS = 400


def _li2_series(z):
    # sum z^k / k^2 for |z| <= 1/2
    total = 0.0
    power = z
    for k in range(1, _MAX_TERMS):
        term = power / (k * k)
        total += term
        if abs(term) < _TERM_FLOOR:
            break
        power *= z
    return total


def li2(z):
    """Classical dilogarithm ``Li2(z) = sum z^k/k^2`` for real ``z`` in (-1, 1].

    Uses the direct series when ``|z| <= 1/2``, the reflection identity for
    ``z > 1/2`` and Landen's identity for ``z < -1/2``.
    """
    z = float(z)
    if not -1.0 < z <= 1.0:
        raise DomainError(f"li2 argument must lie in (-1, 1], got {z!r}")
    if z == 1.0:
        return PI2_6
    if abs(z) <= 0.5:
        return _li2_series(z)
    if z > 0.5:
        w = 1.0 - z
        return PI2_6 - math.log(z) * math.log(w) - _li2_series(w)
    # Landen: Li2(z) = -Li2(z/(z-1)) - log(1-z)^2 / 2, z/(z-1) in (1/3, 1/2)
    lw = math.log1p(-z)
    return -_li2_series(z / (z - 1.0)) - 0.5 * lw * lw


def dilog(x):
    """Dilogarithm ``dilog(x) = Li2(1 - x)`` for ``0 < x < 2``.

    Absolute error is at the level of double rounding (below 1e-14).

    >>> dilog(1.0)
    0.0
    """
    x = float(x)
    if not 0.0 < x < 2.0:
        raise DomainError(f"dilog argument must lie in (0, 2), got {x!r}")
    if x == 1.0:
        return 0.0
    if abs(1.0 - x) <= 0.5:
        return _li2_series(1.0 - x)
    if x < 0.5:
        # reflection written in x so log(x) keeps full relative precision
        return PI2_6 - math.log1p(-x) * math.log(x) - _li2_series(x)
    # x in (1.5, 2): Landen with (1 - x)/(-x) = (x - 1)/x
    lx = math.log(x)
    return -_li2_series((x - 1.0) / x) - 0.5 * lx * lx


def log1mexp(y):
    """Stable ``log(1 - exp(-y))`` for ``y > 0``; accepts scalars or arrays.

    Switches between ``log(-expm1(-y))`` and ``log1p(-exp(-y))`` at
    ``y = log 2`` (Maechler's rule), which keeps the relative error near
    machine precision on the whole half line.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("log1mexp requires y > 0")
    if arr.ndim == 0:
        v = float(arr)
        if v <= math.log(2.0):
            return math.log(-math.expm1(-v))
        return math.log1p(-math.exp(-v))
    small = arr <= math.log(2.0)
    out = np.empty_like(arr)
    out[small] = np.log(-np.expm1(-arr[small]))
    out[~small] = np.log1p(-np.exp(-arr[~small]))
    return out


def bose(s):
    """``1 / (exp(s) - 1)``, the mean of a reduced geometric with ``q = e^-s``."""
    return 1.0 / np.expm1(s)
