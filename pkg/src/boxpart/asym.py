"""Asymptotic estimates for ``N_n(l, m)`` and its consecutive differences.

Every estimate is carried in log space; ``Estimate.value`` is only a
convenience and becomes ``inf`` once ``exp(log_value)`` overflows.

The continuum estimate has exponential rate ``cA + 2dB - log(1 - e^{-c-d})``
and prefactor ``1 / (2 pi m^2 sqrt(Delta (1 - e^{-c}) (1 - e^{-c-d})))``.
The discrete estimate replaces the rate by ``-L_m + c_m l + d_m n/m`` and the
prefactor by ``1 / (2 pi m^2 sqrt(Delta_m))``; the extra ``dB`` and the two
boundary factors in the continuum version are what ``-L_m`` contributes
after Euler-Maclaurin, so the two agree to ``O(1/m)`` in log space.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .params import AspectFill, DiscreteTilt, delta, solve_discrete_tilt, solve_tilt
from .special_fn import log1mexp

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class MomentData:
    """Means and normalized covariance of ``(S_m, T_m)`` for one family.

    ``alpha = Var S / m``, ``beta = Cov(S, T) / m^2``, ``gamma = Var T / m^3``,
    ``Delta_m = alpha*gamma - beta^2`` and ``L_m = sum log p_j``.
    """

    m: int
    mu: float
    nu: float
    alpha: float
    beta: float
    gamma: float
    Delta_m: float
    L_m: float


@dataclass(frozen=True)
class Estimate:
    log_value: float
    value: float
    exponential_rate: float
    regime_excluded: bool = False

    @classmethod
    def from_log(cls, log_value, m):
        value = math.exp(log_value) if log_value < 709.0 else math.inf
        return cls(float(log_value), value, float(log_value) / m)


def moments_from_probabilities(p, log_p=None):
    """MomentData of independent reduced geometrics with parameters ``p``.

    ``log_p`` may be passed when ``log(p_j)`` is known more accurately than
    ``np.log(p)`` (tilted families pass ``log1mexp(s_j)``).
    """
    p = np.asarray(p, dtype=float)
    m = len(p) - 1
    if m < 1:
        raise DomainError("moments need at least two variables (m >= 1)")
    j = np.arange(m + 1, dtype=float)
    g = (1.0 - p) / p
    h = g / p
    if log_p is None:
        log_p = np.log(p)
    var_s = math.fsum(h)
    cov = math.fsum(j * h)
    var_t = math.fsum(j * j * h)
    alpha, beta, gamma = var_s / m, cov / m ** 2, var_t / m ** 3
    return MomentData(
        m=m,
        mu=math.fsum(g),
        nu=math.fsum(j * g),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        Delta_m=alpha * gamma - beta * beta,
        L_m=math.fsum(log_p),
    )


def moments(tilt: DiscreteTilt) -> MomentData:
    """Moments of the tilted ensemble ``p_j = 1 - exp(-c_m - d_m j/m)``."""
    if not (tilt.c > 0.0 and tilt.d >= 0.0):
        raise DomainError("moments need c_m > 0 and d_m >= 0")
    s = tilt.s()
    return moments_from_probabilities(-np.expm1(-s), log_p=log1mexp(s))


def _normalized_box(m, ell, n):
    if m < 1 or ell < 1:
        raise DomainError(f"need m, l >= 1, got m={m}, l={ell}")
    if n <= 0 or n >= ell * m:
        raise DegenerateError(f"n={n} is degenerate for the {m}x{ell} box")
    return min(n, ell * m - n)


def theorem1_rate(regime):
    """Limiting exponential rate ``cA + 2dB - log(1 - e^{-c-d})`` of ``N_n``."""
    t = solve_tilt(regime)
    return t.c * regime.A + 2.0 * t.d * regime.B - log1mexp(t.c + t.d)


def estimate_theorem1(m, ell, n):
    """Continuum asymptotic estimate of ``N_n(l, m)`` with ``A = l/m, B = n/m^2``.

    Symmetric under ``n -> l*m - n``.  At the center (``d = 0``) this is
    ``sqrt(3)/(A pi m^2) * ((A+1)^(A+1)/A^A)^m``.
    """
    n = _normalized_box(m, ell, n)
    regime = AspectFill(ell / m, n / m ** 2)
    t = solve_tilt(regime)
    c, d = t.c, t.d
    rate = c * regime.A + 2.0 * d * regime.B - log1mexp(c + d)
    log_pref = -math.log(2.0 * math.pi * m * m) - 0.5 * (
        math.log(delta(t)) + log1mexp(c) + log1mexp(c + d))
    return Estimate.from_log(m * rate + log_pref, m)


def discrete_exponent(tilt: DiscreteTilt, mom: MomentData | None = None):
    """``-L_m + c_m l + d_m n/m``, the log of the tilting factor."""
    mom = moments(tilt) if mom is None else mom
    return -mom.L_m + tilt.c * tilt.ell + tilt.d * tilt.n / tilt.m


def estimate_theorem1prime(m, ell, n):
    """Discrete-tilt estimate ``exp(-L_m + c_m l + d_m n/m) / (2 pi m^2 sqrt(Delta_m))``."""
    n = _normalized_box(m, ell, n)
    tilt = solve_discrete_tilt(m, ell, n)
    mom = moments(tilt)
    log_value = discrete_exponent(tilt, mom) - math.log(
        2.0 * math.pi * m * m * math.sqrt(mom.Delta_m))
    return Estimate.from_log(log_value, m)


def estimate_difference(m, ell, n, *, warn_below=1.0):
    """Estimate of ``N_{n+1} - N_n`` as ``(d/m) * estimate_theorem1``.

    At ``n = l*m/2`` the tilt has ``d = 0`` and the estimate is 0; that case
    lies outside the regime of the estimate and is returned flagged with
    ``regime_excluded=True``.  A ``RuntimeWarning`` is issued when
    ``m*|A - 2B|`` is below ``warn_below``, where ``d`` is ``O(1/m)``.
    """
    if not 0 < n or not 2 * n <= ell * m:
        raise DomainError(f"need 0 < n <= l*m/2, got n={n}")
    if 2 * n == ell * m:
        return Estimate(-math.inf, 0.0, -math.inf, regime_excluded=True)
    A, B = ell / m, n / m ** 2
    if m * abs(A - 2.0 * B) < warn_below:
        warnings.warn(
            f"m*|A - 2B| = {m * abs(A - 2.0 * B):.3g} is small; d is O(1/m) "
            "and the difference estimate is unreliable", RuntimeWarning,
            stacklevel=2)
    d = solve_tilt(AspectFill(A, B)).d
    base = estimate_theorem1(m, ell, n)
    return Estimate.from_log(base.log_value + math.log(d / m), m)


def pak_panova_bound(m, ell, n):
    """Lower bound ``0.004 * 2^sqrt(s) / s^(9/4)``, ``s = min(2n, l^2, m^2)``,
    for the difference ``N_n - N_{n-1}`` when ``1 <= n <= l*m/2``."""
    if not (1 <= n and 2 * n <= ell * m):
        raise DomainError(f"need 1 <= n <= l*m/2, got n={n}")
    s = min(2 * n, ell * ell, m * m)
    return 0.004 * 2.0 ** math.sqrt(s) / s ** 2.25


def fair_family(m):
    """Parameters of the untilted ensemble, every ``p_j = 1/2``."""
    return np.full(m + 1, 0.5)


def takacs_estimate(m, ell, n):
    """Fair-coin Gaussian estimate of ``N_n(l, m)``.

    With every ``p_j = 1/2`` each boxed partition has probability
    ``2^-(l + m + 1)``, so ``N_n = 2^(l + m + 1) P[(S, T) = (l, n)]`` and the
    probability is replaced by its normal approximation.
    """
    from .lclt import log_normal_approx

    if not 0 < n < ell * m:
        raise DomainError(f"need 0 < n < l*m, got n={n}")
    mom = moments_from_probabilities(fair_family(m))
    log_value = (ell + m + 1) * LOG2 + log_normal_approx(ell, n, mom)
    return Estimate.from_log(float(log_value), m)


def takacs_rate(regime):
    """Limiting exponential rate of :func:`takacs_estimate` along ``(A, B)``.

    For ``p_j = 1/2`` the normalized covariance tends to
    ``alpha = 2, beta = 1, gamma = 2/3`` (``Delta = 1/3``), and the Gaussian
    exponent divided by ``m`` tends to
    ``-(2 x^2 - 6 x y + 6 y^2)/2`` with ``x = A - 1``, ``y = B - 1/2``.
    """
    x = regime.A - 1.0
    y = regime.B - 0.5
    return (1.0 + regime.A) * LOG2 - 0.5 * (2.0 * x * x - 6.0 * x * y + 6.0 * y * y)
