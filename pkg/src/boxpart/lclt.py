"""Local CLT for ``(S_m, T_m) = (sum X_j, sum j X_j)`` with an exact oracle.

:func:`exact_joint_pmf` tabulates the joint law exactly.  Convolving with a
reduced geometric ``P(X = k) = p q^k`` is a first-order recursion,

    new[a, b] = p * old[a, b] + q * new[a - 1, b - j],

so each variable costs one sweep over the table and no per-variable
truncation is needed.  The table is cut at ``S <= a_max`` and
``T <= b_max``; entries inside the cut are exact up to rounding, and the
mass beyond it is reported as ``truncation_error``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .asym import MomentData, moments_from_probabilities
from .errors import CapExceededError, DomainError
from .special_fn import log1mexp

MAX_M = 60
MAX_TABLE_BYTES = 2 * 1024 ** 3
DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class GeometricFamily:
    """Independent reduced geometrics ``X_0..X_m`` with parameters ``p_j``.

    ``delta`` is the margin with every ``p_j`` in ``[delta, 1 - delta]``; by
    default the tightest such margin.
    """

    p: np.ndarray
    delta: float = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or len(p) < 1:
            raise DomainError("p must be a non-empty 1-D sequence")
        tight = float(min(p.min(), 1.0 - p.max()))
        delta = tight if self.delta is None else float(self.delta)
        if not 0.0 < delta <= 0.5 or tight < delta:
            raise DomainError(f"parameters must lie in [delta, 1 - delta] with 0 < delta <= 1/2")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "_log_p", None)

    @classmethod
    def fair(cls, m):
        return cls(np.full(m + 1, 0.5))

    @classmethod
    def tilted(cls, c, d, m):
        """``p_j = 1 - exp(-c - d j/m)``."""
        s = c + d * np.arange(m + 1) / m
        fam = cls(-np.expm1(-s))
        object.__setattr__(fam, "_log_p", log1mexp(s))
        return fam

    @property
    def m(self):
        return len(self.p) - 1

    def moments(self):
        return moments_from_probabilities(self.p, log_p=self._log_p)


@dataclass(frozen=True)
class JointPmfTable:
    """``probs[a, b] = P(S_m = a, T_m = b)`` for ``0 <= a <= a_max``, ``0 <= b <= b_max``."""

    m: int
    a_max: int
    b_max: int
    probs: np.ndarray
    truncation_error: float

    def pmf(self, a, b):
        if 0 <= a <= self.a_max and 0 <= b <= self.b_max:
            return float(self.probs[a, b])
        if a < 0 or b < 0:
            return 0.0
        raise DomainError(f"({a}, {b}) lies beyond the tabulated range")


def _marginal_cap(p, weights, tail_eps):
    """Smallest cap with P(sum w_j X_j > cap) <= tail_eps, by exact 1-D recursion."""
    q = 1.0 - p
    mean = float(np.sum(weights * q / p))
    sd = math.sqrt(float(np.sum(weights ** 2 * q / p ** 2)))
    cap = int(mean + 12.0 * sd + 4.0 * max(weights.max(), 1.0) + 16)
    while True:
        dist = np.zeros(cap + 1)
        dist[0] = 1.0
        for pj, qj, w in zip(p, q, weights):
            w = int(w)
            if w == 0:
                continue
            dist *= pj
            for start in range(w, cap + 1, w):
                end = min(start + w, cap + 1)
                dist[start:end] += qj * dist[start - w:end - w]
        tail = 1.0 - math.fsum(dist)
        if tail <= tail_eps / 4.0:
            cdf = np.cumsum(dist)
            hit = np.nonzero(1.0 - cdf <= tail_eps / 2.0)[0]
            return int(hit[0]) if len(hit) else cap
        cap *= 2


def exact_joint_pmf(family, tail_eps=DEFAULT_TAIL_EPS, *, cover=None):
    """Exact joint law of ``(S_m, T_m)`` on a rectangle holding all but
    ``tail_eps`` of the mass.

    Parameters
    ----------
    family : GeometricFamily
    tail_eps : float
        Mass allowed outside the table.
    cover : (int, int), optional
        A point that must lie inside the table (the rectangle is enlarged
        if needed).
    """
    if family.m > MAX_M:
        raise CapExceededError(f"exact table limited to m <= {MAX_M}", required=family.m)
    p = family.p
    m = family.m
    q = 1.0 - p
    j = np.arange(m + 1)
    a_max = _marginal_cap(p, np.ones(m + 1), tail_eps)
    b_max = _marginal_cap(p, j.astype(float), tail_eps) if m > 0 else 0
    if cover is not None:
        a_max = max(a_max, int(cover[0]))
        b_max = max(b_max, int(cover[1]))
    b_max = min(b_max, m * a_max)
    size = (a_max + 1) * (b_max + 1) * 8
    if size > MAX_TABLE_BYTES:
        raise CapExceededError(f"table needs {size} bytes", required=size)

    table = np.zeros((a_max + 1, b_max + 1))
    table[0, 0] = 1.0
    for jj in range(m + 1):
        pj, qj = p[jj], q[jj]
        table *= pj
        if jj == 0:
            for a in range(1, a_max + 1):
                table[a] += qj * table[a - 1]
        else:
            for a in range(1, a_max + 1):
                table[a, jj:] += qj * table[a - 1, :b_max + 1 - jj]
    total = math.fsum(table.ravel())
    return JointPmfTable(m, a_max, b_max, table, max(0.0, 1.0 - total))


def _quad_form(x, y, mom):
    m = mom.m
    return (mom.gamma * m ** 3 * x * x - 2.0 * mom.beta * m ** 2 * x * y
            + mom.alpha * m * y * y) / (m ** 4 * mom.Delta_m)


def _check_moments(mom):
    if not mom.Delta_m > 0.0:
        raise DomainError(f"singular covariance (Delta_m = {mom.Delta_m})")


def normal_approx(a, b, mom: MomentData):
    """Bivariate normal density with the mean and covariance of ``(S_m, T_m)``
    evaluated at lattice points ``(a, b)`` (scalars or arrays)."""
    _check_moments(mom)
    Q = _quad_form(np.asarray(a, float) - mom.mu, np.asarray(b, float) - mom.nu, mom)
    return np.exp(-0.5 * Q) / (2.0 * math.pi * mom.m ** 2 * math.sqrt(mom.Delta_m))


def log_normal_approx(a, b, mom: MomentData):
    """Natural log of :func:`normal_approx`, safe far in the tails."""
    _check_moments(mom)
    Q = _quad_form(np.asarray(a, float) - mom.mu, np.asarray(b, float) - mom.nu, mom)
    return -0.5 * Q - math.log(2.0 * math.pi * mom.m ** 2 * math.sqrt(mom.Delta_m))


def _padded_grids(family, tail_eps):
    table = exact_joint_pmf(family, tail_eps)
    mom = family.moments()
    m = family.m
    pad_a = int(math.ceil(3.0 * math.sqrt(mom.alpha * m))) + 1
    pad_b = int(math.ceil(3.0 * math.sqrt(mom.gamma * m ** 3))) + 1
    P = np.zeros((table.a_max + 1 + pad_a, table.b_max + 2 + pad_b))
    P[pad_a:, pad_b:pad_b + table.b_max + 1] = table.probs
    a = np.arange(-pad_a, table.a_max + 1)[:, None]
    b = np.arange(-pad_b, table.b_max + 2)[None, :]
    return P, normal_approx(a, b, mom), mom


def sup_error(family, tail_eps=DEFAULT_TAIL_EPS):
    """``m^2 * sup |p_m(a, b) - N_m(a, b)|`` over the table and a 3-sd ring
    of unreachable points around it."""
    P, N, mom = _padded_grids(family, tail_eps)
    return float(mom.m ** 2 * np.max(np.abs(P - N)))


def diff_sup_error(family, tail_eps=DEFAULT_TAIL_EPS):
    """``sup |p(a, b+1) - p(a, b) - (N(a, b+1) - N(a, b))|``.

    Expected to be ``O(m^-4)``; multiply by ``m**4`` for the scaled value.
    """
    P, N, _ = _padded_grids(family, tail_eps)
    return float(np.max(np.abs(np.diff(P, axis=1) - np.diff(N, axis=1))))


def tilted_count(m, ell, n, tail_eps=DEFAULT_TAIL_EPS):
    """``P_m[(S, T) = (l, n)] * exp(-L_m + c_m l + d_m n/m)`` from the exact table.

    Equals ``N_n(l, m)`` exactly in exact arithmetic, because every boxed
    partition of ``n`` has the same probability under the tilted ensemble.
    """
    from .asym import discrete_exponent
    from .params import solve_discrete_tilt

    flip = 2 * n > ell * m
    n_eff = ell * m - n if flip else n
    tilt = solve_discrete_tilt(m, ell, n_eff)
    fam = GeometricFamily.tilted(tilt.c, tilt.d, m)
    table = exact_joint_pmf(fam, tail_eps, cover=(ell, n_eff))
    return table.pmf(ell, n_eff) * math.exp(discrete_exponent(tilt, fam.moments()))
