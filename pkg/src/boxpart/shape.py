"""Random boxed partitions and their limit shape.

A partition ``lambda_1 >= ... >= lambda_m >= 0`` with ``lambda_1 <= l`` is
encoded by its gaps ``x_j = lambda_j - lambda_{j+1}`` (``lambda_0 = l``,
``lambda_{m+1} = 0``).  It fits the box and has size ``n`` exactly when
``sum x_j = l`` and ``sum j x_j = n``.

Under the grand ensemble the gaps are independent reduced geometrics with
``q_j = exp(-c - d j/m)``, and every gap vector meeting both constraints has
the same probability, so conditioning by rejection gives a uniform boxed
partition.
"""

import math
from dataclasses import dataclass

import numpy as np

from .asym import moments
from .errors import ConvergenceError, DomainError, SamplingBudgetError
from .params import AspectFill, DiscreteTilt, jacobian, solve_discrete_tilt, solve_tilt
from .special_fn import li2, log1mexp

DEFAULT_GRID = 1024
_BATCH_ELEMENTS = 2_000_000


# --- encoding ---------------------------------------------------------------

def gaps_to_partition(gaps, ell):
    """Parts ``lambda_1..lambda_m`` from gaps ``x_0..x_m`` with ``lambda_0 = l``."""
    gaps = np.asarray(gaps)
    return ell - np.cumsum(gaps[:-1])


def partition_to_gaps(parts, ell):
    """Inverse of :func:`gaps_to_partition` (``parts`` has length ``m``)."""
    lam = np.concatenate([[ell], np.asarray(parts), [0]])
    return lam[:-1] - lam[1:]


def is_boxed_partition(parts, ell, n=None):
    parts = np.asarray(parts)
    ok = (np.all(parts >= 0) and np.all(np.diff(parts) <= 0)
          and (len(parts) == 0 or parts[0] <= ell))
    if n is not None:
        ok = ok and int(parts.sum()) == n
    return bool(ok)


# --- sampling ---------------------------------------------------------------

def _exponents(tilt):
    return tilt.c + tilt.d * np.arange(tilt.m + 1) / tilt.m


def sample_ensemble(tilt, seed, size=None):
    """Draw gap vectors from the grand ensemble.

    Each ``x_j`` is ``floor(E / s_j)`` with ``E`` standard exponential, which is
    exactly reduced geometric with ``q_j = exp(-s_j)``.  Returns an int array of
    shape ``(m + 1,)`` or ``(size, m + 1)``.
    """
    rng = np.random.default_rng(seed)
    s = _exponents(tilt)
    shape = (tilt.m + 1,) if size is None else (size, tilt.m + 1)
    return np.floor(rng.standard_exponential(shape) / s).astype(np.int64)


@dataclass
class BoxedSamples:
    """Conditioned samples: ``parts`` has shape ``(count, m)``."""

    parts: np.ndarray
    tries: int
    m: int
    ell: int
    n: int

    def __len__(self):
        return len(self.parts)


def _sampling_tilt(m, ell, n):
    flip = 2 * n > ell * m
    return solve_discrete_tilt(m, ell, ell * m - n if flip else n), flip


def default_max_tries(m, ell, n):
    """``100 * ceil(2 pi m^2 sqrt(Delta_m))``, a hundred times the expected
    number of plain rejection tries per hit."""
    tilt, _ = _sampling_tilt(m, ell, n)
    mom = moments(tilt)
    return 100 * math.ceil(2.0 * math.pi * m * m * math.sqrt(mom.Delta_m))


def _plain_batch(tilt, ell, n, rng, size):
    s = _exponents(tilt)
    x = np.floor(rng.standard_exponential((size, tilt.m + 1)) / s).astype(np.int64)
    hit = (x.sum(axis=1) == ell) & (x @ np.arange(tilt.m + 1) == n)
    return x[hit]


def _split_batch(tilt, ell, n, rng, size):
    # Draw x_2..x_m, solve the two constraints for x_1 and x_0, and accept with
    # probability q_0^{x_0} q_1^{x_1} = P(X_0=x_0) P(X_1=x_1) / (p_0 p_1).
    # Exact rejection for the same conditioned law, with a 1/(p_0 p_1) higher
    # acceptance rate than drawing all m + 1 gaps.
    s = _exponents(tilt)
    m = tilt.m
    rest = np.floor(rng.standard_exponential((size, m - 1)) / s[2:]).astype(np.int64)
    x1 = n - rest @ np.arange(2, m + 1)
    x0 = ell - x1 - rest.sum(axis=1)
    ok = (x0 >= 0) & (x1 >= 0)
    hit = ok & (rng.standard_exponential(size) >= s[0] * x0 + s[1] * x1)
    return np.column_stack([x0[hit], x1[hit], rest[hit]])


def sample_boxed_many(m, ell, n, count, seed, max_tries=None, method="split"):
    """``count`` independent uniform partitions of ``n`` in the ``m x l`` box.

    Parameters
    ----------
    method : {"split", "plain"}
        ``"plain"`` draws all gaps and keeps vectors with ``(S, T) = (l, n)``.
        ``"split"`` draws ``x_2..x_m`` and solves for ``x_0, x_1`` (see
        ``_split_batch``); both are exact rejection samplers.
    max_tries : int, optional
        Total proposal budget; defaults to ``count * default_max_tries``.

    Raises
    ------
    SamplingBudgetError
        If fewer than ``count`` samples were accepted within ``max_tries``.
    """
    if m < 1 or ell < 1 or not 0 < n < ell * m:
        raise DomainError(f"need m, l >= 1 and 0 < n < l*m, got ({m}, {ell}, {n})")
    if count < 1:
        raise DomainError("count must be >= 1")
    tilt, flip = _sampling_tilt(m, ell, n)
    n_eff = ell * m - n if flip else n
    if max_tries is None:
        max_tries = count * default_max_tries(m, ell, n)
    if max_tries < 1:
        raise DomainError("max_tries must be >= 1")
    if method == "split" and m < 2:
        method = "plain"
    draw = {"split": _split_batch, "plain": _plain_batch}.get(method)
    if draw is None:
        raise DomainError(f"unknown method {method!r}")

    rng = np.random.default_rng(seed)
    batch = max(64, min(65536, _BATCH_ELEMENTS // (m + 1)))
    found, got, tries = [], 0, 0
    while got < count:
        if tries >= max_tries:
            raise SamplingBudgetError(
                f"{got} of {count} samples after {tries} tries", hits=got, tries=tries)
        size = min(batch, max_tries - tries)
        hits = draw(tilt, ell, n_eff, rng, size)
        found.append(hits)
        got += len(hits)
        tries += size
    gaps = np.concatenate(found)[:count]
    parts = ell - np.cumsum(gaps[:, :-1], axis=1)
    if flip:
        parts = ell - parts[:, ::-1]
    return BoxedSamples(parts, tries, m, ell, n)


def sample_boxed(m, ell, n, seed, max_tries=None, method="split"):
    """One uniform boxed partition; see :func:`sample_boxed_many`."""
    if max_tries is None:
        max_tries = default_max_tries(m, ell, n)
    res = sample_boxed_many(m, ell, n, 1, seed, max_tries=max_tries, method=method)
    return res.parts[0], res.tries


def hit_rate(m, ell, n, trials, seed):
    """Empirical ``P_m[(S, T) = (l, n)]`` from ``trials`` plain ensemble draws."""
    tilt, flip = _sampling_tilt(m, ell, n)
    n_eff = ell * m - n if flip else n
    x = sample_ensemble(tilt, seed, size=trials)
    hits = (x.sum(axis=1) == ell) & (x @ np.arange(m + 1) == n_eff)
    return float(np.count_nonzero(hits)) / trials


# --- limit shape ------------------------------------------------------------

@dataclass(frozen=True)
class LimitCurve:
    A: float
    B: float
    c: float
    d: float
    x: np.ndarray
    y: np.ndarray

    def __call__(self, x):
        return limit_curve_value(self.A, self.c, self.d, x)

    def implicit_residual(self):
        """Residual of ``(1 - e^-c) e^{d(A - y)} + e^-c e^{-dx} = 1`` at each point."""
        if self.d == 0.0:
            return self.y - self.A * (1.0 - self.x)
        return (-math.expm1(-self.c) * np.exp(self.d * (self.A - self.y))
                + math.exp(-self.c) * np.exp(-self.d * self.x) - 1.0)


def limit_curve_value(A, c, d, x):
    """``y(x) = A + x - (1/d) log((e^{xd + c} - 1)/(e^c - 1))``; ``A(1 - x)`` at ``d = 0``."""
    x = np.asarray(x, dtype=float)
    if d == 0.0:
        return A * (1.0 - x)
    return A + x - np.log1p(np.expm1(x * d) / -math.expm1(-c)) / d


def limit_curve(regime, grid_size=DEFAULT_GRID):
    """Sample the limit shape on a uniform grid of ``grid_size`` points in [0, 1].

    The endpoints are set to their exact values ``y(0) = A`` and ``y(1) = 0``.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    t = solve_tilt(regime)
    x = np.linspace(0.0, 1.0, grid_size)
    y = limit_curve_value(regime.A, t.c, t.d, x)
    y[0], y[-1] = regime.A, 0.0
    return LimitCurve(regime.A, regime.B, t.c, t.d, x, y)


def petrov_transform(curve):
    """Map limit-curve points onto the curve ``e^-x + e^-y = 1``.

    ``x -> d x + c`` and ``y -> -d (A - y) - log(1 - e^-c)``; the image of the
    whole curve is the arc between ``x = c`` and ``x = c + d``.
    """
    X = curve.d * curve.x + curve.c
    Y = -curve.d * (curve.A - curve.y) - log1mexp(curve.c)
    return X, Y


@dataclass(frozen=True)
class PetrovFit:
    s1: float
    s2: float
    newton_steps: int
    residual: float


def _petrov_residual(s1, s2, A, B):
    w = s2 - s1
    r1 = (log1mexp(s2) - log1mexp(s1)) / w - A
    r2 = (li2(math.exp(-s1)) - li2(math.exp(-s2)) + w * log1mexp(s2)) / (w * w) - B
    return np.array([r1, r2])


def petrov_endpoints(regime, start=None, tol=1e-12, max_steps=50):
    """Endpoints ``s1 < s2`` of the arc of ``e^-x + e^-y = 1`` whose bounding
    rectangle has aspect ``A`` and relative area ``B``.

    Solved by 2-D Newton on the aspect and area equations written in
    ``(s1, s2)``, started from ``start`` (default: ``(c, c + d)`` of the tilt).
    """
    t = solve_tilt(regime)
    if not t.d > 0.0:
        raise DomainError("the arc degenerates when d = 0 (B = A/2)")
    s1, s2 = (t.c, t.c + t.d) if start is None else map(float, start)
    A, B = regime.A, regime.B
    for step in range(max_steps + 1):
        r = _petrov_residual(s1, s2, A, B)
        res = float(np.max(np.abs(r)))
        if res < tol:
            return PetrovFit(float(s1), float(s2), step, res)
        if step == max_steps:
            break
        J = jacobian(type(t)(s1, s2 - s1)).matrix()
        Js = np.column_stack([J[:, 0] - J[:, 1], J[:, 1]])
        ds = np.linalg.solve(Js, r)
        s1, s2 = s1 - ds[0], s2 - ds[1]
    raise ConvergenceError(f"petrov_endpoints residual {res:.3e}", residual=res,
                           iterations=max_steps)


# --- discrepancies ----------------------------------------------------------

def max_discrepancy(gaps, tilt: DiscreteTilt):
    """``max_j |sum_{i<=j} (x_i - q_i/p_i)|`` for one gap vector (or a batch)."""
    gaps = np.asarray(gaps, dtype=float)
    mean = 1.0 / np.expm1(_exponents(tilt))
    return np.max(np.abs(np.cumsum(gaps - mean, axis=-1)), axis=-1)


def boundary_distance(parts, curve):
    """Sup-norm distance on ``curve.x`` between ``lambda_{floor(m x)}/m`` and
    ``y(x)``, with ``lambda_0 = l`` taken from ``A m``."""
    parts = np.asarray(parts, dtype=float)
    m = parts.shape[-1]
    ell = curve.A * m
    full = np.concatenate([np.full(parts.shape[:-1] + (1,), ell), parts], axis=-1)
    idx = np.minimum(np.floor(m * curve.x + 1e-12).astype(int), m)
    return np.max(np.abs(full[..., idx] / m - curve.y), axis=-1)
