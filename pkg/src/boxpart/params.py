"""Tilt parameters of the geometric ensemble.

The continuum map ``psi`` sends a tilt ``(c, d)`` to the aspect/fill pair

    A = int_0^1 dt / (exp(c + d t) - 1)
    B = int_0^1 t dt / (exp(c + d t) - 1)

and :func:`solve_tilt` inverts it.  The discrete analogue replaces the
integrals by sums over ``j = 0..m`` and is solved by
:func:`solve_discrete_tilt`.

Closed forms are used away from ``d = 0``.  Close to ``d = 0`` they are
differences of nearly equal terms, so for ``d < SMALL_D`` (and ``d <= c``,
which keeps the integrand's pole at ``t = -c/d`` away from [0, 1]) the
integrals are evaluated by Gauss-Legendre quadrature instead.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DegenerateError, DomainError
from .special_fn import li2, log1mexp

SMALL_D = 0.1
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
_GL_T = 0.5 * (_GL_NODES + 1.0)
_GL_W = 0.5 * _GL_WEIGHTS

BISECTION_CAP = 200
NEWTON_CAP = 50
TILT_TOL = 1e-11
DISCRETE_TOL = 1e-9
_TINY_C = 1e-250


@dataclass(frozen=True)
class AspectFill:
    """A regime point ``(A, B)`` normalized so that ``0 < B <= A/2``.

    ``reflected`` records that the caller's fill was ``A - B`` (the image of
    ``n -> l*m - n``).
    """

    A: float
    B: float
    reflected: bool = False

    @classmethod
    def normalize(cls, A, B):
        A = float(A)
        B = float(B)
        if not (A > 0.0 and 0.0 < B < A):
            raise DomainError(f"need A > 0 and 0 < B < A, got A={A!r}, B={B!r}")
        if B > A / 2.0:
            return cls(A, A - B, True)
        return cls(A, B, False)

    @classmethod
    def from_box(cls, m, ell, n):
        """Regime of the box problem ``(m, l, n)``, reflected if ``n > l*m/2``."""
        if not 0 < n < ell * m:
            raise DegenerateError(f"n must satisfy 0 < n < l*m, got n={n}")
        reflected = 2 * n > ell * m
        if reflected:
            n = ell * m - n
        return cls(ell / m, n / m ** 2, reflected)


@dataclass(frozen=True)
class Tilt:
    """Continuum tilt ``(c, d)``.

    ``log_c`` is only set when ``c`` is too small to hold in a double
    (very large aspect ratios); otherwise it is ``log(c)``.
    """

    c: float
    d: float
    log_c: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))
        if self.log_c is None and self.c > 0.0:
            object.__setattr__(self, "log_c", math.log(self.c))


@dataclass(frozen=True)
class DiscreteTilt:
    """Solution of the discrete equations for a box of ``m`` rows.

    ``ell`` and ``n`` are the targets that were solved for; they are kept so
    callers can recover ``A`` and ``B`` and the residuals.
    """

    c: float
    d: float
    m: int
    ell: float = float("nan")
    n: float = float("nan")

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "m", int(self.m))

    def s(self):
        """Exponents ``s_j = c + d j/m`` for ``j = 0..m``, so ``q_j = exp(-s_j)``."""
        return self.c + self.d * np.arange(self.m + 1) / self.m

    def probabilities(self):
        """Success parameters ``p_j = 1 - exp(-s_j)``."""
        return -np.expm1(-self.s())


@dataclass(frozen=True)
class JacobianMatrix:
    """Derivative of ``psi`` at a tilt; rows are (A, B), columns (c, d)."""

    A_c: float
    A_d: float
    B_c: float
    B_d: float

    def matrix(self):
        return np.array([[self.A_c, self.A_d], [self.B_c, self.B_d]])

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix())

    def det(self):
        return self.A_c * self.B_d - self.A_d * self.B_c


def _check_tilt(c, d):
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"tilt requires c > 0, got c={c!r}")
    if not (d >= 0.0 and math.isfinite(d)):
        raise DomainError(f"tilt requires d >= 0, got d={d!r}")


def _use_quadrature(c, d):
    return 0.0 < d < SMALL_D and d <= c


def _fill(c, d):
    # closed form of B; finite even when c has underflowed to 0
    num = d * log1mexp(c + d) + li2(math.exp(-c)) - li2(math.exp(-c - d))
    return num / (d * d)


def _psi(c, d):
    if d == 0.0:
        a = 1.0 / math.expm1(c)
        return a, a / 2.0
    if _use_quadrature(c, d):
        g = 1.0 / np.expm1(c + d * _GL_T)
        return float(_GL_W @ g), float(_GL_W @ (_GL_T * g))
    # A = [log(1 - e^{-c-d}) - log(1 - e^{-c})] / d, written as a log1p
    ratio = math.exp(-c) * -math.expm1(-d) / -math.expm1(-c)
    return math.log1p(ratio) / d, _fill(c, d)


def psi(tilt):
    """Map a tilt to its regime point ``(A, B)``.

    >>> r = psi(Tilt(math.log(2.0), 0.0))
    >>> round(r.A, 12), round(r.B, 12)
    (1.0, 0.5)
    """
    _check_tilt(tilt.c, tilt.d)
    a, b = _psi(tilt.c, tilt.d)
    return AspectFill(a, b, False)


def _h_moments(c, d):
    """Integrals of ``t^k h(c + d t)`` for k = 0, 1, 2, ``h(s) = e^s/(e^s-1)^2``."""
    if d == 0.0:
        h = math.exp(c) / math.expm1(c) ** 2
        return h, h / 2.0, h / 3.0
    if _use_quadrature(c, d):
        e = np.exp(c + d * _GL_T)
        h = e / np.expm1(c + d * _GL_T) ** 2
        return (float(_GL_W @ h), float(_GL_W @ (_GL_T * h)),
                float(_GL_W @ (_GL_T ** 2 * h)))
    a, b = _psi(c, d)
    g1 = 1.0 / math.expm1(c + d)
    i0 = math.exp(c) * math.expm1(d) / (d * math.expm1(c) * math.expm1(c + d))
    i1 = (a - g1) / d
    i2 = (2.0 * b - g1) / d
    return i0, i1, i2


def jacobian(tilt):
    """Jacobian of ``psi``; every entry is minus a moment of ``h``.

    Symmetric by construction (``A_d`` and ``B_c`` are the same number).
    """
    _check_tilt(tilt.c, tilt.d)
    i0, i1, i2 = _h_moments(tilt.c, tilt.d)
    return JacobianMatrix(-i0, -i1, -i1, -i2)


def delta(tilt):
    """The determinant constant Delta of a tilt.

    For ``d >= SMALL_D`` this is the closed form in ``A, B, c, d``; below
    that the closed form cancels catastrophically and the equivalent
    ``I0*I2 - I1^2`` moment form is used.  At ``d = 0`` it reduces to
    ``A^2 (A+1)^2 / 12``.
    """
    c, d = tilt.c, tilt.d
    _check_tilt(c, d)
    if d == 0.0:
        a = 1.0 / math.expm1(c)
        return a * a * (a + 1.0) ** 2 / 12.0
    if d < SMALL_D:
        i0, i1, i2 = _h_moments(c, d)
        return i0 * i2 - i1 * i1
    a, b = _psi(c, d)
    ec1 = math.expm1(c)
    num = 2.0 * b * math.exp(c) * math.expm1(d) + 2.0 * a * ec1 - 1.0
    return num / (d * d * math.expm1(c + d) * ec1) - a * a / (d * d)


def c_of_d(A, d):
    """The ``c`` solving the A-equation for given ``A`` and ``d``."""
    if d == 0.0:
        return math.log1p(1.0 / A)
    return log1mexp((A + 1.0) * d) - log1mexp(A * d)


def _newton_polish(A, B, c, d, tol=TILT_TOL):
    for it in range(NEWTON_CAP + 1):
        a, b = _psi(c, d)
        r = np.array([a - A, b - B])
        res = float(np.max(np.abs(r)))
        if res < tol * 1e-2:
            return c, d, res, it
        if it == NEWTON_CAP:
            break
        J = jacobian(Tilt(c, d)).matrix()
        step = np.linalg.solve(J, r)
        lam = 1.0
        while c - lam * step[0] <= 0.0 or d - lam * step[1] < 0.0:
            lam /= 2.0
        c_new, d_new = c - lam * step[0], d - lam * step[1]
        if c_new == c and d_new == d:
            return c, d, res, it
        c, d = c_new, d_new
    return c, d, res, NEWTON_CAP


def _solve_large_aspect(A, B, F, lo, hi):
    # c ~ exp(-A d) is too small for Newton in (c, d); the B-equation no
    # longer depends on c, so bisect d to full precision and keep log(c).
    for _ in range(BISECTION_CAP):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if F(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    res = abs(F(d))
    if not res < TILT_TOL:
        raise ConvergenceError(
            f"solve_tilt residual {res:.3e} above {TILT_TOL:.0e}", residual=res)
    log_c = log1mexp(d) - A * d
    return Tilt(math.exp(log_c), d, log_c)


def solve_tilt(regime):
    """Solve ``psi(c, d) = (A, B)`` for a normalized regime.

    Bisection on ``F(d) = psi_B(c(A, d), d)``, which is strictly decreasing
    from ``A/2`` to 0, brackets ``d``; a 2-D Newton iteration with the
    analytic Jacobian then polishes ``(c, d)`` jointly.

    Raises
    ------
    DomainError
        If ``B > A/2`` (normalize first) or the point is not in the domain.
    ConvergenceError
        If the residual stays above ``TILT_TOL``.
    """
    A, B = float(regime.A), float(regime.B)
    if not (A > 0.0 and B > 0.0):
        raise DomainError(f"need A > 0 and B > 0, got A={A!r}, B={B!r}")
    if B > A / 2.0:
        raise DomainError("B > A/2; normalize with AspectFill.normalize first")
    if B == A / 2.0:
        return Tilt(math.log1p(1.0 / A), 0.0)

    def F(d):
        c = c_of_d(A, d)
        if c < _TINY_C:
            return _fill(c, d) - B
        return _psi(c, d)[1] - B

    lo, hi = 0.0, 1.0
    steps = 0
    while F(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        steps += 1
        if steps > BISECTION_CAP:
            raise ConvergenceError("could not bracket d", iterations=steps)
    while hi - lo > 1e-9 * (1.0 + hi) and steps < BISECTION_CAP:
        mid = 0.5 * (lo + hi)
        if F(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        steps += 1
    d = 0.5 * (lo + hi)
    if c_of_d(A, d) < _TINY_C:
        return _solve_large_aspect(A, B, F, lo, hi)
    c, d, res, _ = _newton_polish(A, B, c_of_d(A, d), d)
    if not res < TILT_TOL:
        raise ConvergenceError(
            f"solve_tilt residual {res:.3e} above {TILT_TOL:.0e}", residual=res)
    return Tilt(c, d)


def expansion_coefficients(regime):
    """First-order coefficients ``(u, v)`` with ``c_m = c + u/m + O(m^-2)``.

    From the Euler-Maclaurin corrections of the discrete sums:
    ``(u, v) = J^{-1} (1 - A1, 1/2 - B1)`` with
    ``A1 = (1/p(0) + 1/p(1))/2`` and ``B1 = 1/(2 p(1))``.
    """
    t = solve_tilt(regime)
    p0 = -math.expm1(-t.c)
    p1 = -math.expm1(-t.c - t.d)
    a1 = 0.5 * (1.0 / p0 + 1.0 / p1)
    b1 = 0.5 / p1
    J = jacobian(t).matrix()
    u, v = np.linalg.solve(J, np.array([1.0 - a1, 0.5 - b1]))
    return float(u), float(v)


def _discrete_sums(c, d, m):
    j = np.arange(m + 1)
    s = c + d * j / m
    g = 1.0 / np.expm1(s)          # q/p, mean of X_j
    h = g * (1.0 + g)              # q/p^2, variance of X_j
    return j, g, h


def discrete_residuals(c, d, m, ell, n):
    """Residuals of the two discrete equations (mean of S minus ell, of T minus n)."""
    j, g, _ = _discrete_sums(c, d, m)
    return math.fsum(g) - ell, math.fsum(j * g) - n


def _discrete_newton(m, ell, n, c, d, tol):
    # Newton in (log c, d) with a backtracking line search on the scaled
    # residual; returns the best (c, d, residual) seen.
    scale = np.array([1.0, float(m)])
    best = None
    for it in range(NEWTON_CAP + 1):
        j, g, h = _discrete_sums(c, d, m)
        r = np.array([math.fsum(g) - ell, math.fsum(j * g) - n])
        res = float(np.max(np.abs(r)))
        if best is None or res < best[2]:
            best = (c, d, res)
        if res < tol * 1e-2 or it == NEWTON_CAP:
            break
        J = -np.array([[c * math.fsum(h), math.fsum(j * h) / m],
                       [c * math.fsum(j * h), math.fsum(j * j * h) / m]])
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        norm0 = np.max(np.abs(r / scale))
        lam = 1.0
        while lam >= 1e-12:
            c_new = c * math.exp(-lam * step[0]) if abs(lam * step[0]) < 700 else 0.0
            d_new = d - lam * step[1]
            if c_new > 0.0 and d_new >= 0.0:
                jn, gn, _ = _discrete_sums(c_new, d_new, m)
                rn = np.array([gn.sum() - ell, (jn * gn).sum() - n])
                if np.max(np.abs(rn / scale)) < norm0:
                    break
            lam /= 2.0
        if lam < 1e-12:
            break
        c, d = c_new, d_new
    return best


def _c_for_d(d, m, ell):
    # S(c) = sum g_j is strictly decreasing in c; bracket with g_0 alone
    hi = math.log1p((m + 1) / ell)
    lo = 0.5 * math.log1p(1.0 / ell)
    f = lambda logc: math.fsum(_discrete_sums(math.exp(logc), d, m)[1]) - ell
    return math.exp(brentq(f, math.log(lo), math.log(hi), xtol=1e-15, rtol=4e-16))


def _discrete_bracketed(m, ell, n):
    # T(d) = sum j g_j with c = c(d) tied to S = ell decreases from ell*m/2 to 0
    def T(d):
        c = _c_for_d(d, m, ell)
        j, g, _ = _discrete_sums(c, d, m)
        return math.fsum(j * g) - n

    hi = 1.0
    while T(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise ConvergenceError("could not bracket d_m", residual=T(hi))
    d = brentq(T, 0.0, hi, xtol=1e-14, rtol=4e-16)
    return _c_for_d(d, m, ell), d


def solve_discrete_tilt(m, ell, n, tol=DISCRETE_TOL):
    """Solve the discrete equations ``E S_m = ell`` and ``E T_m = n``.

    ``ell`` and ``n`` are normally integers, but any real targets with
    ``0 < n <= ell*m/2`` are accepted.  Newton (in ``log c`` and ``d``) is
    seeded at the continuum tilt for ``(ell/m, n/m^2)``; if that fails, a
    nested bracketing solve supplies the start.

    Raises
    ------
    DegenerateError
        If ``n`` is 0 or ``ell*m`` (the count is 1 and no tilt exists).
    DomainError
        If ``n > ell*m/2``; reflect with ``n -> ell*m - n`` first.
    ConvergenceError
        If either residual stays above ``tol``.
    """
    if m < 1 or not ell > 0:
        raise DomainError(f"need m >= 1 and ell > 0, got m={m}, ell={ell}")
    if n == 0 or n == ell * m:
        raise DegenerateError(f"n={n} is degenerate for the {m}x{ell} box")
    if not 0 < n <= ell * m / 2:
        raise DomainError(f"need 0 < n <= ell*m/2, got n={n}")
    if 2 * n == ell * m:
        return DiscreteTilt(math.log1p((m + 1) / ell), 0.0, m, ell, n)

    seed = solve_tilt(AspectFill(ell / m, n / m ** 2))
    c, d, res = _discrete_newton(m, ell, n, max(seed.c, 1e-300), seed.d, tol)
    if not res < tol:
        c0, d0 = _discrete_bracketed(m, ell, n)
        c, d, res = _discrete_newton(m, ell, n, c0, d0, tol)
    if not res < tol:
        raise ConvergenceError(
            f"discrete tilt residual {res:.3e} above {tol:.0e}", residual=res)
    return DiscreteTilt(c, d, m, ell, n)
