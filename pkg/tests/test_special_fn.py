import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from boxpart.errors import DomainError
from boxpart.special_fn import bose, dilog, li2, log1mexp

PREC = 40


def series_oracle(x, terms=400):
    # direct sum of (1 - x)^k / k^2, only sensible for |1 - x| <= 1/2
    with mpmath.workdps(PREC):
        t = 1 - mpmath.mpf(x)
        return float(mpmath.fsum(t ** k / k ** 2 for k in range(1, terms)))


def test_dilog_at_one():
    assert dilog(1.0) == 0.0


def test_dilog_half_matches_series():
    assert dilog(0.5) == pytest.approx(series_oracle(0.5), abs=1e-15)


def test_dilog_reflection_at_point_three():
    x = 0.3
    lhs = dilog(x) + dilog(1 - x)
    rhs = math.pi ** 2 / 6 - math.log(x) * math.log(1 - x)
    assert abs(lhs - rhs) < 1e-14


@pytest.mark.parametrize("x", np.round(np.arange(0.1, 2.0, 0.1), 10))
def test_dilog_matches_integral(x):
    val, _ = quad(lambda t: math.log(t) / (1 - t) if t != 1 else -1.0, 1.0, x, limit=200,
                  epsabs=1e-13, epsrel=1e-13)
    assert dilog(x) == pytest.approx(val, abs=1e-12)


@given(st.floats(min_value=1e-9, max_value=2 - 1e-9))
def test_dilog_matches_mpmath(x):
    with mpmath.workdps(PREC):
        ref = float(mpmath.polylog(2, 1 - mpmath.mpf(x)))
    assert abs(dilog(x) - ref) <= 1e-14 * max(1.0, abs(ref))


def test_dilog_decreasing_on_grid():
    grid = np.linspace(0.01, 1.99, 199)
    vals = [dilog(x) for x in grid]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("x", [0.0, -1.0, 2.0, 3.5])
def test_dilog_domain(x):
    with pytest.raises(DomainError):
        dilog(x)


@given(st.floats(min_value=-1.0, max_value=1.0, exclude_min=True))
def test_li2_matches_mpmath(z):
    with mpmath.workdps(PREC):
        ref = float(mpmath.polylog(2, mpmath.mpf(z)))
    assert abs(li2(z) - ref) <= 1e-14 * max(1.0, abs(ref))


def test_log1mexp_examples():
    assert log1mexp(math.log(2)) == pytest.approx(math.log(0.5), rel=1e-15)
    assert log1mexp(50.0) == pytest.approx(-math.exp(-50.0), rel=1e-14)
    with mpmath.workdps(PREC):
        ref = float(mpmath.log(1 - mpmath.exp(-mpmath.mpf("1e-8"))))
    assert log1mexp(1e-8) == pytest.approx(ref, rel=1e-14)


@given(st.floats(min_value=1e-12, max_value=50.0))
def test_log1mexp_relative_error(y):
    with mpmath.workdps(PREC):
        ref = float(mpmath.log(-mpmath.expm1(-mpmath.mpf(y))))
    assert abs(log1mexp(y) - ref) <= 1e-14 * abs(ref)


@given(st.floats(min_value=1e-12, max_value=49.0), st.floats(min_value=1e-6, max_value=1.0))
def test_log1mexp_increasing(y, dy):
    assert log1mexp(y + dy) > log1mexp(y)


def test_log1mexp_vectorized_and_domain():
    y = np.array([0.1, 1.0, 10.0])
    np.testing.assert_array_equal(log1mexp(y), [log1mexp(float(v)) for v in y])
    with pytest.raises(DomainError):
        log1mexp(0.0)
    with pytest.raises(DomainError):
        log1mexp(np.array([1.0, -1.0]))


def test_bose_is_mean_of_geometric():
    s = 0.7
    q = math.exp(-s)
    assert bose(s) == pytest.approx(q / (1 - q), rel=1e-15)
