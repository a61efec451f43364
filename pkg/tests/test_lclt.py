import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.signal import fftconvolve

from boxpart.errors import CapExceededError, DomainError
from boxpart.exact import coeff
from boxpart.lclt import (GeometricFamily, diff_sup_error, exact_joint_pmf, log_normal_approx,
                          normal_approx, sup_error, tilted_count)
from boxpart.params import AspectFill, solve_tilt


def convolution_oracle(p, a_max, b_max):
    # direct 2-D convolution of truncated pmfs, one variable at a time
    m = len(p) - 1
    out = np.zeros((a_max + 1, b_max + 1))
    out[0, 0] = 1.0
    for j, pj in enumerate(p):
        k = np.arange(a_max + 1)
        single = np.zeros((a_max + 1, b_max + 1))
        ok = k * j <= b_max
        single[k[ok], k[ok] * j] = pj * (1 - pj) ** k[ok]
        out = fftconvolve(out, single)[:a_max + 1, :b_max + 1]
    return np.clip(out, 0, None)


def test_matches_convolution_oracle():
    t = solve_tilt(AspectFill(1.0, 1 / 3))
    fam = GeometricFamily.tilted(t.c, t.d, 6)
    table = exact_joint_pmf(fam, tail_eps=1e-14)
    ref = convolution_oracle(fam.p, table.a_max, table.b_max)
    np.testing.assert_allclose(table.probs, ref, atol=1e-13)


def test_single_variable_is_geometric():
    table = exact_joint_pmf(GeometricFamily.fair(0))
    np.testing.assert_allclose(table.probs[:4, 0], [0.5, 0.25, 0.125, 0.0625])


@given(st.integers(1, 12), st.floats(0.05, 0.95))
def test_table_mass_and_moments(m, p):
    fam = GeometricFamily(np.full(m + 1, p))
    table = exact_joint_pmf(fam, tail_eps=1e-10)
    assert 0 <= table.truncation_error <= 1e-10
    mom = fam.moments()
    a = np.arange(table.a_max + 1)[:, None]
    b = np.arange(table.b_max + 1)[None, :]
    assert float((a * table.probs).sum()) == pytest.approx(mom.mu, rel=1e-6, abs=1e-8)
    assert float((b * table.probs).sum()) == pytest.approx(mom.nu, rel=1e-6, abs=1e-8)


def test_pmf_bounds():
    table = exact_joint_pmf(GeometricFamily.fair(3))
    assert table.pmf(-1, 0) == 0.0
    with pytest.raises(DomainError):
        table.pmf(table.a_max + 1, 0)


def test_normal_density_integrates_to_one():
    fam = GeometricFamily.fair(30)
    mom = fam.moments()
    a = np.arange(-40, 140)[:, None]
    b = np.arange(-400, 1700)[None, :]
    assert float(normal_approx(a, b, mom).sum()) == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(np.log(normal_approx(3, 40, mom)), log_normal_approx(3, 40, mom))


@pytest.mark.parametrize("family", ["fair", "tilted"])
def test_errors_shrink(family):
    t = solve_tilt(AspectFill(1.0, 1 / 3))
    fams = [GeometricFamily.fair(m) if family == "fair" else GeometricFamily.tilted(t.c, t.d, m)
            for m in (10, 20)]
    sups = [sup_error(f) for f in fams]
    diffs = [f.m ** 4 * diff_sup_error(f) for f in fams]
    assert sups[1] < sups[0]
    assert diffs[1] < diffs[0]


@pytest.mark.parametrize("m, ell, n", [(6, 6, 10), (8, 5, 17), (12, 12, 48), (10, 15, 70)])
def test_enumeration_identity(m, ell, n):
    assert tilted_count(m, ell, n) == pytest.approx(coeff(m, ell, n), rel=1e-9)


def test_enumeration_identity_reflected():
    assert tilted_count(6, 6, 30) == pytest.approx(coeff(6, 6, 30), rel=1e-9)


def test_family_validation():
    with pytest.raises(DomainError):
        GeometricFamily([0.5, 1.0])
    with pytest.raises(DomainError):
        GeometricFamily([0.3, 0.5], delta=0.4)
    assert GeometricFamily([0.3, 0.6]).delta == pytest.approx(0.3)
    with pytest.raises(CapExceededError):
        exact_joint_pmf(GeometricFamily.fair(61))


def test_central_relative_error_recorded():
    # relative error at the mean; only its decrease is asserted, not a rate
    t = solve_tilt(AspectFill(1.0, 1 / 3))
    errs = []
    for m in (10, 20, 40):
        fam = GeometricFamily.tilted(t.c, t.d, m)
        mom = fam.moments()
        a, b = round(mom.mu), round(mom.nu)
        errs.append(abs(exact_joint_pmf(fam).pmf(a, b) / normal_approx(a, b, mom) - 1))
    print("central relative errors:", errs)
    assert errs[0] > errs[1] > errs[2]
