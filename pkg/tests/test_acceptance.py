"""Acceptance criteria 1-15, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see conftest.py), and running this file directly prints
them without pytest.
"""

import math
import time
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from boxpart.asym import (estimate_theorem1, takacs_rate, theorem1_rate)
from boxpart.exact import binomial_total, brute_force_coeff, coeff, coeff_vector, kronecker_diff
from boxpart.asym import pak_panova_bound
from boxpart.lclt import GeometricFamily, diff_sup_error, sup_error, tilted_count
from boxpart.params import AspectFill, jacobian, psi, solve_discrete_tilt, solve_tilt
from boxpart.shape import boundary_distance, limit_curve, petrov_endpoints, sample_boxed_many

RESULTS = {}
ONE_THIRD = AspectFill(1.0, 1 / 3)
MS = (12, 24, 48, 96)

# measured ratio at m = 96 +- half its gap to 1 (see ledger)
T1_BAND = (0.98955, 0.99652)
T2_BAND = (0.98450, 0.99483)


def record(k, ok, detail):
    RESULTS[k] = (bool(ok), detail)
    assert ok, detail


def strictly_decreasing(xs):
    return all(a > b for a, b in zip(xs, xs[1:]))


def solver_grid():
    for A in np.linspace(0.5, 3.0, 10):
        for k in range(1, 11):
            yield AspectFill(float(A), float(A) / 2 * k / 10)


def test_c01_exact_structure():
    t0 = time.perf_counter()
    bad = []
    for m in range(1, 31):
        for ell in range(1, 31):
            v = list(coeff_vector(m, ell))
            mid = len(v) // 2
            ok = (v == v[::-1] and sum(v) == binomial_total(m, ell)
                  and all(a <= b for a, b in zip(v[:mid], v[1:mid + 1]))
                  and (ell < m or v == list(coeff_vector(ell, m))))
            if not ok:
                bad.append((m, ell))
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 60, f"{len(bad)} bad boxes, {dt:.1f}s")


def test_c02_brute_force():
    bad = [(m, ell, n) for m in range(1, 8) for ell in range(1, 8)
           for n, v in enumerate(coeff_vector(m, ell)) if v != brute_force_coeff(m, ell, n)]
    record(2, not bad, f"{len(bad)} mismatches over m, l <= 7")


def test_c03_solver_residuals():
    worst, nonneg = 0.0, 0
    for reg in solver_grid():
        t = solve_tilt(reg)
        back = psi(t)
        worst = max(worst, abs(back.A - reg.A), abs(back.B - reg.B))
        nonneg += not np.all(jacobian(t).eigenvalues() < 0)
    record(3, worst < 1e-10 and nonneg == 0,
           f"max residual {worst:.2e}, {nonneg} non-negative-definite Jacobians")


def test_c04_theorem1_convergence():
    t0 = time.perf_counter()
    ratios = [math.exp(math.log(coeff(m, m, m * m // 3))
                       - estimate_theorem1(m, m, m * m // 3).log_value) for m in MS]
    dt = time.perf_counter() - t0
    gaps = [abs(r - 1) for r in ratios]
    ok = strictly_decreasing(gaps) and T1_BAND[0] <= ratios[-1] <= T1_BAND[1] and dt < 300
    record(4, ok, "ratios " + ", ".join(f"{r:.5f}" for r in ratios) + f", {dt:.1f}s")


def test_c05_center_coefficient():
    ratios = []
    for m in MS:
        ref = math.log(math.sqrt(3) / (math.pi * m * m)) + m * math.log(4)
        ratios.append(math.exp(math.log(coeff(m, m, m * m // 2)) - ref))
    gaps = [abs(r - 1) for r in ratios]
    record(5, strictly_decreasing(gaps), "ratios " + ", ".join(f"{r:.5f}" for r in ratios))


def test_c06_theorem2_convergence():
    d = solve_tilt(ONE_THIRD).d
    ratios = [kronecker_diff(m, m, m * m // 3) / (d / m * coeff(m, m, m * m // 3)) for m in MS]
    gaps = [abs(r - 1) for r in ratios]
    ok = strictly_decreasing(gaps) and T2_BAND[0] <= ratios[-1] <= T2_BAND[1]
    record(6, ok, "ratios " + ", ".join(f"{r:.5f}" for r in ratios))


def test_c07_pak_panova():
    # literal reading: N_{n+1} - N_n against the bound at the same (m, l, n)
    fails, total = [], 0
    for m in range(1, 13):
        for ell in range(1, 13):
            v = coeff_vector(m, ell)
            for n in range(1, m * ell):
                if not 2 * n < m * ell:
                    break
                total += 1
                if v[n + 1] - v[n] < pak_panova_bound(m, ell, n):
                    fails.append((m, ell, n))
    record(7, not fails, f"{len(fails)} of {total} triples below the bound"
           + (f", first {fails[0]}" if fails else ""))


def test_c08_lclt_decay():
    t0 = time.perf_counter()
    t = solve_tilt(ONE_THIRD)
    sups = {}
    for name, make in [("fair", GeometricFamily.fair),
                       ("tilted", lambda m: GeometricFamily.tilted(t.c, t.d, m))]:
        sups[name] = [sup_error(make(m)) for m in (10, 20, 40)]
    dt = time.perf_counter() - t0
    ok = all(strictly_decreasing(v) for v in sups.values()) and dt < 180
    record(8, ok, "; ".join(f"{k} " + ", ".join(f"{x:.4f}" for x in v)
                            for k, v in sups.items()) + f"; {dt:.1f}s")


def test_c09_diff_bounded():
    t = solve_tilt(ONE_THIRD)
    scaled = {}
    for name, make in [("fair", GeometricFamily.fair),
                       ("tilted", lambda m: GeometricFamily.tilted(t.c, t.d, m))]:
        scaled[name] = [m ** 4 * diff_sup_error(make(m)) for m in (10, 20, 40)]
    ok = all(b <= 1.2 * a for v in scaled.values() for a, b in zip(v, v[1:]))
    record(9, ok, "; ".join(f"{k} " + ", ".join(f"{x:.3f}" for x in v)
                            for k, v in scaled.items()))


def test_c10_enumeration_identity():
    val, ref = tilted_count(12, 12, 48), coeff(12, 12, 48)
    rel = abs(val - ref) / ref
    record(10, rel < 1e-8, f"relative error {rel:.2e}")


def test_c11_petrov():
    worst, count = 0.0, 0
    for reg in solver_grid():
        t = solve_tilt(reg)
        if not t.d > 0.05:
            continue
        fit = petrov_endpoints(reg)
        worst = max(worst, abs(fit.s1 - t.c), abs(fit.s2 - t.c - t.d))
        count += 1
    record(11, worst < 1e-8, f"max endpoint error {worst:.2e} over {count} points")


@pytest.mark.slow
def test_c12_limit_shape():
    t0 = time.perf_counter()
    curve = limit_curve(ONE_THIRD)
    medians = []
    for m in (120, 200, 300):
        res = sample_boxed_many(m, m, m * m // 3, 200, seed=20240 + m)
        medians.append(float(np.median(boundary_distance(res.parts, curve))))
    dt = time.perf_counter() - t0
    ok = medians[-1] < 0.05 and strictly_decreasing(medians) and dt < 600
    record(12, ok, "medians " + ", ".join(f"{x:.4f}" for x in medians) + f", {dt:.0f}s")


def test_c13_uniformity():
    m, ell, n = 3, 3, 4
    res = sample_boxed_many(m, ell, n, 100_000, seed=13)
    counts = Counter(map(tuple, res.parts))
    k = coeff(m, ell, n)
    p = chisquare(list(counts.values())).pvalue if len(counts) == k else 0.0
    record(13, len(counts) == k and p > 1e-3, f"{len(counts)} of {k} partitions seen, p = {p:.3f}")


def test_c14_takacs_comparison():
    two_log2 = 2 * math.log(2)
    above = all(takacs_rate(AspectFill(1.0, B)) > theorem1_rate(AspectFill(1.0, B))
                and two_log2 > theorem1_rate(AspectFill(1.0, B)) for B in (0.1, 0.2, 0.3, 0.4))
    center = AspectFill(1.0, 0.5)
    eq = (abs(takacs_rate(center) - theorem1_rate(center)) < 1e-9
          and abs(two_log2 - theorem1_rate(center)) < 1e-9)
    record(14, above and eq, f"strictly above for B < 1/2: {above}; equal at 1/2: {eq}")


def test_c15_discrete_expansion():
    t = solve_tilt(ONE_THIRD)
    us, vs = [], []
    for m in (100, 200, 400, 800):
        td = solve_discrete_tilt(m, m, m * m / 3)
        us.append(m * (td.c - t.c))
        vs.append(m * (td.d - t.d))

    def cauchy(x):
        steps = np.abs(np.diff(x))
        return all(b <= 0.6 * a for a, b in zip(steps, steps[1:]))

    record(15, cauchy(us) and cauchy(vs),
           "m(c_m - c) " + ", ".join(f"{u:.5f}" for u in us)
           + "; m(d_m - d) " + ", ".join(f"{v:.5f}" for v in vs))


def summary_lines():
    return [f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
            for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(summary_lines()))
