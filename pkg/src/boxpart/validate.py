"""Fast invariant checks, run by ``boxpart validate``.

Each check returns ``(passed, detail)``; :func:`run_all` collects them.
These are smoke-level versions of the test-suite properties, sized to
finish in a few seconds.
"""

import math

import numpy as np

from . import exact, lclt, params, shape
from .asym import takacs_rate, theorem1_rate
from .special_fn import dilog, log1mexp


def check_dilog_reflection():
    worst = 0.0
    for x in np.linspace(0.05, 0.95, 19):
        lhs = dilog(x) + dilog(1.0 - x)
        rhs = math.pi ** 2 / 6 - math.log(x) * math.log1p(-x)
        worst = max(worst, abs(lhs - rhs))
    return worst < 1e-13, f"max error {worst:.2e}"


def check_log1mexp_monotone():
    y = np.geomspace(1e-12, 50, 400)
    v = log1mexp(y)
    return bool(np.all(np.diff(v) > 0)), "strictly increasing on [1e-12, 50]"


def check_coefficients():
    for m in range(1, 13):
        for ell in range(1, 13):
            v = list(exact.coeff_vector(m, ell))
            if v != v[::-1] or sum(v) != exact.binomial_total(m, ell):
                return False, f"symmetry or total fails at ({m}, {ell})"
            half = v[:len(v) // 2 + 1]
            if any(a > b for a, b in zip(half, half[1:])):
                return False, f"unimodality fails at ({m}, {ell})"
            if ell <= m and v != list(exact.coeff_vector(ell, m)):
                return False, f"transpose fails at ({m}, {ell})"
    return True, "m, l <= 12"


def check_brute_force():
    for m in range(1, 6):
        for ell in range(1, 6):
            v = exact.coeff_vector(m, ell)
            if any(v[n] != exact.brute_force_coeff(m, ell, n) for n in range(len(v))):
                return False, f"mismatch at ({m}, {ell})"
    return True, "m, l <= 5"


def check_solver():
    worst = 0.0
    for A in np.linspace(0.5, 3.0, 6):
        for frac in np.linspace(0.1, 1.0, 6):
            reg = params.AspectFill(A, frac * A / 2)
            t = params.solve_tilt(reg)
            back = params.psi(t)
            worst = max(worst, abs(back.A - reg.A), abs(back.B - reg.B))
            if not np.all(params.jacobian(t).eigenvalues() < 0):
                return False, f"jacobian not negative definite at {reg}"
    return worst < 1e-10, f"max residual {worst:.2e}"


def check_discrete_solver():
    t = params.solve_discrete_tilt(40, 40, 533)
    r = params.discrete_residuals(t.c, t.d, 40, 40, 533)
    worst = float(np.max(np.abs(r)))
    return worst < 1e-8, f"residual {worst:.2e}"


def check_enumeration_identity():
    val = lclt.tilted_count(8, 8, 21)
    ref = exact.coeff(8, 8, 21)
    rel = abs(val - ref) / ref
    return rel < 1e-8, f"relative error {rel:.2e}"


def check_limit_curve():
    curve = shape.limit_curve(params.AspectFill(1.0, 1 / 3))
    worst = float(np.max(np.abs(curve.implicit_residual())))
    return worst < 1e-10, f"implicit residual {worst:.2e}"


def check_petrov():
    reg = params.AspectFill(1.0, 1 / 3)
    t = params.solve_tilt(reg)
    fit = shape.petrov_endpoints(reg)
    err = max(abs(fit.s1 - t.c), abs(fit.s2 - t.c - t.d))
    return err < 1e-8, f"endpoint error {err:.2e}"


def check_takacs_center():
    reg = params.AspectFill(1.0, 0.5)
    gap = abs(takacs_rate(reg) - theorem1_rate(reg))
    return gap < 1e-9, f"rate gap {gap:.2e} at B = 1/2"


def check_sampler():
    res = shape.sample_boxed_many(4, 4, 6, 200, seed=0)
    ok = all(shape.is_boxed_partition(p, 4, 6) for p in res.parts)
    return ok, "all samples are boxed partitions of n"


CHECKS = {
    "dilog_reflection": check_dilog_reflection,
    "log1mexp_monotone": check_log1mexp_monotone,
    "coefficient_structure": check_coefficients,
    "brute_force": check_brute_force,
    "continuum_solver": check_solver,
    "discrete_solver": check_discrete_solver,
    "enumeration_identity": check_enumeration_identity,
    "limit_curve": check_limit_curve,
    "petrov_endpoints": check_petrov,
    "takacs_center": check_takacs_center,
    "sampler_support": check_sampler,
}


def run_all():
    """List of ``(name, passed, detail)``; exceptions count as failures."""
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
