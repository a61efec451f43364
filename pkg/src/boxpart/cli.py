"""Command-line interface.

Every subcommand writes one table, either CSV (header row first) or a JSON
object with ``inputs``, ``outputs`` and ``diagnostics`` keys.  Integers that
may exceed 64 bits are written as decimal strings, and non-finite floats as
``"inf"``, ``"-inf"`` or ``"nan"``.

Exit codes: 0 success, 1 a validation check failed, 2 bad usage or domain,
3 a solver did not converge.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import asym, exact, lclt, params, shape
from .errors import ConvergenceError, DomainError, SamplingBudgetError

OUTPUT_DIR_ENV = "BOXPART_OUTPUT_DIR"

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        v = int(v)
        # keep anything past 2^53 exact for JSON readers that use doubles
        return v if abs(v) < 2 ** 53 else str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else _cell(v)
    return v


class Result:
    """One run's table plus the inputs and diagnostics that go with it."""

    def __init__(self, columns, rows, inputs, diagnostics=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.inputs = inputs
        self.diagnostics = diagnostics or {}

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()

    def to_json(self):
        outputs = [dict(zip(self.columns, r)) for r in self.rows]
        doc = {"inputs": self.inputs, "outputs": outputs, "diagnostics": self.diagnostics}
        return json.dumps(_json_value(doc), indent=2, sort_keys=True) + "\n"


# --- subcommands -------------------------------------------------------------

def cmd_exact(a):
    if a.n is not None:
        return Result(["m", "l", "n", "N"], [[a.m, a.l, a.n, exact.coeff(a.m, a.l, a.n)]],
                      vars_of(a))
    v = exact.coeff_vector(a.m, a.l)
    return Result([f"N{n}" for n in range(len(v))], [list(v)], vars_of(a),
                  {"total": exact.binomial_total(a.m, a.l)})


def cmd_diff(a):
    n = min(a.n, a.m * a.l - a.n - 1)
    val = exact.kronecker_diff(a.m, a.l, n)
    sign = 1 if n == a.n else -1
    return Result(["m", "l", "n", "N_next_minus_N"], [[a.m, a.l, a.n, sign * val]], vars_of(a))


def cmd_solve(a):
    reg = params.AspectFill.normalize(a.A, a.B)
    t = params.solve_tilt(reg)
    back = params.psi(t) if t.c > 0 else reg
    rA, rB = back.A - reg.A, back.B - reg.B
    row = [reg.A, reg.B, reg.reflected, t.c, t.d, params.delta(t), rA, rB]
    diag = {} if t.log_c is None else {"log_c": t.log_c}
    return Result(["A", "B", "reflected", "c", "d", "Delta", "residual_A", "residual_B"],
                  [row], vars_of(a), diag)


def cmd_solve_discrete(a):
    flip = 2 * a.n > a.l * a.m
    t = params.solve_discrete_tilt(a.m, a.l, a.l * a.m - a.n if flip else a.n)
    mom = asym.moments(t)
    res = params.discrete_residuals(t.c, t.d, t.m, t.ell, t.n)
    row = [a.m, a.l, a.n, flip, t.c, t.d, mom.mu, mom.nu, mom.alpha, mom.beta, mom.gamma,
           mom.Delta_m, mom.L_m, float(res[0]), float(res[1])]
    cols = ["m", "l", "n", "reflected", "c_m", "d_m", "mu", "nu", "alpha", "beta", "gamma",
            "Delta_m", "L_m", "residual_l", "residual_n"]
    return Result(cols, [row], vars_of(a))


ESTIMATORS = {
    "t1": asym.estimate_theorem1,
    "t1p": asym.estimate_theorem1prime,
    "takacs": asym.takacs_estimate,
    "diff": asym.estimate_difference,
}


def cmd_estimate(a):
    if a.method == "pp-bound":
        v = asym.pak_panova_bound(a.m, a.l, a.n)
        row = [a.method, math.log(v), v, math.log(v) / a.m, False]
    else:
        e = ESTIMATORS[a.method](a.m, a.l, a.n)
        row = [a.method, e.log_value, e.value, e.exponential_rate, e.regime_excluded]
    return Result(["method", "log_value", "value", "rate", "regime_excluded"], [row], vars_of(a))


def _log_int(v):
    return math.log(v) if v > 0 else -math.inf


def cmd_compare(a):
    if a.rates:
        rows = []
        for B in a.B:
            reg = params.AspectFill(a.A, B)
            rows.append([a.A, B, asym.theorem1_rate(reg), asym.takacs_rate(reg), 2 * math.log(2)])
        return Result(["A", "B", "theorem1_rate", "takacs_rate", "two_log2"], rows, vars_of(a))
    rows = []
    for m in range(a.m_min, a.m_max + 1, a.m_step):
        ell = max(1, round(a.A * m))
        for B in a.B:
            n = math.floor(B * m * m)
            if not 0 < n < ell * m:
                continue
            N = exact.coeff(m, ell, n)
            logs = {k: ESTIMATORS[k](m, ell, n).log_value for k in ("t1", "t1p", "takacs")}
            rows.append([m, ell, n, N, _log_int(N), logs["t1"], logs["t1p"], logs["takacs"],
                         math.exp(_log_int(N) - logs["t1"]), math.exp(_log_int(N) - logs["t1p"])])
    cols = ["m", "l", "n", "N", "log_N", "log_t1", "log_t1p", "log_takacs",
            "ratio_t1", "ratio_t1p"]
    return Result(cols, rows, vars_of(a))


def cmd_sample(a):
    res = shape.sample_boxed_many(a.m, a.l, a.n, a.count, a.seed, max_tries=a.max_tries,
                                  method=a.method)
    reg = params.AspectFill.from_box(a.m, a.l, a.n)
    curve = shape.limit_curve(reg, grid_size=a.grid)
    if reg.reflected:  # compare the complement against the reflected curve
        dist = shape.boundary_distance(a.l - res.parts[:, ::-1], curve)
    else:
        dist = shape.boundary_distance(res.parts, curve)
    rows = [[i, dist[i], " ".join(str(int(v)) for v in p)] for i, p in enumerate(res.parts)]
    return Result(["index", "boundary_distance", "parts"], rows, vars_of(a),
                  {"tries": res.tries, "median_distance": float(np.median(dist))})


def cmd_shape(a):
    reg = params.AspectFill.normalize(a.A, a.B)
    curve = shape.limit_curve(reg, grid_size=a.grid)
    rows = list(zip(curve.x, curve.y))
    diag = {"c": curve.c, "d": curve.d,
            "max_implicit_residual": float(np.max(np.abs(curve.implicit_residual())))}
    return Result(["x", "y"], rows, vars_of(a), diag)


def cmd_lclt(a):
    if a.family == "fair":
        fam = lclt.GeometricFamily.fair(a.m)
    else:
        t = params.solve_tilt(params.AspectFill.normalize(a.A, a.B))
        fam = lclt.GeometricFamily.tilted(t.c, t.d, a.m)
    sup = lclt.sup_error(fam, a.tail_eps)
    diff = lclt.diff_sup_error(fam, a.tail_eps)
    return Result(["m", "family", "sup_error", "diff_sup_error", "m4_diff_sup_error"],
                  [[a.m, a.family, sup, diff, a.m ** 4 * diff]], vars_of(a))


def cmd_validate(a):
    from .validate import run_all

    rows = [[name, "pass" if ok else "FAIL", detail] for name, ok, detail in run_all()]
    return Result(["check", "status", "detail"], rows, vars_of(a))


def vars_of(a):
    return {k: v for k, v in vars(a).items()
            if k not in ("func", "output", "format") and v is not None}


# --- parser ------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="boxpart", description="Partitions in a box: exact counts, "
                "asymptotics, local limit checks and sampling.")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", help="write here instead of stdout; relative paths "
                   f"go under ${OUTPUT_DIR_ENV} when it is set")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def box(sp, n_optional=False):
        sp.add_argument("m", type=int)
        sp.add_argument("l", type=int)
        if n_optional:
            sp.add_argument("n", type=int, nargs="?")
        else:
            sp.add_argument("n", type=int)

    s = sub.add_parser("exact", help="exact coefficient vector or single N_n")
    box(s, n_optional=True)
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("diff", help="exact N_{n+1} - N_n")
    box(s)
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("solve", help="continuum tilt (c, d) for (A, B)")
    s.add_argument("A", type=float)
    s.add_argument("B", type=float)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("solve-discrete", help="discrete tilt (c_m, d_m) and moments")
    box(s)
    s.set_defaults(func=cmd_solve_discrete)

    s = sub.add_parser("estimate", help="asymptotic estimate of N_n or its difference")
    box(s)
    s.add_argument("--method", choices=[*ESTIMATORS, "pp-bound"], default="t1")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("compare", help="exact counts against the estimates, or rates")
    s.add_argument("--m-min", type=int, default=6)
    s.add_argument("--m-max", type=int, default=48)
    s.add_argument("--m-step", type=int, default=6)
    s.add_argument("--A", type=float, default=1.0, help="l = round(A m)")
    s.add_argument("--B", type=float, nargs="+", default=[1 / 3], help="n = floor(B m^2)")
    s.add_argument("--rates", action="store_true",
                   help="emit limiting rates of both estimates instead")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("sample", help="uniform boxed partitions by rejection")
    box(s)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-tries", type=int)
    s.add_argument("--method", choices=["split", "plain"], default="split")
    s.add_argument("--grid", type=int, default=shape.DEFAULT_GRID)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("shape", help="limit curve y(x) on a grid")
    s.add_argument("A", type=float)
    s.add_argument("B", type=float)
    s.add_argument("--grid", type=int, default=shape.DEFAULT_GRID)
    s.set_defaults(func=cmd_shape)

    s = sub.add_parser("lclt", help="local limit errors against the exact table")
    s.add_argument("m", type=int)
    s.add_argument("--family", choices=["fair", "tilted"], default="fair")
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--B", type=float, default=1 / 3)
    s.add_argument("--tail-eps", type=float, default=lclt.DEFAULT_TAIL_EPS)
    s.set_defaults(func=cmd_lclt)

    s = sub.add_parser("validate", help="run the invariant checks")
    s.set_defaults(func=cmd_validate)
    return p


def _destination(path):
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"no convergence: {exc} (residual {exc.residual}, "
              f"iterations {exc.iterations})", file=sys.stderr)
        return EXIT_NUMERIC
    except SamplingBudgetError as exc:
        print(f"sampling budget exhausted: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = result.to_json() if args.format == "json" else result.to_csv()
    if args.output:
        _destination(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "validate" and any(r[1] != "pass" for r in result.rows):
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
