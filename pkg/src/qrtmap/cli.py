"""Command-line interface: ``qrtmap <command> [options]``.

Exit codes: 0 success, 2 domain error, 3 precision error, 64 usage error,
74 output error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import core, exact, grouplaw, periods, rotation, sensitivity
from .cubic import CubicCurve
from .errors import DomainError, PrecisionError
from .transform import weierstrass_data

EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_USAGE, EXIT_IO = 0, 2, 3, 64, 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def fmt(x):
    """Text for one value; floats keep 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return json.dumps(str(x))
    return json.dumps(x)


def to_json(obj):
    """Deterministic JSON with snake_case keys as given and 17-digit floats."""
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(to_json(v) for v in obj) + "]"
    if obj is None:
        return "null"
    return fmt(obj)


def _csv_cell(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def to_csv(header, rows):
    buf = io.StringIO()
    if header:
        buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(v) for v in row) + "\n")
    return buf.getvalue()


def emit(results, fmt_name="json", header=None):
    """Serialize results to bytes; ``results`` is a JSON-able object or CSV rows."""
    if fmt_name == "json":
        return (to_json(results) + "\n").encode()
    return to_csv(header, results).encode()


def _write(args, data):
    if args.out:
        try:
            with open(args.out, "wb") as fh:
                fh.write(data)
        except OSError as e:
            raise _IOFailure(str(e)) from e
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


class _IOFailure(Exception):
    pass


def _positive(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _count(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _fraction(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"bad fraction {s!r}") from e


# command handlers -------------------------------------------------------


def cmd_fixed_point(a):
    ell = core.fixed_point(a.d)
    return emit({"ell": ell, "k_min": core.k_min(a.d)})


def cmd_orbit(a):
    tol = a.tol if a.tol is not None else 1e-8
    orb = core.orbit(a.d, (a.x, a.y), a.n, tol=tol)
    rows = [(k, u, v, g) for k, (u, v), g in zip(range(len(orb)), orb.points, orb.drift)]
    if a.format == "json":
        return emit({"d": a.d, "K": orb.K, "max_drift": orb.max_drift, "points": [list(r) for r in rows]})
    return emit(rows, "csv", ["n", "u", "v", "G_drift"])


def cmd_rotation(a):
    r = rotation.theta(a.d, a.K)
    out = {
        "d": a.d,
        "K": a.K,
        "theta": r.theta,
        "numerator_integral": r.numerator_integral,
        "denominator_integral": r.denominator_integral,
        "eps": r.eps,
        "ulim": r.Ulim,
    }
    if a.winding:
        w = rotation.winding_estimate(a.d, a.K, a.winding)
        out.update(winding_theta=w.theta, winding_signed=w.signed, winding_stderr=w.stderr, winding_bound=w.bound)
    return emit(out)


def cmd_rotation_sweep(a):
    km = core.k_min(a.d)
    if not a.k_from > km:
        raise DomainError(f"--k-from must exceed K_m = {km!r}")
    if not a.k_to > a.k_from or a.grid < 2:
        raise DomainError("need k-to > k-from and grid >= 2")
    rows = []
    for K in np.linspace(a.k_from, a.k_to, a.grid):
        K = float(K)
        w = weierstrass_data(CubicCurve(a.d, K))
        rows.append((K, rotation.theta(a.d, K).theta, w.eps, w.nu, w.e1, w.e2, w.e3))
    header = ["K", "theta", "eps", "nu", "e1", "e2", "e3"]
    if a.format == "json":
        return emit([dict(zip(header, r)) for r in rows])
    return emit(rows, "csv", header)


def cmd_find_k(a):
    ks = rotation.find_K_for_theta(a.d, a.target, a.k_max, grid=a.grid)
    return emit({"d": a.d, "target": str(a.target), "k": ks})


def cmd_period_table(a):
    rows = [(r.q, r.status, r.is_period, " ".join(map(str, r.fractions))) for r in periods.period_table()]
    if a.format == "csv":
        return emit(rows, "csv", ["q", "status", "minimal_period", "numerators"])
    return emit([{"q": q, "status": s, "minimal_period": m, "numerators": list(map(int, f.split()))} for q, s, m, f in rows])


def cmd_period_check(a):
    c = CubicCurve(a.d, a.K)
    tol = a.tol if a.tol is not None else 1e-8
    ok, res = grouplaw.is_q_periodic(c, a.q, tol=tol)
    return emit({"d": a.d, "K": a.K, "q": a.q, "periodic": ok, "residual": res,
                 "minimal_period_residual": grouplaw.minimal_period_residual(c, a.q) if a.q >= 2 else None})


def cmd_seven_locus(a):
    K = grouplaw.seven_locus(a.d)
    c = CubicCurve(a.d, K)
    return emit({"d": a.d, "K": K, "k_min": c.k_min, "residual_7": grouplaw.period_residual(c, 7)})


def cmd_f_scan(a):
    rows = periods.f_scan(a.q_from, a.q_to)
    if a.format == "json":
        return emit([{"q": q, "f": f} for q, f in rows])
    return emit(rows, "csv", ["q", "f"])


def cmd_covering_chain(a):
    chain = periods.covering_chain(a.start)
    if a.format == "json":
        return emit({"chain": [list(t) for t in chain], "covered_from": periods.chain_coverage(chain)})
    return emit(chain, "csv", None)


def cmd_estimate_n(a):
    return emit({"d": a.d, "qmax": a.qmax, "n_hat": periods.estimate_N(a.d, a.qmax)})


def cmd_verify_identity(a):
    cert = exact.certificate(a.seed, a.trials)
    out = cert.as_dict()
    U, V = exact.q6_example()
    out["q6_example"] = {"U": str(U.c00), "V_coeff_sqrt24": str(V.c10)}
    return emit(out)


def cmd_sensitivity(a):
    rec = sensitivity.separation_experiment(a.d, (a.x, a.y), a.radius, a.delta, a.n)
    sep = np.zeros(len(rec.dists), dtype=bool)
    sep[rec.indices] = True
    if a.format == "json":
        model = sensitivity.fibered_comparison(a.d, rec)
        return emit({
            "seed": a.seed, "d": a.d, "delta": a.delta, "n": a.n, "count": len(rec.indices),
            "model_count": len(model), "max_dist": rec.max_dist,
            "theta_m": rec.theta_M, "theta_m_prime": rec.theta_M_prime,
        })
    rows = [(k, dist, bool(s)) for k, (dist, s) in enumerate(zip(rec.dists, sep))]
    return emit(rows, "csv", ["n", "dist", "separated"])


def cmd_seven_not_global(a):
    root = rotation.seven_not_global()
    d0 = rotation.d_zero().d0
    return emit({"d_star": root, "d0": d0, "gap": abs(root - d0)})


# parser ------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="qrtmap", description="QRT map, invariant cubics and rotation numbers.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help, fmt="json", aliases=()):
        s = sub.add_parser(name, help=help, description=help, aliases=list(aliases))
        s.set_defaults(func=func)
        s.add_argument("--out", help="write to this file instead of stdout")
        s.add_argument("--format", choices=["csv", "json"], default=fmt)
        s.add_argument("--tol", type=_positive, default=None, help="override the default tolerance")
        return s

    s = add("fixed-point", cmd_fixed_point, "equilibrium abscissa and minimum of G")
    s.add_argument("--d", type=_positive, required=True)

    s = add("orbit", cmd_orbit, "iterate F and report the drift of G", "csv")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--x", type=_positive, default=1.0)
    s.add_argument("--y", type=_positive, default=1.0)
    s.add_argument("--n", type=_count, default=100)

    s = add("rotation", cmd_rotation, "rotation number on the level G = K")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--K", "--k", dest="K", type=float, required=True)
    s.add_argument("--winding", type=_count, default=0, help="also run the winding estimate with this many steps")

    s = add("rotation-sweep", cmd_rotation_sweep, "rotation number on a K grid", "csv")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--k-from", type=float, required=True)
    s.add_argument("--k-to", type=float, required=True)
    s.add_argument("--grid", type=_count, default=100)

    s = add("find-k", cmd_find_k, "levels with a given rotation number")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--target", type=_fraction, required=True, help="e.g. 2/5")
    s.add_argument("--k-max", type=float, default=1e4)
    s.add_argument("--grid", type=_count, default=1000)

    add("period-table", cmd_period_table, "which q in 2..10 are minimal periods")

    s = add("period-check", cmd_period_check, "test q-periodicity on one level")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--K", "--k", dest="K", type=float, required=True)
    s.add_argument("--q", type=_count, required=True)

    s = add("seven-locus", cmd_seven_locus, "level carrying 7-periodic orbits")
    s.add_argument("--d", type=_positive, required=True)

    s = add("f-scan", cmd_f_scan, "values of the prime-count bound f(q)", "csv")
    s.add_argument("--q-from", type=_count, default=780)
    s.add_argument("--q-to", type=_count, default=2500)

    s = add("covering-chain", cmd_covering_chain, "prime covering chain down from start", "csv")
    s.add_argument("--start", type=_count, default=780)

    s = add("estimate-n", cmd_estimate_n, "bound beyond which every q is a minimal period")
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--qmax", type=_count, default=10_000)

    s = add("verify-identity", cmd_verify_identity, "exact randomized check of the change of zero element",
            aliases=["verify-appendix"])
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=_count, default=100)

    s = add("sensitivity", cmd_sensitivity, "separation of two nearby orbits", "csv")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--d", type=_positive, default=6.0)
    s.add_argument("--x", type=_positive, default=1.0)
    s.add_argument("--y", type=_positive, default=1.0)
    s.add_argument("--radius", type=_positive, default=1e-3)
    s.add_argument("--delta", type=_positive, default=0.05)
    s.add_argument("--n", type=_count, default=10_000)

    add("seven-not-global", cmd_seven_not_global, "parameter where the orbit of (1, 1) would be 7-periodic",
        aliases=["prop5"])
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"qrtmap: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help exits through here
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        data = args.func(args)
        _write(args, data)
    except _IOFailure as e:
        print(f"qrtmap: cannot write output: {e}", file=sys.stderr)
        return EXIT_IO
    except PrecisionError as e:
        print(f"qrtmap: precision error: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except DomainError as e:
        print(f"qrtmap: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
