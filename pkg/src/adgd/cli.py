"""Benchmark harness: run one experiment to a CSV trace, compare traces.

Subcommands
-----------
``run``
    Configure one (experiment, optimizer) pair, run it, and write the
    per-iteration CSV trace.  Exit status 0 on success, 2 on a usage
    error, 3 when the run aborted numerically (the partial trace plus an
    error-marker row is still written).
``compare``
    Read two or more completed trace files for the same problem instance
    and print a per-optimizer summary table.

Experiments pair a benchmark objective with its manifold: center-of-mass
and rayleigh on the sphere, lyapunov and weighted least squares (dense or
sparse weights) on Bures-Wasserstein SPD matrices, and the flat-space
equivalence check on the positive orthant, whose trace carries an extra
``deviation`` column with the coordinatewise relative gap between the
Riemannian iterates and the exponential of the Euclidean twin's iterates.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import problems, trace_io
from .manifolds import BuresWasserstein, PositiveOrthant, Sphere
from .optimizers import (
    STATUS_ABORTED,
    RunConfig,
    adgd_run,
    armijo_run,
    euclidean_adgd_run,
    fixed_run,
)

EXPERIMENTS = (
    "center-of-mass",
    "rayleigh",
    "lyapunov",
    "wls-dense",
    "wls-sparse",
    "orthant-equivalence",
)

_DEFAULT_N = {
    "center-of-mass": 10,
    "rayleigh": 100,
    "lyapunov": 20,
    "wls-dense": 20,
    "wls-sparse": 20,
    "orthant-equivalence": 10,
}

_CENTER_OF_MASS_POINTS = 50
_WLS_SPARSE_DENSITY = 0.1


class UsageError(Exception):
    pass


def _build_instance(experiment, n, seed):
    if experiment == "center-of-mass":
        return Sphere(), problems.center_of_mass(n, _CENTER_OF_MASS_POINTS, seed)
    if experiment == "rayleigh":
        return Sphere(), problems.rayleigh(n, seed)
    if experiment == "lyapunov":
        return BuresWasserstein(), problems.lyapunov_objective(n, seed)
    if experiment == "wls-dense":
        return BuresWasserstein(), problems.weighted_least_squares(n, seed)
    if experiment == "wls-sparse":
        return BuresWasserstein(), problems.weighted_least_squares(
            n, seed, density=_WLS_SPARSE_DENSITY
        )
    if experiment == "orthant-equivalence":
        return PositiveOrthant(), problems.linear_minus_log(n, seed)
    raise UsageError(f"unknown experiment {experiment!r}")


def _parse_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config_file(args, values):
    casts = {
        "experiment": str,
        "n": int,
        "seed": int,
        "max_iters": int,
        "tol": float,
        "alpha0": float,
        "first_ls": lambda s: s.lower() in ("1", "true", "yes"),
        "optimizer": str,
        "armijo_c": float,
        "armijo_beta": float,
        "armijo_lambda": float,
        "fixed_alpha": float,
        "out": str,
    }
    for key, raw in values.items():
        if key not in casts:
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key, None) in (None, False):
            setattr(args, key, casts[key](raw))


def _orthant_equivalence_deviations(config, manifold, problem, trace):
    """Rerun the step rule on flat coordinates and report, per iterate, the
    max coordinatewise relative gap between x_k and exp(y_k)."""
    c = problem.extras["c"]

    def f(y):
        x = np.exp(y)
        return float(np.sum(x - c * y))

    def grad_f(y):
        return np.exp(y) - c

    twin = euclidean_adgd_run(config, f, grad_f, np.log(problem.x0))
    deviations = []
    for k in range(len(trace.rows)):
        # Either run may stop at a bit-exact stationary point; its sequence
        # is constant from there, so compare against its final iterate.
        xk = trace.points[min(k, len(trace.points) - 1)]
        yk = twin.points[min(k, len(twin.points) - 1)]
        ref = np.exp(yk)
        deviations.append(float(np.max(np.abs(xk - ref) / np.maximum(np.abs(ref), 1e-300))))
    return deviations


def _cmd_run(args):
    if args.experiment not in EXPERIMENTS:
        raise UsageError(f"--experiment must be one of {', '.join(EXPERIMENTS)}")
    if args.optimizer == "fixed" and args.fixed_alpha is None:
        raise UsageError("--fixed-alpha is required with --optimizer fixed")
    if args.optimizer != "fixed" and args.fixed_alpha is not None:
        raise UsageError("--fixed-alpha only applies to --optimizer fixed")
    if args.experiment == "orthant-equivalence" and args.optimizer != "adgd":
        raise UsageError("orthant-equivalence supports only --optimizer adgd")
    n = args.n if args.n is not None else _DEFAULT_N[args.experiment]

    manifold, problem = _build_instance(args.experiment, n, args.seed)
    config = RunConfig(
        max_iters=args.max_iters,
        tol=args.tol,
        alpha0=args.alpha0,
        first_ls=args.first_ls,
        armijo_c=args.armijo_c,
        armijo_beta=args.armijo_beta,
        armijo_lambda=args.armijo_lambda,
    )
    if args.optimizer == "adgd":
        trace = adgd_run(config, manifold, problem)
    elif args.optimizer == "armijo":
        trace = armijo_run(config, manifold, problem)
    else:
        trace = fixed_run(config, manifold, problem, args.fixed_alpha)

    deviations = None
    if args.experiment == "orthant-equivalence":
        deviations = _orthant_equivalence_deviations(config, manifold, problem, trace)

    meta = {
        "experiment": args.experiment,
        "optimizer": args.optimizer,
        "n": n,
        "seed": args.seed,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "alpha0": args.alpha0,
        "first_ls": args.first_ls,
        "armijo_c": args.armijo_c,
        "armijo_beta": args.armijo_beta,
        "armijo_lambda": args.armijo_lambda,
        "fixed_alpha": args.fixed_alpha,
        "phi_star": problem.optimum_value,
        "status": trace.status,
    }
    trace_io.write_trace(args.out, trace, meta, deviations)
    if trace.status == STATUS_ABORTED:
        print(f"run aborted: {trace.message}", file=sys.stderr)
        return 3
    return 0


def _median(values):
    vals = sorted(values)
    mid = len(vals) // 2
    if len(vals) % 2:
        return vals[mid]
    return 0.5 * (vals[mid - 1] + vals[mid])


def _cmd_compare(args):
    loaded = []
    for path in args.traces:
        meta, rows, error = trace_io.read_trace(path)
        if not rows:
            raise UsageError(f"{path}: empty trace")
        loaded.append((path, meta, rows, error))

    instance = {(m["experiment"], m["n"], m["seed"]) for _, m, _, _ in loaded}
    if len(instance) != 1:
        raise UsageError(
            "traces describe different problem instances: "
            + ", ".join(sorted(f"{e}/n={n}/seed={s}" for e, n, s in instance))
        )
    experiment, n, seed = next(iter(instance))
    print(f"experiment={experiment} n={n} seed={seed}")

    phi_stars = [float(m["phi_star"]) for _, m, _, _ in loaded if m["phi_star"] is not None]
    phi_star = phi_stars[0] if phi_stars else min(
        min(r["phi"] for r in rows) for _, _, rows, _ in loaded
    )

    print(
        f"{'optimizer':<10} {'iters':>6} {'expensive':>10} {'final_gap':>13} "
        f"{'alpha_min':>13} {'alpha_med':>13} {'alpha_max':>13} {'status':>9}"
    )
    for path, meta, rows, error in loaded:
        label = meta["optimizer"]
        if label == "armijo":
            label = f"armijo({meta['armijo_lambda']})"
        alphas = [r["alpha"] for r in rows if r["alpha"] > 0.0]
        gap = rows[-1]["phi"] - phi_star
        status = meta["status"] if error is None else "aborted"
        print(
            f"{label:<10} {rows[-1]['k']:>6} {rows[-1]['expensive_ops']:>10} "
            f"{gap:>13.6e} {min(alphas):>13.6e} {_median(alphas):>13.6e} "
            f"{max(alphas):>13.6e} {status:>9}"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adgd-bench",
        description="Benchmark harness for adaptive Riemannian gradient descent",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write a CSV trace")
    run.add_argument("--experiment", choices=EXPERIMENTS)
    run.add_argument("--n", type=int, default=None, help="problem dimension")
    run.add_argument("--seed", type=int, default=None, help="instance seed (64-bit)")
    run.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    run.add_argument("--tol", type=float, default=None, help="gradient-norm stopping tolerance")
    run.add_argument("--alpha0", type=float, default=None, help="initial step size")
    run.add_argument("--first-ls", action="store_true", dest="first_ls",
                     help="double alpha0 until the first-step ratio reaches 1")
    run.add_argument("--optimizer", choices=("adgd", "armijo", "fixed"), default=None)
    run.add_argument("--armijo-c", type=float, default=None, dest="armijo_c")
    run.add_argument("--armijo-beta", type=float, default=None, dest="armijo_beta")
    run.add_argument("--armijo-lambda", type=float, default=None, dest="armijo_lambda")
    run.add_argument("--fixed-alpha", type=float, default=None, dest="fixed_alpha")
    run.add_argument("--out", default=None, help="output CSV path")
    run.add_argument("--config", default=None,
                     help="key=value file supplying defaults for any flag above")

    cmp_parser = sub.add_parser("compare", help="summarize two or more completed traces")
    cmp_parser.add_argument("traces", nargs="+", help="trace CSV files")
    return parser


_RUN_DEFAULTS = {
    "seed": 0,
    "max_iters": 1000,
    "tol": 1e-10,
    "alpha0": 1.0,
    "optimizer": "adgd",
    "armijo_c": 1e-4,
    "armijo_beta": 0.5,
    "armijo_lambda": 1.0,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            if args.config is not None:
                _apply_config_file(args, _parse_config_file(args.config))
            for key, default in _RUN_DEFAULTS.items():
                if getattr(args, key) is None:
                    setattr(args, key, default)
            if args.experiment is None:
                raise UsageError("--experiment is required (flag or config file)")
            if args.out is None:
                raise UsageError("--out is required (flag or config file)")
            return _cmd_run(args)
        if args.command == "compare":
            if len(args.traces) < 2:
                raise UsageError("compare needs at least two trace files")
            return _cmd_compare(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
