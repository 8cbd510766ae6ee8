"""Command-line front end.

Subcommands::

    geofid compute RHO.json SIGMA.json    fidelities and trace distance
    geofid sweep                          qubit fidelity grid (theta, lambda)
    geofid sdp RHO.json SIGMA.json        interior-point solve with certificate
    geofid geodesic --r0 R --dphi D       hyperbolic geodesic samples
    geofid suite                          randomized property suite

Exit codes: 0 ok, 1 suite violation, 2 bad input or arguments, 3 invalid state.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import GeofidError, InvalidStateError, NotHermitianError, SingularInputError
from .fidelity import (
    fidelity_report,
    holevo_fidelity,
    matsumoto_fidelity,
    pure_mixed_fidelities,
    pure_state_fidelities,
    uhlmann_fidelity,
)
from .geometry import SQRT2, equal_purity_fgm, fgm_asymptotic, hyperbolic_geodesic_r, midpoint_radius
from .linalg import as_density
from .matrix_io import load_matrix
from .sdp import FidelitySdp, SolverOptions, regularize_state, solve, verify_solution
from .suite import run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_STATE = 0, 1, 2, 3

SIG_DIGITS = 9


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{SIG_DIGITS}g}"
    return str(x)


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_pair(args):
    rho = load_matrix(args.rho)
    sigma = load_matrix(args.sigma)
    if args.regularize:
        rho = regularize_state(as_density(rho), args.regularize)
        sigma = regularize_state(as_density(sigma), args.regularize)
    return as_density(rho), as_density(sigma)


# --- subcommands -------------------------------------------------------------------


def cmd_compute(args):
    rho, sigma = _load_pair(args)
    rep = fidelity_report(rho, sigma).as_dict()
    if args.format == "csv":
        keys = ["uhlmann", "holevo", "matsumoto", "trace_distance"]
        return to_csv(keys, [[rep[k] for k in keys]])
    return _dump(rep)


def sweep_sigma(theta, lam):
    """``(1+lam)/2 |theta><theta| + (1-lam)/2 |theta_perp><theta_perp|``."""
    v = np.array([np.cos(theta), np.sin(theta)])
    vp = np.array([-np.sin(theta), np.cos(theta)])
    return (1 + lam) / 2 * np.outer(v, v) + (1 - lam) / 2 * np.outer(vp, vp)


def sweep_rows(fixed="pure", thetas=None, lambdas=None):
    """Rows ``(theta, lambda, F, F_H, F_GM)`` over the grid.

    ``fixed`` is ``"pure"`` for ``rho = |0><0|`` or ``"mixed"`` for
    ``rho = diag(3/4, 1/4)``. Rows with a pure ``sigma`` use exact
    closed forms.
    """
    thetas = np.linspace(0.0, np.pi / 2, 101) if thetas is None else np.asarray(thetas, dtype=float)
    lambdas = np.linspace(0.0, 1.0, 101) if lambdas is None else np.asarray(lambdas, dtype=float)
    if thetas.size == 0 or lambdas.size == 0:
        raise ValueError("sweep grids must be nonempty")
    if np.any((lambdas < 0) | (lambdas > 1)):
        raise ValueError("lambda values must lie in [0, 1]")
    if np.any((thetas < 0) | (thetas > np.pi / 2 + 1e-15)):
        raise ValueError("theta values must lie in [0, pi/2]")
    if fixed == "pure":
        rho = np.diag([1.0, 0.0]).astype(complex)
    elif fixed == "mixed":
        rho = np.diag([0.75, 0.25]).astype(complex)
    else:
        raise ValueError(f"fixed must be 'pure' or 'mixed', got {fixed!r}")
    rows = []
    for th in thetas:
        for lam in lambdas:
            if lam == 1.0:
                v = np.array([np.cos(th), np.sin(th)], dtype=complex)
                if fixed == "pure":
                    vals = pure_state_fidelities(np.array([1.0, 0.0]), v)
                else:
                    vals = pure_mixed_fidelities(rho, v)
            else:
                sigma = sweep_sigma(th, lam)
                vals = (uhlmann_fidelity(rho, sigma), holevo_fidelity(rho, sigma), matsumoto_fidelity(rho, sigma))
            rows.append((float(th), float(lam), *map(float, vals)))
    return rows


def cmd_sweep(args):
    thetas = np.linspace(0.0, np.pi / 2, args.theta_points)
    lambdas = np.linspace(0.0, 1.0, args.lambda_points)
    rows = sweep_rows(args.fixed, thetas, lambdas)
    header = ["theta", "lambda", "F", "F_H", "F_GM"]
    if args.format == "json":
        return _dump([dict(zip(header, r)) for r in rows])
    return to_csv(header, rows)


def cmd_sdp(args):
    rho = as_density(load_matrix(args.rho))
    sigma = as_density(load_matrix(args.sigma))
    opts = SolverOptions(
        gap_tol=args.gap_tol,
        max_iter=args.max_iter,
        regularize=1e-7 if args.regularize is None else args.regularize,
    )
    kinds = ["matsumoto", "uhlmann"] if args.kind == "both" else [args.kind]
    out = []
    for kind in kinds:
        prob = FidelitySdp(kind, rho, sigma)
        sol = solve(prob, opts)
        rep = verify_solution(prob, sol)
        out.append(
            {
                "kind": kind,
                "primal_value": sol.primal_value,
                "dual_value": sol.dual_value,
                "gap": sol.gap,
                "iterations": sol.iterations,
                "epsilon": sol.epsilon,
                "primal_residual": rep.primal_residual,
                "dual_residual": rep.dual_residual,
                "constraint_residual": rep.constraint_residual,
                "verified": rep.ok,
            }
        )
    if args.format == "csv":
        header = list(out[0])
        return to_csv(header, [[r[k] for k in header] for r in out])
    return _dump(out if len(out) > 1 else out[0])


def geodesic_data(r0, dphi, samples):
    """Samples of the geodesic and its summary numbers.

    ``r0`` and ``dphi`` are polar coordinates of the unit-curvature
    hyperbolic plane; the F_GM values are for the two unit-trace qubits at
    those coordinates.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    phis = np.linspace(0.0, dphi, samples)
    rs = hyperbolic_geodesic_r(phis, r0, dphi)
    summary = {
        "r0": float(r0),
        "dphi": float(dphi),
        "midpoint_radius": midpoint_radius(r0, dphi),
        "fgm_asymptotic": fgm_asymptotic(SQRT2 * r0, dphi / 2),
        "fgm_exact": equal_purity_fgm(SQRT2 * r0, dphi / 2),
    }
    return phis, np.asarray(rs), summary


def cmd_geodesic(args):
    phis, rs, summary = geodesic_data(args.r0, args.dphi, args.samples)
    if args.format == "json":
        summary["samples"] = [{"phi": float(p), "r": float(r)} for p, r in zip(phis, rs)]
        return _dump(summary)
    header = ["phi", "r", "midpoint_radius", "fgm_asymptotic", "fgm_exact"]
    extra = [summary["midpoint_radius"], summary["fgm_asymptotic"], summary["fgm_exact"]]
    return to_csv(header, [[p, r, *extra] for p, r in zip(phis, rs)])


def _parse_dims(text):
    text = text.strip()
    if "-" in text:
        lo, hi = (int(t) for t in text.split("-", 1))
        dims = tuple(range(lo, hi + 1))
    else:
        dims = tuple(int(t) for t in text.split(",") if t)
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}")
    return dims


def cmd_suite(args):
    report = run_suite(seed=args.seed, trials=args.trials, dims=args.dims, names=args.checks)
    if not args.quiet:
        sys.stderr.write(report.table() + "\n")
        for r in report.failures():
            sys.stderr.write(f"VIOLATION {r.name}: max {r.max_violation:.3e} > tol {r.tol:.0e} (trial {r.worst['trial']})\n")
    if args.format == "csv":
        header = ["name", "table_row", "trials", "max_violation", "tol", "passed"]
        text = to_csv(header, [[getattr(r, k) for k in header] for r in report.results])
    else:
        text = report.to_json()
    return text, (EXIT_OK if report.passed else EXIT_VIOLATION)


# --- parser --------------------------------------------------------------------------


def _u64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _global_flags(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_u64, default=d(0), help="random seed (u64)")
    p.add_argument("--gap-tol", type=float, default=d(1e-8), help="SDP duality-gap tolerance")
    p.add_argument("--max-iter", type=int, default=d(200), help="SDP iteration cap")
    p.add_argument("--regularize", type=float, default=d(None), help="apply (rho + eps I)/(1 + n eps)")
    p.add_argument("--out", default=d(None), help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=d(None))


def build_parser():
    parser = argparse.ArgumentParser(prog="geofid", description="Quantum fidelities and the matrix geometric mean.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        return p

    p = add("compute", "fidelities between two density matrices")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.set_defaults(func=cmd_compute, default_format="json")

    p = add("sweep", "qubit fidelity sweep over (theta, lambda)")
    p.add_argument("--fixed", choices=("pure", "mixed"), default="pure")
    p.add_argument("--theta-points", type=int, default=101)
    p.add_argument("--lambda-points", type=int, default=101)
    p.set_defaults(func=cmd_sweep, default_format="csv")

    p = add("sdp", "solve the fidelity SDPs")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--kind", choices=("matsumoto", "uhlmann", "both"), default="both")
    p.set_defaults(func=cmd_sdp, default_format="json")

    p = add("geodesic", "geodesic between two equal-radius points")
    p.add_argument("--r0", type=float, default=10.0)
    p.add_argument("--dphi", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(func=cmd_geodesic, default_format="csv")

    p = add("suite", "run the randomized property suite")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--dims", type=_parse_dims, default=(2, 3, 4, 5, 6), help="e.g. 2-6 or 2,3,4")
    p.add_argument("--checks", nargs="*", default=None, help="subset of check names")
    p.add_argument("--quiet", action="store_true", help="no table on stderr")
    p.set_defaults(func=cmd_suite, default_format="json")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        result = args.func(args)
    except (InvalidStateError, SingularInputError) as exc:
        sys.stderr.write(f"geofid: invalid state: {exc}\n")
        return EXIT_STATE
    except (NotHermitianError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"geofid: {exc}\n")
        return EXIT_USAGE
    except GeofidError as exc:
        sys.stderr.write(f"geofid: {exc}\n")
        return EXIT_VIOLATION
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    _emit(args, result)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
