"""Command-line driver for single studies and table-reproduction presets.

Exit codes: 0 success, 2 solver failure, 3 configuration error.
"""

import argparse
import sys

from .harness import (ConfigError, PRESETS, StudyConfig, emit_report,
                      plateau_check, run_study)
from .scheme import EllipticityError, SolverError


def _parse_tau(args):
    if args.tau is not None and args.tau_rule is not None:
        raise ConfigError("--tau and --tau-rule are mutually exclusive")
    if args.tau is not None:
        return ("fixed", args.tau)
    if args.tau_rule is not None:
        if not args.tau_rule.startswith("h2:"):
            raise ConfigError("--tau-rule must look like h2:<c>")
        return ("h2", float(args.tau_rule[3:]))
    return ("h2", 1.0)


def build_parser():
    p = argparse.ArgumentParser(
        prog="parabfem",
        description="Linearized backward-Euler FEM convergence studies.")
    p.add_argument("--example", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--scheme", choices=("A", "B"), default="A")
    p.add_argument("--degree", type=int, choices=(1, 2), default=1)
    p.add_argument("--M", type=int, nargs="+", default=None,
                   help="mesh sizes, strictly increasing")
    p.add_argument("--tau", type=float, default=None,
                   help="fixed time step")
    p.add_argument("--tau-rule", default=None,
                   help="coupled rule h2:<c> meaning tau = c/M^2")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--init", choices=("interp", "ritz"), default="ritz")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--g-time", choices=("n", "n+1"), default="n+1")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--out", default=None,
                   help="output path (default: stdout)")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="run one of the canned convergence-table layouts")
    return p


def _configs_from_args(args):
    if args.preset is not None:
        return PRESETS[args.preset]
    if args.M is None:
        raise ConfigError("either --M or --preset is required")
    return [StudyConfig(
        example=args.example, scheme=args.scheme, degree=args.degree,
        mesh_sizes=tuple(args.M), tau_rule=_parse_tau(args), T=args.T,
        init_mode="interpolation" if args.init == "interp" else "ritz",
        tol=args.tol, g_time=args.g_time)]


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        configs = _configs_from_args(args)
        for c in configs:
            c.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3

    try:
        reports = [run_study(c) for c in configs]
    except (SolverError, EllipticityError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2

    fmt = "csv" if args.format == "csv" else "md"
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        for r in reports:
            emit_report(r, fmt, out)
        if len(reports) > 1 and all(
                r.config.tau_rule[0] == "fixed" for r in reports):
            out.write("# plateau: tau, finest-mesh L2 error, "
                      "ratio vs next smaller tau\n")
            for tau, err, ratio in plateau_check(reports):
                ratio_s = f"{ratio:.6g}" if ratio is not None else ""
                out.write(f"# {tau:.6g}, {err:.6e}, {ratio_s}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
