#!/usr/bin/env python3
"""Minimal library-use example: one coupled refinement study, printed as
markdown, plus the observed rates.

    python scripts/convergence_demo.py [--example 1] [--degree 1]
"""

import argparse

from parabfem.harness import StudyConfig, report_markdown, run_study


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--example", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--degree", type=int, choices=(1, 2), default=1)
    args = p.parse_args()

    sizes = (8, 16) if args.example != 2 else (8, 16)
    cfg = StudyConfig(example=args.example, degree=args.degree,
                      mesh_sizes=sizes, tau_rule=("h2", 1.0))
    report = run_study(cfg)
    print(report_markdown(report))
    print(f"observed L2 rates: {[round(r, 3) for r in report.rates_l2]}")
    print(f"observed H1 rates: {[round(r, 3) for r in report.rates_h1]}")


if __name__ == "__main__":
    main()
