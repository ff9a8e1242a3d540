#!/usr/bin/env python3
"""Run one (or all) of the canned convergence-table presets.

Usage:
    python scripts/run_table.py table1 [--format md] [--out results/]
    python scripts/run_table.py all --out results/

With a directory --out, each preset's report lands in <out>/<preset>.<ext>;
otherwise reports go to stdout.
"""

import argparse
import pathlib
import sys

from parabfem.cli import main as cli_main
from parabfem.harness import PRESETS


def run(preset, fmt, out_dir):
    argv = ["--preset", preset, "--format", fmt]
    if out_dir is not None:
        ext = "csv" if fmt == "csv" else "md"
        argv += ["--out", str(out_dir / f"{preset}.{ext}")]
    return cli_main(argv)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("preset", choices=sorted(PRESETS) + ["all"])
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--out", default=None, help="output directory")
    args = p.parse_args()

    out_dir = None
    if args.out is not None:
        out_dir = pathlib.Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

    presets = sorted(PRESETS) if args.preset == "all" else [args.preset]
    for preset in presets:
        print(f"== {preset} ==", file=sys.stderr)
        code = run(preset, args.format, out_dir)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
