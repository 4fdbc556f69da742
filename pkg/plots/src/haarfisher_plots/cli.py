"""Command-line figure rendering: one subcommand per figure kind.

Exit status 1 with a message (and no output file) on schema mismatch or
unusable data; 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import render_ccdf_grid, render_hist, render_sweep, render_tail_analysis
from .readers import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haarfisher-plots",
                                     description="Render figures from experiment outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="scaled-error sweep line plot")
    p.add_argument("sweep_csv", type=Path)
    p.add_argument("output", type=Path)

    p = sub.add_parser("hist", help="per-dimension error histograms")
    p.add_argument("hist_csv", type=Path)
    p.add_argument("output", type=Path)

    p = sub.add_parser("ccdf-grid", help="per-dimension CCDFs with stored tail curves")
    p.add_argument("ccdf_csv", type=Path)
    p.add_argument("tailfit_json", type=Path)
    p.add_argument("output", type=Path)

    p = sub.add_parser("tail-analysis", help="four-panel tail analysis for one dimension")
    p.add_argument("ccdf_csv", type=Path)
    p.add_argument("tailfit_json", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--dim", type=int, default=None, help="dimension to analyse")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            render_sweep(args.sweep_csv, args.output)
        elif args.command == "hist":
            render_hist(args.hist_csv, args.output)
        elif args.command == "ccdf-grid":
            render_ccdf_grid(args.ccdf_csv, args.tailfit_json, args.output)
        else:
            render_tail_analysis(args.ccdf_csv, args.tailfit_json, args.output, dim=args.dim)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
