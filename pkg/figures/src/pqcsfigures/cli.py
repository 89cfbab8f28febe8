"""Command-line entry point.

Subcommands mirror the three plot kinds; every one takes repeatable --input
flags and one --output path.  A JSON summary of what was drawn goes to
stdout.  Exit codes: 0 success, 1 I/O failure, 2 input validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .csvio import InputError
from .render import PlotJob, run_plot_job


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcs-figures",
        description="Render figures from surrogate-toolkit CSV artifacts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-overlay", help="truth curve with surrogate series")
    p.add_argument("--input", action="append", required=True,
                   help="scan CSV; repeat for more series")
    p.add_argument("--label", action="append",
                   help="series label, one per --input (default: file name)")
    p.add_argument("--output", required=True, help="image path (.png/.svg)")
    p.add_argument("--title")
    p.set_defaults(kind="curve-overlay")

    p = sub.add_parser("bound-band", help="surrogate line with +-bound envelope")
    p.add_argument("--input", action="append", required=True, help="scan CSV with bounds")
    p.add_argument("--output", required=True, help="image path (.png/.svg)")
    p.add_argument("--title")
    p.set_defaults(kind="curve-with-bound", label=None)

    p = sub.add_parser("error-table", help="(k) x (method, L) grid of L2 ratios")
    p.add_argument("--input", action="append", required=True,
                   help="Monte-Carlo CSV; repeat to merge studies")
    p.add_argument("--output", required=True, help=".png/.svg image or .md table")
    p.add_argument("--title")
    p.set_defaults(kind="table-heatmap", label=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(inputs=tuple(args.input), kind=args.kind, output=args.output)
        summary = run_plot_job(job, labels=args.label, title=args.title)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
