"""dwviz: render solver output files into figures.

One subcommand per plot kind; inputs are the solver's documented field
and CSV formats. Any unreadable or malformed input exits nonzero.
"""

import argparse
import sys

from .io import FormatError
from . import plots


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dwviz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="pseudocolor density map")
    p.add_argument("field")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--vmin", type=float)
    p.add_argument("--vmax", type=float)

    p = sub.add_parser("pdf", help="density-histogram bars")
    p.add_argument("csv")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("errors", help="log-log error decay with fit")
    p.add_argument("csv")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("series", help="entropy / energy-defect time series")
    p.add_argument("csv")
    p.add_argument("-o", "--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "density":
            plots.plot_density(args.field, args.out, args.vmin, args.vmax)
        elif args.command == "pdf":
            plots.plot_pdf(args.csv, args.out)
        elif args.command == "errors":
            alpha = plots.plot_error_decay(args.csv, args.out)
            print(f"fitted exponent: {alpha:.2f}")
        elif args.command == "series":
            plots.plot_series(args.csv, args.out)
    except (FormatError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
