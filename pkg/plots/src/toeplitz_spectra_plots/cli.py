"""Batch figure rendering from toeplitz-spectra output files.

    toeplitz-spectra-plot --in gamma.csv --kind gamma-curve --out gamma.png
    toeplitz-spectra-plot --in diag.json --kind matrix-heatmap --out heat.png
    toeplitz-spectra-plot --in hmv.json --in delta.json --kind modulus-decay --out mod.png
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .io import SchemaError


def build_parser():
    p = argparse.ArgumentParser(prog="toeplitz-spectra-plot", description=__doc__)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   help="input file (repeatable)")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--out", required=True, help="output image path (.png, .pdf, .svg)")
    p.add_argument("--title", default="")
    p.add_argument("--logx", choices=["auto", "on", "off"], default="auto")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        spec = FigureSpec(tuple(args.inputs), args.kind, args.out,
                          title=args.title, logx=args.logx)
        result = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
