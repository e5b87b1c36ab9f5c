#!/usr/bin/env python3
"""Area of Reuleaux polygons as the side count grows.

Closed-form areas for odd n, written as CSV. The sequence increases strictly
with n and approaches the disk value pi B^2 / 4 from below; the script prints
the remaining gap for the largest n as a quick sanity line.
"""

import argparse
import sys

import numpy as np

from orbiform.reuleaux import area_table, format_area_table_csv
from orbiform.shapeio import write_text_atomic


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=99, help="largest (odd) side count")
    ap.add_argument("--width", type=float, default=1.0)
    ap.add_argument("--out", help="CSV destination (default: stdout)")
    args = ap.parse_args(argv)

    rows = area_table(args.max, args.width)
    csv = format_area_table_csv(rows)
    if args.out:
        write_text_atomic(args.out, csv)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        print(csv, end="")

    n_last, a_last = rows[-1]
    disk = np.pi * args.width**2 / 4.0
    print(f"# n={n_last}: disk area - polygon area = {disk - a_last:.6e}",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
