#!/usr/bin/env python3
"""Plot columns of an ellcov CSV table.

Usage:
    plot_csv.py table.csv [-x COLUMN] [-y COLUMN ...] [--logy] [-o out.png]

The x column defaults to the first column, y to every other numeric column.
"""

import argparse
import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_table(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, data = rows[0], rows[1:]
    cols = {name: [] for name in header}
    for row in data:
        for name, cell in zip(header, row):
            try:
                cols[name].append(float(cell))
            except ValueError:
                cols[name].append(math.nan)
    return header, cols


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_file")
    ap.add_argument("-x", default=None, help="x column (default: first)")
    ap.add_argument("-y", nargs="*", default=None, help="y columns (default: all numeric)")
    ap.add_argument("--logy", action="store_true", help="logarithmic y axis")
    ap.add_argument("-o", "--output", default=None, help="output image (default: <csv>.png)")
    args = ap.parse_args()

    header, cols = read_table(args.csv_file)
    x_name = args.x or header[0]
    y_names = args.y or [
        h for h in header
        if h != x_name and any(not math.isnan(v) for v in cols[h])
    ]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in y_names:
        ax.plot(cols[x_name], cols[name], label=name)
    ax.set_xlabel(x_name)
    ax.legend()
    ax.grid(True, alpha=0.3)
    if args.logy:
        ax.set_yscale("log")
    out = args.output or args.csv_file.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    sys.exit(main())
