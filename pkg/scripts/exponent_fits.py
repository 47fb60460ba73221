"""Log-log exponent fits for distinct-value counts on growing point sets.

    python scripts/exponent_fits.py [--max-grid 7] [--max-circle 24] [-o fits.csv]

Prints one CSV row per (series, size) and the fitted slope per series.
"""
from __future__ import annotations

import argparse
import csv
import sys

from rigidlab.census import census
from rigidlab.experiments import fit_exponent
from rigidlab.hypergraph import complete_graph, path_graph
from rigidlab.metrics import dot, euclid_sq
from rigidlab.pointsets import circle_rat, grid, line


def series(max_grid: int, max_circle: int):
    yield "K3/euclid_sq/grid", [(len(grid(m)), census(euclid_sq(2), complete_graph(3), grid(m).points, threads=1).distinct_count)
                                for m in range(3, max_grid + 1)]
    yield "P3/euclid_sq/line", [(n, census(euclid_sq(2), path_graph(3), line(n).points, threads=1).distinct_count)
                                for n in range(6, 3 * max_grid + 1, 3)]
    yield "K2/dot/circle_rat", [(n, census(dot(2), complete_graph(2), circle_rat(n).points, threads=1).distinct_count)
                                for n in range(8, max_circle + 1)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-grid", type=int, default=7)
    ap.add_argument("--max-circle", type=int, default=24)
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(out, lineterminator="\r\n")
    w.writerow(["series", "size", "count"])
    slopes = []
    for name, rows in series(args.max_grid, args.max_circle):
        for size, count in rows:
            w.writerow([name, size, count])
        fit = fit_exponent([r[0] for r in rows], [r[1] for r in rows])
        slopes.append(f"{name}: slope {fit.slope:.3f}, residual {fit.residual:.2e}")
    if out is not sys.stdout:
        out.close()
    print("\n".join(slopes), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
