"""Census of isometry orbits against the |V| n^(|V|-1) ceiling.

    python scripts/tightness_table.py [--max-n 8]
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from rigidlab.census import census
from rigidlab.hypergraph import complete_graph, path_graph
from rigidlab.linalg import AffineMap
from rigidlab.metrics import dot, euclid_sq, pseudo11
from rigidlab.pointsets import orbit_tight_set

ORBITS = [
    ("euclid_sq/translation", euclid_sq(2), AffineMap.translation((1, 0)), (0, 0)),
    ("pseudo11/boost", pseudo11(), AffineMap.make([[Fraction(5, 4), Fraction(3, 4)], [Fraction(3, 4), Fraction(5, 4)]]), (1, 0)),
    ("dot/rotation(3/5,4/5)", dot(2), AffineMap.make([[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]), (1, 0)),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(["orbit", "graph", "n", "census", "ceiling"])
    for label, m, theta, x in ORBITS:
        for n in range(2, args.max_n + 1):
            P = orbit_tight_set(m, theta, x, n).points
            for gname, G in (("K2", complete_graph(2)), ("P3", path_graph(3)), ("K3", complete_graph(3))):
                V = G.vertex_count
                w.writerow([label, gname, n, census(m, G, P, threads=1).distinct_count, V * n ** (V - 1)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
