"""Tree certificates next to brute-force distance censuses.

    python scripts/pinned_certificates.py [--norm linf] [--points grid:3]
"""
from __future__ import annotations

import argparse
import csv
import sys

from rigidlab.colour_pin import Norm, distance_census, tree_certificate
from rigidlab.experiments import parse_generator
from rigidlab.hypergraph import path_graph, star_graph


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--norm", default="euclid")
    ap.add_argument("--points", default="line:8")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    norm = Norm.parse(args.norm)
    P = parse_generator(args.points, args.seed).points
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(["tree", "root", "min_pins", "certificate", "census"])
    trees = [("P2", path_graph(2), 0), ("P3", path_graph(3), 0), ("P3", path_graph(3), 1),
             ("K1,2", star_graph(2), 0), ("K1,3", star_graph(3), 0), ("P4", path_graph(4), 0)]
    for name, T, root in trees:
        try:
            cert = tree_certificate(norm, T, root, P)
        except ValueError as exc:
            print(f"{name} rooted at {root}: {exc}", file=sys.stderr)
            continue
        w.writerow([name, root, " ".join(map(str, cert.min_pins)), cert.certificate, distance_census(norm, T, P)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
