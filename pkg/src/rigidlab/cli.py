"""``rigidlab`` command line.

Exit codes: 0 success, 2 usage or parse error, 3 enumeration budget
exceeded, 4 a checked hypothesis failed (the report is still written).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .census import (DEFAULT_BUDGET, FILTERS, BudgetExceeded, census, energy, energy_pairwise,
                     fibre_energy_consistency, gram_census, rich_transformations, tensor_census)
from .colour_pin import (ColourBoundFunctions, Norm, check_colour_lemma, distance_census,
                         distance_colouring, pin_counts, rich_pin_set, tree_certificate)
from .experiments import ExperimentConfig, fit_exponent, parse_generator, provenance, run_experiment
from .groups import named_group
from .hypergraph import Hypergraph, find_nac_colouring, zero_extension
from .linalg import AffineMap, simplify
from .metrics import parse_metric
from .pointsets import PointSet, curve_richness_audit, orbit_tight_set
from .rigidity import is_g_rigid, is_infinitesimally_rigid

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_HYPOTHESIS = 0, 2, 3, 4


class UsageError(ValueError):
    pass


# --- input helpers ------------------------------------------------------------

def _read_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"{what} file '{path}' does not exist") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file '{path}' is not valid JSON: {exc}") from None


def _graph(path: str) -> Hypergraph:
    return Hypergraph.from_json(_read_json(path, "graph"))


def _points(spec: str, seed: int | None = 0) -> PointSet:
    if spec.endswith(".json"):
        return PointSet.from_json(_read_json(spec, "points"))
    return parse_generator(spec, seed)


def _rational_json(text: str):
    """Parse a JSON array whose leaves may be rationals written as strings."""
    def conv(x):
        if isinstance(x, list):
            return [conv(y) for y in x]
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise UsageError(f"expected an integer or rational string, got {x!r}")
        return simplify(Fraction(x))
    try:
        return conv(json.loads(text))
    except (json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _norm(args) -> Norm:
    polygon = None
    if args.norm.startswith("poly:"):
        polygon = PointSet.from_json(_read_json(args.norm[5:], "polygon")).points
    return Norm.parse(args.norm, polygon)


def _bounds(spec: str) -> ColourBoundFunctions:
    name, *vals = spec.split(":")
    try:
        if name == "abs" and len(vals) == 1:
            return ColourBoundFunctions.abs_bounds(int(vals[0]))
        if name == "power" and len(vals) == 2:
            return ColourBoundFunctions.power_bounds(float(Fraction(vals[0])), float(Fraction(vals[1])))
    except ValueError as exc:
        raise UsageError(f"bad --bounds '{spec}': {exc}") from None
    raise UsageError(f"--bounds must be abs:<d> or power:<C>:<delta>, got '{spec}'")


# --- output -------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(args, report: dict, rows: list[dict] | None = None):
    if args.format == "csv":
        if rows is None:
            rows = [{k: json.dumps(_jsonable(v)) if isinstance(v, (list, dict)) else _jsonable(v)
                     for k, v in report.items() if k != "provenance"}]
        buf = io.StringIO()
        fields = list(rows[0]) if rows else []
        w = csv.DictWriter(buf, fieldnames=fields, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    else:
        full = dict(report)
        full["provenance"] = provenance(args.argv, getattr(args, "seed", None))
        text = json.dumps(_jsonable(full), sort_keys=True, indent=2) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------

def cmd_rigid(args) -> int:
    m = parse_metric(args.metric, args.dim)
    G = _graph(args.graph)
    if args.points:
        p = _points(args.points).points
        v = is_infinitesimally_rigid(m, G, p)
        _emit(args, {"metric": m.id, "mode": "realisation", **v.to_dict()})
    else:
        v = is_g_rigid(m, G, args.trials, args.seed)
        _emit(args, {"metric": m.id, "mode": "generic", **v.to_dict()})
    return EXIT_OK


def cmd_census(args) -> int:
    m = parse_metric(args.metric, args.dim)
    rep = census(m, _graph(args.graph), _points(args.points, args.seed).points, args.filter,
                 args.budget, args.threads)
    rows = [{"fibre_size": s, "fibres": c} for s, c in rep.histogram().items()]
    _emit(args, {"metric": m.id, **rep.to_dict()}, rows)
    return EXIT_OK


def cmd_energy(args) -> int:
    g = named_group(args.group) if args.group else parse_metric(args.metric, args.dim)
    P = _points(args.points, args.seed).points
    fn = energy_pairwise if args.pairwise else energy
    rep = fn(g, args.vsize, P, args.budget)
    out = rep.to_dict()
    code = EXIT_OK
    if args.graph:
        m = parse_metric(args.metric, args.dim)
        cons = fibre_energy_consistency(m, _graph(args.graph), P, args.budget)
        out["consistency"] = cons.to_dict()
        code = EXIT_OK if cons.ok else EXIT_HYPOTHESIS
    _emit(args, out)
    return code


def cmd_rich(args) -> int:
    rep = rich_transformations(named_group(args.group), _points(args.points, args.seed).points, args.t,
                               args.class_key)
    _emit(args, rep.to_dict())
    return EXIT_OK


def cmd_gram(args) -> int:
    P = _points(args.points, args.seed).points
    _emit(args, {"n": args.n, "distinct_gram": gram_census(P, args.n, args.budget, args.threads)})
    return EXIT_OK


def cmd_tensor(args) -> int:
    P = _points(args.points, args.seed).points
    _emit(args, {"n": args.n, "k": args.k,
                 "distinct_tensors": tensor_census(P, args.n, args.k, args.budget, args.threads)})
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "orbit":
        if not (args.metric and args.A and args.x):
            raise UsageError("gen orbit needs --metric, --A and --x")
        A = _rational_json(args.A)
        b = _rational_json(args.b) if args.b else None
        x = _rational_json(args.x)
        m = parse_metric(args.metric, len(x))
        ps = orbit_tight_set(m, AffineMap.make(A, b), x, args.n)
    elif args.kind == "grid":
        ps = parse_generator(f"grid:{args.m}:{args.dim}")
    elif args.kind == "random":
        ps = parse_generator(f"random:{args.dim}:{args.n}:{args.bound}", args.seed)
    else:
        ps = parse_generator(f"{args.kind}:{args.n}")
    if args.format == "csv":
        _emit(args, {}, [{f"x{i}": str(c) if not isinstance(c, float) else c for i, c in enumerate(pt)}
                         for pt in ps.points])
    else:
        text = json.dumps(ps.to_json(), indent=2) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_audit(args) -> int:
    P = _points(args.points, args.seed).points
    rep = curve_richness_audit(P, args.degree, args.threshold, args.budget, args.seed)
    _emit(args, rep.to_dict())
    return EXIT_HYPOTHESIS if rep.exceeds else EXIT_OK


def cmd_pin(args) -> int:
    norm = _norm(args)
    P = _points(args.points, args.seed).points
    H = (lambda n: args.h_scale * n ** args.h_power) if args.h_scale is not None else None
    res = rich_pin_set(norm, P, H)
    counts = pin_counts(norm, P)
    rows = [{"point": json.dumps([str(c) for c in x]), "pinned": c} for x, c in zip(P, counts)]
    _emit(args, {"norm": norm.id, "pin_counts": counts, "rich_pins": res.to_dict()}, rows)
    return EXIT_OK if res.hypothesis_holds else EXIT_HYPOTHESIS


def cmd_colour_lemma(args) -> int:
    P = _points(args.points, args.seed).points
    rep = check_colour_lemma(distance_colouring(_norm(args), P), _bounds(args.bounds))
    _emit(args, rep.to_dict())
    if not rep.hypothesis_holds:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_tree_cert(args) -> int:
    norm = _norm(args)
    G = _graph(args.graph)
    P = _points(args.points, args.seed).points
    cert = tree_certificate(norm, G, args.root, P)
    out = {"norm": norm.id, **cert.to_dict()}
    code = EXIT_OK
    if args.check:
        count = distance_census(norm, G, P, args.budget)
        out["census"] = count
        out["valid"] = cert.certificate <= count
        code = EXIT_OK if out["valid"] else EXIT_HYPOTHESIS
    _emit(args, out)
    return code


def cmd_fit(args) -> int:
    if args.series:
        rows = list(csv.DictReader(io.StringIO(Path(args.series).read_text())))
        if not rows or not {"size", "count"} <= set(rows[0]):
            raise UsageError("series CSV needs 'size' and 'count' columns")
        sizes = [float(r["size"]) for r in rows]
        counts = [float(r["count"]) for r in rows]
    else:
        if not (args.sizes and args.counts):
            raise UsageError("fit needs --series or both --sizes and --counts")
        sizes = [float(x) for x in args.sizes.split(",")]
        counts = [float(x) for x in args.counts.split(",")]
    fit = fit_exponent(sizes, counts)
    d = fit.to_dict()
    _emit(args, d, [{"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual}])
    return EXIT_OK


def cmd_nac(args) -> int:
    col = find_nac_colouring(_graph(args.graph))
    out = {"exists": col is not None}
    if col is not None:
        out["red"] = [list(e) for e, c in col.items() if c == 1]
        out["blue"] = [list(e) for e, c in col.items() if c == 0]
    _emit(args, out)
    return EXIT_OK


def cmd_zero_ext(args) -> int:
    G2 = zero_extension(_graph(args.graph), args.u, args.w)
    text = json.dumps(G2.to_json()) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json(_read_json(args.config, "config"))
    report = run_experiment(cfg, args.argv)
    if not cfg.output:
        sys.stdout.write(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n")
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rigidlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o")
        p.add_argument("--seed", type=int, default=0)
        return p

    def metric_opts(p):
        p.add_argument("--metric", default="euclid_sq")
        p.add_argument("--dim", type=int, default=2)

    def budget_opts(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--threads", type=int, default=None)

    p = add("rigid", cmd_rigid, "generic or realisation rigidity verdict")
    metric_opts(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--points", help="test this realisation instead of sampling")
    p.add_argument("--trials", type=int, default=5)

    p = add("census", cmd_census, "distinct measurement vectors over P^V")
    metric_opts(p)
    budget_opts(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--filter", choices=FILTERS, default="all")

    p = add("energy", cmd_energy, "isometry energy of P^V")
    metric_opts(p)
    budget_opts(p)
    p.add_argument("--group", help="SE2, E2, pseudo, SL2, O2, O3 (overrides --metric)")
    p.add_argument("--vsize", type=int, default=2)
    p.add_argument("--points", required=True)
    p.add_argument("--pairwise", action="store_true", help="decide every pair separately")
    p.add_argument("--graph", help="also run the fibre/energy consistency check")

    p = add("rich", cmd_rich, "classes of t-rich transformations")
    p.add_argument("--group", default="SE2")
    p.add_argument("--points", required=True)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--class-key", choices=("map", "sets"), default="map")

    p = add("gram", cmd_gram, "distinct Gram matrices")
    budget_opts(p)
    p.add_argument("--points", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("tensor", cmd_tensor, "distinct symmetric tensors")
    budget_opts(p)
    p.add_argument("--points", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)

    p = add("gen", cmd_gen, "generate a point set")
    p.add_argument("kind", choices=("grid", "scaled_grid", "line", "circle", "circle_rat", "orbit", "random"))
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--bound", type=int, default=10**6)
    p.add_argument("--metric")
    p.add_argument("--A", help="JSON matrix, rationals as strings")
    p.add_argument("--b", help="JSON vector")
    p.add_argument("--x", help="JSON start point")

    p = add("audit", cmd_audit, "curve-richness audit of a planar point set")
    p.add_argument("--points", required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--budget", type=int, default=200_000)

    p = add("pin", cmd_pin, "pinned distance counts and the rich pin set")
    p.add_argument("--norm", default="euclid")
    p.add_argument("--points", required=True)
    p.add_argument("--h-scale", type=float, default=None, help="H(n) = scale * n^power")
    p.add_argument("--h-power", type=float, default=1.0)

    p = add("colour-lemma", cmd_colour_lemma, "colouring lemma on a distance colouring")
    p.add_argument("--norm", default="euclid")
    p.add_argument("--points", required=True)
    p.add_argument("--bounds", default="abs:2", help="abs:<d> or power:<C>:<delta>")

    p = add("tree-cert", cmd_tree_cert, "tree lower-bound certificate")
    p.add_argument("--norm", default="euclid")
    p.add_argument("--graph", required=True)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--points", required=True)
    p.add_argument("--check", action="store_true", help="compare with the brute-force census")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("fit", cmd_fit, "log-log exponent fit")
    p.add_argument("--series", help="CSV with size,count columns")
    p.add_argument("--sizes")
    p.add_argument("--counts")

    p = add("nac", cmd_nac, "search for a NAC-colouring")
    p.add_argument("--graph", required=True)

    p = add("zero-ext", cmd_zero_ext, "0-extension of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--w", type=int, required=True)

    p = add("run", cmd_run, "run an experiment config")
    p.add_argument("--config", required=True)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    args.argv = ["rigidlab", *argv]
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"rigidlab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"rigidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
