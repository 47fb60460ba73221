"""Experiment configs, the generator spec mini-language and log-log exponent fits."""
from __future__ import annotations

import datetime as _dt
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .census import DEFAULT_BUDGET, census, energy, rich_transformations
from .colour_pin import Norm, pin_counts, rich_pin_set
from .groups import named_group
from .hypergraph import Hypergraph
from .metrics import parse_metric
from .pointsets import PointSet, circle, circle_rat, grid, line, random_generic, scaled_grid

TASKS = ("census", "energy", "rich", "pin")


def parse_generator(spec: str, seed: int | None = 0) -> PointSet:
    """``grid:m[:d]``, ``scaled_grid:n``, ``line:n``, ``circle:n``, ``circle_rat:n``,
    ``random:d:n[:bound]`` (seeded by ``seed``), or a path to a points JSON file."""
    if spec.endswith(".json"):
        return PointSet.from_json(Path(spec).read_text())
    name, *args = spec.replace("-", "_").split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ValueError(f"generator '{spec}' has a non-integer parameter") from None
    makers = {"grid": (grid, 1, 2), "scaled_grid": (scaled_grid, 1, 1), "line": (line, 1, 1),
              "circle": (circle, 1, 1), "circle_rat": (circle_rat, 1, 1)}
    if name in makers:
        fn, lo, hi = makers[name]
        if not lo <= len(nums) <= hi:
            raise ValueError(f"generator '{name}' takes {lo}..{hi} parameters")
        return fn(*nums)
    if name == "random":
        if len(nums) not in (2, 3):
            raise ValueError("generator 'random' takes d:n[:bound]")
        return random_generic(nums[0], nums[1], nums[2] if len(nums) == 3 else 10**6, seed)
    raise ValueError(f"unknown point generator '{name}'")


@dataclass
class ExperimentConfig:
    task: str = "census"
    metric: str = "euclid_sq"
    dim: int = 2
    graph: str | dict | None = None  # path or inline graph JSON
    points: str = "grid:3:2"  # generator spec or points file
    filter: str = "all"
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    output: str | None = None
    format: str = "json"
    v_size: int = 2  # energy
    group: str | None = None  # energy / rich
    t: int = 2  # rich
    norm: str = "euclid"  # pin

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"config key 'task' must be one of {', '.join(TASKS)}")
        if self.budget <= 0:
            raise ValueError("config key 'budget' must be positive")
        if self.format not in ("json", "csv"):
            raise ValueError("config key 'format' must be json or csv")

    @classmethod
    def from_json(cls, data: dict | str) -> "ExperimentConfig":
        if isinstance(data, str):
            data = json.loads(data)
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"config has unknown key '{unknown[0]}'")
        return cls(**data)

    def load_graph(self) -> Hypergraph:
        if self.graph is None:
            raise ValueError("config key 'graph' is required for this task")
        if isinstance(self.graph, dict):
            return Hypergraph.from_json(self.graph)
        return Hypergraph.from_json(Path(self.graph).read_text())


def provenance(argv: Sequence[str] | None = None, seed: int | None = None, params: dict | None = None) -> dict:
    return {"argv": list(sys.argv if argv is None else argv), "seed": seed, "version": __version__,
            "python": platform.python_version(), "numpy": np.__version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "parameters": params or {}}


def run_experiment(config: ExperimentConfig, argv: Sequence[str] | None = None) -> dict:
    """Generator -> task pipeline. Writes the report if ``config.output`` is set."""
    P = parse_generator(config.points, config.seed)
    if config.task == "census":
        m = parse_metric(config.metric, config.dim)
        result = census(m, config.load_graph(), P.points, config.filter, config.budget).to_dict()
    elif config.task == "energy":
        g = named_group(config.group) if config.group else parse_metric(config.metric, config.dim)
        result = energy(g, config.v_size, P.points, config.budget).to_dict()
    elif config.task == "rich":
        result = rich_transformations(named_group(config.group or "SE2"), P.points, config.t).to_dict()
    else:
        norm = Norm.parse(config.norm)
        res = rich_pin_set(norm, P.points)
        result = {"pin_counts": pin_counts(norm, P.points), "rich_pins": res.to_dict()}
    report = {"result": result, "points": len(P),
              "provenance": provenance(argv, config.seed, asdict(config))}
    if config.output:
        Path(config.output).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report


@dataclass(frozen=True)
class ExponentFit:
    sizes: tuple[float, ...]
    counts: tuple[float, ...]
    slope: float
    intercept: float
    residual: float  # sum of squared log residuals

    def to_dict(self) -> dict:
        return asdict(self)


def fit_exponent(sizes: Sequence[float], counts: Sequence[float]) -> ExponentFit:
    """Least squares fit of log(count) = slope * log(size) + intercept."""
    if len(sizes) != len(counts):
        raise ValueError("sizes and counts differ in length")
    if len(sizes) < 3:
        raise ValueError("an exponent fit needs at least 3 points")
    if any(c <= 0 for c in counts) or any(s <= 0 for s in sizes):
        raise ValueError("sizes and counts must be positive")
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    if np.ptp(x) == 0:
        raise ValueError("sizes must not all be equal")
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    if not math.isfinite(slope):
        raise ValueError("fit produced a non-finite slope")
    return ExponentFit(tuple(float(s) for s in sizes), tuple(float(c) for c in counts),
                       float(slope), float(intercept), residual)
