"""Distance colourings, pinned distances and the tree lower-bound certificate.

Distances are compared through exact keys whenever the inputs are rational:
the squared length for the Euclidean norm, sum |x_i|^p for integer p, max
|x_i| for the sup norm and the gauge of a rational polygon. Everything else
is a float snapped to a 1e-9 grid.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.special import lambertw

from .census import DEFAULT_BUDGET, _check_budget, quantize
from .hypergraph import EdgeColouring, Hypergraph, depth_partition
from .linalg import Number, is_exact, simplify

Point = tuple[Number, ...]
QUANTUM = 1e-9


@dataclass(frozen=True)
class Norm:
    kind: str  # "euclid", "lp", "linf", "poly"
    p: float | int | None = None
    vertices: tuple[Point, ...] = ()
    _facets: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("euclid", "lp", "linf", "poly"):
            raise ValueError(f"unknown norm kind '{self.kind}'")
        if self.kind == "lp" and (self.p is None or self.p < 1):
            raise ValueError("lp norm needs p >= 1")
        if self.kind == "poly":
            object.__setattr__(self, "_facets", _polygon_facets(self.vertices))

    @property
    def id(self) -> str:
        if self.kind == "lp":
            return f"lp:{self.p}"
        return self.kind

    @classmethod
    def parse(cls, spec: str, polygon: Sequence[Sequence[Number]] | None = None) -> "Norm":
        name, _, arg = spec.partition(":")
        if name in ("euclid", "euclidean", "l2"):
            return cls("euclid")
        if name == "linf":
            return cls("linf")
        if name == "lp":
            try:
                p = Fraction(arg)
            except ValueError:
                raise ValueError(f"norm '{spec}' needs a numeric p, e.g. lp:3") from None
            return cls("lp", simplify(p) if p.denominator == 1 else float(p))
        if name == "poly":
            if polygon is None:
                raise ValueError("polygonal norm needs its vertex list")
            return cls.polygonal(polygon)
        raise ValueError(f"unknown norm '{spec}'")

    @classmethod
    def polygonal(cls, vertices: Sequence[Sequence[Number]]) -> "Norm":
        return cls("poly", vertices=tuple(tuple(simplify(c) for c in v) for v in vertices))

    def key(self, v: Sequence[Number]):
        """A value that orders and identifies norms exactly (or quantized)."""
        exact = is_exact(v)
        if self.kind == "euclid":
            s = sum(c * c for c in v)
            return simplify(s) if exact else quantize([math.sqrt(s)])[0]
        if self.kind == "linf":
            s = max(abs(c) for c in v)
            return simplify(s) if exact else quantize([s])[0]
        if self.kind == "lp":
            if isinstance(self.p, int) and exact:
                return simplify(sum(abs(c) ** self.p for c in v))
            return quantize([sum(abs(float(c)) ** self.p for c in v) ** (1 / self.p)])[0]
        s = max(a * v[0] + b * v[1] for a, b in self._facets) if len(v) == 2 else None
        if s is None:
            raise ValueError("polygonal norms are planar")
        return simplify(s) if exact else quantize([s])[0]

    def __call__(self, v: Sequence[Number]) -> float:
        if self.kind == "euclid":
            return math.sqrt(sum(float(c) ** 2 for c in v))
        if self.kind == "linf":
            return float(max(abs(c) for c in v))
        if self.kind == "lp":
            return sum(abs(float(c)) ** self.p for c in v) ** (1 / self.p)
        return float(max(a * v[0] + b * v[1] for a, b in self._facets))

    def distance_key(self, x: Sequence[Number], y: Sequence[Number]):
        return self.key([a - b for a, b in zip(x, y)])


def _polygon_facets(vertices: tuple[Point, ...]) -> tuple:
    """Facet functionals (a, b) with a x + b y = 1 on each edge, for the gauge max."""
    if len(vertices) < 4 or len(vertices) % 2:
        raise ValueError("a centrally symmetric polygon has an even number (>= 4) of vertices")
    if any(len(v) != 2 for v in vertices):
        raise ValueError("polygon vertices must be planar")
    vs = set(vertices)
    if len(vs) != len(vertices) or any(tuple(-c for c in v) not in vs for v in vertices):
        raise ValueError("polygon must be centrally symmetric about the origin")
    ordered = sorted(vertices, key=lambda v: math.atan2(float(v[1]), float(v[0])))
    facets = []
    n = len(ordered)
    for i in range(n):
        (x0, y0), (x1, y1) = ordered[i], ordered[(i + 1) % n]
        # outward normal of a counterclockwise edge, scaled so the edge sits at level 1
        a, b = y1 - y0, x0 - x1
        h = a * x0 + b * y0
        if h <= 0:
            raise ValueError("polygon must contain the origin in its interior")
        facets.append((Fraction(a) / h if is_exact((a, h)) else a / h,
                       Fraction(b) / h if is_exact((b, h)) else b / h))
    for i in range(n):
        nxt = ordered[(i + 2) % n]
        a, b = facets[i]
        if a * nxt[0] + b * nxt[1] >= 1:
            raise ValueError("polygon is not strictly convex")
    return tuple(facets)


def _points(P) -> list[Point]:
    P = [tuple(simplify(c) for c in x) for x in P]
    if len(set(P)) != len(P):
        raise ValueError("point set contains duplicate points")
    return P


def distance_colouring(norm: Norm, P: Sequence[Sequence[Number]]) -> EdgeColouring:
    """Colour each edge of K_|P| by the distance between its endpoints."""
    P = _points(P)
    labels = {(i, j): norm.distance_key(P[i], P[j]) for i, j in itertools.combinations(range(len(P)), 2)}
    return EdgeColouring.from_labels(len(P), labels)


def pinned_distances(norm: Norm, P: Sequence[Sequence[Number]], x: Sequence[Number]) -> int:
    """|Delta_x(P)|, counting the zero distance from x to itself."""
    P = [tuple(simplify(c) for c in y) for y in P]
    x = tuple(simplify(c) for c in x)
    if x not in P:
        raise ValueError(f"pin {x} is not a point of P")
    return len({norm.distance_key(x, y) for y in P})


def distance_census(norm: Norm, G: Hypergraph, P: Sequence[Sequence[Number]],
                    budget: int = DEFAULT_BUDGET) -> int:
    """|f_{norm,G}(P^V)| by enumeration (edge values are distance keys)."""
    if G.k != 2:
        raise ValueError("norm censuses need a graph (k = 2)")
    P = [tuple(x) for x in P]
    _check_budget(len(P) ** G.vertex_count, budget)
    table = [[norm.distance_key(x, y) for y in P] for x in P]
    seen = set()
    for idx in itertools.product(range(len(P)), repeat=G.vertex_count):
        seen.add(tuple(table[idx[a]][idx[b]] for a, b in G.edges))
    return len(seen)


# --- colouring lemma ----------------------------------------------------------

@dataclass(frozen=True)
class ColourBoundFunctions:
    """An increasing f bounding monochromatic edge counts, and a subadditive g <= f^-1."""

    kind: str  # "abs" or "power"
    d: int | None = None
    C: float | None = None
    delta: float | None = None

    @classmethod
    def abs_bounds(cls, d: int) -> "ColourBoundFunctions":
        """f(t) = (d/2) t log t, g(t) = 2t / (d log(dt + 1)), natural logarithm."""
        if d < 1:
            raise ValueError("d must be positive")
        return cls("abs", d=d)

    @classmethod
    def power_bounds(cls, C: float, delta: float) -> "ColourBoundFunctions":
        """f(m) = C m^(1 + delta), g = f^-1."""
        if C <= 0 or delta <= 0:
            raise ValueError("C and delta must be positive")
        return cls("power", C=C, delta=delta)

    @property
    def label(self) -> str:
        return f"abs(d={self.d})" if self.kind == "abs" else f"power(C={self.C},delta={self.delta})"

    def f(self, t: float) -> float:
        if self.kind == "abs":
            return 0.0 if t <= 0 else self.d / 2 * t * math.log(t)
        return self.C * t ** (1 + self.delta)

    def f_inv(self, s: float) -> float:
        if self.kind == "abs":
            # t log t = u  =>  t = u / W(u)
            u = 2 * s / self.d
            if u <= 0:
                return 1.0
            return float(u / lambertw(u).real)
        return (s / self.C) ** (1 / (1 + self.delta))

    def g(self, t: float) -> float:
        if self.kind == "abs":
            return 2 * t / (self.d * math.log(self.d * t + 1))
        return self.f_inv(t)


@dataclass(frozen=True)
class ColourLemmaReport:
    n: int
    hypothesis_holds: bool
    violation: tuple | None  # (colour, vertex subset, edges, f(m))
    bound: float
    max_colour_degree: int
    vertex: int
    conclusion_holds: bool
    bounds: str

    def to_dict(self) -> dict:
        return {"n": self.n, "hypothesis_holds": self.hypothesis_holds,
                "violation": list(self.violation) if self.violation else None,
                "bound": self.bound, "max_colour_degree": self.max_colour_degree,
                "vertex": self.vertex, "conclusion_holds": self.conclusion_holds,
                "bounds": self.bounds}


def _max_edges_by_size(edges: list[tuple[int, int]]) -> tuple[dict[int, tuple[int, int]], list[int]]:
    """For each subset size m of the touched vertices: (max induced edges, mask)."""
    verts = sorted({v for e in edges for v in e})
    pos = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for a, b in edges:
        adj[pos[a]] |= 1 << pos[b]
        adj[pos[b]] |= 1 << pos[a]
    size = 1 << len(verts)
    count = [0] * size
    best: dict[int, tuple[int, int]] = {}
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        count[mask] = count[rest] + bin(adj[low] & rest).count("1")
        m = bin(mask).count("1")
        if m not in best or count[mask] > best[m][0]:
            best[m] = (count[mask], mask)
    return best, verts


def check_colour_lemma(colouring: EdgeColouring, bounds: ColourBoundFunctions) -> ColourLemmaReport:
    """Verify the monochromatic hypothesis exhaustively, then the colour-degree conclusion."""
    n = colouring.n
    violation = None
    for colour, edges in colouring.classes().items():
        best, verts = _max_edges_by_size(edges)
        for m, (c, mask) in sorted(best.items()):
            if c > bounds.f(m) + 1e-12:
                subset = [verts[i] for i in range(len(verts)) if mask >> i & 1]
                violation = (colour, subset, c, bounds.f(m))
                break
        if violation:
            break
    bound = bounds.g(math.comb(n, 2)) / n if n >= 2 else 0.0
    degrees = [colouring.colour_degree(v) for v in range(n)]
    vertex = max(range(n), key=lambda v: (degrees[v], -v)) if n else 0
    top = degrees[vertex] if n else 0
    return ColourLemmaReport(n, violation is None, violation, bound, top, vertex,
                             top >= bound - 1e-12, bounds.label)


# --- pins and the tree certificate --------------------------------------------

@dataclass(frozen=True)
class RichPinResult:
    pins: tuple[Point, ...]  # extraction order
    counts: tuple[int, ...]  # |Delta_x(P)| per pin, non-increasing
    required: float | None  # H(|P|/2) if H was given
    hypothesis_holds: bool
    failed_pin: Point | None = None

    def to_dict(self) -> dict:
        return {"pins": [[str(c) for c in x] for x in self.pins], "counts": list(self.counts),
                "required": self.required, "hypothesis_holds": self.hypothesis_holds,
                "failed_pin": [str(c) for c in self.failed_pin] if self.failed_pin else None}


def pin_counts(norm: Norm, P: Sequence[Sequence[Number]]) -> list[int]:
    P = _points(P)
    return [len({norm.distance_key(x, y) for y in P}) for x in P]


def rich_pin_set(norm: Norm, P: Sequence[Sequence[Number]],
                 H: Callable[[float], float] | None = None) -> RichPinResult:
    """Greedily extract ceil(|P|/2) pins, each maximising |Delta_x(P)| among survivors."""
    P = _points(P)
    counts = pin_counts(norm, P)
    survivors = list(range(len(P)))
    picked = []
    for _ in range((len(P) + 1) // 2):
        i = max(survivors, key=lambda j: (counts[j], -j))
        survivors.remove(i)
        picked.append(i)
    required = H(len(P) / 2) if H is not None else None
    failed = next((P[i] for i in picked if required is not None and counts[i] < required), None)
    return RichPinResult(tuple(P[i] for i in picked), tuple(counts[i] for i in picked),
                         required, failed is None, failed)


@dataclass(frozen=True)
class TreeCertificate:
    certificate: int
    levels: tuple[int, ...]  # |V_i|
    min_pins: tuple[int, ...]  # m_i = min over P_i of |Delta_x(P_{i+1})|
    set_sizes: tuple[int, ...]  # |P_0|, ..., |P_t|

    def to_dict(self) -> dict:
        return {"certificate": self.certificate, "levels": list(self.levels),
                "min_pins": list(self.min_pins), "set_sizes": list(self.set_sizes)}


def tree_certificate(norm: Norm, G: Hypergraph, root: int, P: Sequence[Sequence[Number]]) -> TreeCertificate:
    """Lower bound prod_i m_i^{|V_{i+1}|} for the number of distance patterns of the tree G on P.

    P_t = P and P_i is the rich half of P_{i+1}. Each vertex at depth i+1
    can be placed at m_i distinct distances from its parent's image in P_i.
    """
    levels = depth_partition(G, root)
    t = len(levels) - 1
    P = _points(P)
    if len(P) < 2 ** t:
        raise ValueError(f"a tree of depth {t} needs at least {2 ** t} points, got {len(P)}")
    sets = [P]
    mins = []
    for _ in range(t):
        res = rich_pin_set(norm, sets[0])
        mins.insert(0, min(res.counts))
        sets.insert(0, list(res.pins))
    cert = 1
    for i in range(t):
        cert *= mins[i] ** len(levels[i + 1])
    return TreeCertificate(cert, tuple(len(lv) for lv in levels), tuple(mins),
                           tuple(len(s) for s in sets))


def norm_spot_check(norm: Norm, samples: int = 100, seed: int = 0, d: int = 2) -> bool:
    """Homogeneity and the triangle inequality on random float vectors."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x, y = rng.normal(size=d), rng.normal(size=d)
        lam = float(rng.uniform(0.1, 10))
        nx_, ny = norm(list(x)), norm(list(y))
        if abs(norm(list(lam * x)) - lam * nx_) > 1e-9 * max(1.0, lam * nx_):
            return False
        if norm(list(x + y)) > nx_ + ny + 1e-9:
            return False
        if abs(norm(list(-x)) - nx_) > 1e-9 * max(1.0, nx_):
            return False
    return True
