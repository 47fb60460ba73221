"""Brute-force censuses over P^V: measurement images, fibres, energy and rich transformations.

Enumeration is an odometer over P^V with the last vertex innermost. With
more than one worker the work is split on the image of the first vertex and
the per-worker counters are merged, so every reported number is independent
of the worker count.
"""
from __future__ import annotations

import itertools
import os
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import Euclidean, IsometryGroup, Pseudo11
from .hypergraph import Hypergraph, complete_multiset_hypergraph, complete_with_loops
from .linalg import Number, is_exact
from .metrics import Metric, dot, sym_tensor
from .rigidity import affinely_spanning, is_g_regular

DEFAULT_BUDGET = 10**8
DEFAULT_QUANTUM = 1e-9
FILTERS = ("all", "injective", "spanning", "regular")

Point = tuple[Number, ...]


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = "realisations"):
        super().__init__(f"enumeration needs {required} {what} but the budget is {budget}; "
                         f"raise --budget to at least {required}")
        self.required = required
        self.budget = budget


def default_threads() -> int:
    raw = os.environ.get("RIGIDLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"RIGIDLAB_THREADS must be an integer, got '{raw}'") from None


def _check_budget(required: int, budget: int, what: str = "realisations"):
    if budget <= 0:
        raise ValueError("budget must be positive")
    if required > budget:
        raise BudgetExceeded(required, budget, what)


def quantize(values: Iterable[Number], quantum: float = DEFAULT_QUANTUM) -> tuple:
    """Exact values pass through; floats are snapped to a grid of width ``quantum``.

    Two floats that differ by less than the grid but straddle a cell boundary
    land in different cells; two genuinely distinct values closer than the
    grid collide and undercount.
    """
    return tuple(v if not isinstance(v, float) else round(v / quantum) for v in values)


def measure(m: Metric, G: Hypergraph, p: Sequence[Sequence[Number]]) -> tuple[Number, ...]:
    """f_{g,G}(p): one value per hyperedge, hyperedges in ascending vertex order."""
    if G.k != m.k:
        raise ValueError(f"metric {m.id} has arity {m.k} but the hypergraph is {G.k}-uniform")
    return tuple(m(*(p[v] for v in e)) for e in G.edges)


@dataclass(frozen=True)
class CensusReport:
    distinct_count: int
    fibre_sizes: tuple[int, ...]  # descending
    enumerated: int
    filter: str

    @property
    def fibre_square_sum(self) -> int:
        return sum(s * s for s in self.fibre_sizes)

    def histogram(self) -> dict[int, int]:
        """fibre size -> number of fibres of that size."""
        return dict(sorted(Counter(self.fibre_sizes).items()))

    def to_dict(self) -> dict:
        return {"distinct_count": self.distinct_count, "enumerated": self.enumerated,
                "filter": self.filter, "fibre_sizes": list(self.fibre_sizes)}


def _passes(flt: str, idx: tuple[int, ...], p, m: Metric, G: Hypergraph) -> bool:
    if flt == "all":
        return True
    if flt == "injective":
        return len(set(idx)) == len(idx)
    if flt == "spanning":
        return affinely_spanning(p)
    return is_g_regular(m, G, p)


def _census_chunk(m: Metric, G: Hypergraph, P: Sequence[Point], flt: str,
                  quantum: float, first: int | None) -> Counter:
    n = G.vertex_count
    counts: Counter = Counter()
    heads = range(len(P)) if first is None else (first,)
    for head in heads:
        for tail in itertools.product(range(len(P)), repeat=n - 1):
            idx = (head,) + tail
            p = [P[i] for i in idx]
            if _passes(flt, idx, p, m, G):
                counts[quantize(measure(m, G, p), quantum)] += 1
    return counts


def _map_chunks(fn, args_per_chunk: list[tuple], threads: int) -> list:
    if threads <= 1 or len(args_per_chunk) <= 1:
        return [fn(*a) for a in args_per_chunk]
    with ProcessPoolExecutor(max_workers=min(threads, len(args_per_chunk))) as pool:
        futures = [pool.submit(fn, *a) for a in args_per_chunk]
        return [f.result() for f in futures]


def census_counter(m: Metric, G: Hypergraph, P: Sequence[Sequence[Number]], filter: str = "all",
                   budget: int = DEFAULT_BUDGET, threads: int | None = None,
                   quantum: float = DEFAULT_QUANTUM) -> Counter:
    """Fibre counter: measurement key -> number of realisations in that fibre."""
    if filter not in FILTERS:
        raise ValueError(f"unknown filter '{filter}'; choose from {', '.join(FILTERS)}")
    if not P:
        raise ValueError("point set is empty")
    P = [tuple(x) for x in P]
    for x in P:
        if len(x) != m.d:
            raise ValueError(f"point {x} is not {m.d}-dimensional")
    n = G.vertex_count
    _check_budget(len(P) ** n, budget)
    threads = default_threads() if threads is None else threads
    if n == 0:
        return Counter({(): 1})
    chunks = [(m, G, P, filter, quantum, i) for i in range(len(P))] if threads > 1 else \
        [(m, G, P, filter, quantum, None)]
    total: Counter = Counter()
    for part in _map_chunks(_census_chunk, chunks, threads):
        total.update(part)
    return total


def census(m: Metric, G: Hypergraph, P: Sequence[Sequence[Number]], filter: str = "all",
           budget: int = DEFAULT_BUDGET, threads: int | None = None,
           quantum: float = DEFAULT_QUANTUM) -> CensusReport:
    counts = census_counter(m, G, P, filter, budget, threads, quantum)
    sizes = tuple(sorted(counts.values(), reverse=True))
    return CensusReport(len(counts), sizes, sum(sizes), filter)


# --- energy -------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyReport:
    energy: int
    method: str  # "orbit-key", "finite-group" or "affine-solve"
    group: str
    v_size: int
    point_count: int
    flagged: bool = False  # some pair was decided by the documented fallback

    def to_dict(self) -> dict:
        return {"energy": self.energy, "method": self.method, "group": self.group,
                "v_size": self.v_size, "points": self.point_count, "flagged": self.flagged}


def _as_group(g: Metric | IsometryGroup) -> IsometryGroup:
    return g.group if isinstance(g, Metric) else g


def _configs(P: Sequence[Point], v_size: int) -> Iterable[tuple[Point, ...]]:
    return itertools.product(P, repeat=v_size)


def _prepare(P, v_size: int, budget: int, exponent: int) -> list[Point]:
    if v_size < 1:
        raise ValueError("V_size must be at least 1")
    if not P:
        raise ValueError("point set is empty")
    P = [tuple(x) for x in P]
    if not is_exact(P):
        raise ValueError("energy needs exact rational points")
    _check_budget(len(P) ** (exponent * v_size), budget,
                  "configurations" if exponent == 1 else "configuration pairs")
    return P


def orbit_classes(group: IsometryGroup, v_size: int, P: Sequence[Point],
                  budget: int = DEFAULT_BUDGET) -> dict:
    """orbit key -> list of configurations in that Gamma-orbit (within P^V)."""
    P = _prepare(P, v_size, budget, 1)
    classes: dict = {}
    for p in _configs(P, v_size):
        classes.setdefault(group.orbit_key(p), []).append(p)
    return classes


def energy(g: Metric | IsometryGroup, v_size: int, P: Sequence[Sequence[Number]],
           budget: int = DEFAULT_BUDGET) -> EnergyReport:
    """|E_{V,Gamma}(P)| as the sum of squared orbit-class sizes within P^V."""
    group = _as_group(g)
    P = _prepare(P, v_size, budget, 1)
    counts = Counter(group.orbit_key(p) for p in _configs(P, v_size))
    method = "finite-group" if group.finite_elements is not None else "orbit-key"
    return EnergyReport(sum(c * c for c in counts.values()), method, group.name, v_size, len(P))


def energy_pairwise(g: Metric | IsometryGroup, v_size: int, P: Sequence[Sequence[Number]],
                    budget: int = DEFAULT_BUDGET) -> EnergyReport:
    """The same count by deciding every ordered pair (p, q) separately."""
    group = _as_group(g)
    P = _prepare(P, v_size, budget, 2)
    configs = list(_configs(P, v_size))
    total, flagged = 0, False
    for p in configs:
        for q in configs:
            ok, decided = group.related(p, q)
            total += ok
            flagged |= not decided
    method = "finite-group" if group.finite_elements is not None else "affine-solve"
    return EnergyReport(total, method, group.name, v_size, len(P), flagged)


@dataclass(frozen=True)
class ConsistencyReport:
    energy_pairs_preserve_g: bool
    fibre_square_sum: int
    energy: int
    square_sum_dominates: bool
    distinct: int
    ratio: float  # |P|^{2|V|} / (|f| * energy)

    @property
    def ok(self) -> bool:
        return self.energy_pairs_preserve_g and self.square_sum_dominates

    def to_dict(self) -> dict:
        return {"energy_pairs_preserve_g": self.energy_pairs_preserve_g,
                "fibre_square_sum": self.fibre_square_sum, "energy": self.energy,
                "square_sum_dominates": self.square_sum_dominates,
                "distinct": self.distinct, "ratio": self.ratio, "ok": self.ok}


def fibre_energy_consistency(m: Metric, G: Hypergraph, P: Sequence[Sequence[Number]],
                             budget: int = DEFAULT_BUDGET) -> ConsistencyReport:
    """Check that Gamma_g-related realisations share a measurement vector.

    Within one orbit class every ordered pair is an energy pair, so (a) holds
    iff each class carries a single measurement vector. Then every class sits
    inside a fibre and the sum of squared fibre sizes dominates the energy.
    """
    classes = orbit_classes(m.group, G.vertex_count, P, budget)
    preserved = all(len({measure(m, G, p) for p in members}) == 1 for members in classes.values())
    en = sum(len(c) ** 2 for c in classes.values())
    rep = census(m, G, P, budget=budget, threads=1)
    total = len(P) ** (2 * G.vertex_count)
    return ConsistencyReport(preserved, rep.fibre_square_sum, en, rep.fibre_square_sum >= en,
                             rep.distinct_count, total / (rep.distinct_count * en))


# --- rich transformations -------------------------------------------------------

RICH_GROUPS = (Euclidean(2, True), Euclidean(2, False), Pseudo11())


@dataclass(frozen=True)
class RichReport:
    t: int
    classes: int
    richness: tuple[int, ...]  # |P cap theta P| per class, descending, over all classes >= 2
    on_diagonal_warning: bool = False

    def to_dict(self) -> dict:
        return {"t": self.t, "classes": self.classes, "richness": list(self.richness),
                "on_diagonal_warning": self.on_diagonal_warning}


def transformation_classes(group: IsometryGroup, P: Sequence[Sequence[Number]],
                           key: str = "map") -> dict:
    """Class key -> a representative theta, over all theta sending some ordered
    pair of P onto another.

    ``key="map"`` identifies theta by the partial map it induces on P (the set
    of pairs (x, theta x) inside P x P). ``key="sets"`` uses only the two sets
    P cap theta P and P cap theta^-1 P, which merges maps that agree on those
    sets but pair the points differently.
    """
    if group not in RICH_GROUPS:
        raise ValueError(f"rich transformations are implemented for SE(2), E(2) and R2xO(1,1), "
                         f"not {group.name}")
    if key not in ("map", "sets"):
        raise ValueError("class key must be 'map' or 'sets'")
    P = [tuple(x) for x in P]
    if not is_exact(P):
        raise ValueError("rich transformations need exact rational points")
    pset = set(P)
    if len(pset) != len(P):
        raise ValueError("point set contains duplicates")
    out: dict = {}
    for a, b in itertools.permutations(P, 2):
        for c, e in itertools.permutations(P, 2):
            for theta in group.pair_transforms(a, b, c, e):
                graph = frozenset((x, y) for x in P if (y := theta(x)) in pset)
                if key == "sets":
                    k = (frozenset(y for _, y in graph), frozenset(x for x, _ in graph))
                else:
                    k = graph
                out.setdefault(k, theta)
    return out


def _richness(k) -> int:
    return len(k) if isinstance(k, frozenset) else len(k[0])


def _on_diagonal(P: Sequence[Point]) -> bool:
    """True if two points of P lie on a common line of slope +-1."""
    for x, y in itertools.combinations(P, 2):
        if abs(x[0] - y[0]) == abs(x[1] - y[1]):
            return True
    return False


def rich_transformations(group: IsometryGroup, P: Sequence[Sequence[Number]], t: int,
                         key: str = "map") -> RichReport:
    if t < 2:
        raise ValueError("t must be at least 2")
    classes = transformation_classes(group, P, key)
    richness = tuple(sorted((_richness(k) for k in classes), reverse=True))
    warn = isinstance(group, Pseudo11) and _on_diagonal([tuple(x) for x in P])
    if warn:
        warnings.warn("P has points on a common light-like line; no richness bound is claimed",
                      stacklevel=2)
    return RichReport(t, sum(1 for r in richness if r >= t), richness, warn)


# --- corollary censuses -------------------------------------------------------

def _as_vectors(P) -> list[Point]:
    out = []
    for x in P:
        out.append(tuple(x) if isinstance(x, (list, tuple)) else (x,))
    return out


def gram_census(P: Sequence, n: int, budget: int = DEFAULT_BUDGET, threads: int | None = None) -> int:
    """Number of distinct Gram matrices X^T X with the n columns of X drawn from P."""
    P = _as_vectors(P)
    r = len(P[0])
    if r not in (1, 2, 3):
        raise ValueError("gram_census supports points in dimension 1, 2 or 3")
    return census(dot(r), complete_with_loops(n), P, budget=budget, threads=threads).distinct_count


def tensor_census(P: Sequence, n: int, k: int, budget: int = DEFAULT_BUDGET,
                  threads: int | None = None) -> int:
    """Number of distinct symmetric tensors T with n columns drawn from P.

    Column j is x_j in P; row i collects the i-th coordinates. The entry
    T[a_1..a_k] sums, over rows, the product of that row's entries at a_1..a_k.
    """
    P = _as_vectors(P)
    return census(sym_tensor(k, len(P[0])), complete_multiset_hypergraph(n, k), P,
                  budget=budget, threads=threads).distinct_count


def fibre_bound_ratio(sizes: Sequence[int]) -> float:
    """(sum nu)^2 / sum nu^2: the Cauchy-Schwarz lower bound on the distinct count."""
    s = sum(sizes)
    return s * s / sum(x * x for x in sizes)
