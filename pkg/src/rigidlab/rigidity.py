"""Jacobian of the measurement map, trivial motions and rigidity verdicts."""
from __future__ import annotations

import random
import threading
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .hypergraph import Hypergraph
from .linalg import FLOAT_RANK_TOL, Matrix, Number, is_exact, matvec, rank, row_space_basis
from .metrics import Metric

Point = tuple[Number, ...]
Realisation = Sequence[Sequence[Number]]

GENERIC_BOX = 10**6


def _check_compatible(m: Metric, G: Hypergraph, p: Realisation):
    if G.k != m.k:
        raise ValueError(f"metric {m.id} has arity {m.k} but the hypergraph is {G.k}-uniform")
    if len(p) != G.vertex_count:
        raise ValueError(f"realisation has {len(p)} points for {G.vertex_count} vertices")
    for x in p:
        if len(x) != m.d:
            raise ValueError(f"point {tuple(x)} is not {m.d}-dimensional")


def jacobian(m: Metric, G: Hypergraph, p: Realisation) -> Matrix:
    """One row per hyperedge (canonical order), d columns per vertex."""
    _check_compatible(m, G, p)
    d, n = m.d, G.vertex_count
    rows = []
    for e in G.edges:
        row: list[Number] = [0] * (d * n)
        xs = [tuple(p[v]) for v in e]
        for slot, v in enumerate(e):
            for i, gi in enumerate(m.gradient(xs, slot)):
                row[d * v + i] += gi
        rows.append(row)
    return rows


def _motion(theta, p: Realisation) -> list[Number]:
    out: list[Number] = []
    for x in p:
        out.extend(a + b for a, b in zip(matvec(theta.A, x), theta.b))
    return out


def trivial_motion_fields(m: Metric, p: Realisation) -> list[list[Number]]:
    """The velocity field of every Lie generator at p (not yet reduced)."""
    return [_motion(gen, p) for gen in m.group.lie_generators()]


def trivial_motions(m: Metric, G: Hypergraph, p: Realisation) -> list[list[Number]]:
    """A basis of triv_g(p)."""
    _check_compatible(m, G, p)
    fields = trivial_motion_fields(m, p)
    if not fields:
        return []
    if is_exact(p):
        return row_space_basis(fields)
    a = np.asarray(fields, dtype=float)
    _, s, vt = np.linalg.svd(a)
    r = int(np.sum(s > FLOAT_RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    return [list(v) for v in vt[:r]]


def affinely_spanning(p: Realisation) -> bool:
    if not p:
        raise ValueError("empty realisation")
    d = len(p[0])
    return rank([list(x) + [1] for x in p]) == d + 1


def trivial_in_kernel(J: Matrix, motions: Sequence[Sequence[Number]], exact: bool) -> bool:
    for t in motions:
        img = matvec(J, t)
        if exact:
            if any(v != 0 for v in img):
                return False
        else:
            scale = max((abs(x) for row in J for x in row), default=1.0) or 1.0
            if any(abs(v) > 1e-7 * scale * max(1.0, max(abs(c) for c in t)) for v in img):
                return False
    return True


@dataclass(frozen=True)
class RigidityVerdict:
    rank: int
    kernel_dim: int
    trivial_dim: int
    infinitesimally_rigid: bool
    affinely_spanning: bool
    trivial_in_kernel: bool
    exact: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def is_infinitesimally_rigid(m: Metric, G: Hypergraph, p: Realisation) -> RigidityVerdict:
    J = jacobian(m, G, p)
    exact = is_exact(p)
    r = rank(J) if J else 0
    ker = m.d * G.vertex_count - r
    triv = trivial_motions(m, G, p)
    contained = trivial_in_kernel(J, triv, exact)
    return RigidityVerdict(rank=r, kernel_dim=ker, trivial_dim=len(triv),
                           infinitesimally_rigid=contained and ker == len(triv),
                           affinely_spanning=affinely_spanning(p) if p else False,
                           trivial_in_kernel=contained, exact=exact)


def random_realisation(n: int, d: int, rng: random.Random, box: int = GENERIC_BOX) -> list[Point]:
    return [tuple(rng.randint(-box, box) for _ in range(d)) for _ in range(n)]


@dataclass(frozen=True)
class GenericVerdict:
    rigid: bool
    witness: tuple[Point, ...] | None
    verdict: RigidityVerdict
    trials: int
    seed: int | None

    def to_dict(self) -> dict:
        return {"rigid": self.rigid, "trials": self.trials, "seed": self.seed,
                "witness": [list(x) for x in self.witness] if self.witness else None,
                **self.verdict.to_dict()}


def is_g_rigid(m: Metric, G: Hypergraph, trials: int = 5, seed: int | None = 0) -> GenericVerdict:
    """Generic g-rigidity by sampling integer realisations.

    A positive answer is certified (infinitesimal rigidity implies local
    rigidity); a negative one is correct unless every sample was unlucky.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    best = None
    for _ in range(trials):
        p = random_realisation(G.vertex_count, m.d, rng)
        v = is_infinitesimally_rigid(m, G, p)
        if v.infinitesimally_rigid:
            return GenericVerdict(True, tuple(p), v, trials, seed)
        if best is None or v.rank > best[1].rank:
            best = (p, v)
    return GenericVerdict(False, None, best[1], trials, seed)


_generic_rank_cache: dict[tuple[Metric, Hypergraph], int] = {}
_cache_lock = threading.Lock()


def generic_rank(m: Metric, G: Hypergraph, trials: int = 5, seed: int = 0) -> int:
    key = (m, G)
    with _cache_lock:
        if key in _generic_rank_cache:
            return _generic_rank_cache[key]
    rng = random.Random(seed)
    r = max(rank(jacobian(m, G, random_realisation(G.vertex_count, m.d, rng))) for _ in range(trials))
    with _cache_lock:
        _generic_rank_cache.setdefault(key, r)
    return r


def is_g_regular(m: Metric, G: Hypergraph, p: Realisation) -> bool:
    J = jacobian(m, G, p)
    return (rank(J) if J else 0) == generic_rank(m, G)
