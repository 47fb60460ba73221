"""Point-set generators and the curve-richness audit."""
from __future__ import annotations

import itertools
import json
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import AffineMap, Number, is_exact, nullspace, simplify
from .metrics import Metric

Point = tuple[Number, ...]


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]
    d: int
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(tuple(simplify(c) for c in x) for x in self.points)
        if any(len(x) != self.d for x in pts):
            raise ValueError(f"all points must be {self.d}-dimensional")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def exact(self) -> bool:
        return is_exact(self.points)

    def distinct(self) -> bool:
        return len(set(self.points)) == len(self.points)

    def to_json(self) -> dict:
        def enc(c):
            return c if isinstance(c, float) else str(c)
        return {"d": self.d, "points": [[enc(c) for c in x] for x in self.points],
                "provenance": self.provenance}

    @classmethod
    def from_json(cls, data: dict | str) -> "PointSet":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValueError("points JSON must be an object")
        for key in ("d", "points"):
            if key not in data:
                raise ValueError(f"points JSON is missing key '{key}'")

        def dec(c):
            if isinstance(c, float):
                return c
            if isinstance(c, (int, str)) and not isinstance(c, bool):
                try:
                    return simplify(Fraction(c))
                except ValueError:
                    raise ValueError(f"points JSON key 'points' has a bad coordinate {c!r}") from None
            raise ValueError(f"points JSON key 'points' has a bad coordinate {c!r}")

        if not isinstance(data["points"], list):
            raise ValueError("points JSON key 'points' must be a list")
        pts = tuple(tuple(dec(c) for c in x) for x in data["points"])
        return cls(pts, data["d"], data.get("provenance", {}))


def grid(m: int, d: int = 2) -> PointSet:
    if m < 1:
        raise ValueError("grid side must be at least 1")
    return PointSet(tuple(itertools.product(range(m), repeat=d)), d, {"generator": "grid", "m": m, "d": d})


def scaled_grid(n: int) -> PointSet:
    """{(x/sqrt n, y/sqrt n) : 0 <= x, y <= sqrt n} with exact rationals."""
    s = math.isqrt(n) if n >= 0 else -1
    if n < 1 or s * s != n:
        raise ValueError(f"scaled_grid needs a positive perfect square, got {n}")
    pts = tuple((Fraction(x, s), Fraction(y, s)) for x in range(s + 1) for y in range(s + 1))
    return PointSet(pts, 2, {"generator": "scaled_grid", "n": n})


def line(n: int) -> PointSet:
    if n < 1:
        raise ValueError("n must be at least 1")
    return PointSet(tuple((i, 0) for i in range(n)), 2, {"generator": "line", "n": n})


_EXACT_ROOTS = {1: ((1, 0),), 2: ((1, 0), (-1, 0)), 4: ((1, 0), (0, 1), (-1, 0), (0, -1))}


def circle(n: int) -> PointSet:
    """n-th roots of unity; exact for n in {1, 2, 4}, floats otherwise."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n in _EXACT_ROOTS:
        return PointSet(_EXACT_ROOTS[n], 2, {"generator": "circle", "n": n, "exact": True})
    pts = tuple((math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n))
    return PointSet(pts, 2, {"generator": "circle", "n": n, "exact": False})


def circle_rat(n: int) -> PointSet:
    """n exact rational points on the unit circle.

    Uses ((1 - t^2)/(1 + t^2), 2t/(1 + t^2)) at t_k = tan(k beta) with
    tan beta = 1/2, built by the tangent addition formula. The points are
    the orbit of (1, 0) under the rotation with cos = 3/5, sin = 4/5, which
    has infinite order, so all n points are distinct.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    half = Fraction(1, 2)
    t = Fraction(0)
    pts = []
    for _ in range(n):
        pts.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
        t = (t + half) / (1 - t * half)
    return PointSet(tuple(pts), 2, {"generator": "circle_rat", "n": n})


def orbit_tight_set(m: Metric, theta: AffineMap, x: Sequence[Number], n: int) -> PointSet:
    """{theta^j(x) : 0 <= j < n}; theta must be a g-isometry with distinct iterates at x."""
    if not m.group.contains(theta):
        raise ValueError(f"the given map is not an isometry of {m.id}")
    if n < 1:
        raise ValueError("n must be at least 1")
    pts: list[Point] = [tuple(simplify(c) for c in x)]
    seen = {pts[0]: 0}
    for j in range(1, n):
        nxt = theta(pts[-1])
        if nxt in seen:
            raise ValueError(f"orbit of {pts[0]} has period {j - seen[nxt]} < {n}")
        seen[nxt] = j
        pts.append(nxt)
    return PointSet(tuple(pts), m.d, {"generator": "orbit", "n": n, "metric": m.id,
                                      "A": [[str(c) for c in r] for r in theta.A],
                                      "b": [str(c) for c in theta.b]})


def random_generic(d: int, n: int, bound: int = 10**6, seed: int | None = 0) -> PointSet:
    if bound < n:
        raise ValueError("bound must be at least n to leave room for distinct points")
    rng = random.Random(seed)
    pts: dict[Point, None] = {}
    for _ in range(100 * n + 100):
        if len(pts) == n:
            break
        pts.setdefault(tuple(rng.randint(-bound, bound) for _ in range(d)), None)
    if len(pts) < n:
        raise ValueError(f"could not draw {n} distinct points in [-{bound}, {bound}]^{d}")
    return PointSet(tuple(pts), d, {"generator": "random", "n": n, "bound": bound, "seed": seed})


# --- curve-richness audit --------------------------------------------------------

def monomials(D: int) -> list[tuple[int, int]]:
    return [(i, j) for total in range(D + 1) for i in range(total, -1, -1) for j in [total - i]]


def _evaluate(x: Point, mons) -> list[Number]:
    return [x[0] ** i * x[1] ** j for i, j in mons]


@dataclass(frozen=True)
class AuditReport:
    degree: int
    max_incidence: int
    curve: tuple | None  # coefficients over the monomial basis
    threshold: float
    exceeds: bool  # max_incidence > threshold * |P|
    subsets_checked: int
    exhaustive: bool

    def to_dict(self) -> dict:
        return {"degree": self.degree, "max_incidence": self.max_incidence,
                "curve": [str(c) if not isinstance(c, float) else c for c in self.curve] if self.curve else None,
                "threshold": self.threshold, "exceeds": self.exceeds,
                "subsets_checked": self.subsets_checked, "exhaustive": self.exhaustive}


class _Pencil:
    """Curves of degree <= D through a set of points, exact or float."""

    def __init__(self, P: Sequence[Point], D: int):
        self.P = list(P)
        self.mons = monomials(D)
        self.rows = [_evaluate(x, self.mons) for x in self.P]
        self.exact = is_exact(self.P)

    def kernel(self, idx) -> list[list[Number]]:
        rows = [self.rows[i] for i in idx]
        if self.exact:
            return nullspace(rows, len(self.mons))
        a = np.asarray(rows, dtype=float)
        _, s, vt = np.linalg.svd(a)
        r = int(np.sum(s > 1e-9 * s[0])) if s.size and s[0] > 0 else 0
        return [list(v) for v in vt[r:]]

    def on(self, i: int, c) -> bool:
        val = sum(a * b for a, b in zip(self.rows[i], c))
        if self.exact:
            return val == 0
        scale = np.linalg.norm(c) * np.linalg.norm(self.rows[i])
        return abs(val) <= 1e-9 * max(scale, 1.0)

    def base(self, ker) -> frozenset[int]:
        return frozenset(i for i in range(len(self.P)) if all(self.on(i, c) for c in ker))


def curve_richness_audit(P: Sequence[Sequence[Number]], D: int, threshold: float = 0.01,
                         budget: int = 200_000, seed: int = 0) -> AuditReport:
    """Largest |P cap C| over curves C of degree <= D through basis-1 points of P.

    Every curve containing at least N - 1 points of P (N the number of
    monomials of degree <= D) is found when the subset scan is exhaustive.
    Pencils (kernel dimension > 1) are refined by adding further points.
    """
    P = [tuple(x) for x in P]
    if any(len(x) != 2 for x in P):
        raise ValueError("the curve audit works in the plane (d = 2)")
    if D < 1:
        raise ValueError("degree must be at least 1")
    pen = _Pencil(P, D)
    size = len(pen.mons) - 1
    best = (0, None)
    if len(P) < size:
        ker = pen.kernel(range(len(P)))
        return AuditReport(D, len(P), tuple(ker[0]), threshold, len(P) > threshold * len(P), 1, True)
    total = math.comb(len(P), size)
    if total <= budget:
        subsets = itertools.combinations(range(len(P)), size)
        exhaustive = True
    else:
        warnings.warn(f"{total} subsets exceed the audit budget {budget}; sampling {budget}",
                      stacklevel=2)
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(range(len(P)), size))) for _ in range(budget))
        exhaustive = False
    seen: set[frozenset[int]] = set()
    checked = 0

    def explore(base: frozenset[int], ker):
        nonlocal best
        if base in seen or not ker:
            return
        seen.add(base)
        if len(base) > best[0]:
            best = (len(base), tuple(ker[0]))
        if len(ker) == 1:
            return
        for q in range(len(P)):
            if q not in base:
                k2 = pen.kernel(sorted(base | {q}))
                if k2:
                    explore(pen.base(k2), k2)

    for S in subsets:
        checked += 1
        ker = pen.kernel(S)
        if ker:
            explore(pen.base(ker), ker)
    count, curve = best
    return AuditReport(D, count, curve, threshold, count > threshold * len(P), checked, exhaustive)
