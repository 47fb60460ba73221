"""Catalogue of polynomial measurements g and their isometry groups.

CLI ids: ``euclid_sq``, ``pseudo11``, ``lp:<p>``, ``dot``, ``skew``,
``sym_tensor:<k>``; the ambient dimension is passed separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .groups import (AffineMap, Euclidean, FiniteGroup, IsometryGroup, Orthogonal, Pseudo11,
                     SpecialLinear2, TranslationsByFinite)
from .linalg import Number, simplify

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class Metric:
    name: str
    d: int
    k: int
    symmetry: str
    degree: int
    p: int | None = None

    @property
    def id(self) -> str:
        if self.name == "lp":
            return f"lp:{self.p}"
        if self.name == "sym_tensor":
            return f"sym_tensor:{self.k}"
        return self.name

    @property
    def group(self) -> IsometryGroup:
        return _group_for(self)

    def _check(self, xs: Sequence[Sequence[Number]]):
        if len(xs) != self.k:
            raise ValueError(f"{self.id} takes {self.k} points, got {len(xs)}")
        for x in xs:
            if len(x) != self.d:
                raise ValueError(f"{self.id} in dimension {self.d} got a point of dimension {len(x)}")

    def __call__(self, *xs: Sequence[Number]) -> Number:
        self._check(xs)
        name = self.name
        if name == "euclid_sq":
            x, y = xs
            return simplify(sum((a - b) ** 2 for a, b in zip(x, y)))
        if name in ("pseudo11", "pseudo"):
            x, y = xs
            return simplify((x[0] - y[0]) ** 2 - (x[1] - y[1]) ** 2)
        if name == "lp":
            x, y = xs
            return simplify(sum((a - b) ** self.p for a, b in zip(x, y)))
        if name == "dot":
            x, y = xs
            return simplify(sum(a * b for a, b in zip(x, y)))
        if name == "skew":
            x, y = xs
            return simplify(x[0] * y[1] - x[1] * y[0])
        if name == "sym_tensor":
            return simplify(sum(math.prod(x[j] for x in xs) for j in range(self.d)))
        raise ValueError(f"unknown metric {name}")

    def gradient(self, xs: Sequence[Sequence[Number]], slot: int) -> tuple[Number, ...]:
        """Partial gradient of g with respect to argument ``slot`` (0-based)."""
        self._check(xs)
        if not 0 <= slot < self.k:
            raise ValueError(f"slot {slot} out of range for arity {self.k}")
        name = self.name
        if name == "sym_tensor":
            return tuple(simplify(math.prod(x[j] for i, x in enumerate(xs) if i != slot))
                         for j in range(self.d))
        x, y = xs
        sign = 1 if slot == 0 else -1
        if name == "euclid_sq":
            out = (2 * sign * (a - b) for a, b in zip(x, y))
        elif name in ("pseudo11", "pseudo"):
            out = (2 * sign * (x[0] - y[0]), -2 * sign * (x[1] - y[1]))
        elif name == "lp":
            out = (sign * self.p * (a - b) ** (self.p - 1) for a, b in zip(x, y))
        elif name == "dot":
            out = iter(y if slot == 0 else x)
        elif name == "skew":
            out = (y[1], -y[0]) if slot == 0 else (-x[1], x[0])
        else:
            raise ValueError(f"unknown metric {name}")
        return tuple(simplify(v) for v in out)


def euclid_sq(d: int = 2) -> Metric:
    return Metric("euclid_sq", d, 2, SYMMETRIC, 2)


def pseudo11(d: int = 2) -> Metric:
    if d != 2:
        raise ValueError("pseudo11 is the (1,1) form on the plane; use --dim 2")
    return Metric("pseudo11", 2, 2, SYMMETRIC, 2)


def lp(p: int, d: int = 2) -> Metric:
    if p < 2 or p % 2:
        raise ValueError(f"lp needs an even integer p >= 2 to be polynomial, got {p}")
    return Metric("lp", d, 2, SYMMETRIC, p, p)


def dot(d: int = 2) -> Metric:
    return Metric("dot", d, 2, SYMMETRIC, 2)


def skew(d: int = 2) -> Metric:
    if d != 2:
        raise ValueError("skew is the planar form x1 y2 - x2 y1; use --dim 2")
    return Metric("skew", 2, 2, ANTISYMMETRIC, 2)


def sym_tensor(k: int, d: int = 1) -> Metric:
    if k < 3:
        raise ValueError("sym_tensor needs k >= 3 (k = 2 is the dot product)")
    return Metric("sym_tensor", d, k, SYMMETRIC, k)


def parse_metric(spec: str, dim: int = 2) -> Metric:
    name, _, arg = spec.partition(":")
    if name == "euclid_sq":
        return euclid_sq(dim)
    if name in ("pseudo11", "pseudo"):
        return pseudo11(dim)
    if name == "dot":
        return dot(dim)
    if name == "skew":
        return skew(dim)
    if name in ("lp", "sym_tensor"):
        if not arg.isdigit():
            raise ValueError(f"metric '{spec}' needs an integer parameter, e.g. {name}:4")
        return lp(int(arg), dim) if name == "lp" else sym_tensor(int(arg), dim)
    raise ValueError(f"unknown metric id '{spec}'")


def catalogue(d2_only: bool = False) -> list[Metric]:
    """One instance of every catalogued metric, as used in the property suites."""
    out = [euclid_sq(2), pseudo11(), lp(4, 2), dot(2), skew(), sym_tensor(3, 2), sym_tensor(4, 2)]
    if not d2_only:
        out += [euclid_sq(3), dot(3), lp(6, 3), sym_tensor(3, 1)]
    return out


def _group_for(m: Metric) -> IsometryGroup:
    if m.name == "euclid_sq" or (m.name == "lp" and m.p == 2):
        return Euclidean(m.d)
    if m.name == "pseudo11":
        return Pseudo11()
    if m.name == "lp":
        return TranslationsByFinite(m.d, signed=True)
    if m.name == "dot":
        return Orthogonal(m.d)
    if m.name == "skew":
        return SpecialLinear2()
    if m.name == "sym_tensor":
        return FiniteGroup.signed_permutations(m.d, signed=m.k % 2 == 0)
    raise ValueError(f"no isometry group for {m.name}")


# functional aliases

def eval_g(m: Metric, *xs) -> Number:
    return m(*xs)


def grad_g(m: Metric, xs, slot: int):
    return m.gradient(xs, slot)


def lie_generators(m: Metric) -> list[AffineMap]:
    return m.group.lie_generators()


def is_isometry(m: Metric, theta: AffineMap) -> bool:
    return m.group.contains(theta)
