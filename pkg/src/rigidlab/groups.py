"""Isometry groups of the catalogued metrics.

Each group knows its Lie algebra (as affine generators), an exact membership
test, and two independent ways to decide whether configurations ``p`` and
``q`` lie in one orbit:

* ``orbit_key(p)``: a canonical invariant, equal for p and q exactly when
  ``q = theta p`` for some group element. Energy is then a sum of squared
  class sizes.
* ``related(p, q)``: a direct search for theta. Affinely spanning ``p`` pins
  theta down by an affine solve; otherwise a group-specific parametrisation
  is used. This is the pairwise oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (AffineMap, Number, det, identity, matmul, rank, row_space_basis,
                     simplify, solve, solve_affine, transpose)

Point = tuple[Number, ...]
Config = Sequence[Point]


def _elementary(d: int, i: int, j: int) -> list[list[int]]:
    m = [[0] * d for _ in range(d)]
    m[i][j] = 1
    return m


def _unit(d: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(d))


def _zero_matrix(d: int) -> list[list[int]]:
    return [[0] * d for _ in range(d)]


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _affine_row_space(p: Config) -> tuple:
    """Canonical form of the affine dependencies among the points of p."""
    d = len(p[0])
    rows = [[pt[i] for pt in p] for i in range(d)] + [[1] * len(p)]
    return tuple(tuple(r) for r in row_space_basis(rows))


def _linear_row_space(p: Config) -> tuple:
    d = len(p[0])
    rows = [[pt[i] for pt in p] for i in range(d)]
    return tuple(tuple(r) for r in row_space_basis(rows))


def signed_permutation_matrices(d: int, signed: bool = True) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1) if signed else (1,), repeat=d):
            out.append(tuple(tuple(signs[i] if j == perm[i] else 0 for j in range(d))
                             for i in range(d)))
    return out


def is_signed_permutation(A, signed: bool = True) -> bool:
    allowed = {1, -1} if signed else {1}
    d = len(A)
    cols = set()
    for row in A:
        nz = [j for j, x in enumerate(row) if x != 0]
        if len(nz) != 1 or row[nz[0]] not in allowed:
            return False
        cols.add(nz[0])
    return len(cols) == d


def _preserves_form(A, M) -> bool:
    return matmul(matmul(transpose(A), M), A) == [list(r) for r in M]


class IsometryGroup:
    """Base class; subclasses fill in the group-specific pieces."""

    name = "group"
    d: int
    linear = False  # translations excluded

    def lie_generators(self) -> list[AffineMap]:
        return []

    @property
    def dimension(self) -> int:
        return len(self.lie_generators())

    @property
    def finite_elements(self) -> list[AffineMap] | None:
        return None

    def contains(self, theta: AffineMap) -> bool:
        raise NotImplementedError

    def orbit_key(self, p: Config):
        raise NotImplementedError

    def _related_degenerate(self, p: Config, q: Config) -> bool | None:
        """Decide non-spanning pairs; None means no procedure (caller falls back)."""
        return None

    def related(self, p: Config, q: Config) -> tuple[bool, bool]:
        """(is some theta with theta p = q, decided-without-fallback)."""
        fe = self.finite_elements
        if fe is not None:
            return any(all(th(x) == tuple(y) for x, y in zip(p, q)) for th in fe), True
        if self.linear:
            theta = _solve_linear(p, q)
            if theta is not None:
                return self.contains(theta), True
            if _linear_rank(p) == self.d:
                return False, True
        else:
            theta = solve_affine(p, q)
            if theta is not None:
                return self.contains(theta), True
            if rank([list(x) + [1] for x in p]) == self.d + 1:
                return False, True
        verdict = self._related_degenerate(p, q)
        if verdict is None:
            return self.orbit_key(p) == self.orbit_key(q), False
        return verdict, True

    def _check_dim(self, theta: AffineMap):
        if theta.dim != self.d or len(theta.A) != self.d:
            raise ValueError(f"affine map of dimension {theta.dim} tested against a {self.d}-dimensional group")


def _linear_rank(p: Config) -> int:
    return rank([list(x) for x in p])


def _solve_linear(p: Config, q: Config) -> AffineMap | None:
    """Unique linear map with A p_i = q_i, when the p_i span R^d."""
    d = len(p[0])
    if _linear_rank(p) < d:
        return None
    A = []
    for i in range(d):
        sol = solve([list(x) for x in p], [y[i] for y in q])
        if sol is None:
            return None
        A.append(sol)
    theta = AffineMap.make(A)
    if any(theta(x) != tuple(y) for x, y in zip(p, q)):
        return None
    return theta


# --- 2D parametrised searches for degenerate configurations ---------------------

def _cdiv(a, b):
    """Complex a / b for pairs of rationals."""
    n = b[0] * b[0] + b[1] * b[1]
    return (Fraction(a[0] * b[0] + a[1] * b[1]) / n, Fraction(a[1] * b[0] - a[0] * b[1]) / n)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _unit_complex_fits(us, ws) -> bool:
    """Some z with |z| = 1 and z * u = w for every pair."""
    z = None
    for u, w in zip(us, ws):
        if u[0] != 0 or u[1] != 0:
            z = _cdiv(w, u)
            break
    if z is None:
        return all(w[0] == 0 and w[1] == 0 for w in ws)
    if z[0] * z[0] + z[1] * z[1] != 1:
        return False
    return all(_cmul(z, u) == tuple(w) for u, w in zip(us, ws))


def _orthogonal2_fits(us, ws, proper: bool) -> bool:
    if _unit_complex_fits(us, ws):
        return True
    if proper:
        return False
    conj = [(u[0], -u[1]) for u in us]
    return _unit_complex_fits(conj, ws)


def _boost_fits(us, ws) -> bool:
    """Some lambda > 0 with the hyperbolic boost of rapidity log(lambda) sending each u to w.

    In light-cone coordinates (x+y, x-y) the boost is diag(lambda, 1/lambda).
    """
    lam = None
    for u, w in zip(us, ws):
        up, um = u[0] + u[1], u[0] - u[1]
        wp, wm = w[0] + w[1], w[0] - w[1]
        if up != 0:
            lam = Fraction(wp) / up
            break
        if wm != 0:
            lam = Fraction(um) / wm
            break
        if um != 0:
            return False
    if lam is None:
        lam = Fraction(1)
    if lam <= 0:
        return False
    for u, w in zip(us, ws):
        up, um = u[0] + u[1], u[0] - u[1]
        wp, wm = w[0] + w[1], w[0] - w[1]
        if lam * up != wp or um != lam * wm:
            return False
    return True


# --- concrete groups ------------------------------------------------------------

@dataclass(frozen=True)
class Euclidean(IsometryGroup):
    """E(d) = R^d x| O(d); ``proper`` restricts to SE(d)."""

    d: int
    proper: bool = False

    @property
    def name(self):
        return f"{'SE' if self.proper else 'E'}({self.d})"

    def lie_generators(self):
        gens = [AffineMap.make(_zero_matrix(self.d), _unit(self.d, i)) for i in range(self.d)]
        for i, j in itertools.combinations(range(self.d), 2):
            A = _elementary(self.d, i, j)
            A[j][i] = -1
            gens.append(AffineMap.make(A))
        return gens

    def contains(self, theta):
        self._check_dim(theta)
        if matmul(transpose(theta.A), theta.A) != identity(self.d):
            return False
        return not self.proper or det(theta.A) == 1

    def orbit_key(self, p):
        n = len(p)
        dists = tuple(simplify(sum((a - b) ** 2 for a, b in zip(p[i], p[j])))
                      for i, j in itertools.combinations(range(n), 2))
        key = (dists, _affine_row_space(p))
        if self.proper:
            dets = tuple(det([list(p[i]) + [1] for i in idx])
                         for idx in itertools.combinations(range(n), self.d + 1))
            key += (dets,)
        return key

    def _related_degenerate(self, p, q):
        if self.d != 2:
            return None
        us = [_sub(x, p[0]) for x in p]
        ws = [_sub(y, q[0]) for y in q]
        return _orthogonal2_fits(us, ws, self.proper)

    def pair_transforms(self, a, b, c, e) -> list[AffineMap]:
        """Group elements sending a -> c and b -> e (a != b), d = 2 only."""
        if self.d != 2:
            raise ValueError("pair transforms are implemented for the plane")
        u, w = _sub(b, a), _sub(e, c)
        if u[0] * u[0] + u[1] * u[1] != w[0] * w[0] + w[1] * w[1]:
            return []
        out = []
        z = _cdiv(w, u)
        rot = ((z[0], -z[1]), (z[1], z[0]))
        out.append(rot)
        if not self.proper:
            zc = _cdiv(w, (u[0], -u[1]))
            out.append(((zc[0], zc[1]), (zc[1], -zc[0])))
        maps = []
        for A in out:
            Aa = tuple(sum(A[i][j] * a[j] for j in range(2)) for i in range(2))
            maps.append(AffineMap.make(A, _sub(c, Aa)))
        return maps


J11 = ((1, 0), (0, -1))


@dataclass(frozen=True)
class Pseudo11(IsometryGroup):
    """R^2 x| O(1,1), the isometries of (x1-y1)^2 - (x2-y2)^2."""

    d: int = 2
    name = "R2xO(1,1)"

    def lie_generators(self):
        return [AffineMap.make(_zero_matrix(2), (1, 0)), AffineMap.make(_zero_matrix(2), (0, 1)),
                AffineMap.make(((0, 1), (1, 0)))]

    def contains(self, theta):
        self._check_dim(theta)
        return _preserves_form(theta.A, J11)

    def orbit_key(self, p):
        n = len(p)
        vals = tuple(simplify((p[i][0] - p[j][0]) ** 2 - (p[i][1] - p[j][1]) ** 2)
                     for i, j in itertools.combinations(range(n), 2))
        return (vals, _affine_row_space(p))

    def _related_degenerate(self, p, q):
        us = [_sub(x, p[0]) for x in p]
        ws = [_sub(y, q[0]) for y in q]
        for s1, s2 in itertools.product((1, -1), repeat=2):
            if _boost_fits(us, [(s1 * w[0], s2 * w[1]) for w in ws]):
                return True
        return False

    def pair_transforms(self, a, b, c, e) -> list[AffineMap]:
        u, w = _sub(b, a), _sub(e, c)
        maps = []
        for s1, s2 in itertools.product((1, -1), repeat=2):
            dw = (s1 * w[0], s2 * w[1])
            up, um = u[0] + u[1], u[0] - u[1]
            wp, wm = dw[0] + dw[1], dw[0] - dw[1]
            if up != 0:
                lam = Fraction(wp) / up
            elif wm != 0:
                lam = Fraction(um) / wm
            else:
                continue
            if lam <= 0 or lam * up != wp or um != lam * wm:
                continue
            # boost = [[c, s], [s, c]] with c + s = lam, c - s = 1/lam
            ch, sh = (lam + 1 / lam) / 2, (lam - 1 / lam) / 2
            A = ((s1 * ch, s1 * sh), (s2 * sh, s2 * ch))
            Aa = tuple(sum(A[i][j] * a[j] for j in range(2)) for i in range(2))
            maps.append(AffineMap.make(A, _sub(c, Aa)))
        return maps


@dataclass(frozen=True)
class Orthogonal(IsometryGroup):
    """O(d) acting linearly (no translations)."""

    d: int
    linear = True

    @property
    def name(self):
        return f"O({self.d})"

    def lie_generators(self):
        gens = []
        for i, j in itertools.combinations(range(self.d), 2):
            A = _elementary(self.d, i, j)
            A[j][i] = -1
            gens.append(AffineMap.make(A))
        return gens

    def contains(self, theta):
        self._check_dim(theta)
        return all(x == 0 for x in theta.b) and matmul(transpose(theta.A), theta.A) == identity(self.d)

    def orbit_key(self, p):
        n = len(p)
        return tuple(simplify(sum(a * b for a, b in zip(p[i], p[j])))
                     for i, j in itertools.combinations_with_replacement(range(n), 2))

    def _related_degenerate(self, p, q):
        if self.d != 2:
            return None
        return _orthogonal2_fits(list(p), list(q), proper=False)


@dataclass(frozen=True)
class SpecialLinear2(IsometryGroup):
    """SL(2, R): the linear maps preserving x1 y2 - x2 y1."""

    d: int = 2
    linear = True
    name = "SL(2)"

    def lie_generators(self):
        return [AffineMap.make(((1, 0), (0, -1))), AffineMap.make(((0, 1), (0, 0))),
                AffineMap.make(((0, 0), (1, 0)))]

    def contains(self, theta):
        self._check_dim(theta)
        return all(x == 0 for x in theta.b) and det(theta.A) == 1

    def orbit_key(self, p):
        n = len(p)
        vals = tuple(simplify(p[i][0] * p[j][1] - p[i][1] * p[j][0])
                     for i, j in itertools.combinations(range(n), 2))
        return (vals, _linear_row_space(p))

    def _related_degenerate(self, p, q):
        # p spans at most a line through the origin
        if _linear_rank(q) != _linear_rank(p):
            return False
        a = next((i for i, x in enumerate(p) if any(c != 0 for c in x)), None)
        if a is None:
            return True
        pa, qa = p[a], q[a]
        j = next(i for i, c in enumerate(pa) if c != 0)
        for x, y in zip(p, q):
            c = Fraction(x[j]) / pa[j]
            if tuple(c * t for t in pa) != tuple(x) or tuple(c * t for t in qa) != tuple(y):
                return False
        return True


@dataclass(frozen=True)
class TranslationsByFinite(IsometryGroup):
    """R^d x| L for a finite group L of linear maps (signed permutations for l_p)."""

    d: int
    signed: bool = True

    @property
    def name(self):
        return f"R{self.d}x|{'B' if self.signed else 'S'}{self.d}"

    @property
    def linear_parts(self):
        return signed_permutation_matrices(self.d, self.signed)

    def lie_generators(self):
        return [AffineMap.make(_zero_matrix(self.d), _unit(self.d, i)) for i in range(self.d)]

    def contains(self, theta):
        self._check_dim(theta)
        return is_signed_permutation(theta.A, self.signed)

    def orbit_key(self, p):
        rel = [_sub(x, p[0]) for x in p]
        return min(tuple(tuple(sum(a * c for a, c in zip(row, x)) for row in A) for x in rel)
                   for A in self.linear_parts)

    def related(self, p, q):
        for A in self.linear_parts:
            lin = AffineMap.make(A)
            b = _sub(q[0], lin(p[0]))
            theta = AffineMap.make(A, b)
            if all(theta(x) == tuple(y) for x, y in zip(p, q)):
                return True, True
        return False, True


@dataclass(frozen=True)
class FiniteGroup(IsometryGroup):
    """An explicit finite list of affine maps (assumed closed under composition)."""

    d: int
    elements: tuple[AffineMap, ...]
    label: str = "finite"

    @property
    def name(self):
        return self.label

    @property
    def finite_elements(self):
        return list(self.elements)

    def contains(self, theta):
        self._check_dim(theta)
        return theta in self.elements

    def orbit_key(self, p):
        return min(tuple(th(x) for x in p) for th in self.elements)

    @classmethod
    def signed_permutations(cls, d: int, signed: bool) -> "FiniteGroup":
        els = tuple(AffineMap.make(A) for A in signed_permutation_matrices(d, signed))
        return cls(d, els, f"{'B' if signed else 'S'}{d}")


def named_group(name: str) -> IsometryGroup:
    table = {"SE2": Euclidean(2, True), "E2": Euclidean(2, False), "pseudo": Pseudo11(),
             "O1,1": Pseudo11(), "SL2": SpecialLinear2(), "O2": Orthogonal(2), "O3": Orthogonal(3)}
    if name not in table:
        raise ValueError(f"unknown group '{name}'; known: {sorted(table)}")
    return table[name]
