"""Exact linear algebra over the rationals, with a float fallback.

Matrices are plain lists of rows. Entries may be ``int``, ``Fraction`` or
``float``; any float entry switches the routines to numpy/SVD with a
relative singular-value cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

Number = int | Fraction | float
Matrix = list[list[Number]]

FLOAT_RANK_TOL = 1e-9


def is_exact(value) -> bool:
    if isinstance(value, (int, Fraction)):
        return True
    if isinstance(value, float):
        return False
    return all(is_exact(v) for v in value)


def _matrix_is_exact(rows: Sequence[Sequence[Number]]) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in rows for x in row)


def to_fraction(value: str | int | float | Fraction) -> Fraction:
    """Parse ``"3/4"``, ``"2"``, ints and Fractions. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("float given where an exact rational is required")
    return Fraction(value)


def simplify(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _integer_rows(rows: Sequence[Sequence[Number]]) -> list[list[int]]:
    out = []
    for row in rows:
        dens = [x.denominator for x in row if isinstance(x, Fraction)]
        scale = reduce(math.lcm, dens, 1)
        out.append([int(x * scale) for x in row])
    return out


def rank(rows: Sequence[Sequence[Number]]) -> int:
    """Rank; fraction-free Bareiss elimination in exact mode."""
    rows = [list(r) for r in rows if len(r)]
    if not rows:
        return 0
    if not _matrix_is_exact(rows):
        return float_rank(rows)
    m = _integer_rows(rows)
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, n_rows):
            mi = m[i]
            f = mi[c]
            mr = m[r]
            m[i] = [(p * mi[j] - f * mr[j]) // prev for j in range(n_cols)]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def float_rank(rows: Sequence[Sequence[Number]], tol: float = FLOAT_RANK_TOL) -> int:
    a = np.asarray(rows, dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def rref(rows: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with exact Fractions; returns (nonzero rows, pivot cols)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Number]], n_cols: int | None = None) -> list[list[Number]]:
    """Basis of the right kernel. Exact in exact mode, orthonormal floats otherwise."""
    if n_cols is None:
        if not rows:
            raise ValueError("n_cols required for an empty matrix")
        n_cols = len(rows[0])
    if rows and not _matrix_is_exact(rows):
        a = np.asarray(rows, dtype=float)
        _, s, vt = np.linalg.svd(a)
        r = int(np.sum(s > FLOAT_RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
        return [list(v) for v in vt[r:]]
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v: list[Number] = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append([simplify(x) for x in v])
    return basis


def row_space_basis(rows: Sequence[Sequence[Number]]) -> list[list[Number]]:
    red, _ = rref(rows)
    return [[simplify(x) for x in row] for row in red]


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Number]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence[Number]]) -> Matrix:
    return [list(c) for c in zip(*a)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det(a: Sequence[Sequence[Number]]) -> Number:
    """Exact determinant by elimination (float matrices go through numpy)."""
    n = len(a)
    if n == 0:
        return 1
    if not _matrix_is_exact(a):
        return float(np.linalg.det(np.asarray(a, dtype=float)))
    m = [[Fraction(x) for x in row] for row in a]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        out *= p
        for i in range(c + 1, n):
            f = m[i][c] / p
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return simplify(sign * out)


def solve(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Number] | None:
    """Unique solution of a square-or-tall exact system, or None if singular/inconsistent."""
    n = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots or len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return [simplify(v) for v in x]


def inverse(a: Sequence[Sequence[Number]]) -> Matrix:
    n = len(a)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return [[simplify(x) for x in row[n:]] for row in red]


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b with exact (or float) entries."""

    A: tuple[tuple[Number, ...], ...]
    b: tuple[Number, ...]

    @classmethod
    def make(cls, A, b=None) -> "AffineMap":
        A = tuple(tuple(simplify(x) for x in row) for row in A)
        if b is None:
            b = (0,) * len(A)
        return cls(A, tuple(simplify(x) for x in b))

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        return cls.make(identity(d))

    @classmethod
    def translation(cls, b) -> "AffineMap":
        return cls.make(identity(len(b)), b)

    @property
    def dim(self) -> int:
        return len(self.b)

    def __call__(self, x: Sequence[Number]) -> tuple[Number, ...]:
        return tuple(simplify(sum(a * xi for a, xi in zip(row, x)) + bi)
                     for row, bi in zip(self.A, self.b))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        A = matmul(self.A, other.A)
        b = [x + y for x, y in zip(matvec(self.A, other.b), self.b)]
        return AffineMap.make(A, b)

    def inverse(self) -> "AffineMap":
        Ai = inverse(self.A)
        b = [-x for x in matvec(Ai, self.b)]
        return AffineMap.make(Ai, b)

    def power(self, n: int) -> "AffineMap":
        out = AffineMap.identity(self.dim)
        for _ in range(n):
            out = self.compose(out)
        return out


def solve_affine(src: Sequence[Sequence[Number]], dst: Sequence[Sequence[Number]]) -> AffineMap | None:
    """The unique affine map sending each src point to the matching dst point.

    Returns None when src is not affinely spanning (map not unique) or no
    affine map fits.
    """
    d = len(src[0])
    # unknowns: row i of A and b_i; one equation per point and coordinate
    rows = [list(p) + [1] for p in src]
    if rank(rows) < d + 1:
        return None
    A, b = [], []
    for i in range(d):
        sol = solve(rows, [q[i] for q in dst])
        if sol is None:
            return None
        A.append(sol[:d])
        b.append(sol[d])
    theta = AffineMap.make(A, b)
    if any(theta(p) != tuple(q) for p, q in zip(src, dst)):
        return None
    return theta
