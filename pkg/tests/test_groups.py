from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from rigidlab.groups import (Euclidean, FiniteGroup, Orthogonal, Pseudo11, SpecialLinear2,
                             TranslationsByFinite, named_group)
from rigidlab.linalg import AffineMap

GRID = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]
GROUPS_2D = [Euclidean(2), Euclidean(2, proper=True), Pseudo11(), Orthogonal(2), SpecialLinear2(),
             TranslationsByFinite(2), FiniteGroup.signed_permutations(2, signed=True)]


def _pair_oracle(group, p, q):
    """Search theta among maps fixed by one ordered pair of distinct points."""
    idx = next(((i, j) for i, j in itertools.combinations(range(len(p)), 2) if p[i] != p[j]), None)
    if idx is None:
        return len(set(q)) == 1
    i, j = idx
    for th in group.pair_transforms(p[i], p[j], q[i], q[j]):
        if all(th(x) == tuple(y) for x, y in zip(p, q)):
            return True
    return False


@pytest.mark.parametrize("group", GROUPS_2D, ids=lambda g: g.name)
@pytest.mark.parametrize("v", [1, 2, 3])
def test_orbit_key_agrees_with_direct_search(group, v):
    P = GRID[:4] if v == 3 else GRID
    configs = list(itertools.product(P, repeat=v))
    keys = {p: group.orbit_key(p) for p in configs}
    for p in configs:
        for q in configs:
            ok, decided = group.related(p, q)
            assert decided
            assert ok == (keys[p] == keys[q]), (p, q)


@pytest.mark.parametrize("group", [Euclidean(2), Euclidean(2, proper=True), Pseudo11()],
                         ids=lambda g: g.name)
def test_related_agrees_with_pair_oracle(group):
    P = [(0, 0), (1, 0), (0, 1), (2, 2), (3, 1)]
    for p in itertools.product(P, repeat=2):
        for q in itertools.product(P, repeat=2):
            assert group.related(p, q)[0] == _pair_oracle(group, p, q)


def test_pair_transforms_are_members_and_map_the_pair():
    pts = [(0, 0), (3, 4), (5, 0), (1, 7), (-4, 3)]
    for group in (Euclidean(2), Euclidean(2, proper=True), Pseudo11()):
        for a, b, c, e in itertools.product(pts, repeat=4):
            if a == b or c == e:
                continue
            for th in group.pair_transforms(a, b, c, e):
                assert group.contains(th)
                assert th(a) == c and th(b) == e


def test_orthogonal_3d_orbit_key_on_degenerate_configs():
    g = Orthogonal(3)
    p = ((1, 0, 0), (2, 0, 0))
    q = ((0, 0, 1), (0, 0, 2))
    assert g.orbit_key(p) == g.orbit_key(q)
    ok, decided = g.related(p, q)
    assert ok and not decided  # falls back to the orbit key in d = 3


def test_named_groups_and_dimensions():
    assert named_group("SE2").dimension == 3
    assert named_group("E2").dimension == 3
    assert named_group("pseudo").dimension == 3
    assert named_group("SL2").dimension == 3
    assert named_group("O3").dimension == 3
    with pytest.raises(ValueError):
        named_group("GL2")


def test_boost_membership_rational_point():
    lam = Fraction(2)
    ch, sh = (lam + 1 / lam) / 2, (lam - 1 / lam) / 2
    assert (ch, sh) == (Fraction(5, 4), Fraction(3, 4))
    assert Pseudo11().contains(AffineMap.make(((ch, sh), (sh, ch)), (1, 1)))
    assert not Pseudo11().contains(AffineMap.make(((ch, sh), (sh, -ch))))
    assert Pseudo11().contains(AffineMap.make(((ch, sh), (-sh, -ch))))
