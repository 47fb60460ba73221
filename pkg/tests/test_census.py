from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigidlab.census import (BudgetExceeded, census, energy, energy_pairwise,
                             fibre_energy_consistency, gram_census, measure, quantize,
                             rich_transformations, tensor_census, transformation_classes)
from rigidlab.groups import Euclidean, FiniteGroup, Pseudo11, SpecialLinear2
from rigidlab.hypergraph import Hypergraph, complete_graph, complete_with_loops, path_graph
from rigidlab.linalg import AffineMap
from rigidlab.metrics import catalogue, dot, euclid_sq, lp, pseudo11, skew, sym_tensor
from rigidlab.pointsets import circle, grid, line

from .oracles import distinct_values, se2_rich_classes

GRID3 = grid(3, 2).points
PLUS_MINUS = FiniteGroup(1, (AffineMap.make([[1]]), AffineMap.make([[-1]])), "{+-1}")


def test_measure_examples():
    assert measure(euclid_sq(2), complete_graph(2), [(0, 0), (3, 4)]) == (25,)
    assert measure(euclid_sq(2), complete_graph(3), [(0, 0), (1, 0), (0, 1)]) == (1, 1, 2)
    assert measure(skew(), complete_graph(2), [(0, 1), (1, 0)]) == (-1,)


def test_census_examples():
    rep = census(euclid_sq(2), complete_graph(2), line(3).points)
    assert rep.distinct_count == 3 and rep.enumerated == 9
    assert census(dot(2), complete_graph(2), circle(4).points).distinct_count == 3
    for m in catalogue(d2_only=True):
        if m.k == 2:
            assert census(m, complete_graph(2), [(1, 2)]).distinct_count == 1


def test_census_matches_independent_enumeration():
    def dists(p):
        a, b, c = p
        return ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2, (a[0] - c[0]) ** 2 + (a[1] - c[1]) ** 2,
                (b[0] - c[0]) ** 2 + (b[1] - c[1]) ** 2)
    assert census(euclid_sq(2), complete_graph(3), GRID3).distinct_count == distinct_values(dists, GRID3, 3)


def test_fibres_sum_to_enumeration():
    rep = census(euclid_sq(2), path_graph(3), GRID3)
    assert sum(rep.fibre_sizes) == 9 ** 3 == rep.enumerated
    assert len(rep.fibre_sizes) == rep.distinct_count


def test_filters():
    m, G, P = euclid_sq(2), complete_graph(3), GRID3
    inj = census(m, G, P, "injective")
    assert inj.enumerated == 9 * 8 * 7
    span = census(m, G, P, "spanning")
    # injective triples minus the 8 collinear lines of the grid, each in 6 orders
    assert span.enumerated == 9 * 8 * 7 - 8 * 6
    reg = census(m, G, P, "regular")
    assert reg.enumerated == span.enumerated  # K3 regular iff not collinear
    with pytest.raises(ValueError):
        census(m, G, P, "bogus")


def test_budget_error_reports_required_size():
    with pytest.raises(BudgetExceeded) as exc:
        census(euclid_sq(2), complete_graph(3), GRID3, budget=100)
    assert exc.value.required == 729


def test_threads_do_not_change_results():
    a = census(euclid_sq(2), complete_graph(3), GRID3, threads=1)
    b = census(euclid_sq(2), complete_graph(3), GRID3, threads=3)
    assert a == b


def test_float_keys_are_quantized():
    rep = census(dot(2), complete_graph(2), circle(8).points)
    assert rep.distinct_count == 5  # cos of multiples of 45 degrees
    assert quantize([0.1 + 0.2]) == quantize([0.3])


@pytest.mark.parametrize("theta", [AffineMap.make(((0, -1), (1, 0)), (3, 1)),
                                   AffineMap.make(((Fraction(3, 5), Fraction(-4, 5)),
                                                   (Fraction(4, 5), Fraction(3, 5))), (1, 2))])
def test_census_invariant_under_isometry(theta):
    moved = [theta(x) for x in GRID3]
    for G in (complete_graph(2), path_graph(3)):
        assert census(euclid_sq(2), G, moved).distinct_count == census(euclid_sq(2), G, GRID3).distinct_count


def test_energy_examples():
    assert energy(PLUS_MINUS, 1, [(1,), (-1,)]).energy == 4
    assert energy(sym_tensor(4, 1), 1, [(1,), (-1,)]).energy == 4
    # odd k in d = 1: the isometry group is trivial
    assert energy(sym_tensor(3, 1), 1, [(1,), (-1,)]).energy == 2
    # two points, V = 2 under E(2): classes {aa, bb} and {ab, ba}
    assert energy(Euclidean(2), 2, [(0, 0), (1, 0)]).energy == 8


@pytest.mark.parametrize("group", [Euclidean(2), Euclidean(2, True), Pseudo11(), SpecialLinear2()],
                         ids=lambda g: g.name)
def test_transitive_groups_single_vertex(group):
    P = [(1, 0), (0, 1), (2, 3), (1, 1)] if group.name != "SL(2)" else [(1, 0), (0, 1), (2, 3)]
    assert energy(group, 1, P).energy == len(P) ** 2


@pytest.mark.parametrize("g", [euclid_sq(2), Euclidean(2, True), pseudo11(), dot(2), skew(), lp(4, 2),
                               sym_tensor(3, 2), sym_tensor(4, 2)],
                         ids=lambda g: getattr(g, "id", getattr(g, "name", "")))
@pytest.mark.parametrize("v", [1, 2, 3])
def test_orbit_key_energy_equals_pairwise(g, v):
    P = [(0, 0), (1, 0), (0, 1), (1, 2)] if v == 3 else [(0, 0), (1, 0), (0, 1), (1, 2), (2, 1)]
    a, b = energy(g, v, P), energy_pairwise(g, v, P)
    assert a.energy == b.energy
    assert not b.flagged
    assert len(P) ** v <= a.energy <= len(P) ** (2 * v)


def test_energy_monotone_under_inclusion():
    for P in ([(0, 0), (1, 0), (0, 1), (1, 1)], GRID3[:6]):
        for v in (2, 3):
            assert energy(Euclidean(2, True), v, P).energy <= energy(Euclidean(2), v, P).energy


@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=4, unique=True),
       st.integers(1, 3))
def test_finite_group_energy_bound(P, v):
    m = sym_tensor(4, 2)
    e = energy(m, v, P).energy
    assert len(P) ** v <= e <= len(m.group.finite_elements) * len(P) ** v


def test_rich_examples():
    two = [(0, 0), (1, 0)]
    assert rich_transformations(Euclidean(2, True), two, 2).classes == 2
    assert rich_transformations(Euclidean(2, True), two, 2, key="sets").classes == 1
    assert rich_transformations(Euclidean(2, True), GRID3[:5], 6).classes == 0
    with pytest.raises(ValueError):
        rich_transformations(SpecialLinear2(), two, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rich_collinear_matches_oracle(n):
    P = line(n).points
    for t in range(2, n + 1):
        assert rich_transformations(Euclidean(2, True), P, t).classes == se2_rich_classes(P, t)


@pytest.mark.filterwarnings("ignore:P has points")
def test_rich_nonincreasing_in_t():
    for group in (Euclidean(2, True), Euclidean(2), Pseudo11()):
        counts = [rich_transformations(group, GRID3[:6], t).classes for t in range(2, 8)]
        assert counts == sorted(counts, reverse=True)


def test_pseudo_rich_on_diagonal_is_flagged():
    with pytest.warns(UserWarning):
        rep = rich_transformations(Pseudo11(), [(0, 0), (1, 1), (3, 0)], 2)
    assert rep.on_diagonal_warning
    assert not rich_transformations(Pseudo11(), [(0, 0), (2, 1), (5, 0)], 2).on_diagonal_warning


def test_rich_classes_are_members():
    for group in (Euclidean(2, True), Euclidean(2), Pseudo11()):
        for theta in transformation_classes(group, GRID3[:6]).values():
            assert group.contains(theta)


def test_gram_and_tensor_examples():
    assert gram_census([(1,)], 2) == 1
    # columns (1,1), (1,-1), (-1,1), (-1,-1) give only two Grams: [[1,1],[1,1]] and [[1,-1],[-1,1]]
    assert gram_census([1, -1], 2) == 2
    assert gram_census([1, -1, 2], 2) == len({(a * a, a * b, b * b) for a in (1, -1, 2) for b in (1, -1, 2)})
    for P in ([(1, 0), (0, 1), (1, 1)], [(1,), (2,), (-1,)]):
        assert gram_census(P, 2) == census(dot(len(P[0])), complete_with_loops(2), P).distinct_count
    assert tensor_census([0], 3, 3) == 1
    assert tensor_census([1, 2], 2, 3) == 4
    assert tensor_census([2, 1], 2, 3) == tensor_census([1, 2], 2, 3)


def test_tensor_census_matches_direct_tensors():
    P = [(1, 0), (0, 1), (1, 1), (1, -1)]

    def tensor(cols):
        return tuple(sum(c[j] * c2[j] * c3[j] for j in range(2)) for c, c2, c3
                     in itertools.combinations_with_replacement(cols, 3))
    assert tensor_census(P, 2, 3) == distinct_values(tensor, P, 2)


def test_fibre_energy_consistency():
    rep = fibre_energy_consistency(euclid_sq(2), complete_graph(3), GRID3)
    assert rep.energy_pairs_preserve_g and rep.square_sum_dominates
    one = fibre_energy_consistency(dot(2), complete_graph(3), [(1, 2)])
    assert one.fibre_square_sum == one.energy == 1
    for k in (3, 4):
        m = sym_tensor(k, 2)
        G = Hypergraph(k, 3, tuple(itertools.combinations_with_replacement(range(3), k)), simple=False)
        rep = fibre_energy_consistency(m, G, [(0, 1), (1, 1), (2, -1), (1, 0)])
        assert rep.ok
