import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggr.finabel import (
    FiniteAbelianGroup,
    enumerate_subgroups,
    is_internal_direct_sum,
    is_subgroup,
    subgroup_generate,
)
from ggr.report import ResourceError, StructureError

Z2, Z4 = FiniteAbelianGroup((2,)), FiniteAbelianGroup((4,))
V4 = FiniteAbelianGroup((2, 2))

orders = st.lists(st.integers(2, 4), min_size=0, max_size=3).map(tuple)


def brute_force_subgroups(G):
    els = G.elements
    return {frozenset(s) for r in range(len(els) + 1) for s in itertools.combinations(els, r) if is_subgroup(G, s)}


def test_add_examples():
    assert Z4.add((1,), (3,)) == (0,)
    assert V4.add((1, 0), (0, 1)) == (1, 1)
    assert Z4.add((2,), (0,)) == (2,)


def test_add_rank_mismatch():
    with pytest.raises(StructureError):
        V4.add((1,), (0, 1))


def test_trivial_group():
    T = FiniteAbelianGroup(())
    assert T.element_count == 1 and T.elements == ((),)


def test_rejects_order_one_factor():
    with pytest.raises(StructureError):
        FiniteAbelianGroup((1, 2))


def test_subgroup_generate_examples():
    assert subgroup_generate(Z4, [(2,)]) == {(0,), (2,)}
    assert subgroup_generate(V4, []) == {(0, 0)}
    assert subgroup_generate(V4, [(1, 0), (0, 1)]) == set(V4.elements)


def test_enumerate_subgroup_counts():
    assert len(enumerate_subgroups(Z2)) == 2
    assert len(enumerate_subgroups(V4)) == 5
    assert len(enumerate_subgroups(Z4)) == 3


def test_enumerate_subgroups_bound():
    with pytest.raises(ResourceError):
        enumerate_subgroups(FiniteAbelianGroup((2,) * 7), bound=64)


def test_direct_sum_examples():
    a, b = subgroup_generate(V4, [(1, 0)]), subgroup_generate(V4, [(0, 1)])
    assert is_internal_direct_sum(V4, [a, b])
    assert not is_internal_direct_sum(V4, [a, a])
    two = subgroup_generate(Z4, [(2,)])
    assert not is_internal_direct_sum(Z4, [two, two])


@given(orders)
def test_element_count_is_product(cyc):
    G = FiniteAbelianGroup(cyc)
    n = 1
    for k in cyc:
        n *= k
    assert G.element_count == n == len(set(G.elements))


@given(orders, st.data())
def test_generate_is_idempotent(cyc, data):
    G = FiniteAbelianGroup(cyc)
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=3))
    H = subgroup_generate(G, gens)
    assert is_subgroup(G, H)
    assert subgroup_generate(G, H) == H


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(2, 4), min_size=0, max_size=2).map(tuple).filter(lambda c: len(c) < 2 or c[0] * c[1] <= 16))
def test_enumeration_matches_brute_force(cyc):
    G = FiniteAbelianGroup(cyc)
    assert set(enumerate_subgroups(G)) == brute_force_subgroups(G)


@given(orders)
def test_direct_sum_trivial_cases(cyc):
    G = FiniteAbelianGroup(cyc)
    whole = frozenset(G.elements)
    assert is_internal_direct_sum(G, [whole])
    assert is_internal_direct_sum(G, [frozenset({G.zero}), whole])


@given(orders, st.data())
def test_ids_round_trip(cyc, data):
    G = FiniteAbelianGroup(cyc)
    x = data.draw(st.sampled_from(G.elements))
    y = data.draw(st.sampled_from(G.elements))
    assert G.element(G.id(x)) == x
    assert G.add_table[G.id(x), G.id(y)] == G.id(G.add(x, y))
    assert G.add(x, G.neg(x)) == G.zero
