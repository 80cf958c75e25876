import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I, S
from ggr import corpus
from ggr.anneid import anneid_isomorphism, is_regular
from ggr.ideals import (
    brute_force_ideals,
    enumerate_ideals,
    enumerate_right_ideals,
    factor_anneid,
    find_modularity,
    generated_ideal,
    grade_of_modular_ideal,
    ideal_intersection,
    ideal_sum,
    is_anneid_quasihomomorphism,
    is_ideal,
    is_modular,
    kernel,
    maximal_members,
    maximal_right_modular_ideals,
    modularity_witnesses,
    principal_left,
    principal_right,
    principal_two_sided,
    right_colon,
)
from ggr.report import ResourceError


def test_principal_ideals_sd3(sd3):
    i, s = sd3.A.index[I], sd3.A.index[S]
    assert principal_right(sd3, 0) == {0}
    assert principal_right(sd3, i) == {0, i}
    assert principal_right(sd3, s) == {0, i, s}
    assert principal_left(sd3, i) == {0, i}
    assert principal_two_sided(sd3, i) == {0, i}


def test_sums_and_intersections():
    # zero product on one V4 class: two lines sum to the whole class
    v4 = corpus.zero_product(class_orders=((2, 2),))
    lines = [I for I in enumerate_right_ideals(v4) if len(I) == 2]
    assert len(lines) == 3
    a, b = lines[:2]
    assert ideal_sum(v4, a, b) == frozenset(range(4))
    assert ideal_intersection(a, b) == {0}
    # across two classes the sum is only the union
    z = corpus.zero_product()
    assert ideal_sum(z, {0, 1}, {0, 2}) == {0, 1, 2}
    assert ideal_sum(z, {0, 1}, {0}) == {0, 1}


def test_lattice_examples(sd3, zero3):
    i, s = sd3.A.index[I], sd3.A.index[S]
    assert enumerate_right_ideals(sd3) == [frozenset({0}), frozenset({0, i}), frozenset({0, i, s})]
    assert enumerate_ideals(sd3, "two-sided") == enumerate_right_ideals(sd3)
    assert len(enumerate_right_ideals(zero3)) == 4
    assert enumerate_right_ideals(corpus.trivial_anneid()) == [frozenset({0})]


def test_enumeration_bounds(matrix):
    with pytest.raises(ResourceError):
        enumerate_right_ideals(matrix, max_size=4)
    with pytest.raises(ResourceError):
        enumerate_right_ideals(matrix, max_count=2)


def test_generated_ideal_is_smallest(sd3):
    i = sd3.A.index[I]
    assert generated_ideal(sd3, [i]) == {0, i}
    assert is_ideal(sd3, {0, i}, "two-sided")
    assert not is_ideal(sd3, {0, sd3.A.index[S]})


def test_factor_anneids(sd3):
    whole = frozenset(range(len(sd3.A)))
    same, proj = factor_anneid(sd3, {0})
    assert anneid_isomorphism(same, sd3) is not None
    assert list(proj) == list(range(len(sd3.A)))
    triv, _ = factor_anneid(sd3, whole)
    assert len(triv.A) == 1
    q, proj = factor_anneid(sd3, {0, sd3.A.index[I]})
    assert len(q.A) == 2
    # the surviving coset is idempotent for gamma
    assert q.triple[1, 1, 1] == 1


def test_factor_requires_two_sided_ideal(matrix):
    one_sided = [J for J in enumerate_right_ideals(matrix) if not is_ideal(matrix, J, "two-sided")]
    assert one_sided
    for J in one_sided:
        with pytest.raises(ValueError):
            factor_anneid(matrix, J)


def test_canonical_surjection_is_a_quasihomomorphism(full_corpus):
    for e in full_corpus[:60]:
        a = e.anneid
        for J in enumerate_ideals(a, "two-sided"):
            q, proj = factor_anneid(a, J)
            assert is_anneid_quasihomomorphism(a, q, proj)
            assert kernel(proj) == J


def test_modularity_sd3(sd3):
    i, s = sd3.A.index[I], sd3.A.index[S]
    w = find_modularity(sd3, {0, i})
    assert (w.u, w.alpha) == (s, 1)
    assert is_modular(sd3, {0, i})
    # s is a left identity of the whole anneid, so {0} is modular too
    assert find_modularity(sd3, {0}) == w
    assert maximal_right_modular_ideals(sd3) == [(frozenset({0, i}), w)]
    assert grade_of_modular_ideal(sd3, {0, i}) == sd3.A.grade[s]


def test_zero_product_has_no_modular_proper_ideals(zero3):
    whole = frozenset(range(len(zero3.A)))
    for J in enumerate_right_ideals(zero3):
        if J != whole:
            assert find_modularity(zero3, J) is None
    assert maximal_right_modular_ideals(zero3) == []
    # A itself is modular for every (u, alpha)
    assert len(modularity_witnesses(zero3, whole)) == len(zero3.A) * len(zero3.G)


def test_matrix_maximal_modular_ideals(matrix):
    mm = maximal_right_modular_ideals(matrix)
    assert len(mm) == 2
    (a, _), (b, _) = mm
    assert ideal_intersection(a, b) == {0}


def test_grade_of_modular_ideal_rejects_bad_input(sd3, zero3):
    with pytest.raises(ValueError):
        grade_of_modular_ideal(sd3, range(len(sd3.A)))
    with pytest.raises(ValueError):
        grade_of_modular_ideal(zero3, {0})


def test_maximal_members():
    fam = [frozenset({0}), frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 1, 2})]
    assert maximal_members(fam, frozenset({0, 1, 2})) == [frozenset({0, 1}), frozenset({0, 2})]
    assert maximal_members([frozenset({0})], frozenset({0})) == []


def test_colon_of_modular_ideal_lies_inside(regular_corpus):
    for e in regular_corpus[:80]:
        a = e.anneid
        whole = len(a.A)
        for J in enumerate_right_ideals(a):
            if len(J) < whole and is_modular(a, J):
                C = right_colon(a, J)
                assert C <= J
                assert is_ideal(a, C, "two-sided")


def test_modular_grades_are_unique_on_regular_anneids(regular_corpus):
    for e in regular_corpus[:80]:
        a = e.anneid
        for J, _ in maximal_right_modular_ideals(a):
            grades = {int(a.A.grade[w.u]) for w in modularity_witnesses(a, J)}
            assert grades == {grade_of_modular_ideal(a, J)}
    assert all(is_regular(e.anneid) for e in regular_corpus)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lattice_matches_brute_force(full_corpus, data):
    small = [e for e in full_corpus if len(e.anneid.A) <= 12]
    a = data.draw(st.sampled_from(small)).anneid
    side = data.draw(st.sampled_from(["right", "left", "two-sided"]))
    assert enumerate_ideals(a, side) == brute_force_ideals(a, side)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lattice_operations(full_corpus, data):
    a = data.draw(st.sampled_from(full_corpus[:120])).anneid
    ideals = enumerate_right_ideals(a)
    X = data.draw(st.sampled_from(ideals))
    Y = data.draw(st.sampled_from(ideals))
    total = ideal_sum(a, X, Y)
    assert total in ideals and ideal_intersection(X, Y) in ideals
    assert total == ideal_sum(a, Y, X)
    assert X <= total and Y <= total
    assert generated_ideal(a, X | Y) == total
    x = data.draw(st.sampled_from(range(len(a.A))))
    assert principal_right(a, x) == generated_ideal(a, [x])
