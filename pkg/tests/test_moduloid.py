import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I, S, load_fixture
from ggr import corpus
from ggr.finabel import FiniteAbelianGroup
from ggr.grading import Homogroupoid
from ggr.ideals import enumerate_right_ideals, find_modularity
from ggr.moduloid import (
    Moduloid,
    anneid_as_moduloid,
    annihilator,
    brute_force_submoduloids,
    check_cyclic_isomorphism,
    check_modular_ideal_generator,
    check_strictly_cyclic_theorem,
    element_annihilator,
    enumerate_submoduloids,
    generated_submoduloid,
    is_faithful,
    is_irreducible,
    is_regular_moduloid,
    is_strictly_cyclic,
    is_submoduloid,
    moduloid_isomorphism,
    quotient_ideal,
    regular_moduloid_witness,
    right_factor,
    strict_generators,
    verify_moduloid,
    zero_moduloid,
)

GAMMA = 1  # the nonzero gamma element of sd3


def idx(a, label):
    return a.A.index[label]


def test_anneid_over_itself_verifies(sd3, matrix, zero3):
    for a in (sd3, matrix, zero3):
        assert verify_moduloid(anneid_as_moduloid(a)).passed


def test_right_factor_verifies(sd3):
    q, proj = right_factor(sd3, {0, idx(sd3, I)})
    assert len(q) == 2
    assert proj[idx(sd3, I)] == 0 and proj[idx(sd3, S)] != 0
    assert verify_moduloid(q).passed


def test_corrupted_action_breaks_grade_coherence(sd3):
    # one V4 class whose two basis elements are sent into different classes by s
    M = Homogroupoid.from_classes([FiniteAbelianGroup((2, 2)), FiniteAbelianGroup((2,)), FiniteAbelianGroup((2,))])
    P = np.zeros((len(M), len(sd3.G), len(sd3.A)), dtype=np.int64)
    big, c2, c3 = sorted((sorted(c) for c in M.classes), key=len, reverse=True)
    a, b = big[1:3]
    P[a, GAMMA, idx(sd3, S)] = c2[1]
    P[b, GAMMA, idx(sd3, S)] = c3[1]
    rep = verify_moduloid(Moduloid(M, sd3, P))
    assert rep["grade_coherence"].passed is False
    assert rep["grade_coherence"].witness is not None


def test_action_shape_is_checked(sd3):
    with pytest.raises(ValueError):
        Moduloid(sd3.A, sd3, np.zeros((2, 2, 2), dtype=np.int64))


def test_sd3_module_fixture_is_sd3_over_itself():
    elab = load_fixture("sd3_module")
    assert elab.kind == "moduloid" and elab.passed
    m = elab.structure
    own = anneid_as_moduloid(m.over)
    assert moduloid_isomorphism(m, own) is not None


def test_regularity(sd3):
    assert is_regular_moduloid(anneid_as_moduloid(sd3))
    assert is_regular_moduloid(right_factor(sd3, {0, idx(sd3, I)})[0])
    mul = corpus.adjoin_zero([[0]])
    twin = corpus.semigroup_anneid(mul, [1, 1], name="twin")
    m = anneid_as_moduloid(twin)
    assert not is_regular_moduloid(m)
    assert regular_moduloid_witness(m) is not None


def test_irreducibility(sd3):
    simple, _ = right_factor(sd3, {0, idx(sd3, I)})
    assert is_irreducible(simple)
    # sd3 itself has the proper submoduloid {0, i}
    assert not is_irreducible(anneid_as_moduloid(sd3))
    # MGA = 0 rules irreducibility out even for a two-element M
    assert not is_irreducible(zero_moduloid(simple.M, sd3))


def test_submoduloids_of_sd3(sd3):
    m = anneid_as_moduloid(sd3)
    i, s = idx(sd3, I), idx(sd3, S)
    assert enumerate_submoduloids(m) == [frozenset({0}), frozenset({0, i}), frozenset({0, i, s})]
    assert is_submoduloid(m, {0, i}) and not is_submoduloid(m, {0, s})
    assert generated_submoduloid(m, [s]) == frozenset({0, i, s})


def test_strict_generators_of_sd3(sd3):
    m = anneid_as_moduloid(sd3)
    s = idx(sd3, S)
    assert strict_generators(m, GAMMA) == {s}
    assert strict_generators(m) == {s}
    assert is_strictly_cyclic(m)
    assert not is_strictly_cyclic(zero_moduloid(sd3.A, sd3))


def test_quotient_ideals(sd3, zero3):
    m = anneid_as_moduloid(sd3)
    i, s = idx(sd3, I), idx(sd3, S)
    assert element_annihilator(m, i, GAMMA) == {0, i}
    assert element_annihilator(m, s, GAMMA) == {0}
    assert quotient_ideal(m, [0], [i]) == {0, i}
    assert annihilator(m) == {0} and is_faithful(m)
    z = anneid_as_moduloid(zero3)
    assert quotient_ideal(z, [0], range(len(zero3.A))) == frozenset(range(len(zero3.A)))
    assert not is_faithful(z)


def test_quotient_ideal_of_empty_set_is_everything(sd3):
    m = anneid_as_moduloid(sd3)
    assert quotient_ideal(m, [0], []) == frozenset(range(len(sd3.A)))


def test_cyclic_isomorphism_sd3(sd3):
    m = anneid_as_moduloid(sd3)
    for x in range(len(sd3.A)):
        assert check_cyclic_isomorphism(m, x, GAMMA)


def test_strictly_cyclic_theorem_sd3(sd3):
    m = anneid_as_moduloid(sd3)
    assert check_strictly_cyclic_theorem(m).passed
    K = element_annihilator(m, idx(sd3, S), GAMMA)
    assert find_modularity(sd3, K) is not None
    for J in enumerate_right_ideals(sd3):
        if len(J) < len(sd3.A) and find_modularity(sd3, J) is not None:
            assert check_modular_ideal_generator(sd3, J)


def test_factor_isomorphic_to_itself(sd3):
    q, _ = right_factor(sd3, {0, idx(sd3, I)})
    assert moduloid_isomorphism(q, q) == list(range(len(q)))
    assert moduloid_isomorphism(q, anneid_as_moduloid(sd3)) is None


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_submoduloid_lattice_matches_brute_force(full_corpus, data):
    small = [e for e in full_corpus if len(e.anneid.A) <= 8]
    a = data.draw(st.sampled_from(small)).anneid
    ideals = enumerate_right_ideals(a)
    N = data.draw(st.sampled_from(ideals))
    m = right_factor(a, N)[0]
    assert verify_moduloid(m).passed
    assert enumerate_submoduloids(m) == brute_force_submoduloids(m)
