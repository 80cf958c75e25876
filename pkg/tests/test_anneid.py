import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I, S
from ggr import corpus
from ggr.anneid import (
    GammaAnneid,
    SemihomogeneousQuadruple,
    anneid_from_graded,
    anneid_isomorphism,
    graded_rings_weakly_equivalent,
    idempotent_pairs,
    is_alpha_idempotent,
    is_regular,
    linearize_anneid,
    local_ring_at,
    opposite,
    regularity_witness,
    semihomogeneous_from_graded,
    verify_anneid,
    verify_semihomogeneous,
)
from ggr.finabel import FiniteAbelianGroup
from ggr.gammaring import FiniteRing, GradedGammaRing, gamma_from_graded_ring, verify_gamma_ring, verify_graded
from ggr.grading import Graduation, Homogroupoid
from ggr.report import ResourceError, StructureError

G1 = (1,)


def test_sd3_verifies(sd3):
    rep = verify_anneid(sd3)
    assert rep.passed
    assert rep["iv_faithful"].passed is None  # plain anneid: Nobusawa clauses not applicable


def test_corrupted_distributivity_fails(sd3):
    # a V4 class where only one basis product is nonzero
    A = Homogroupoid.from_classes([FiniteAbelianGroup((2, 2))])
    G = Homogroupoid.from_classes([FiniteAbelianGroup((2,))])
    T = np.zeros((len(A), len(G), len(A)), dtype=np.int64)
    e = A.index[(1, 0)]
    T[e, 1, e] = e
    rep = verify_anneid(GammaAnneid(A, G, T))
    assert rep["iii_left_distributive"].passed is False
    assert rep["iii_left_distributive"].witness is not None


def test_zero_triple_verifies(zero3):
    assert verify_anneid(zero3).passed


def test_semihomogeneous_examples():
    g = corpus.matrix_m2f2()
    assert verify_semihomogeneous(semihomogeneous_from_graded(g)).passed
    q = semihomogeneous_from_graded(g)
    missing_zero = SemihomogeneousQuadruple(q.R, q.A - {g.ring.R.zero}, q.G)
    assert verify_semihomogeneous(missing_zero)["i_zero"].passed is False
    z4 = FiniteRing.zn(4)
    t = gamma_from_graded_ring(z4, Graduation.trivial(z4.group))
    whole = SemihomogeneousQuadruple(t.ring, frozenset(z4.group.elements), frozenset(z4.group.elements))
    assert verify_semihomogeneous(whole).passed


def test_anneid_from_graded_examples():
    sd = anneid_from_graded(corpus.semidirect_f2())
    assert len(sd.A) == 3 and sd.A.num_grades == 2
    assert anneid_isomorphism(sd, corpus.sd3()) is not None
    m = anneid_from_graded(corpus.matrix_m2f2())
    assert len(m.A) == 5 and len(m.G) == 3
    z4 = FiniteRing.zn(4)
    t = anneid_from_graded(gamma_from_graded_ring(z4, Graduation.trivial(z4.group)))
    assert len(t.A) == 4 and len(t.G) == 4 and t.A.num_grades == 1


def test_linearize_examples(sd3, zero3):
    g = linearize_anneid(sd3)
    assert len(g.ring.R) == 4 and verify_graded(g).passed
    z = linearize_anneid(zero3)
    assert z.ring.R.cyclic_orders == (2, 2) and not z.ring.triple.any()
    assert anneid_isomorphism(anneid_from_graded(g), sd3) is not None


def test_linearize_bound(sd3):
    with pytest.raises(ResourceError):
        linearize_anneid(sd3, bound=10)


def test_alpha_idempotents(sd3, zero3):
    s_grade = int(sd3.A.grade[sd3.A.index[S]])
    i_grade = int(sd3.A.grade[sd3.A.index[I]])
    g = sd3.G.index[G1]
    assert is_alpha_idempotent(sd3, s_grade, g)
    assert not is_alpha_idempotent(sd3, i_grade, g)
    assert idempotent_pairs(zero3) == []
    with pytest.raises(ValueError):
        is_alpha_idempotent(sd3, s_grade, 0)


def test_local_ring_examples(sd3, matrix):
    e = int(sd3.A.grade[sd3.A.index[S]])
    loc = local_ring_at(sd3, e, sd3.G.index[G1])
    assert len(loc.A) == 2 and len(loc.G) == 2
    assert loc.mul(1, 1, 1) == 1  # s g s = s: F2 with identity
    e11 = matrix.A.index[(1, 0, 0, 0)]
    loc = local_ring_at(matrix, int(matrix.A.grade[e11]), matrix.G.index[(1, 0)])
    assert len(loc.A) == 2 and loc.mul(1, 1, 1) == 1
    with pytest.raises(ValueError):
        local_ring_at(sd3, int(sd3.A.grade[sd3.A.index[I]]), 1)


def test_regularity_examples(sd3, zero3):
    assert is_regular(sd3) and is_regular(zero3)
    # two non-addible gamma elements acting identically: e g1 e = e g2 e = e
    mul = corpus.adjoin_zero([[0]])
    twin = corpus.semigroup_anneid(mul, [1, 1], name="twin")
    assert verify_anneid(twin).passed
    assert not is_regular(twin, "right")
    assert regularity_witness(twin, "right") is not None


def test_opposite_is_involution(full_corpus):
    for e in full_corpus[:40]:
        a = e.anneid
        assert np.array_equal(opposite(opposite(a)).triple, a.triple)
        assert is_regular(a, "left") == is_regular(opposite(a), "right")


def test_grade_table_coherence(full_corpus):
    for e in full_corpus:
        a = e.anneid
        gA, gG = a.A.grade, a.G.grade
        for x, al, y in np.argwhere(a.triple != 0):
            assert gA[a.triple[x, al, y]] == a.grade_product(gA[x], gG[al], gA[y])


def test_local_rings_are_gamma_rings(full_corpus):
    for e in full_corpus:
        a = e.anneid
        for pair in idempotent_pairs(a):
            loc = local_ring_at(a, *pair)
            assert loc.A.num_grades == 1
            assert verify_anneid(loc).passed
            g = linearize_anneid(loc)
            assert verify_gamma_ring(g.ring).passed


def test_graded_round_trip_is_weakly_equivalent(full_corpus):
    for e in full_corpus:
        if e.graded is not None:
            back = linearize_anneid(anneid_from_graded(e.graded))
            assert graded_rings_weakly_equivalent(e.graded, back), e.name


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_three_aspect_round_trip_on_random_anneids(seed):
    import random

    entries = corpus.random_partial_map_entries(3, random.Random(seed))
    for e in entries:
        a = e.anneid
        assert anneid_isomorphism(anneid_from_graded(linearize_anneid(a)), a) is not None


def test_isomorphism_distinguishes(sd3, zero3):
    assert anneid_isomorphism(sd3, sd3) is not None
    assert anneid_isomorphism(sd3, zero3) is None


def test_grade_table_rejects_incoherent_products():
    A = Homogroupoid.from_classes([FiniteAbelianGroup((2, 2)), FiniteAbelianGroup((2,)), FiniteAbelianGroup((2,))])
    G = Homogroupoid.from_classes([FiniteAbelianGroup((2,))])
    T = np.zeros((len(A), 2, len(A)), dtype=np.int64)
    e1, e2 = A.index[(1, 0, 0, 0)], A.index[(0, 1, 0, 0)]
    T[e1, 1, e1] = A.index[(0, 0, 1, 0)]
    T[e2, 1, e2] = A.index[(0, 0, 0, 1)]
    bad = GammaAnneid(A, G, T)
    with pytest.raises(StructureError):
        bad.grade_table
    assert verify_anneid(bad)["grade_coherence"].passed is False
