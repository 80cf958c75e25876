import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I, S
from ggr import corpus
from ggr.anneid import anneid_from_graded, idempotent_pairs, linearize_anneid
from ggr.gammaring import GradedGammaRing
from ggr.grading import Graduation
from ggr.ideals import enumerate_right_ideals
from ggr.radical import (
    Bounds,
    check_ideal_radical,
    check_local_radical,
    check_regular_rqr_criterion,
    check_remark_facts,
    correspondence_at_idempotent,
    ideal_radical,
    is_alpha_rqr,
    jacobson_radical,
    large_jacobson_radical,
    local_radical_map,
    modular_radical,
    nilpotent_mask,
    qr_radical,
    ring_radical,
    rqr_by_generated_ideal,
    rqr_certificate,
)
from ggr.report import ResourceError


def test_rqr_examples_sd3(sd3):
    i, s = sd3.A.index[I], sd3.A.index[S]
    ok, cert = is_alpha_rqr(sd3, i, 1)
    assert ok and cert.ideals == {}
    ok, cert = is_alpha_rqr(sd3, s, 1)
    assert not ok
    # the certificate names a proper ideal modulo which s is a left identity
    assert cert.ideals[1] == {0}
    assert rqr_by_generated_ideal(sd3, i, 1) and not rqr_by_generated_ideal(sd3, s, 1)
    with pytest.raises(ValueError):
        is_alpha_rqr(sd3, i, 0)


def test_nilpotents_are_rqr(full_corpus):
    for e in full_corpus[:100]:
        a = e.anneid
        nil = nilpotent_mask(a)
        for z in range(len(a.A)):
            for alpha in range(1, len(a.G)):
                if nil[z, alpha]:
                    assert rqr_certificate(a, z, alphas=[alpha]).rqr


def test_rqr_dichotomy_examples(sd3, matrix):
    assert check_regular_rqr_criterion(sd3).passed
    assert check_regular_rqr_criterion(matrix).passed


def test_radical_values(sd3, zero3, matrix):
    i = sd3.A.index[I]
    r = jacobson_radical(sd3)
    for J in (r.J_modular, r.J_qr, r.J_local, r.J_left, r.J_large, r.J_linearized):
        assert J == {0, i}
    assert r.disagreements() == []
    # nothing is a left identity in a zero product, so J = A
    assert jacobson_radical(zero3).radical == frozenset(range(len(zero3.A)))
    rm = jacobson_radical(matrix)
    assert rm.radical == {0} and rm.J_large == {0}
    assert rm.disagreements() == []


def test_dual_numbers_radical():
    a = anneid_from_graded(corpus.dual_numbers_f2())
    r = jacobson_radical(a)
    assert len(r.radical) == 2
    assert r.J_large == r.radical


def test_report_json_uses_labels(sd3):
    payload = jacobson_radical(sd3).to_json()
    assert payload["J_qr"] == [[0, 0], [0, 1]]
    assert payload["agreements"]["modular=qr"] == {"applicable": True, "agree": True, "witness": None}


def test_large_radical_skipped_above_bound(sd3):
    r = jacobson_radical(sd3, Bounds(linearize=2))
    assert r.J_large is None and r.J_linearized is None
    assert any("large radical skipped" in n for n in r.notes)
    assert r.agreements["large=linearized"]["applicable"] is False
    with pytest.raises(ResourceError):
        large_jacobson_radical(sd3, bound=2)


def test_correspondence_and_local_radical(sd3, matrix):
    for a in (sd3, matrix):
        J = jacobson_radical(a).J_modular
        for e, alpha in idempotent_pairs(a):
            assert correspondence_at_idempotent(a, e, alpha).passed
            assert check_local_radical(a, e, alpha, J)
    assert local_radical_map(sd3) == {(int(sd3.A.grade[sd3.A.index[S]]), 1): frozenset({0})}


def test_ideal_radical(sd3, matrix):
    i = sd3.A.index[I]
    assert ideal_radical(sd3, {0, i}) == {0, i}
    assert ideal_radical(sd3, {0}) == {0}
    for a in (sd3, matrix):
        for J in enumerate_right_ideals(a):
            assert check_ideal_radical(a, J).passed


def test_modular_identity_grades_are_idempotent(sd3, matrix, zero3):
    for a in (sd3, matrix, zero3):
        assert check_remark_facts(a).passed


def one_grade_view(ring):
    return anneid_from_graded(GradedGammaRing(ring, Graduation.trivial(ring.R), Graduation.trivial(ring.Gamma)))


def test_ring_radical_matches_modular_route(full_corpus):
    """Both one-grade criteria agree with maximal modular ideals of the ungraded ring."""
    checked = 0
    for e in full_corpus:
        try:
            ring = linearize_anneid(e.anneid, 16).ring
        except ResourceError:
            continue
        one = one_grade_view(ring)
        J = modular_radical(one, enumerate_right_ideals(one))
        J = frozenset(ring.R.id(one.A.labels[x]) for x in J)
        assert ring_radical(ring, "kernel") == J
        assert ring_radical(ring, "equation") == J
        checked += 1
    assert checked >= 20


def test_disagreements_only_outside_theorem_scope(full_corpus):
    for e in full_corpus[::3]:
        r = jacobson_radical(e.anneid)
        assert r.disagreements() == [], e.name
        for key in ("large=linearized", "large<=modular"):
            assert r.agreements[key]["agree"] in (True, None)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_qr_radical_products_are_rqr(regular_corpus, data):
    a = data.draw(st.sampled_from(regular_corpus)).anneid
    ideals = enumerate_right_ideals(a)
    J = qr_radical(a, ideals)
    assert J == modular_radical(a, ideals)
    # every product landing from J is right quasi-regular
    for x in J:
        for alpha in range(1, len(a.G)):
            for y in range(len(a.A)):
                z = int(a.triple[x, alpha, y])
                assert all(rqr_certificate(a, z, ideals).verdicts.values())
