"""The full invariant suite run on one anneid of a corpus."""

from __future__ import annotations

from .anneid import (
    GammaAnneid,
    anneid_from_graded,
    anneid_isomorphism,
    idempotent_pairs,
    is_regular,
    linearize_anneid,
    verify_anneid,
)
from .corpus import Entry
from .gammaring import lemma_consistency_check, verify_graded
from .ideals import (
    BRUTE_FORCE_BOUND,
    brute_force_ideals,
    enumerate_ideals,
    maximal_right_modular_ideals,
    modularity_witnesses,
    right_colon,
)
from .moduloid import (
    anneid_as_moduloid,
    check_cyclic_isomorphism,
    check_modular_ideal_generator,
    check_strictly_cyclic_theorem,
    is_irreducible,
    is_regular_moduloid,
    moduloid_isomorphism,
    right_factor,
)
from .radical import (
    Bounds,
    check_ideal_radical,
    check_local_radical,
    check_regular_rqr_criterion,
    check_remark_facts,
    correspondence_at_idempotent,
    jacobson_radical,
)
from .report import CheckReport, ResourceError


def _first_failure(items):
    for label, ok in items:
        if not ok:
            return label
    return None


def _add(rep: CheckReport, cid: str, items) -> None:
    bad = _first_failure(items)
    rep.add(cid, bad is None, witness=bad)


def structure_checks(a: GammaAnneid, rep: CheckReport, bounds: Bounds, graded=None) -> None:
    rep.add("verify_anneid", verify_anneid(a).passed)
    try:
        back = anneid_from_graded(linearize_anneid(a, bounds.linearize))
        rep.add("linearization_round_trip", anneid_isomorphism(a, back) is not None)
    except ResourceError:
        rep.skip("linearization_round_trip")
    if graded is not None:
        rep.add("graded_iff_lemma", verify_graded(graded).passed == lemma_consistency_check(graded).passed)
    if len(a.A) <= BRUTE_FORCE_BOUND:
        for side in ("right", "two-sided"):
            ok = enumerate_ideals(a, side, bounds.max_size, bounds.max_count) == brute_force_ideals(a, side)
            rep.add(f"lattice_oracle_{side}", ok)


def radical_checks(a: GammaAnneid, rep: CheckReport, bounds: Bounds) -> None:
    r = jacobson_radical(a, bounds)
    rep.data["radical"] = r
    for key, v in sorted(r.agreements.items()):
        if v["applicable"] and v["agree"] is not None:
            rep.add(f"radical_{key}", v["agree"], witness=v["witness"])
        else:
            rep.skip(f"radical_{key}")


def regular_checks(a: GammaAnneid, rep: CheckReport, bounds: Bounds) -> None:
    """Theorems stated for regular anneids and their moduloids A and A/I."""
    names = ("rqr_dichotomy", "correspondence", "local_radical", "ideal_radical", "remark_facts",
             "cyclic_isomorphism", "strictly_cyclic_forward", "strictly_cyclic_backward",
             "colon_inside_modular", "irreducible_iff_simple_factor")
    if not is_regular(a):
        for n in names:
            rep.skip(n)
        return
    r = rep.data.get("radical") or jacobson_radical(a, bounds)
    J = r.J_modular
    ideals = enumerate_ideals(a, "right", bounds.max_size, bounds.max_count)
    whole = len(a.A)
    pairs = idempotent_pairs(a)
    rep.add("rqr_dichotomy", check_regular_rqr_criterion(a, bounds).passed)
    _add(rep, "correspondence", ((p, correspondence_at_idempotent(a, *p, bounds).passed) for p in pairs))
    _add(rep, "local_radical", ((p, check_local_radical(a, *p, J, bounds)) for p in pairs))
    _add(rep, "ideal_radical", ((sorted(I), check_ideal_radical(a, I, r.J_qr, bounds).passed) for I in ideals))
    rep.add("remark_facts", check_remark_facts(a, ideals).passed)

    modular = [I for I in ideals if len(I) < whole and modularity_witnesses(a, I)]
    maximal = [I for I, _ in maximal_right_modular_ideals(a, ideals)]
    mods = [("A", anneid_as_moduloid(a))] + [(sorted(I), right_factor(a, I)[0]) for I in ideals if len(I) < whole]
    mods = [(lab, m) for lab, m in mods if is_regular_moduloid(m)]
    _add(rep, "cyclic_isomorphism", (((lab, x, al), check_cyclic_isomorphism(m, x, al))
                                     for lab, m in mods for x in range(len(m.M)) for al in range(len(a.G))))
    _add(rep, "strictly_cyclic_forward", ((lab, check_strictly_cyclic_theorem(m).passed) for lab, m in mods))
    _add(rep, "strictly_cyclic_backward", ((sorted(I), check_modular_ideal_generator(a, I)) for I in modular))
    _add(rep, "colon_inside_modular", ((sorted(I), right_colon(a, I) <= I) for I in modular))
    simple = [right_factor(a, I)[0] for I in maximal]

    def irreducible_iff(m):
        iso = any(moduloid_isomorphism(m, s) is not None for s in simple)
        return is_irreducible(m) == iso

    _add(rep, "irreducible_iff_simple_factor", ((lab, irreducible_iff(m)) for lab, m in mods if lab != "A"))


def invariant_suite(entry: Entry, bounds: Bounds | None = None) -> CheckReport:
    bounds = bounds or Bounds()
    rep = CheckReport(entry.name)
    a = entry.anneid
    structure_checks(a, rep, bounds, entry.graded)
    radical_checks(a, rep, bounds)
    regular_checks(a, rep, bounds)
    rep.data.pop("radical", None)
    return rep
