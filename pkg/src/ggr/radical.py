"""Quasi-regularity and the Jacobson radical of gamma anneids, by several routes.

Routes computed for every anneid:

* ``modular``: intersection of the maximal right ideals that are modular
  (the empty intersection is all of A);
* ``qr``: elements x with every product x alpha a right quasi-regular;
* ``local``: elements x whose products landing in A(e) lie in the radical of
  the local ring A(e), for every alpha-idempotent grade e;
* ``large`` and ``linearized``: the radical of the linearized gamma ring,
  intersected with A, computed by two different one-grade criteria.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .anneid import (
    LINEARIZE_BOUND,
    GammaAnneid,
    idempotent_pairs,
    is_alpha_idempotent,
    is_regular,
    linearize_anneid,
    local_ring_at,
    opposite,
    restrict,
)
from .gammaring import GammaRing
from .grading import GradeId, linearize
from .ideals import (
    DEFAULT_CARRIER_BOUND,
    DEFAULT_LATTICE_BOUND,
    IndexSet,
    enumerate_right_ideals,
    generated_ideal,
    is_ideal,
    maximal_members,
    modularity_mask,
    modularity_witnesses,
    to_mask,
)
from .report import CheckReport, InvariantViolation, ResourceError, jsonable


@dataclass
class Bounds:
    max_size: int = DEFAULT_CARRIER_BOUND
    max_count: int = DEFAULT_LATTICE_BOUND
    linearize: int = LINEARIZE_BOUND


# quasi-regularity --------------------------------------------------------------


def left_identity_table(a: GammaAnneid, ideals: Iterable[IndexSet]) -> np.ndarray:
    """(|A|, |G|) array: position in ``ideals`` of the first proper ideal with
    (z, alpha) as a left identity, or -1."""
    nA = len(a.A)
    out = -np.ones((nA, len(a.G)), dtype=np.int64)
    for k, I in enumerate(ideals):
        if len(I) == nA:
            continue
        hit = modularity_mask(a, I) & (out < 0)
        out[hit] = k
    return out


def nilpotent_mask(a: GammaAnneid) -> np.ndarray:
    """(|A|, |G|): z (alpha z)^k = 0 for some k."""
    nA, nG = len(a.A), len(a.G)
    out = np.zeros((nA, nG), dtype=bool)
    for alpha in range(nG):
        step = a.triple[:, alpha, :]
        for z in range(nA):
            seen, w = set(), z
            while w != 0 and w not in seen:
                seen.add(w)
                w = int(step[w, z])
            out[z, alpha] = w == 0
    return out


def rqr_by_generated_ideal(a: GammaAnneid, z: int, alpha: int) -> bool:
    """z is alpha-rqr iff the least ideal modulo which it is an alpha-left identity is A."""
    A = a.A
    gens = []
    for x in range(len(A)):
        y = int(a.triple[z, alpha, x])
        if A.addible[x, y]:
            gens.append(int(A.diff[x, y]))
        else:
            gens.extend((x, y))
    return len(generated_ideal(a, gens)) == len(A)


@dataclass
class QuasiRegularityCertificate:
    z: int
    verdicts: dict[int, bool]
    ideals: dict[int, IndexSet] = field(default_factory=dict)  # alpha -> proper ideal with z as alpha-left identity

    @property
    def rqr(self) -> bool:
        return all(self.verdicts.values())


def is_alpha_rqr(a: GammaAnneid, z: int, alpha: int, ideals=None) -> tuple[bool, QuasiRegularityCertificate]:
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    cert = rqr_certificate(a, z, ideals, alphas=[alpha])
    return cert.verdicts[alpha], cert


def rqr_certificate(a: GammaAnneid, z: int, ideals=None, alphas=None) -> QuasiRegularityCertificate:
    ideals = enumerate_right_ideals(a) if ideals is None else ideals
    alphas = range(1, len(a.G)) if alphas is None else alphas
    cert = QuasiRegularityCertificate(z, {})
    for alpha in alphas:
        cert.verdicts[alpha] = True
        for I in ideals:
            if len(I) < len(a.A) and modularity_mask(a, I)[z, alpha]:
                cert.verdicts[alpha] = False
                cert.ideals[alpha] = I
                break
    return cert


def rqr_table(a: GammaAnneid, ideals) -> np.ndarray:
    """(|A|, |G|) alpha-rqr verdicts; column 0 is vacuously True."""
    table = left_identity_table(a, ideals) < 0
    nil = nilpotent_mask(a)
    if not table[nil].all():
        raise InvariantViolation("a nilpotent element is a left identity modulo a proper ideal")
    return table


# one-grade rings ------------------------------------------------------------------


def ring_rqr_by_equation(ring: GammaRing) -> np.ndarray:
    """(|R|, |Gamma|): some t solves z + t - z alpha t = 0."""
    R = ring.R
    n = len(R)
    t = np.arange(n)[None, None, :]
    lhs = R.add_ids(R.add_ids(np.arange(n)[:, None, None], t), R.neg_ids[ring.triple])
    return (lhs == 0).any(axis=2)


def ring_rqr_by_kernel(ring: GammaRing) -> np.ndarray:
    """(|R|, |Gamma|): no nonzero t with z alpha t = t."""
    n = len(ring.R)
    fixed = ring.triple[:, :, 1:] == np.arange(1, n)[None, None, :]
    return ~fixed.any(axis=2)


def _radical_from_rqr(triple: np.ndarray, rqr: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Which x in rows have every product x alpha a right quasi-regular."""
    elem_rqr = rqr[:, 1:].all(axis=1) if rqr.shape[1] > 1 else np.ones(rqr.shape[0], dtype=bool)
    return elem_rqr[triple[rows]].all(axis=(1, 2))


def ring_radical(ring: GammaRing, method: str = "kernel", rows=None) -> IndexSet:
    """Jacobson radical of a gamma ring viewed as a one-grade anneid."""
    rqr = ring_rqr_by_kernel(ring) if method == "kernel" else ring_rqr_by_equation(ring)
    rows = np.arange(len(ring.R)) if rows is None else np.asarray(rows)
    keep = _radical_from_rqr(ring.triple, rqr, rows)
    return frozenset(int(r) for r in rows[keep])


def large_jacobson_radical(a: GammaAnneid, bound: int = LINEARIZE_BOUND) -> tuple[IndexSet, IndexSet]:
    """(J(R) n A by the equation criterion on A's rows, J(R) n A by the kernel criterion on all of R)."""
    lin = linearize_anneid(a, bound)
    R = lin.ring.R
    emb = np.array([R.id(x) for x in linearize(a.A).embedding], dtype=np.int64)
    pos = {int(r): i for i, r in enumerate(emb)}
    by_equation = ring_radical(lin.ring, "equation", rows=emb)
    full = ring_radical(lin.ring, "kernel")
    large = frozenset(pos[r] for r in by_equation)
    linearized = frozenset(pos[r] for r in full if r in pos)
    return large, linearized


# the radical by routes ------------------------------------------------------------


def modular_radical(a: GammaAnneid, ideals) -> IndexSet:
    whole = frozenset(range(len(a.A)))
    out = whole
    for I in maximal_members(ideals, whole):
        if modularity_mask(a, I).any():
            out &= I
    return out


def qr_radical(a: GammaAnneid, ideals) -> IndexSet:
    rqr = rqr_table(a, ideals)
    keep = _radical_from_rqr(a.triple, rqr, np.arange(len(a.A)))
    return frozenset(int(x) for x in np.flatnonzero(keep))


def local_radical_map(a: GammaAnneid, bounds: Bounds | None = None) -> dict[tuple[GradeId, int], IndexSet]:
    """(e, alpha) -> radical of the local ring A(e), as indices of A."""
    bounds = bounds or Bounds()
    out = {}
    for e, alpha in idempotent_pairs(a):
        loc = local_ring_at(a, e, alpha)
        ideals = enumerate_right_ideals(loc, bounds.max_size, bounds.max_count)
        J = modular_radical(loc, ideals)
        out[(e, alpha)] = frozenset(a.A.index[loc.A.labels[x]] for x in J)
    return out


def local_radical(a: GammaAnneid, local: dict | None = None) -> IndexSet:
    local = local_radical_map(a) if local is None else local
    keep = np.ones(len(a.A), dtype=bool)
    for (e, _), J in local.items():
        inside = np.zeros(len(a.A), dtype=bool)
        inside[a.A.members(e)] = True
        ok = to_mask(len(a.A), J)
        prods = a.triple.reshape(len(a.A), -1)
        keep &= (~inside[prods] | ok[prods]).all(axis=1)
    return frozenset(int(x) for x in np.flatnonzero(keep))


@dataclass
class RadicalReport:
    name: str
    labels: tuple
    right_regular: bool
    regular: bool
    J_modular: IndexSet
    J_qr: IndexSet
    J_local: IndexSet
    J_left: IndexSet
    J_large: IndexSet | None
    J_linearized: IndexSet | None
    agreements: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def radical(self) -> IndexSet:
        return self.J_qr

    def disagreements(self) -> list[str]:
        return [k for k, v in self.agreements.items() if v["applicable"] and not v["agree"]]

    def labelled(self, s: IndexSet | None):
        if s is None:
            return None
        return [jsonable(self.labels[x]) for x in sorted(s)]

    def to_json(self) -> dict:
        return {
            "anneid": self.name,
            "right_regular": self.right_regular,
            "regular": self.regular,
            "J_modular": self.labelled(self.J_modular),
            "J_qr": self.labelled(self.J_qr),
            "J_local": self.labelled(self.J_local),
            "J_left": self.labelled(self.J_left),
            "J_large": self.labelled(self.J_large),
            "J_linearized": self.labelled(self.J_linearized),
            "agreements": {k: jsonable(v) for k, v in sorted(self.agreements.items())},
            "notes": list(self.notes),
        }


def _compare(applicable: bool, left, right, relation: str = "equal") -> dict:
    if left is None or right is None:
        return {"applicable": False, "agree": None, "witness": None}
    agree = left <= right if relation == "subset" else left == right
    witness = None if agree else {"only_left": sorted(left - right), "only_right": sorted(right - left)}
    return {"applicable": applicable, "agree": bool(agree), "witness": witness}


def jacobson_radical(a: GammaAnneid, bounds: Bounds | None = None) -> RadicalReport:
    bounds = bounds or Bounds()
    ideals = enumerate_right_ideals(a, bounds.max_size, bounds.max_count)
    right_regular = is_regular(a, "right")
    regular = right_regular and is_regular(a, "left")
    J_mod = modular_radical(a, ideals)
    J_qr = qr_radical(a, ideals)
    J_loc = local_radical(a, local_radical_map(a, bounds))
    op = opposite(a)
    J_left = modular_radical(op, enumerate_right_ideals(op, bounds.max_size, bounds.max_count))
    notes = []
    try:
        J_large, J_lin = large_jacobson_radical(a, bounds.linearize)
    except ResourceError as exc:
        J_large = J_lin = None
        notes.append(f"large radical skipped: {exc}")
    if not right_regular:
        notes.append("not right regular: the modular route is not theorem-backed")
    rep = RadicalReport(a.name, a.A.labels, right_regular, regular, J_mod, J_qr, J_loc, J_left, J_large, J_lin,
                        notes=notes)
    rep.agreements["modular=qr"] = _compare(right_regular, J_mod, J_qr)
    rep.agreements["modular=local"] = _compare(regular, J_mod, J_loc)
    rep.agreements["right=left"] = _compare(regular, J_mod, J_left)
    rep.agreements["large=linearized"] = _compare(True, J_large, J_lin)
    rep.agreements["large<=modular"] = _compare(True, J_large, J_mod, "subset")
    qr_two_sided = is_ideal(a, J_qr, "two-sided")
    rep.agreements["qr_is_two_sided_ideal"] = {"applicable": regular, "agree": qr_two_sided, "witness": None}
    return rep


# theorem checks -------------------------------------------------------------------


def check_regular_rqr_criterion(a: GammaAnneid, bounds: Bounds | None = None) -> CheckReport:
    """Definitional alpha-rqr verdicts against the idempotent-grade dichotomy."""
    bounds = bounds or Bounds()
    rep = CheckReport("rqr_criterion")
    ideals = enumerate_right_ideals(a, bounds.max_size, bounds.max_count)
    table = rqr_table(a, ideals)
    local_tables = {}
    w = None
    for alpha in range(1, len(a.G)):
        for z in range(len(a.A)):
            e = int(a.A.grade[z])
            if e == 0 or not is_alpha_idempotent(a, e, alpha):
                predicted = True
            else:
                if (e, alpha) not in local_tables:
                    loc = local_ring_at(a, e, alpha)
                    loc_ideals = enumerate_right_ideals(loc, bounds.max_size, bounds.max_count)
                    local_tables[(e, alpha)] = (loc, rqr_table(loc, loc_ideals))
                loc, lt = local_tables[(e, alpha)]
                lz = loc.A.index[a.A.labels[z]]
                la = loc.G.index[a.G.labels[alpha]]
                predicted = bool(lt[lz, la])
                # one-grade sanity: some t in A(e) solves z + t - z alpha t = 0
                T = loc.triple[lz, la]
                eq = any(loc.A.sums[loc.A.sums[lz, t], loc.A.neg[T[t]]] == 0 for t in range(len(loc.A)))
                if eq != predicted:
                    raise InvariantViolation(f"local quasi-regularity equation disagrees at {a.A.labels[z]}")
            if predicted != bool(table[z, alpha]):
                w = {"z": a.A.labels[z], "alpha": a.G.labels[alpha], "definitional": bool(table[z, alpha])}
                break
        if w:
            break
    rep.add("dichotomy", w is None, witness=w)
    return rep


def correspondence_at_idempotent(a: GammaAnneid, e: GradeId, alpha: int,
                                 bounds: Bounds | None = None) -> CheckReport:
    """I -> I n A(e) and S -> S^ between maximal modular ideals of grade e and of A(e)."""
    bounds = bounds or Bounds()
    rep = CheckReport("correspondence")
    whole = frozenset(range(len(a.A)))
    ideals = enumerate_right_ideals(a, bounds.max_size, bounds.max_count)
    big = []
    for I in maximal_members(ideals, whole):
        ws = modularity_witnesses(a, I)
        if any(w.alpha == alpha and a.A.grade[w.u] == e for w in ws):
            big.append(I)
    loc = local_ring_at(a, e, alpha)
    to_big = np.array([a.A.index[lab] for lab in loc.A.labels])
    loc_whole = frozenset(range(len(loc.A)))
    loc_ideals = enumerate_right_ideals(loc, bounds.max_size, bounds.max_count)
    small = [S for S in maximal_members(loc_ideals, loc_whole) if modularity_mask(loc, S).any()]
    small_big = [frozenset(int(to_big[s]) for s in S) for S in small]
    members = frozenset(a.A.members(e))

    def hat(S_big: frozenset) -> frozenset:
        inS = to_mask(len(a.A), S_big)
        inside = to_mask(len(a.A), members)
        prods = a.triple.reshape(len(a.A), -1)
        return frozenset(int(x) for x in np.flatnonzero((~inside[prods] | inS[prods]).all(axis=1)))

    restricted = [I & members for I in big]
    hats = [hat(S) for S in small_big]
    rep.add("restriction_lands_in_local", all(r in small_big for r in restricted),
            witness=[sorted(r) for r in restricted if r not in small_big])
    rep.add("hat_lands_in_grade_e", all(h in big for h in hats),
            witness=[sorted(h) for h in hats if h not in big])
    rep.add("hat_restricts_back", all(h & members == S for h, S in zip(hats, small_big)))
    rep.add("bijective", len(big) == len(small_big) and sorted(map(sorted, restricted)) == sorted(map(sorted, small_big)))
    rep.data["pairs"] = len(big)
    return rep


def check_local_radical(a: GammaAnneid, e: GradeId, alpha: int, J: IndexSet | None = None,
                        bounds: Bounds | None = None) -> bool:
    """J(A(e)) = J(A) n A(e)."""
    bounds = bounds or Bounds()
    if J is None:
        J = jacobson_radical(a, bounds).J_modular
    loc = local_ring_at(a, e, alpha)
    Jloc = modular_radical(loc, enumerate_right_ideals(loc, bounds.max_size, bounds.max_count))
    Jloc = frozenset(a.A.index[loc.A.labels[x]] for x in Jloc)
    return Jloc == (J & frozenset(a.A.members(e)))


def ideal_radical(a: GammaAnneid, I: Iterable[int], bounds: Bounds | None = None) -> IndexSet:
    """J(I) computed inside I viewed as an anneid on its own."""
    bounds = bounds or Bounds()
    I = sorted(set(I) | {0})
    sub = restrict(a, I, name=f"{a.name}|I")
    ideals = enumerate_right_ideals(sub, bounds.max_size, bounds.max_count)
    J = qr_radical(sub, ideals)
    return frozenset(I[x] for x in J)


def check_ideal_radical(a: GammaAnneid, I: Iterable[int], J: IndexSet | None = None,
                        bounds: Bounds | None = None) -> CheckReport:
    bounds = bounds or Bounds()
    rep = CheckReport("ideal_radical")
    I = frozenset(I) | {0}
    if J is None:
        J = jacobson_radical(a, bounds).J_qr
    JI = ideal_radical(a, I, bounds)
    inJ = to_mask(len(a.A), J)
    idx = sorted(I)
    expected = frozenset(x for x in idx if inJ[a.triple[np.ix_([x], np.arange(len(a.G)), idx)]].all())
    rep.add("right_ideal_formula", JI == expected, witness={"intrinsic": sorted(JI), "formula": sorted(expected)})
    if is_ideal(a, I, "two-sided"):
        rep.add("two_sided_intersection", JI == I & J, witness={"intrinsic": sorted(JI), "meet": sorted(I & J)})
    else:
        rep.skip("two_sided_intersection")
    return rep


def check_remark_facts(a: GammaAnneid, ideals=None) -> CheckReport:
    """Grades of left identities modulo proper ideals are alpha-idempotent; u in I forces I = A."""
    ideals = enumerate_right_ideals(a) if ideals is None else ideals
    rep = CheckReport("remark_facts")
    nA = len(a.A)
    w_idem, w_inside = None, None
    for I in ideals:
        mask = modularity_mask(a, I)
        for u, alpha in np.argwhere(mask):
            if len(I) == nA:
                continue
            if u in I and w_inside is None:
                w_inside = {"ideal": sorted(I), "u": a.A.labels[u]}
            e = int(a.A.grade[u])
            if alpha and (e == 0 or not is_alpha_idempotent(a, e, int(alpha))) and w_idem is None:
                w_idem = {"ideal": sorted(I), "u": a.A.labels[u], "alpha": a.G.labels[alpha]}
    rep.add("grade_is_alpha_idempotent", w_idem is None, witness=w_idem)
    rep.add("identity_in_ideal_forces_whole", w_inside is None, witness=w_inside)
    return rep
