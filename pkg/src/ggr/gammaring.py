"""Finite gamma rings, graded gamma rings and builders for the standard examples.

Ternary products are dense integer tables indexed by element ids of the
underlying groups: ``triple[x, a, y]`` is the id of x a y in R and
``cotriple[a, x, b]`` the id of a x b in Gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .finabel import FiniteAbelianGroup, product_group
from .grading import ZERO_GRADE, Graduation, GradeId, Homogroupoid
from .report import CheckReport, StructureError


@dataclass(frozen=True, eq=False)
class GammaRing:
    R: FiniteAbelianGroup
    Gamma: FiniteAbelianGroup
    triple: np.ndarray
    cotriple: np.ndarray | None = None

    def __post_init__(self):
        nR, nG = len(self.R), len(self.Gamma)
        t = np.asarray(self.triple, dtype=np.int64)
        if t.shape != (nR, nG, nR):
            raise StructureError(f"triple table has shape {t.shape}, expected {(nR, nG, nR)}")
        object.__setattr__(self, "triple", t)
        if self.cotriple is not None:
            c = np.asarray(self.cotriple, dtype=np.int64)
            if c.shape != (nG, nR, nG):
                raise StructureError(f"cotriple table has shape {c.shape}, expected {(nG, nR, nG)}")
            object.__setattr__(self, "cotriple", c)

    @property
    def nobusawa(self) -> bool:
        return self.cotriple is not None

    @classmethod
    def zero(cls, R: FiniteAbelianGroup, Gamma: FiniteAbelianGroup, nobusawa: bool = False) -> "GammaRing":
        t = np.zeros((len(R), len(Gamma), len(R)), dtype=np.int64)
        c = np.zeros((len(Gamma), len(R), len(Gamma)), dtype=np.int64) if nobusawa else None
        return cls(R, Gamma, t, c)

    def product(self, x, a, y):
        return self.R.element(int(self.triple[self.R.id(x), self.Gamma.id(a), self.R.id(y)]))


def _first(mask: np.ndarray, offset: tuple = ()) -> tuple | None:
    bad = np.argwhere(~mask)
    if len(bad) == 0:
        return None
    return offset + tuple(int(v) for v in bad[0])


def _additivity(add_src, add_dst, table: np.ndarray, axis: int):
    """First (x, y, rest...) where table is not additive in ``axis``."""
    n = table.shape[axis]
    moved = np.moveaxis(table, axis, 0)
    for x in range(n):
        lhs = moved[add_src[x]]  # (n, ...) : table at x+y
        rhs = add_dst(moved[x][None], moved)
        w = _first(lhs == rhs, (x,))
        if w is not None:
            return w
    return None


def _labelled(groups, ids) -> tuple:
    return tuple(g.element(i) for g, i in zip(groups, ids))


def verify_gamma_ring(g: GammaRing) -> CheckReport:
    rep = CheckReport("gamma_ring")
    R, Gm, T = g.R, g.Gamma, g.triple
    nR = len(R)
    rep.add("i_closed", bool(((T >= 0) & (T < nR)).all()))
    for axis, name, grp in ((0, "left", R), (1, "middle", Gm), (2, "right", R)):
        w = _additivity(grp.add_table, R.add_ids, T, axis)
        # witness order: (x, y, remaining slots) meaning slot value x+y vs x,y
        rep.add(f"ii_{name}_additive", w is None, witness=w and _add_witness(g, axis, w))
    w = None
    for x in range(nR):
        lhs = T[T[x][:, :, None, None], np.arange(len(Gm))[None, None, :, None], np.arange(nR)[None, None, None, :]]
        rhs = T[x][np.arange(len(Gm))[:, None, None, None], T[None, :, :, :]]
        w = _first(lhs == rhs, (x,))
        if w is not None:
            break
    rep.add("iii_associative", w is None, witness=w and _labelled((R, Gm, R, Gm, R), w))
    if not g.nobusawa:
        for cid in ("i'_closed", "cotriple_additive", "ii'_associative", "iii'_faithful"):
            rep.skip(cid)
        return rep
    C = g.cotriple
    nG = len(Gm)
    rep.add("i'_closed", bool(((C >= 0) & (C < nG)).all()))
    w = None
    for axis, grp in ((0, Gm), (1, R), (2, Gm)):
        w = _additivity(grp.add_table, Gm.add_ids, C, axis)
        if w is not None:
            w = ("slot", axis) + w
            break
    rep.add("cotriple_additive", w is None, witness=w)
    # (x a y) b z == x (a y b) z == x a (y b z)
    w = None
    for x in range(nR):
        first = T[T[x][:, :, None, None], np.arange(nG)[None, None, :, None], np.arange(nR)[None, None, None, :]]
        middle = T[x][C[:, :, :, None], np.arange(nR)[None, None, None, :]]
        if not (first == middle).all():
            w = _first(first == middle, (x,))
            break
    rep.add("ii'_associative", w is None, witness=w and _labelled((R, Gm, R, Gm, R), w))
    zero_cols = [a for a in range(nG) if not T[:, a, :].any()]
    bad = [a for a in zero_cols if a != 0]
    rep.add("iii'_faithful", not bad, witness=bad and (Gm.element(bad[0]),))
    return rep


def _add_witness(g: GammaRing, axis: int, w: tuple):
    groups = (g.R, g.Gamma, g.R)
    x, y = w[0], w[1]
    rest = list(w[2:])
    grp = groups[axis]
    others = [grp_ for k, grp_ in enumerate(groups) if k != axis]
    return {
        "slot": axis,
        "x": grp.element(x),
        "y": grp.element(y),
        "others": [o.element(i) for o, i in zip(others, rest)],
    }


# graded gamma rings --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedGammaRing:
    ring: GammaRing
    gradR: Graduation
    gradGamma: Graduation
    name: str = ""

    @cached_property
    def grade_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Grade of every element id (-1 for nonhomogeneous)."""
        out = []
        for grad in (self.gradR, self.gradGamma):
            arr = -np.ones(len(grad.group), dtype=np.int64)
            for d, comp in grad.components.items():
                for x in comp:
                    arr[grad.group.id(x)] = d
            arr[0] = ZERO_GRADE
            out.append(arr)
        return out[0], out[1]

    def component_ids(self, which: str, d: GradeId) -> np.ndarray:
        grad = self.gradR if which == "R" else self.gradGamma
        return np.array(sorted(grad.group.id(x) for x in grad.components[d]), dtype=np.int64)


def _component_table(table, ids1, ids2, ids3, grades_out, zero_grade=ZERO_GRADE):
    """Grade product table plus the first violating (grades, witness) if any."""
    k1, k2, k3 = len(ids1), len(ids2), len(ids3)
    out = np.zeros((k1, k2, k3), dtype=np.int64)
    for i in range(k1):
        for j in range(k2):
            for k in range(k3):
                prods = table[np.ix_(ids1[i], ids2[j], ids3[k])]
                nz = prods[prods != 0]
                if nz.size == 0:
                    out[i, j, k] = zero_grade
                    continue
                grades = grades_out[nz]
                if (grades < 0).any() or (grades != grades[0]).any():
                    pos = np.argwhere((prods != 0) & ((grades_out[prods] != grades[0]) | (grades_out[prods] < 0)))
                    first = np.argwhere(prods != 0)[0]
                    return out, ((i, j, k), tuple(first), tuple(pos[0]) if len(pos) else tuple(first))
                out[i, j, k] = grades[0]
    return out, None


def grade_tables(g: GradedGammaRing):
    """(table, cotable, violation, coviolation) for conditions (1) and (2)."""
    gR, gG = g.grade_arrays
    idsR = [g.component_ids("R", d) for d in range(len(g.gradR.components))]
    idsG = [g.component_ids("G", d) for d in range(len(g.gradGamma.components))]
    table, viol = _component_table(g.ring.triple, idsR, idsG, idsR, gR)
    cotable, coviol = None, None
    if g.ring.nobusawa:
        cotable, coviol = _component_table(g.ring.cotriple, idsG, idsR, idsG, gG)
    return table, cotable, viol, coviol


def _viol_witness(g: GradedGammaRing, viol, ids, groups):
    (i, j, k), p1, p2 = viol
    elems = []
    for p in (p1, p2):
        elems.append(tuple(grp.element(int(ids[s][c][v])) for s, (grp, c, v) in enumerate(zip(groups, (i, j, k), p))))
    return {"grades": (i, j, k), "product_inputs": elems}


def verify_graded(g: GradedGammaRing) -> CheckReport:
    rep = CheckReport("graded")
    table, cotable, viol, coviol = grade_tables(g)
    idsR = [g.component_ids("R", d) for d in range(len(g.gradR.components))]
    idsG = [g.component_ids("G", d) for d in range(len(g.gradGamma.components))]
    R, Gm = g.ring.R, g.ring.Gamma
    rep.add("1_component_products", viol is None,
            witness=viol and _viol_witness(g, viol, (idsR, idsG, idsR), (R, Gm, R)))
    if g.ring.nobusawa:
        rep.add("2_component_coproducts", coviol is None,
                witness=coviol and _viol_witness(g, coviol, (idsG, idsR, idsG), (Gm, R, Gm)))
    else:
        rep.skip("2_component_coproducts")
    if rep.passed:
        rep.data["grade_table"] = table
        if cotable is not None:
            rep.data["grade_cotable"] = cotable
    return rep


def grade_ternary(g: GradedGammaRing, xi: GradeId, d: GradeId, eta: GradeId) -> GradeId:
    table, _, viol, _ = grade_tables(g)
    if viol is not None:
        raise StructureError("condition (1) fails; grade ternary operation undefined")
    return int(table[xi, d, eta])


def lemma_consistency_check(g: GradedGammaRing) -> CheckReport:
    """AGA in A and grade of nonzero products determined by input grades."""
    rep = CheckReport("lemma_consistency")
    gR, gG = g.grade_arrays
    R, Gm = g.ring.R, g.ring.Gamma
    for tag, T, g1, g2, gout, groups in (
        ("", g.ring.triple, gR, gG, gR, (R, Gm, R)),
        ("'", g.ring.cotriple, gG, gR, gG, (Gm, R, Gm)),
    ):
        if T is None:
            rep.skip(f"i{tag}_closed")
            rep.skip(f"ii{tag}_grade_determined")
            continue
        a1 = np.nonzero(g1 >= 0)[0]
        a2 = np.nonzero(g2 >= 0)[0]
        sub = T[np.ix_(a1, a2, a1)]
        out_grades = gout[sub]
        bad = np.argwhere(out_grades < 0)
        w = None
        if len(bad):
            i, j, k = bad[0]
            w = _labelled(groups, (a1[i], a2[j], a1[k]))
        rep.add(f"i{tag}_closed", w is None, witness=w)
        seen: dict[tuple, tuple] = {}
        w = None
        nz = np.argwhere((sub != 0) & (out_grades >= 0))
        for i, j, k in nz:
            key = (int(g1[a1[i]]), int(g2[a2[j]]), int(g1[a1[k]]))
            val = int(out_grades[i, j, k])
            inputs = _labelled(groups, (a1[i], a2[j], a1[k]))
            if key in seen and seen[key][0] != val:
                w = {"inputs": [seen[key][1], inputs], "grades": [seen[key][0], val]}
                break
            seen.setdefault(key, (val, inputs))
        rep.add(f"ii{tag}_grade_determined", w is None, witness=w)
    return rep


# rings and builders -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """Associative ring (identity optional) given by a multiplication table on ids."""

    group: FiniteAbelianGroup
    mul: np.ndarray

    @classmethod
    def from_function(cls, group: FiniteAbelianGroup, f: Callable) -> "FiniteRing":
        n = len(group)
        mul = np.array(
            [[group.id(group.normalize(f(x, y))) for y in group.elements] for x in group.elements],
            dtype=np.int64,
        ).reshape(n, n)
        return cls(group, mul)

    @classmethod
    def zn(cls, n: int) -> "FiniteRing":
        G = FiniteAbelianGroup.cyclic(n)
        return cls.from_function(G, lambda x, y: ((x[0] * y[0]) % n,) if G.rank else ())

    @classmethod
    def zero_ring(cls, group: FiniteAbelianGroup) -> "FiniteRing":
        return cls(group, np.zeros((len(group), len(group)), dtype=np.int64))


def ring_violation(group: FiniteAbelianGroup, mul: np.ndarray):
    add = group.add_table
    n = len(group)
    idx = np.arange(n)
    # (x+y)z = xz + yz and x(y+z) = xy + xz
    left = mul[add[:, :, None], idx[None, None, :]] == group.add_ids(mul[:, None, :], mul[None, :, :])
    if not left.all():
        return ("left_distributive",) + tuple(group.element(int(i)) for i in np.argwhere(~left)[0])
    right = mul[idx[:, None, None], add[None, :, :]] == group.add_ids(mul[:, :, None], mul[:, None, :])
    if not right.all():
        return ("right_distributive",) + tuple(group.element(int(i)) for i in np.argwhere(~right)[0])
    assoc = mul[mul[:, :, None], idx[None, None, :]] == mul[idx[:, None, None], mul[None, :, :]]
    if not assoc.all():
        return ("associative",) + tuple(group.element(int(i)) for i in np.argwhere(~assoc)[0])
    return None


def _triple_from_ring(mul: np.ndarray, embed: np.ndarray) -> np.ndarray:
    """x g y = (x . embed(g)) . y"""
    xg = mul[:, embed]  # (n, nG)
    return mul[xg[:, :, None], np.arange(mul.shape[0])[None, None, :]]


def _cotriple_from_ring(mul: np.ndarray, embed: np.ndarray, project: np.ndarray) -> np.ndarray:
    """a x b = project(embed(a) . x . embed(b)); project maps R ids to Gamma ids (-1 outside)."""
    ax = mul[embed, :]  # (nG, n)
    axb = mul[ax[:, :, None], embed[None, None, :]]
    return project[axb]


@dataclass(frozen=True, eq=False)
class MoritaContext:
    """Rings R, S with bimodules V (R,S) and W (S,R) and pairings V x W -> R, W x V -> S.

    Each action is an id table: rv[r, v] in V, vs[v, s] in V, sw[s, w] in W,
    wr[w, r] in W, vw[v, w] in R, wv[w, v] in S.
    """

    R: FiniteRing
    S: FiniteRing
    V: FiniteAbelianGroup
    W: FiniteAbelianGroup
    rv: np.ndarray
    vs: np.ndarray
    sw: np.ndarray
    wr: np.ndarray
    vw: np.ndarray
    wv: np.ndarray

    @classmethod
    def zero_bimodules(cls, R: FiniteRing, S: FiniteRing) -> "MoritaContext":
        V = W = FiniteAbelianGroup(())
        z = lambda a, b: np.zeros((a, b), dtype=np.int64)
        nR, nS = len(R.group), len(S.group)
        return cls(R, S, V, W, z(nR, 1), z(1, nS), z(nS, 1), z(1, nR), z(1, 1), z(1, 1))


def build_generalized_matrix_ring(M: MoritaContext, name: str = "generalized_matrix") -> GradedGammaRing:
    """R(M) = [[R, V], [W, S]] with Gamma = diag(R, 0) (+) diag(0, S)."""
    blocks = (M.R.group, M.V, M.W, M.S.group)
    big = product_group(*blocks)
    n = len(big)
    offs = np.cumsum([0] + [b.rank for b in blocks])
    dig = big.digits
    part = [blocks[k].ids_from_digits(dig[:, offs[k]:offs[k + 1]]) if blocks[k].rank else np.zeros(n, dtype=np.int64)
            for k in range(4)]
    r, v, w, s = part
    R, V, W, S = blocks

    def cross(tab, a, b):
        return tab[a[:, None], b[None, :]]

    def add(grp, x, y):
        return grp.add_ids(x, y) if grp.rank else np.zeros_like(x)

    # (r,v,w,s)(r',v',w',s') = (rr'+vw', rv'+vs', wr'+sw', wv'+ss')
    pr = add(R, cross(M.R.mul, r, r), cross(M.vw, v, w))
    pv = add(V, cross(M.rv, r, v), cross(M.vs, v, s))
    pw = add(W, cross(M.wr, w, r), cross(M.sw, s, w))
    ps = add(S, cross(M.wv, w, v), cross(M.S.mul, s, s))
    digits = np.zeros((n, n, big.rank), dtype=np.int64)
    for k, comp in enumerate((pr, pv, pw, ps)):
        if blocks[k].rank:
            digits[:, :, offs[k]:offs[k + 1]] = blocks[k].digits[comp]
    mul = big.ids_from_digits(digits) if big.rank else np.zeros((n, n), dtype=np.int64)
    bad = ring_violation(big, mul)
    if bad is not None:
        raise StructureError(f"Morita context equations fail: {bad}")
    Gam = product_group(R, S)
    gdig = Gam.digits
    embed_digits = np.zeros((len(Gam), big.rank), dtype=np.int64)
    embed_digits[:, offs[0]:offs[1]] = gdig[:, : R.rank]
    embed_digits[:, offs[3]:offs[4]] = gdig[:, R.rank:]
    embed = big.ids_from_digits(embed_digits) if big.rank else np.zeros(len(Gam), dtype=np.int64)
    ring = GammaRing(big, Gam, _triple_from_ring(mul, embed))
    parts, names = [], []
    for k, label in enumerate(("R1", "R2", "R3", "R4")):
        sel = [x for x in big.elements if all(x[i] == 0 for i in range(big.rank) if not offs[k] <= i < offs[k + 1])]
        parts.append(sel)
        names.append(label)
    gparts = [
        [x for x in Gam.elements if not any(x[R.rank:])],
        [x for x in Gam.elements if not any(x[: R.rank])],
    ]
    gradR = Graduation.from_parts(big, parts, names)
    gradG = Graduation.from_parts(Gam, gparts, ["G1", "G4"])
    return GradedGammaRing(ring, gradR, gradG, name)


def build_semidirect_sum(
    S: FiniteRing,
    I: FiniteAbelianGroup,
    si: np.ndarray,
    is_: np.ndarray,
    ii: np.ndarray,
    name: str = "semidirect",
) -> GradedGammaRing:
    """R = S (+) I with I an ideal; Gamma = S acting through R's product."""
    big = product_group(S.group, I)
    n = len(big)
    ks = S.group.rank
    dig = big.digits
    s = S.group.ids_from_digits(dig[:, :ks]) if ks else np.zeros(n, dtype=np.int64)
    i = I.ids_from_digits(dig[:, ks:]) if I.rank else np.zeros(n, dtype=np.int64)
    ps = S.mul[s[:, None], s[None, :]]
    if I.rank:
        pi = I.add_ids(I.add_ids(si[s[:, None], i[None, :]], is_[i[:, None], s[None, :]]), ii[i[:, None], i[None, :]])
    else:
        pi = np.zeros((n, n), dtype=np.int64)
    digits = np.zeros((n, n, big.rank), dtype=np.int64)
    if ks:
        digits[:, :, :ks] = S.group.digits[ps]
    if I.rank:
        digits[:, :, ks:] = I.digits[pi]
    mul = big.ids_from_digits(digits) if big.rank else np.zeros((n, n), dtype=np.int64)
    bad = ring_violation(big, mul)
    if bad is not None:
        raise StructureError(f"semidirect sum is not an associative ring: {bad}")
    embed_digits = np.zeros((len(S.group), big.rank), dtype=np.int64)
    embed_digits[:, :ks] = S.group.digits
    embed = big.ids_from_digits(embed_digits) if big.rank else np.zeros(1, dtype=np.int64)
    ring = GammaRing(big, S.group, _triple_from_ring(mul, embed))
    parts = [
        [x for x in big.elements if not any(x[ks:])],
        [x for x in big.elements if not any(x[:ks])],
    ]
    gradR = Graduation.from_parts(big, parts, ["S", "I"])
    gradG = Graduation.trivial(S.group)
    return GradedGammaRing(ring, gradR, gradG, name)


def build_dorroh_extension(I: FiniteRing, n: int, name: str = "dorroh") -> GradedGammaRing:
    """Z_n (+) I with (k, a)(l, b) = (kl, kb + la + ab) as a semidirect sum."""
    S = FiniteRing.zn(n)
    G = I.group
    ng = len(G)
    def mult(k, b):
        out = 0
        for _ in range(k):
            out = int(G.add_table[out, b])
        return out
    si = np.array([[mult(k, b) for b in range(ng)] for k in range(n)], dtype=np.int64)
    is_ = si.T.copy()
    return build_semidirect_sum(S, G, si, is_, I.mul, name)


def gamma_from_graded_ring(ring: FiniteRing, grad: Graduation, nobusawa: bool | None = None,
                           name: str = "graded_ring") -> GradedGammaRing:
    """A Krasner graded ring as a graded gamma ring with Gamma = R."""
    bad = ring_violation(ring.group, ring.mul)
    if bad is not None:
        raise StructureError(f"not an associative ring: {bad}")
    ids = [np.array([ring.group.id(x) for x in grad.components[d]]) for d in sorted(grad.components)]
    gr = -np.ones(len(ring.group), dtype=np.int64)
    for d, comp in grad.components.items():
        for x in comp:
            gr[ring.group.id(x)] = d
    for a in ids:
        for b in ids:
            prods = ring.mul[np.ix_(a, b)]
            nz = prods[prods != 0]
            if nz.size and ((gr[nz] < 0).any() or (gr[nz] != gr[nz[0]]).any()):
                raise StructureError("ring is not Krasner graded by this graduation")
    n = len(ring.group)
    embed = np.arange(n)
    triple = _triple_from_ring(ring.mul, embed)
    faithful = all(triple[:, a, :].any() for a in range(1, n))
    if nobusawa is None:
        nobusawa = faithful
    cotriple = _cotriple_from_ring(ring.mul, embed, embed) if nobusawa else None
    g = GammaRing(ring.group, ring.group, triple, cotriple)
    return GradedGammaRing(g, grad, grad, name)
