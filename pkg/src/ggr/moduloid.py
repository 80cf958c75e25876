"""Right AG-moduloids over a gamma anneid.

A moduloid is an abelian homogroupoid M with a total action M x G x A -> M,
stored as an index table ``action[w, alpha, x]``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .anneid import GammaAnneid, _distributive, _moduloid_regularity_witness, verify_anneid
from .grading import Homogroupoid, class_isomorphisms, verify_homogroupoid
from .ideals import (
    DEFAULT_CARRIER_BOUND,
    DEFAULT_LATTICE_BOUND,
    IndexSet,
    closure_mask,
    coset_homogroupoid,
    enumerate_closed,
    enumerate_closed_brute_force,
    is_closed,
    modularity_witnesses,
    span_mask,
    to_mask,
    to_set,
)
from .report import CheckReport, InvariantViolation


class Moduloid:
    def __init__(self, M: Homogroupoid, over: GammaAnneid, action, name: str = ""):
        self.M = M
        self.over = over
        self.action = np.asarray(action, dtype=np.int64)
        self.name = name
        shape = (len(M), len(over.G), len(over.A))
        if self.action.shape != shape:
            raise ValueError(f"action shape {self.action.shape} != {shape}")

    def __repr__(self) -> str:
        return f"Moduloid({self.name or '?'}: |M|={len(self.M)} over {self.over!r})"

    def __len__(self) -> int:
        return len(self.M)

    @cached_property
    def _grade_data(self):
        gM, gG, gA = self.M.grade, self.over.G.grade, self.over.A.grade
        table = np.zeros((self.M.num_grades + 1, self.over.G.num_grades + 1, self.over.A.num_grades + 1),
                         dtype=np.int64)
        conflict = None
        P = self.action
        for w, al, x in np.argwhere(P != 0):
            key = (gM[w], gG[al], gA[x])
            val = gM[P[w, al, x]]
            if table[key] == 0:
                table[key] = val
            elif table[key] != val and conflict is None:
                conflict = (key, (int(w), int(al), int(x)))
        return table, conflict

    @property
    def grade_table(self) -> np.ndarray:
        """External grade product (M grade, G grade, A grade) -> M grade."""
        return self._grade_data[0]


def anneid_as_moduloid(a: GammaAnneid) -> Moduloid:
    return Moduloid(a.A, a, a.triple, name=a.name)


def zero_moduloid(M: Homogroupoid, a: GammaAnneid) -> Moduloid:
    return Moduloid(M, a, np.zeros((len(M), len(a.G), len(a.A)), dtype=np.int64), name="zero")


def verify_moduloid(m: Moduloid) -> CheckReport:
    rep = CheckReport("moduloid")
    sub = verify_homogroupoid(m.M)
    rep.add("M_homogroupoid", sub.passed, witness=[c.to_json() for c in sub.failures()])
    rep.add("over_anneid", verify_anneid(m.over).passed)
    if not rep.passed:
        return rep
    P, M, A, G = m.action, m.M, m.over.A, m.over.G
    rep.add("closed", bool(((P >= 0) & (P < len(M))).all()))
    if not rep.passed:
        return rep
    for axis, cid, h in ((2, "i_ring_slot_additive", A), (0, "ii_module_slot_additive", M)):
        w = _distributive(h, M, P, axis)
        if w is not None:
            w = {"addible_pair": (h.labels[w[0]], h.labels[w[1]])}
        rep.add(cid, w is None, witness=w)
    T = m.over.triple
    w = None
    for x in range(len(M)):
        # w beta (x alpha y) against (w beta x) alpha y
        lhs = P[x][:, T]  # (beta, x, alpha, y)
        rhs = P[P[x][:, :, None, None], np.arange(len(G))[None, None, :, None], np.arange(len(A))[None, None, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b, y, al, z = bad[0]
            w = (M.labels[x], G.labels[b], A.labels[y], G.labels[al], A.labels[z])
            break
    rep.add("iii_associative", w is None, witness=w)
    _, conflict = m._grade_data
    w = None
    if conflict is not None:
        key, (x, al, y) = conflict
        w = {"grades": key, "inputs": (M.labels[x], G.labels[al], A.labels[y])}
    rep.add("grade_coherence", conflict is None, witness=w)
    return rep


def is_regular_moduloid(m: Moduloid) -> bool:
    return regular_moduloid_witness(m) is None


def regular_moduloid_witness(m: Moduloid):
    return _moduloid_regularity_witness(m.action, m.M, m.over.G, m.over.A)


# submoduloids ----------------------------------------------------------------------


def is_submoduloid(m: Moduloid, N: Iterable[int]) -> bool:
    return is_closed(m.M, [m.action], to_mask(len(m.M), N))


def generated_submoduloid(m: Moduloid, elems: Iterable[int]) -> IndexSet:
    return to_set(closure_mask(m.M, [m.action], to_mask(len(m.M), elems)))


def enumerate_submoduloids(m: Moduloid, max_size: int = DEFAULT_CARRIER_BOUND,
                           max_count: int = DEFAULT_LATTICE_BOUND) -> list[IndexSet]:
    return enumerate_closed(m.M, [m.action], max_size, max_count)


def brute_force_submoduloids(m: Moduloid) -> list[IndexSet]:
    return enumerate_closed_brute_force(m.M, [m.action])


def products_vanish(m: Moduloid) -> bool:
    """MGA = {0}."""
    return not m.action.any()


def generated_by_products(m: Moduloid, x: int) -> IndexSet:
    """span(xGA): the submoduloid spanned by all products of x."""
    return to_set(span_mask(m.M, to_mask(len(m.M), m.action[x].ravel())))


def is_irreducible(m: Moduloid) -> bool:
    """MGA nonzero and no submoduloids besides {0} and M.

    Cross-checked against: M nonzero and span(xGA) = M for every nonzero x.
    """
    whole = frozenset(range(len(m.M)))
    lattice = enumerate_submoduloids(m)
    by_lattice = not products_vanish(m) and lattice == sorted({frozenset({0}), whole}, key=len)
    by_generators = len(m.M) > 1 and all(generated_by_products(m, x) == whole for x in range(1, len(m.M)))
    if len(m.M) > 1 and not products_vanish(m) and by_lattice != by_generators:
        raise InvariantViolation(f"irreducibility criteria disagree on {m!r}")
    return by_lattice


def strict_generators(m: Moduloid, alpha: int | None = None) -> IndexSet:
    """Elements x with x alpha A = M (for the given alpha, or for every nonzero alpha)."""
    n = len(m.M)
    alphas = range(1, len(m.over.G)) if alpha is None else [alpha]
    out = []
    for x in range(n):
        if all(len(set(m.action[x, al].tolist())) == n for al in alphas):
            out.append(x)
    return frozenset(out)


def is_strictly_cyclic(m: Moduloid) -> bool:
    return bool(strict_generators(m))


def is_alpha_strictly_cyclic(m: Moduloid, alpha: int) -> bool:
    return bool(strict_generators(m, alpha))


def quotient_ideal(m: Moduloid, N: Iterable[int], S: Iterable[int]) -> IndexSet:
    """(N:S) = {a in A : SGa in N}."""
    inN = to_mask(len(m.M), N)
    S = sorted(set(S))
    if not S:
        return frozenset(range(len(m.over.A)))
    block = m.action[S]  # (s, alpha, a)
    return frozenset(int(a) for a in np.flatnonzero(inN[block].all(axis=(0, 1))))


def annihilator(m: Moduloid) -> IndexSet:
    return quotient_ideal(m, [0], range(len(m.M)))


def element_annihilator(m: Moduloid, x: int, alpha: int) -> IndexSet:
    """(0:x)_alpha = {a : x alpha a = 0}."""
    return frozenset(int(a) for a in np.flatnonzero(m.action[x, alpha] == 0))


def is_faithful(m: Moduloid) -> bool:
    return annihilator(m) == frozenset({0})


# factor moduloids and isomorphisms ---------------------------------------------------


def factor_moduloid(m: Moduloid, N: Iterable[int]) -> tuple[Moduloid, np.ndarray]:
    """M/N with the projection; the action is checked to be well defined."""
    factor, proj = coset_homogroupoid(m.M, N)
    reps = np.array([m.M.index[lab] for lab in factor.labels])
    act = proj[m.action[reps]]
    if not (act[proj] == proj[m.action]).all():
        raise InvariantViolation("action on cosets is not well defined")
    return Moduloid(factor, m.over, act, name=f"{m.name}/N"), proj


def right_factor(a: GammaAnneid, I: Iterable[int]) -> tuple[Moduloid, np.ndarray]:
    """A/I as a moduloid, for a right ideal I."""
    return factor_moduloid(anneid_as_moduloid(a), I)


def _is_isomorphism(m1: Moduloid, m2: Moduloid, f: np.ndarray) -> bool:
    if len(set(f.tolist())) != len(f):
        return False
    A1, A2 = m1.M, m2.M
    if not (A1.addible == A2.addible[np.ix_(f, f)]).all():
        return False
    ok = A1.addible
    if not (f[np.where(ok, A1.sums, 0)][ok] == A2.sums[np.ix_(f, f)][ok]).all():
        return False
    return bool((f[m1.action] == m2.action[f]).all())


def moduloid_isomorphism(m1: Moduloid, m2: Moduloid) -> list[int] | None:
    """Isomorphism of moduloids over the same anneid (identity on A and G), or None."""
    if len(m1.M) != len(m2.M) or sorted(map(len, m1.M.classes)) != sorted(map(len, m2.M.classes)):
        return None
    c1 = [sorted(c) for c in m1.M.classes]
    c2 = [sorted(c) for c in m2.M.classes]

    def consistent(f, mapped):
        idx = np.array(sorted(mapped))
        src = m1.action[idx]
        known = np.isin(src, idx)
        return bool((f[src][known] == m2.action[f[idx]][known]).all())

    def rec(k, used, f, mapped):
        if k == len(c1):
            return f if _is_isomorphism(m1, m2, f) else None
        for j in range(len(c2)):
            if j in used or len(c1[k]) != len(c2[j]):
                continue
            for iso in class_isomorphisms(m1.M, c1[k], m2.M, c2[j]):
                g = f.copy()
                for x, y in iso.items():
                    g[x] = y
                if consistent(g, mapped | set(iso)):
                    res = rec(k + 1, used | {j}, g, mapped | set(iso))
                    if res is not None:
                        return res
        return None

    found = rec(0, frozenset(), np.zeros(len(m1.M), dtype=np.int64), {0})
    return None if found is None else [int(v) for v in found]


def check_cyclic_isomorphism(m: Moduloid, x: int, alpha: int) -> bool:
    """a + (0:x)_alpha -> x alpha a is a moduloid isomorphism onto x alpha A."""
    a = m.over
    K = element_annihilator(m, x, alpha)
    Q, proj = right_factor(a, K)
    reps = [a.A.index[lab] for lab in Q.M.labels]
    kappa = m.action[x, alpha][reps]  # coset index -> element of M
    if len(set(kappa.tolist())) != len(kappa):
        return False
    if set(kappa.tolist()) != set(m.action[x, alpha].tolist()):
        return False
    # addibility and sums correspond in both directions
    M = m.M
    if not (Q.M.addible == M.addible[np.ix_(kappa, kappa)]).all():
        return False
    ok = Q.M.addible
    if not (kappa[np.where(ok, Q.M.sums, 0)][ok] == M.sums[np.ix_(kappa, kappa)][ok]).all():
        return False
    return bool((kappa[Q.action] == m.action[kappa]).all())


def check_strictly_cyclic_theorem(m: Moduloid) -> CheckReport:
    """Both directions of the correspondence between strict generators and modular ideals.

    Forward: for every alpha-strict generator x of a regular m, (0:x)_alpha is
    right modular and A/(0:x)_alpha is isomorphic to m.  Backward (on m = A):
    every right ideal with a left identity u for alpha equals (0:u+I)_alpha in
    A/I, where u+I is an alpha-strict generator.
    """
    rep = CheckReport("strictly_cyclic_theorem")
    a = m.over
    regular = is_regular_moduloid(m)
    w = None
    if regular:
        for alpha in range(1, len(a.G)):
            for x in strict_generators(m, alpha):
                K = element_annihilator(m, x, alpha)
                if not modularity_witnesses(a, K):
                    w = {"generator": m.M.labels[x], "alpha": a.G.labels[alpha], "failure": "not modular"}
                    break
                Q, _ = right_factor(a, K)
                if moduloid_isomorphism(Q, m) is None:
                    w = {"generator": m.M.labels[x], "alpha": a.G.labels[alpha], "failure": "not isomorphic"}
                    break
            if w:
                break
        rep.add("forward", w is None, witness=w)
    else:
        rep.skip("forward")
    return rep


def check_modular_ideal_generator(a: GammaAnneid, I: Iterable[int]) -> bool:
    """For each left identity (u, alpha) modulo I: u+I is an alpha-strict generator of A/I and I = (0:u+I)_alpha."""
    I = frozenset(I)
    Q, proj = right_factor(a, I)
    for w in modularity_witnesses(a, I):
        if w.alpha == 0:
            continue
        g = int(proj[w.u])
        if g not in strict_generators(Q, w.alpha):
            return False
        if frozenset(b for b in range(len(a.A)) if Q.action[g, w.alpha, b] == 0) != I:
            return False
    return True
