"""Ideals of gamma anneids and submoduloid lattices.

Subsets of a carrier are handled as boolean masks internally and returned to
callers as ``frozenset`` of element indices.  Right ideals of an anneid are
exactly the submoduloids of the anneid acting on itself, so the lattice code is
written once for an arbitrary (homogroupoid, action) pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .anneid import GammaAnneid, verify_anneid
from .grading import GradeId, Homogroupoid, PartialMap, verify_homomorphism
from .report import InvariantViolation, ResourceError, StructureError

IndexSet = frozenset  # frozenset[int] of carrier indices

DEFAULT_CARRIER_BOUND = 24
DEFAULT_LATTICE_BOUND = 4096
BRUTE_FORCE_BOUND = 12

SIDES = ("right", "left", "two-sided")


def actions_for(a: GammaAnneid, side: str) -> list[np.ndarray]:
    """Action tables (x, alpha, y) -> result whose closure defines the given side."""
    right = a.triple
    left = np.transpose(a.triple, (2, 1, 0))
    if side == "right":
        return [right]
    if side == "left":
        return [left]
    if side == "two-sided":
        return [right, left]
    raise ValueError(f"unknown side {side!r}")


def to_mask(n: int, elems: Iterable[int]) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[list(elems)] = True
    return mask


def to_set(mask: np.ndarray) -> IndexSet:
    return frozenset(int(i) for i in np.flatnonzero(mask))


# closure machinery ---------------------------------------------------------------


def span_mask(h: Homogroupoid, mask: np.ndarray) -> np.ndarray:
    """Per-class subgroup generated by the marked elements (always contains 0)."""
    mask = mask.copy()
    mask[0] = True
    while True:
        idx = np.flatnonzero(mask)
        block = h.addible[np.ix_(idx, idx)]
        new = mask.copy()
        new[h.sums[np.ix_(idx, idx)][block]] = True
        if (new == mask).all():
            return mask
        mask = new


def closure_mask(h: Homogroupoid, actions: Sequence[np.ndarray], mask: np.ndarray) -> np.ndarray:
    """Smallest subset containing mask, closed under addible differences and the actions."""
    mask = span_mask(h, mask)
    while True:
        new = mask.copy()
        for act in actions:
            new[act[mask].ravel()] = True
        if (new == mask).all():
            return mask
        mask = span_mask(h, new)


def sum_mask(h: Homogroupoid, I: np.ndarray, J: np.ndarray) -> np.ndarray:
    """{x + y : x in I, y in J, x # y}."""
    i, j = np.flatnonzero(I), np.flatnonzero(J)
    block = h.addible[np.ix_(i, j)]
    out = np.zeros(len(h), dtype=bool)
    out[h.sums[np.ix_(i, j)][block]] = True
    return out


def is_closed(h: Homogroupoid, actions: Sequence[np.ndarray], mask: np.ndarray) -> bool:
    if not mask[0]:
        return False
    idx = np.flatnonzero(mask)
    diffs = h.diff[np.ix_(idx, idx)]
    block = h.addible[np.ix_(idx, idx)]
    if not mask[diffs[block]].all():
        return False
    return all(mask[act[mask].ravel()].all() for act in actions)


def enumerate_closed(h: Homogroupoid, actions: Sequence[np.ndarray],
                     max_size: int = DEFAULT_CARRIER_BOUND,
                     max_count: int = DEFAULT_LATTICE_BOUND) -> list[IndexSet]:
    """Every closed subset, found by adding principal closures to known ones.

    Complete because a closed subset is the sum of the closures of its
    elements, and sums of closed subsets are closed.
    """
    n = len(h)
    if n > max_size:
        raise ResourceError(f"carrier size {n} exceeds bound {max_size}")
    principal = [closure_mask(h, actions, to_mask(n, [x])) for x in range(n)]
    start = to_mask(n, [0])
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for I in frontier:
            for x in range(1, n):
                if I[x]:
                    continue
                S = sum_mask(h, I, principal[x])
                key = S.tobytes()
                if key not in seen:
                    seen[key] = S
                    nxt.append(S)
                    if len(seen) > max_count:
                        raise ResourceError(f"lattice exceeds {max_count} members")
        frontier = nxt
    return sorted((to_set(m) for m in seen.values()), key=lambda s: (len(s), sorted(s)))


def enumerate_closed_brute_force(h: Homogroupoid, actions: Sequence[np.ndarray],
                                 max_size: int = BRUTE_FORCE_BOUND) -> list[IndexSet]:
    """Filter every subset containing 0 by the defining conditions."""
    n = len(h)
    if n > max_size:
        raise ResourceError(f"brute force limited to {max_size} elements, got {n}")
    out = []
    for r in range(n):
        for rest in itertools.combinations(range(1, n), r):
            if is_closed(h, actions, to_mask(n, (0,) + rest)):
                out.append(frozenset((0,) + rest))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# ideals ------------------------------------------------------------------------


def is_ideal(a: GammaAnneid, elems: Iterable[int], side: str = "right") -> bool:
    return is_closed(a.A, actions_for(a, side), to_mask(len(a.A), elems))


def generated_ideal(a: GammaAnneid, elems: Iterable[int], side: str = "right") -> IndexSet:
    return to_set(closure_mask(a.A, actions_for(a, side), to_mask(len(a.A), elems)))


def _principal(a: GammaAnneid, x: int, side: str) -> IndexSet:
    T = a.triple
    pieces = [[x]]
    if side in ("right", "two-sided"):
        pieces.append(T[x].ravel())  # xGA
    if side in ("left", "two-sided"):
        pieces.append(T[:, :, x].ravel())  # AGx
    if side == "two-sided":
        pieces.append(T[T[:, :, x][:, :, None, None], np.arange(len(a.G))[None, None, :, None],
                        np.arange(len(a.A))[None, None, None, :]].ravel())  # AGxGA
    mask = span_mask(a.A, to_mask(len(a.A), np.concatenate([np.asarray(p, dtype=np.int64) for p in pieces])))
    result = to_set(mask)
    if result != generated_ideal(a, [x], side):
        raise InvariantViolation(f"principal {side} ideal of {a.A.labels[x]} differs from its closure")
    return result


def principal_right(a: GammaAnneid, x: int) -> IndexSet:
    """Zx + span(xGA)."""
    return _principal(a, x, "right")


def principal_left(a: GammaAnneid, x: int) -> IndexSet:
    return _principal(a, x, "left")


def principal_two_sided(a: GammaAnneid, x: int) -> IndexSet:
    return _principal(a, x, "two-sided")


def ideal_sum(a: GammaAnneid, I: Iterable[int], J: Iterable[int]) -> IndexSet:
    n = len(a.A)
    return to_set(sum_mask(a.A, to_mask(n, I), to_mask(n, J)))


def ideal_intersection(I: Iterable[int], J: Iterable[int]) -> IndexSet:
    return frozenset(I) & frozenset(J)


def enumerate_ideals(a: GammaAnneid, side: str = "right", max_size: int = DEFAULT_CARRIER_BOUND,
                     max_count: int = DEFAULT_LATTICE_BOUND) -> list[IndexSet]:
    return enumerate_closed(a.A, actions_for(a, side), max_size, max_count)


def enumerate_right_ideals(a: GammaAnneid, max_size: int = DEFAULT_CARRIER_BOUND,
                           max_count: int = DEFAULT_LATTICE_BOUND) -> list[IndexSet]:
    return enumerate_ideals(a, "right", max_size, max_count)


def brute_force_ideals(a: GammaAnneid, side: str = "right") -> list[IndexSet]:
    return enumerate_closed_brute_force(a.A, actions_for(a, side))


def maximal_members(family: Sequence[IndexSet], whole: IndexSet) -> list[IndexSet]:
    """Members maximal among the proper members of the family."""
    proper = [I for I in family if I != whole]
    return [I for I in proper if not any(I < J for J in proper)]


# factor structures ---------------------------------------------------------------


def coset_homogroupoid(h: Homogroupoid, N: Iterable[int]) -> tuple[Homogroupoid, np.ndarray]:
    """Classes H(x)/(H(x) n N) glued at zero; returns the factor and the projection.

    Each coset is labelled by the label of its smallest-index member.
    """
    N = frozenset(N)
    n = len(h)
    proj = -np.ones(n, dtype=np.int64)
    proj[list(N)] = 0
    reps = [0]
    for x in range(n):
        if proj[x] >= 0:
            continue
        k = len(reps)
        reps.append(x)
        for y in h.class_of(x):
            if proj[y] < 0 and int(h.diff[y, x]) in N:
                proj[y] = k
    m = len(reps)
    r = np.array(reps)
    addible = h.addible[np.ix_(r, r)]
    sums = np.where(addible, proj[np.where(addible, h.sums[np.ix_(r, r)], 0)], -1)
    factor = Homogroupoid([h.labels[x] for x in reps], addible, sums)
    # sums of representatives must not depend on the representative chosen
    for x in range(n):
        for y in np.flatnonzero(h.addible[x]):
            if factor.sums[proj[x], proj[y]] != proj[h.sums[x, y]]:
                raise InvariantViolation(f"{N} is not closed under addible differences")
    return factor, proj


def factor_anneid(a: GammaAnneid, I: Iterable[int]) -> tuple[GammaAnneid, np.ndarray]:
    """A/I for a two-sided ideal I, with the canonical surjection as index array."""
    I = frozenset(I)
    if not is_ideal(a, I, "two-sided"):
        raise ValueError("factor anneids need a two-sided ideal")
    factor, proj = coset_homogroupoid(a.A, I)
    reps = np.array([a.A.index[lab] for lab in factor.labels])
    T = proj[a.triple[np.ix_(reps, np.arange(len(a.G)), reps)]]
    if not (T[proj[:, None, None], np.arange(len(a.G))[None, :, None], proj[None, None, :]]
            == proj[a.triple]).all():
        raise InvariantViolation("product on cosets is not well defined")
    return GammaAnneid(factor, a.G, T, name=f"{a.name}/I"), proj


def canonical_surjection(a: GammaAnneid, quotient: GammaAnneid, proj: np.ndarray) -> PartialMap:
    return PartialMap(a.A, quotient.A, {a.A.labels[x]: quotient.A.labels[proj[x]] for x in range(len(a.A))})


def is_anneid_quasihomomorphism(a: GammaAnneid, b: GammaAnneid, theta: np.ndarray,
                                phi: np.ndarray | None = None) -> bool:
    """theta on A (index array) with phi on G (identity by default)."""
    if phi is None:
        if len(a.G) != len(b.G):
            return False
        phi = np.arange(len(a.G))
    f = PartialMap(a.A, b.A, {a.A.labels[x]: b.A.labels[theta[x]] for x in range(len(a.A))})
    rep = verify_homomorphism(f)
    if not rep["quasihomomorphism"].passed:
        return False
    return bool((theta[a.triple] == b.triple[np.ix_(theta, phi, theta)]).all())


def kernel(theta: np.ndarray) -> IndexSet:
    return frozenset(int(x) for x in np.flatnonzero(np.asarray(theta) == 0))


# modularity ------------------------------------------------------------------------


@dataclass(frozen=True)
class ModularityWitness:
    """u is an alpha-left identity modulo the ideal."""

    u: int
    alpha: int


def modularity_mask(a: GammaAnneid, I: Iterable[int]) -> np.ndarray:
    """(|A|, |G|) boolean array: (u, alpha) is a left identity modulo I."""
    inI = to_mask(len(a.A), I)
    P = a.triple
    x = np.arange(len(a.A))[None, None, :]
    both = inI[x] & inI[P]
    D = a.A.diff[x, P]
    cong = (D >= 0) & inI[np.maximum(D, 0)]
    return (both | cong).all(axis=2)


def modularity_witnesses(a: GammaAnneid, I: Iterable[int]) -> list[ModularityWitness]:
    I = frozenset(I)
    found = [ModularityWitness(int(u), int(al)) for u, al in np.argwhere(modularity_mask(a, I))]
    if len(I) < len(a.A):
        inside = [w for w in found if w.u in I]
        if inside:
            raise InvariantViolation(f"left identity {a.A.labels[inside[0].u]} lies in a proper ideal")
    return found


def find_modularity(a: GammaAnneid, I: Iterable[int]) -> ModularityWitness | None:
    ws = modularity_witnesses(a, I)
    nonzero = [w for w in ws if w.alpha != 0]
    return (nonzero or ws or [None])[0]


def is_modular(a: GammaAnneid, I: Iterable[int]) -> bool:
    return bool(modularity_mask(a, I).any())


def maximal_right_modular_ideals(a: GammaAnneid, ideals: Sequence[IndexSet] | None = None,
                                 max_size: int = DEFAULT_CARRIER_BOUND,
                                 max_count: int = DEFAULT_LATTICE_BOUND) -> list[tuple[IndexSet, ModularityWitness]]:
    if ideals is None:
        ideals = enumerate_right_ideals(a, max_size, max_count)
    whole = frozenset(range(len(a.A)))
    out = []
    for I in maximal_members(ideals, whole):
        w = find_modularity(a, I)
        if w is not None:
            out.append((I, w))
    return out


def grade_of_modular_ideal(a: GammaAnneid, I: Iterable[int]) -> GradeId:
    """Common grade of all left identities modulo a proper right modular ideal."""
    I = frozenset(I)
    if len(I) == len(a.A):
        raise ValueError("the ideal must be proper")
    ws = modularity_witnesses(a, I)
    if not ws:
        raise ValueError("the ideal is not modular")
    grades = sorted({int(a.A.grade[w.u]) for w in ws})
    if len(grades) != 1:
        raise ValueError(f"left identities have grades {grades}; the anneid is not regular")
    return grades[0]


def right_colon(a: GammaAnneid, I: Iterable[int]) -> IndexSet:
    """(I:A) = {x : AGx in I}, the annihilator of A/I."""
    inI = to_mask(len(a.A), I)
    return frozenset(int(x) for x in range(len(a.A)) if inI[a.triple[:, :, x]].all())


def structure_check(a: GammaAnneid) -> None:
    rep = verify_anneid(a)
    if not rep.passed:
        raise StructureError(f"not an anneid: {rep.failures()[0].to_json()}")
