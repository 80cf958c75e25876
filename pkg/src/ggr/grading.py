"""Krasner graduations, homogeneous parts and homogroupoids (additive notation).

A homogroupoid is stored by element index.  Index 0 is always the zero
element; ``addible`` is the relation ``#`` and ``sums[x, y]`` is the partial
sum (-1 where undefined).  Grades are small integers: 0 is the zero grade and
the strict grades 1..k are numbered by the smallest nonzero index of their
addibility class, which makes every report deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .finabel import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    enumerate_subgroups,
    is_internal_direct_sum,
    is_subgroup,
    product_group,
    subgroup_generate,
)
from .report import CheckReport, StructureError

GradeId = int
ZERO_GRADE: GradeId = 0


# graduations ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Graduation:
    group: FiniteAbelianGroup
    components: Mapping[GradeId, Subgroup]
    names: Mapping[GradeId, str] = field(default_factory=dict)
    zero_grade: GradeId = ZERO_GRADE

    @classmethod
    def from_parts(
        cls,
        group: FiniteAbelianGroup,
        parts: Sequence[Iterable[Element]],
        names: Sequence[str] | None = None,
    ) -> "Graduation":
        """Build a proper graduation; trivial parts become empty grades."""
        parts = [frozenset(group.normalize(x) for x in p) for p in parts]
        names = list(names) if names is not None else [None] * len(parts)
        for p in parts:
            if not is_subgroup(group, p):
                raise StructureError(f"component {sorted(p)} is not a subgroup of {group}")
        if not is_internal_direct_sum(group, parts):
            raise StructureError("components do not form an internal direct sum of the group")
        strict = [(p, n) for p, n in zip(parts, names) if len(p) > 1]
        strict.sort(key=lambda pn: min(group.id(x) for x in pn[0] if any(x)))
        components = {ZERO_GRADE: frozenset({group.zero})}
        labels = {}
        for k, (p, n) in enumerate(strict, start=1):
            components[k] = p
            if n is not None:
                labels[k] = n
        return cls(group, components, labels)

    @classmethod
    def from_generators(cls, group, gens_per_part, names=None) -> "Graduation":
        return cls.from_parts(group, [subgroup_generate(group, g) for g in gens_per_part], names)

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "Graduation":
        return cls.from_parts(group, [group.elements])

    @property
    def strict_grades(self) -> list[GradeId]:
        return [d for d in sorted(self.components) if d != self.zero_grade]

    def grade_of(self, x: Element) -> GradeId:
        for d, comp in self.components.items():
            if x in comp and d != self.zero_grade:
                return d
        if x == self.group.zero:
            return self.zero_grade
        raise KeyError(f"{x} is not homogeneous")

    def name(self, d: GradeId) -> str:
        return self.names.get(d, f"d{d}") if d else "0"

    def weakly_equivalent(self, other: "Graduation") -> bool:
        mine = {c for d, c in self.components.items() if d != self.zero_grade}
        theirs = {c for d, c in other.components.items() if d != other.zero_grade}
        return mine == theirs


@dataclass(frozen=True)
class HomogeneousPart:
    carrier: frozenset
    grade_of: Mapping[Element, GradeId]


def homogeneous_part(g: Graduation) -> HomogeneousPart:
    carrier = frozenset().union(*g.components.values())
    grades = {x: (ZERO_GRADE if not any(x) else g.grade_of(x)) for x in carrier}
    return HomogeneousPart(carrier, grades)


def enumerate_graduations(G: FiniteAbelianGroup, bound: int = 64) -> list[tuple[Subgroup, ...]]:
    """All strict graduations of G up to equivalence, as tuples of components."""
    subs = [s for s in enumerate_subgroups(G, bound) if len(s) > 1]
    ids = [frozenset(G.id(x) for x in s) for s in subs]
    table = G.add_table
    out = []

    def rec(start, chosen, span):
        if len(span) == G.element_count:
            out.append(tuple(subs[i] for i in chosen))
            return
        for i in range(start, len(subs)):
            s = ids[i]
            if G.element_count % (len(span) * len(s)):
                continue
            new = {int(table[a, b]) for a in span for b in s}
            if len(new) == len(span) * len(s):
                rec(i + 1, chosen + [i], new)

    if G.element_count == 1:
        return [()]
    rec(0, [], {0})
    return out


def verify_homogeneous_part_axioms(G: FiniteAbelianGroup, H: Iterable[Element]) -> CheckReport:
    """The six-condition characterisation of homogeneous parts, written additively."""
    H = frozenset(G.normalize(x) for x in H)
    rep = CheckReport("homogeneous_part_axioms")
    zero = G.zero
    rep.add("i_zero", zero in H, witness=(zero,))
    bad = next((x for x in sorted(H) if G.neg(x) not in H), None)
    rep.add("ii_negation", bad is None, witness=(bad,))
    wit = None
    Hs = sorted(H)
    for x, y, z in itertools.product(Hs, repeat=3):
        if y != zero and G.add(x, y) in H and G.add(y, z) in H and G.add(x, z) not in H:
            wit = (x, y, z)
            break
    rep.add("iii_transitivity", wit is None, witness=wit)
    rep.add("iv_commutation", True)  # vacuous: carriers are abelian
    rep.add("v_generates", subgroup_generate(G, H) == frozenset(G.elements), witness=None)
    wit = _vanishing_nonaddible_sum(G, H)
    rep.add("vi_no_vanishing_sum", wit is None, witness=wit)
    return rep


def _vanishing_nonaddible_sum(G: FiniteAbelianGroup, H: frozenset) -> tuple | None:
    nonzero = sorted(x for x in H if any(x))
    clash = {
        (x, y): G.add(x, y) not in H for x in nonzero for y in nonzero
    }

    def rec(chosen, total, start):
        if len(chosen) >= 2 and not any(total):
            return tuple(chosen)
        for k in range(start, len(nonzero)):
            x = nonzero[k]
            if all(clash[(x, c)] for c in chosen):
                found = rec(chosen + [x], G.add(total, x), k + 1)
                if found:
                    return found
        return None

    return rec([], G.zero, 0)


def homogeneous_parts_oracle(G: FiniteAbelianGroup) -> set[frozenset]:
    """Every homogeneous part of G, found by enumerating all graduations."""
    out = set()
    for comps in enumerate_graduations(G):
        out.add(frozenset({G.zero}).union(*comps))
    return out


# homogroupoids --------------------------------------------------------------


class Homogroupoid:
    """Finite partial structure with distinguished zero at index 0."""

    def __init__(self, labels: Sequence[Hashable], addible, sums):
        self.labels = tuple(labels)
        self.addible = np.asarray(addible, dtype=bool)
        self.sums = np.asarray(sums, dtype=np.int64)
        n = len(self.labels)
        if self.addible.shape != (n, n) or self.sums.shape != (n, n):
            raise StructureError("addibility/sum tables must be n x n")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != n:
            raise StructureError("duplicate labels in homogroupoid")

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Homogroupoid(n={len(self)}, classes={[len(c) for c in self.classes]})"

    # construction ------------------------------------------------------

    @classmethod
    def from_graduation(cls, g: Graduation) -> "Homogroupoid":
        G = g.group
        hp = homogeneous_part(g)
        labels = sorted(hp.carrier, key=G.id)
        grades = [hp.grade_of[x] for x in labels]
        n = len(labels)
        addible = np.zeros((n, n), dtype=bool)
        sums = -np.ones((n, n), dtype=np.int64)
        pos = {x: i for i, x in enumerate(labels)}
        for i, x in enumerate(labels):
            for j, y in enumerate(labels):
                if i == 0 or j == 0 or grades[i] == grades[j]:
                    addible[i, j] = True
                    sums[i, j] = pos[G.add(x, y)]
        return cls(labels, addible, sums)

    @classmethod
    def from_classes(cls, class_groups: Sequence[FiniteAbelianGroup]) -> "Homogroupoid":
        """Disjoint union of groups glued at zero; labels live in their direct sum."""
        total = product_group(*class_groups)
        offsets = np.cumsum([0] + [g.rank for g in class_groups])
        parts = []
        for k, g in enumerate(class_groups):
            gens = []
            for i in range(g.rank):
                e = [0] * total.rank
                e[offsets[k] + i] = 1
                gens.append(tuple(e))
            parts.append(subgroup_generate(total, gens))
        return cls.from_graduation(Graduation.from_parts(total, parts))

    @classmethod
    def trivial(cls) -> "Homogroupoid":
        return cls([()], [[True]], [[0]])

    # derived structure -------------------------------------------------

    @cached_property
    def classes(self) -> list[frozenset[int]]:
        """Addibility classes H(a), a != 0, each containing 0, in grade order."""
        seen = {}
        for a in range(1, len(self)):
            cls_ = frozenset(int(x) for x in np.nonzero(self.addible[a])[0]) | {0}
            seen.setdefault(cls_, a)
        return sorted(seen, key=lambda c: min(c - {0}))

    @cached_property
    def grade(self) -> np.ndarray:
        grade = np.zeros(len(self), dtype=np.int64)
        for k, c in enumerate(self.classes, start=1):
            for x in c - {0}:
                grade[x] = k
        return grade

    @property
    def num_grades(self) -> int:
        return len(self.classes)

    def class_of(self, x: int) -> frozenset[int]:
        return self.classes[int(self.grade[x]) - 1] if x else frozenset({0})

    def members(self, grade: int) -> list[int]:
        """Elements of the component with this grade (including 0)."""
        if grade == 0:
            return [0]
        return sorted(self.classes[grade - 1])

    @cached_property
    def neg(self) -> np.ndarray:
        neg = -np.ones(len(self), dtype=np.int64)
        for x in range(len(self)):
            for y in np.nonzero(self.addible[x])[0]:
                if self.sums[x, y] == 0:
                    neg[x] = y
                    break
        return neg

    @cached_property
    def diff(self) -> np.ndarray:
        """diff[x, y] = x - y where x # y, else -1."""
        n = len(self)
        out = -np.ones((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                if self.addible[x, y] and self.neg[y] >= 0:
                    out[x, y] = self.sums[x, self.neg[y]]
        return out

    def add(self, x: int, y: int) -> int:
        s = int(self.sums[x, y])
        if s < 0:
            raise StructureError(f"{self.labels[x]} and {self.labels[y]} are not addible")
        return s

    @cached_property
    def element_order(self) -> np.ndarray:
        out = np.ones(len(self), dtype=np.int64)
        for x in range(1, len(self)):
            k, m = 1, x
            while m != 0:
                m = int(self.sums[m, x])
                k += 1
                if m < 0 or k > len(self) + 1:
                    k = 0
                    break
            out[x] = k
        return out

    def multiples(self, x: int) -> list[int]:
        """The cyclic subgroup Zx inside the class of x."""
        out, m = [0], x
        while m != 0 and m not in out:
            out.append(m)
            m = int(self.sums[m, x])
        return sorted(out)

    def span(self, elems: Iterable[int]) -> frozenset[int]:
        """Union over classes of the subgroup generated by elems in that class."""
        members = {0}
        for g in sorted(set(int(e) for e in elems)):
            if g in members:
                continue
            same = [m for m in members if self.addible[m, g]]
            mult = self.multiples(g)
            members |= {int(self.sums[s, k]) for s in same for k in mult}
        return frozenset(members)

    def is_subhomogroupoid(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        if 0 not in s:
            return False
        return all(self.diff[x, y] in s for x in s for y in s if self.addible[x, y])


# verification ----------------------------------------------------------------


def verify_homogroupoid(h: Homogroupoid, commutative: bool = True) -> CheckReport:
    rep = CheckReport("homogroupoid")
    n = len(h)
    A, S = h.addible, h.sums
    bad = np.argwhere(A != (S >= 0))
    rep.add("sum_defined_on_addible", len(bad) == 0, witness=_lab(h, bad[:1]))
    bad = np.argwhere(A != A.T)
    rep.add("addibility_symmetric", len(bad) == 0, witness=_lab(h, bad[:1]))
    ok = bool(A[:, 0].all()) and all(S[x, 0] == x and S[0, x] == x for x in range(n))
    wit = next((h.labels[x] for x in range(n) if not (A[x, 0] and S[x, 0] == x)), None)
    rep.add("i_zero", ok, witness=wit)
    bad = np.nonzero(~np.diag(A))[0]
    rep.add("ii_reflexive", len(bad) == 0, witness=_lab(h, bad[:1]))
    wit = None
    for y in range(1, n):
        xs = np.nonzero(A[:, y])[0]
        zs = np.nonzero(A[y])[0]
        sub = A[np.ix_(xs, zs)]
        if not sub.all():
            i, j = np.argwhere(~sub)[0]
            wit = (h.labels[xs[i]], h.labels[y], h.labels[zs[j]])
            break
    rep.add("iii_transitive", wit is None, witness=wit)
    if not rep.passed:
        rep.skip("iv_classes_are_groups")
        return rep
    wit = None
    for c in h.classes:
        wit = _group_failure(h, sorted(c), commutative)
        if wit:
            break
    rep.add("iv_classes_are_groups", wit is None, witness=wit)
    if rep.passed:
        rep.data["classes"] = [sorted(h.labels[x] for x in c) for c in h.classes]
    return rep


def _lab(h: Homogroupoid, pairs) -> tuple | None:
    for p in pairs:
        return tuple(h.labels[int(i)] for i in p)
    return None


def _group_failure(h: Homogroupoid, members: list[int], commutative: bool):
    S = h.sums
    mem = set(members)
    for x in members:
        if not any(S[x, y] == 0 for y in members):
            return ("no_inverse", h.labels[x])
        for y in members:
            if S[x, y] not in mem:
                return ("not_closed", h.labels[x], h.labels[y])
            if commutative and S[x, y] != S[y, x]:
                return ("not_commutative", h.labels[x], h.labels[y])
    for x, y, z in itertools.product(members, repeat=3):
        if S[S[x, y], z] != S[x, S[y, z]]:
            return ("not_associative", h.labels[x], h.labels[y], h.labels[z])
    return None


# linearization ----------------------------------------------------------------


def cyclic_basis(h: Homogroupoid, members: Sequence[int]) -> list[int]:
    """Elements g_1..g_k of a class with class = <g_1> (+) ... (+) <g_k>."""
    order = h.element_order
    cands = sorted((m for m in members if m), key=lambda m: (-order[m], m))
    target = len(members)

    def rec(span: frozenset[int], chosen: list[int]):
        if len(span) == target:
            return chosen
        for g in cands:
            if g in span or order[g] * len(span) > target:
                continue
            mult = h.multiples(g)
            new = frozenset(int(h.sums[s, k]) for s in span for k in mult)
            if len(new) == len(span) * len(mult):
                found = rec(new, chosen + [g])
                if found is not None:
                    return found
        return None

    basis = rec(frozenset({0}), [])
    if basis is None:
        raise StructureError("class is not an abelian group")
    return basis


@dataclass(frozen=True, eq=False)
class Linearization:
    group: FiniteAbelianGroup
    graduation: Graduation
    embedding: tuple[Element, ...]  # element index -> group element

    @cached_property
    def preimage(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.embedding)}

    def components_of(self, x: Element) -> list[int]:
        """Homogeneous components of x, as source indices (one per strict grade)."""
        return [self.component_table[self.group.id(x), k] for k in range(self.component_table.shape[1])]

    @cached_property
    def component_table(self) -> np.ndarray:
        """(|group|, k) array: source index of the grade-(j+1) component of each element."""
        k = len(self.graduation.strict_grades)
        n = self.group.element_count
        out = np.zeros((n, k), dtype=np.int64)
        digits = self.group.digits
        for j, (lo, hi) in enumerate(self._blocks):
            for gid in range(n):
                d = [0] * self.group.rank
                d[lo:hi] = digits[gid, lo:hi]
                out[gid, j] = self.preimage[tuple(int(v) for v in d)]
        return out

    @cached_property
    def _blocks(self) -> list[tuple[int, int]]:
        blocks = []
        for d in self.graduation.strict_grades:
            comp = self.graduation.components[d]
            used = [i for i in range(self.group.rank) if any(x[i] for x in comp)]
            blocks.append((min(used), max(used) + 1))
        return blocks


def linearize(h: Homogroupoid) -> Linearization:
    rep = verify_homogroupoid(h)
    if not rep.passed:
        raise StructureError(f"not a homogroupoid: {rep.failures()[0].to_json()}")
    bases, orders = [], []
    for c in h.classes:
        b = cyclic_basis(h, sorted(c))
        bases.append(b)
        orders.append(tuple(int(h.element_order[g]) for g in b))
    group = FiniteAbelianGroup(tuple(o for os in orders for o in os))
    embedding: list[Element | None] = [None] * len(h)
    embedding[0] = group.zero
    parts = []
    offset = 0
    for b, os in zip(bases, orders):
        part = []
        for coeffs in itertools.product(*(range(o) for o in os)):
            x = 0
            for cf, g in zip(coeffs, b):
                for _ in range(cf):
                    x = int(h.sums[x, g])
            vec = [0] * group.rank
            vec[offset : offset + len(os)] = coeffs
            vec = tuple(vec)
            part.append(vec)
            if x:
                embedding[x] = vec
        parts.append(part)
        offset += len(os)
    grad = Graduation.from_parts(group, parts)
    return Linearization(group, grad, tuple(embedding))


def roundtrip_check(h: Homogroupoid) -> bool:
    lin = linearize(h)
    back = Homogroupoid.from_graduation(lin.graduation)
    sizes = sorted(len(lin.graduation.components[d]) for d in lin.graduation.strict_grades)
    if sorted(len(c) for c in h.classes) != sizes:
        return False
    return homogroupoid_isomorphism(h, back) is not None


# isomorphisms -----------------------------------------------------------------


def class_isomorphisms(h1: Homogroupoid, c1: Sequence[int], h2: Homogroupoid, c2: Sequence[int]) -> Iterator[dict[int, int]]:
    """All group isomorphisms between two addibility classes."""
    if len(c1) != len(c2):
        return
    basis = cyclic_basis(h1, c1)
    o1, o2 = h1.element_order, h2.element_order
    options = [[y for y in c2 if o2[y] == o1[g]] for g in basis]
    coords = {}
    for coeffs in itertools.product(*(range(int(o1[g])) for g in basis)):
        x = 0
        for cf, g in zip(coeffs, basis):
            for _ in range(cf):
                x = int(h1.sums[x, g])
        coords[x] = coeffs
    for images in itertools.product(*options):
        f = {}
        ok = True
        for x, coeffs in coords.items():
            y = 0
            for cf, g in zip(coeffs, images):
                for _ in range(cf):
                    y = int(h2.sums[y, g])
            f[x] = y
        if len(set(f.values())) != len(c1):
            continue
        for x in c1:
            for z in c1:
                if f[int(h1.sums[x, z])] != h2.sums[f[x], f[z]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield f


def homogroupoid_isomorphisms(h1: Homogroupoid, h2: Homogroupoid, class_key=None) -> Iterator[list[int]]:
    """Bijections preserving zero, addibility and partial sums, as index arrays."""
    if len(h1) != len(h2) or sorted(map(len, h1.classes)) != sorted(map(len, h2.classes)):
        return
    key1 = class_key[0] if class_key else (lambda k: len(h1.classes[k]))
    key2 = class_key[1] if class_key else (lambda k: len(h2.classes[k]))
    c1 = [sorted(c) for c in h1.classes]
    c2 = [sorted(c) for c in h2.classes]

    def rec(k, used, f):
        if k == len(c1):
            yield list(f)
            return
        for j in range(len(c2)):
            if j in used or key1(k) != key2(j):
                continue
            for iso in class_isomorphisms(h1, c1[k], h2, c2[j]):
                g = list(f)
                for x, y in iso.items():
                    g[x] = y
                yield from rec(k + 1, used | {j}, g)

    yield from rec(0, frozenset(), [0] * len(h1))


def homogroupoid_isomorphism(h1: Homogroupoid, h2: Homogroupoid) -> list[int] | None:
    return next(homogroupoid_isomorphisms(h1, h2), None)


# maps -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PartialMap:
    source: Homogroupoid
    target: Homogroupoid
    value: Mapping[Hashable, Hashable]  # source label -> target label


def verify_homomorphism(f: PartialMap) -> CheckReport:
    rep = CheckReport("homomorphism")
    src, tgt = f.source, f.target
    missing = next((x for x in src.labels if x not in f.value), None)
    rep.add("total", missing is None, witness=(missing,))
    if missing is not None:
        rep.skip("quasihomomorphism")
        rep.skip("homomorphism")
        return rep
    img = [tgt.index[f.value[x]] for x in src.labels]
    wit = None
    for x in range(len(src)):
        for y in range(len(src)):
            if src.addible[x, y]:
                fx, fy = img[x], img[y]
                if not tgt.addible[fx, fy] or img[src.sums[x, y]] != tgt.sums[fx, fy]:
                    wit = (src.labels[x], src.labels[y])
                    break
        if wit:
            break
    rep.add("quasihomomorphism", wit is None, witness=wit)
    wit = None
    for x in range(len(src)):
        for y in range(len(src)):
            fx, fy = img[x], img[y]
            if fx and fy and tgt.addible[fx, fy] and not src.addible[x, y]:
                wit = (src.labels[x], src.labels[y])
                break
        if wit:
            break
    rep.add("homomorphism", wit is None and rep["quasihomomorphism"].passed, witness=wit)
    return rep
