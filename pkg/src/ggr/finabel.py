"""Finite abelian groups as explicit products of cyclic groups.

Elements are tuples of residues.  Every group also exposes a dense integer id
per element (mixed radix, first factor most significant) so that subsets can
be handled as numpy index arrays or Python int bitsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .report import ResourceError, StructureError

Element = tuple[int, ...]
Subgroup = frozenset  # frozenset[Element]

DEFAULT_SUBGROUP_BOUND = 64


@dataclass(frozen=True)
class FiniteAbelianGroup:
    cyclic_orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.cyclic_orders)
        if any(n < 2 for n in orders):
            raise StructureError(f"cyclic factor orders must be >= 2, got {orders}")
        object.__setattr__(self, "cyclic_orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        return cls((n,)) if n > 1 else cls(())

    @property
    def element_count(self) -> int:
        return math.prod(self.cyclic_orders)

    def __len__(self) -> int:
        return self.element_count

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    @cached_property
    def _radix(self) -> np.ndarray:
        radix = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            radix[i] = radix[i + 1] * self.cyclic_orders[i + 1]
        return radix

    @cached_property
    def digits(self) -> np.ndarray:
        """(n, rank) array of residues, row i is the element with id i."""
        n = self.element_count
        ids = np.arange(n, dtype=np.int64)
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        orders = np.array(self.cyclic_orders, dtype=np.int64)
        return (ids[:, None] // self._radix[None, :]) % orders[None, :]

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(tuple(int(v) for v in row) for row in self.digits)

    def id(self, x: Sequence[int]) -> int:
        self.check(x)
        return int(sum(int(v) * int(r) for v, r in zip(x, self._radix)))

    def element(self, i: int) -> Element:
        return self.elements[i]

    def check(self, x: Sequence[int]) -> None:
        if len(x) != self.rank:
            raise StructureError(
                f"element {tuple(x)} has {len(x)} residues, group {self} has rank {self.rank}"
            )

    def normalize(self, x: Sequence[int]) -> Element:
        self.check(x)
        return tuple(int(v) % n for v, n in zip(x, self.cyclic_orders))

    def add(self, x: Element, y: Element) -> Element:
        self.check(x)
        self.check(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.cyclic_orders))

    def neg(self, x: Element) -> Element:
        self.check(x)
        return tuple((-a) % n for a, n in zip(x, self.cyclic_orders))

    def sub(self, x: Element, y: Element) -> Element:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x: Element) -> Element:
        self.check(x)
        return tuple((k * a) % n for a, n in zip(x, self.cyclic_orders))

    def order_of(self, x: Element) -> int:
        self.check(x)
        return math.lcm(1, *(n // math.gcd(a, n) for a, n in zip(x, self.cyclic_orders)))

    # vectorised id arithmetic -------------------------------------------------

    def ids_from_digits(self, digits: np.ndarray) -> np.ndarray:
        orders = np.array(self.cyclic_orders, dtype=np.int64)
        return ((digits % orders) * self._radix).sum(axis=-1)

    def add_ids(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        return self.ids_from_digits(self.digits[a] + self.digits[b])

    @cached_property
    def add_table(self) -> np.ndarray:
        n = self.element_count
        ids = np.arange(n)
        return self.add_ids(ids[:, None], ids[None, :])

    @cached_property
    def neg_ids(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(1, dtype=np.int64)
        return self.ids_from_digits(-self.digits)

    def __str__(self) -> str:
        if not self.cyclic_orders:
            return "1"
        return " x ".join(f"Z{n}" for n in self.cyclic_orders)


def product_group(*groups: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(n for g in groups for n in g.cyclic_orders))


# subgroups ------------------------------------------------------------------


def _span_ids(G: FiniteAbelianGroup, start: set[int], gens: Iterable[int]) -> set[int]:
    members = set(start) | {0}
    table = G.add_table
    for g in gens:
        if g in members:
            continue
        # members + <g>
        multiples = [0]
        m = g
        while m != 0:
            multiples.append(m)
            m = int(table[m, g])
        members = {int(table[s, k]) for s in members for k in multiples}
    return members


def subgroup_generate(G: FiniteAbelianGroup, gens: Iterable[Element]) -> Subgroup:
    ids = [G.id(x) for x in gens]
    return frozenset(G.element(i) for i in _span_ids(G, set(), ids))


def is_subgroup(G: FiniteAbelianGroup, S: Iterable[Element]) -> bool:
    ids = {G.id(x) for x in S}
    if 0 not in ids:
        return False
    table = G.add_table
    neg = G.neg_ids
    return all(int(neg[x]) in ids for x in ids) and all(
        int(table[x, y]) in ids for x in ids for y in ids
    )


def enumerate_subgroups(G: FiniteAbelianGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> list[Subgroup]:
    """Every subgroup exactly once, ordered by (size, sorted ids)."""
    if G.element_count > bound:
        raise ResourceError(f"|G| = {G.element_count} exceeds subgroup enumeration bound {bound}")
    seen: set[frozenset[int]] = set()
    frontier = [frozenset({0})]
    seen.add(frontier[0])
    n = G.element_count
    while frontier:
        nxt = []
        for S in frontier:
            for g in range(n):
                if g in S:
                    continue
                T = frozenset(_span_ids(G, S, [g]))
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    ordered = sorted(seen, key=lambda s: (len(s), sorted(s)))
    return [frozenset(G.element(i) for i in s) for s in ordered]


def is_internal_direct_sum(G: FiniteAbelianGroup, parts: Sequence[Iterable[Element]]) -> bool:
    parts = [frozenset(p) for p in parts]
    if math.prod(len(p) for p in parts) != G.element_count:
        return False
    sums = {0}
    table = G.add_table
    for p in parts:
        ids = [G.id(x) for x in p]
        new = {int(table[s, x]) for s in sums for x in ids}
        if len(new) != len(sums) * len(ids):
            return False
        sums = new
    return len(sums) == G.element_count
