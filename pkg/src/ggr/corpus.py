"""Named example structures and seeded families of small anneids.

Most families come from contracted semigroup algebras: a finite semigroup with
zero, a prime p and a set of semigroup elements spanning Gamma.  Every nonzero
semigroup element spans its own homogeneous component Z_p, and

    (c s) (d g) (c' t) = (c d c') (s g t)

which is associative because the semigroup is.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .anneid import GammaAnneid, anneid_from_graded, verify_anneid
from .finabel import FiniteAbelianGroup
from .gammaring import (
    FiniteRing,
    GradedGammaRing,
    MoritaContext,
    build_generalized_matrix_ring,
    build_semidirect_sum,
    gamma_from_graded_ring,
)
from .grading import Graduation, Homogroupoid
from .report import StructureError

ZERO = 0  # index of the semigroup zero in every multiplication table


@dataclass
class Entry:
    name: str
    family: str
    anneid: GammaAnneid
    graded: GradedGammaRing | None = None


# semigroups with zero ----------------------------------------------------------


def is_associative(mul: np.ndarray) -> bool:
    return bool((mul[mul, :] == mul[:, mul]).all())


def adjoin_zero(table: Sequence[Sequence[int | None]]) -> np.ndarray:
    """Shift a table on 0..k-1 (None meaning zero) to indices 1..k with a zero at 0."""
    k = len(table)
    mul = np.zeros((k + 1, k + 1), dtype=np.int64)
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            mul[i + 1, j + 1] = 0 if v is None else v + 1
    return mul


def matrix_units(n: int, upper: bool = False) -> tuple[np.ndarray, list[str]]:
    """Semigroup {e_ij} with e_ij e_jk = e_ik and all other products zero."""
    units = [(i, j) for i in range(n) for j in range(n) if not upper or i <= j]
    pos = {u: k for k, u in enumerate(units)}
    table = [[pos[(i, l)] if j == k else None for (k, l) in units] for (i, j) in units]
    return adjoin_zero(table), [f"e{i + 1}{j + 1}" for i, j in units]


def truncated_paths(vertices: int, arrows: Sequence[tuple[int, int]], max_length: int) -> tuple[np.ndarray, list[str]]:
    """Paths of a quiver up to a given length (vertices are the trivial paths)."""
    paths: list[tuple] = [(v,) for v in range(vertices)]
    frontier = [((s, t), (k,)) for k, (s, t) in enumerate(arrows)]
    for _ in range(max_length):
        paths.extend(p for p in frontier)
        frontier = [((s, arrows[k][1]), word + (k,)) for (s, t), word in frontier
                    for k in range(len(arrows)) if arrows[k][0] == t]

    def ends(p):
        return (p[0], p[0]) if len(p) == 1 else p[0]

    def word(p):
        return () if len(p) == 1 else p[1]

    pos = {p: k for k, p in enumerate(paths)}

    def compose(p, q):
        (s1, t1), (s2, t2) = ends(p), ends(q)
        if t1 != s2:
            return None
        w = word(p) + word(q)
        if not w:
            return pos[p]
        r = ((s1, t2), w)
        return pos.get(r)

    table = [[compose(p, q) for q in paths] for p in paths]
    names = [f"v{p[0]}" if len(p) == 1 else "a" + "".join(str(k) for k in p[1]) for p in paths]
    return adjoin_zero(table), names


def cyclic_group_semigroup(n: int) -> tuple[np.ndarray, list[str]]:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return adjoin_zero(table), [f"g{i}" for i in range(n)]


def partial_map_semigroup(gens: Sequence[Sequence[int | None]], max_elements: int,
                          max_rank: int | None = None) -> tuple[np.ndarray, list[str]] | None:
    """Semigroup generated by partial maps (composition left to right).

    Maps of rank below ``max_rank`` (or the empty map) become zero.
    """
    def rank(f):
        return sum(v is not None for v in f)

    def comp(f, g):
        return tuple(None if f[i] is None else g[f[i]] for i in range(len(f)))

    def dead(f):
        return rank(f) == 0 or (max_rank is not None and rank(f) < max_rank)

    elems = []
    for g in gens:
        g = tuple(g)
        if not dead(g) and g not in elems:
            elems.append(g)
    i = 0
    while i < len(elems):
        for j in range(len(elems)):
            for h in (comp(elems[i], elems[j]), comp(elems[j], elems[i])):
                if not dead(h) and h not in elems:
                    elems.append(h)
                    if len(elems) > max_elements:
                        return None
        i += 1
    if not elems:
        return None
    pos = {f: k for k, f in enumerate(elems)}
    table = [[pos.get(comp(f, g)) for g in elems] for f in elems]
    names = ["m" + "".join("_" if v is None else str(v) for v in f) for f in elems]
    return adjoin_zero(table), names


# semigroup anneids -------------------------------------------------------------


def semigroup_anneid(mul: np.ndarray, gamma_basis: Sequence[int], p: int = 2, name: str = "",
                     nobusawa: bool = False, names: Sequence[str] | None = None) -> GammaAnneid:
    """Contracted semigroup algebra over F_p as a gamma anneid with Gamma spanned by gamma_basis."""
    k = mul.shape[0] - 1
    gamma_basis = list(gamma_basis)
    A = Homogroupoid.from_classes([FiniteAbelianGroup.cyclic(p)] * k)
    G = Homogroupoid.from_classes([FiniteAbelianGroup.cyclic(p)] * len(gamma_basis))

    def decompose(label):
        for i, c in enumerate(label):
            if c:
                return i + 1, c
        return 0, 0

    def a_index(s, c):
        if s == 0 or c % p == 0:
            return 0
        v = [0] * k
        v[s - 1] = c % p
        return A.index[tuple(v)]

    Adec = [decompose(lab) for lab in A.labels]
    Gdec = [decompose(lab) for lab in G.labels]
    gsem = [0] + gamma_basis
    T = np.zeros((len(A), len(G), len(A)), dtype=np.int64)
    for x, (s, c) in enumerate(Adec):
        for al, (gi, d) in enumerate(Gdec):
            for y, (t, c2) in enumerate(Adec):
                if s and gi and t:
                    T[x, al, y] = a_index(mul[mul[s, gsem[gi]], t], c * d * c2)
    C = None
    if nobusawa:
        gpos = {g: i + 1 for i, g in enumerate(gamma_basis)}

        def g_index(s, c):
            if s == 0 or c % p == 0:
                return 0
            if s not in gpos:
                raise StructureError("gamma basis is not closed under the cotriple")
            v = [0] * len(gamma_basis)
            v[gpos[s] - 1] = c % p
            return G.index[tuple(v)]

        C = np.zeros((len(G), len(A), len(G)), dtype=np.int64)
        for al, (gi, d) in enumerate(Gdec):
            for x, (s, c) in enumerate(Adec):
                for be, (gj, d2) in enumerate(Gdec):
                    if gi and s and gj:
                        C[al, x, be] = g_index(mul[mul[gsem[gi], s], gsem[gj]], d * c * d2)
    a = GammaAnneid(A, G, T, C, name=name)
    if names is not None:
        a.basis_names = list(names)
    return a


# named examples ------------------------------------------------------------------


def sd3() -> GammaAnneid:
    """A = {0, s, i}, G = {0, g}: sgs = s, sgi = igs = i, igi = 0."""
    mul = adjoin_zero([[0, 1], [1, None]])
    return semigroup_anneid(mul, [1], name="sd3")


def semidirect_f2() -> GradedGammaRing:
    S = FiniteRing.zn(2)
    I = FiniteAbelianGroup((2,))
    si = np.array([[0, 0], [0, 1]])
    return build_semidirect_sum(S, I, si, si.T.copy(), np.zeros((2, 2), dtype=np.int64), name="semidirect")


def matrix_m2f2() -> GradedGammaRing:
    F2 = FiniteRing.zn(2)
    ident = F2.mul  # F_2 acting on itself
    ctx = MoritaContext(F2, F2, F2.group, F2.group, ident, ident, ident, ident, ident, ident)
    return build_generalized_matrix_ring(ctx, name="matrix_m2f2")


def dual_numbers_f2() -> GradedGammaRing:
    """F_2[x]/(x^2) graded by {0,1} and {0,x}, with Gamma = R."""
    G = FiniteAbelianGroup((2, 2))
    ring = FiniteRing.from_function(G, lambda a, b: (a[0] * b[0], a[0] * b[1] + a[1] * b[0]))
    grad = Graduation.from_parts(G, [[(0, 0), (1, 0)], [(0, 0), (0, 1)]], ["one", "x"])
    return gamma_from_graded_ring(ring, grad, name="dual_numbers")


def corner_ring(dim: int = 3) -> GradedGammaRing:
    """[[F2, V], [W, 0]] with V = W = F2^dim, scalar actions and zero pairings."""
    F2 = FiniteRing.zn(2)
    S = FiniteRing.zero_ring(FiniteAbelianGroup(()))
    V = FiniteAbelianGroup((2,) * dim)
    n = len(V)
    scalar = np.array([[0] * n, list(range(n))], dtype=np.int64)
    z = lambda r, c: np.zeros((r, c), dtype=np.int64)
    ctx = MoritaContext(F2, S, V, V, scalar, z(n, 1), z(1, n), scalar.T.copy(), z(n, n), z(n, n))
    return build_generalized_matrix_ring(ctx, name=f"corner{2 * n}")


def trivial_anneid() -> GammaAnneid:
    return GammaAnneid.zero(Homogroupoid.trivial(), Homogroupoid.trivial(), name="trivial")


def zero_product(class_orders: Sequence[Sequence[int]] = ((2,), (2,)), g_orders: Sequence[Sequence[int]] = ((2,),),
                 name: str = "zero_product") -> GammaAnneid:
    A = Homogroupoid.from_classes([FiniteAbelianGroup(tuple(o)) for o in class_orders])
    G = Homogroupoid.from_classes([FiniteAbelianGroup(tuple(o)) for o in g_orders])
    return GammaAnneid.zero(A, G, name=name)


def named_fixtures() -> list[Entry]:
    out = [Entry("sd3", "fixture", sd3())]
    for g in (semidirect_f2(), matrix_m2f2(), dual_numbers_f2()):
        out.append(Entry(g.name, "fixture", anneid_from_graded(g), g))
    out.append(Entry("zero_product", "fixture", zero_product()))
    return out


# seeded families -----------------------------------------------------------------


def _subsets(n: int, max_size: int) -> Iterator[tuple[int, ...]]:
    for r in range(1, max_size + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def structured_entries(max_size: int = 8, max_gamma: int = 4) -> list[Entry]:
    """Deterministic families: matrix units, triangular units, paths, cyclic groups."""
    out = []
    tables = []
    for n in (1, 2):
        tables.append((f"units{n}", *matrix_units(n)))
        tables.append((f"upper{n}", *matrix_units(n, upper=True)))
    tables.append(("upper3", *matrix_units(3, upper=True)))
    tables.append(("path_a2", *truncated_paths(2, [(0, 1)], 1)))
    tables.append(("path_loop", *truncated_paths(1, [(0, 0)], 2)))
    tables.append(("path_loop3", *truncated_paths(1, [(0, 0)], 3)))
    tables.append(("path_a3", *truncated_paths(3, [(0, 1), (1, 2)], 2)))
    tables.append(("path_kronecker", *truncated_paths(2, [(0, 1), (0, 1)], 1)))
    tables.append(("path_cycle2", *truncated_paths(2, [(0, 1), (1, 0)], 1)))
    for n in (2, 3, 4, 5):
        tables.append((f"cyclic{n}", *cyclic_group_semigroup(n)))
    for tname, mul, names in tables:
        k = mul.shape[0] - 1
        for p in (2, 3):
            if 1 + (p - 1) * k > max_size:
                continue
            for gb in _subsets(k, 3):
                if (p ** len(gb)) > max_gamma * (2 if p == 3 else 1) or 1 + (p - 1) * len(gb) > max_gamma:
                    continue
                a = semigroup_anneid(mul, gb, p, name=f"{tname}_p{p}_g{''.join(names[g - 1] for g in gb)}",
                                     names=names)
                out.append(Entry(a.name, tname.rstrip("0123456789"), a))
    return out


def random_partial_map_entries(count: int, rng: random.Random, max_size: int = 8,
                               max_gamma: int = 4) -> list[Entry]:
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        points = rng.choice((2, 3))
        gens = [[rng.choice([None] + list(range(points))) for _ in range(points)] for _ in range(rng.choice((1, 2)))]
        res = partial_map_semigroup(gens, max_size - 1, max_rank=rng.choice((None, 1, 2)))
        if res is None:
            continue
        mul, names = res
        k = mul.shape[0] - 1
        p = 3 if (1 + 2 * k <= max_size and rng.random() < 0.25) else 2
        if 1 + (p - 1) * k > max_size:
            continue
        g_size = rng.randint(1, min(k, 3 if p == 2 else 1))
        if 1 + (p - 1) * g_size > max_gamma:
            continue
        gb = sorted(rng.sample(range(1, k + 1), g_size))
        a = semigroup_anneid(mul, gb, p, name=f"pmap{len(out)}", names=names)
        out.append(Entry(a.name, "partial_maps", a))
    return out


def random_table_entries(count: int, rng: random.Random, max_basis: int = 4, max_gamma_basis: int = 2,
                         density: float = 0.3) -> list[Entry]:
    """Random basis-to-basis ternary tables over F_2, kept when they verify as anneids."""
    out = []
    attempts = 0
    while len(out) < count and attempts < 200 * count:
        attempts += 1
        k = rng.randint(1, max_basis)
        m = rng.randint(1, max_gamma_basis)
        A = Homogroupoid.from_classes([FiniteAbelianGroup((2,))] * k)
        G = Homogroupoid.from_classes([FiniteAbelianGroup((2,))] * m)
        T = np.zeros((len(A), len(G), len(A)), dtype=np.int64)
        for x in range(1, len(A)):
            for al in range(1, len(G)):
                for y in range(1, len(A)):
                    if rng.random() < density:
                        T[x, al, y] = rng.randrange(1, len(A))
        a = GammaAnneid(A, G, T, name=f"rand{len(out)}")
        if verify_anneid(a).passed:
            out.append(Entry(a.name, "random_table", a))
    return out


def semidirect_entries() -> list[Entry]:
    """Semidirect sums F_2 + I with I a two-dimensional F_2-algebra (classes Z2 and Z2 x Z2)."""
    out = []
    V = FiniteAbelianGroup((2, 2))
    S = FiniteRing.zn(2)
    n = len(V)
    seen = 0
    # bilinear products on F_2^2 given by images of the basis pairs
    basis = [1, 2]  # ids of (0,1) and (1,0)
    for images in itertools.product(range(n), repeat=4):
        img = dict(zip(itertools.product(basis, basis), images))
        ii = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                acc = 0
                for bx in basis:
                    if not (x & bx):
                        continue
                    for by in basis:
                        if y & by:
                            acc ^= img[(bx, by)]
                ii[x, y] = acc
        if not is_associative(ii):
            continue
        si = np.array([[0] * n, list(range(n))], dtype=np.int64)
        try:
            g = build_semidirect_sum(S, V, si, si.T.copy(), ii, name=f"sdv4_{seen}")
        except StructureError:
            continue
        out.append(Entry(g.name, "semidirect_v4", anneid_from_graded(g), g))
        seen += 1
        if seen >= 12:
            break
    return out


def zero_product_entries() -> list[Entry]:
    shapes = [((2,),), ((3,),), ((4,),), ((2, 2),), ((2,), (2,)), ((2,), (3,)), ((2,), (2,), (2,))]
    return [Entry(f"zero{k}", "zero_product", zero_product(s, ((2,),), name=f"zero{k}"))
            for k, s in enumerate(shapes)]


def nobusawa_entries() -> list[Entry]:
    out = []
    for tname, (mul, names) in (("units1", matrix_units(1)), ("units2", matrix_units(2)),
                                ("cyclic2", cyclic_group_semigroup(2)), ("cyclic3", cyclic_group_semigroup(3))):
        k = mul.shape[0] - 1
        a = semigroup_anneid(mul, list(range(1, k + 1)), 2, name=f"{tname}_nobusawa", nobusawa=True, names=names)
        if verify_anneid(a).passed:
            out.append(Entry(a.name, "nobusawa", a))
    g = dual_numbers_f2()
    out.append(Entry(g.name, "nobusawa", anneid_from_graded(g), g))
    return out


def build_corpus(seed: int = 0, max_size: int = 8, max_gamma: int = 4, random_count: int = 60) -> list[Entry]:
    """Fixtures, structured families and seeded random anneids within the size bounds."""
    rng = random.Random(seed)
    entries = [Entry("trivial", "trivial", trivial_anneid())]
    entries += named_fixtures() + zero_product_entries() + nobusawa_entries()
    entries += structured_entries(max_size, max_gamma)
    entries += semidirect_entries()
    entries += random_partial_map_entries(random_count, rng, max_size, max_gamma)
    entries += random_table_entries(random_count // 2, rng)
    kept = [e for e in entries if len(e.anneid.A) <= max_size and len(e.anneid.G) <= max_gamma]
    names = set()
    out = []
    for e in kept:
        if e.name in names:
            continue
        names.add(e.name)
        out.append(e)
    return out
