"""Finite posets, bounded distributive lattices and up-set families.

Elements are dense integer indices and subsets are Python ``int`` bit-vectors
(bit ``i`` set means element ``i`` is a member).  Families of subsets are kept
in ascending numeric order of their bit-vectors, which makes every listing
deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CycleError, NoBounds, NotDistributive, NotLattice, SizeLimit

MAX_LATTICE_SIZE = 64


# ---------------------------------------------------------------- bit helpers

def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# ---------------------------------------------------------------------- posets

@dataclass(frozen=True)
class Poset:
    """A finite partial order stored as one up-set bit-vector per element.

    ``up[i]`` is the set of all ``j`` with ``i <= j``.
    """

    size: int
    up: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for i, u in enumerate(self.up):
            for j in bits(u):
                down[j] |= 1 << i
        return tuple(down)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq_matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.size)] for i in range(self.size)]

    def name(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def up_closure(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.up[i]
        return out

    def down_closure(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.down[i]
        return out

    def is_up_set(self, s: int) -> bool:
        return self.up_closure(s) == s

    def is_down_set(self, s: int) -> bool:
        return self.down_closure(s) == s

    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``(i, j)`` where ``j`` covers ``i``."""
        out = []
        for i in range(self.size):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Poset in which old element ``i`` becomes ``perm[i]``."""
        new_up = [0] * self.size
        for i, u in enumerate(self.up):
            new_up[perm[i]] = mask_of(perm[j] for j in bits(u))
        return Poset(self.size, tuple(new_up))

    def restrict(self, subset: int) -> tuple["Poset", list[int]]:
        """Induced subposet on ``subset`` plus the list of original indices."""
        members = list(bits(subset))
        pos = {x: k for k, x in enumerate(members)}
        up = tuple(mask_of(pos[j] for j in bits(self.up[x] & subset)) for x in members)
        labels = tuple(self.name(x) for x in members) if self.labels else None
        return Poset(len(members), up, labels), members


def build_poset(size: int, leq_pairs: Iterable[tuple[int, int]],
                labels: Sequence[str] | None = None) -> Poset:
    """Reflexive-transitive closure of ``leq_pairs``; raises CycleError if not antisymmetric."""
    up = [1 << i for i in range(size)]
    for a, b in leq_pairs:
        if not (0 <= a < size and 0 <= b < size):
            raise IndexError(f"pair ({a}, {b}) out of range for size {size}")
        up[a] |= 1 << b
    # Warshall on bit-vectors
    for k in range(size):
        bit_k = 1 << k
        uk = up[k]
        for i in range(size):
            if up[i] & bit_k:
                up[i] |= uk
    for i in range(size):
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise CycleError(f"elements {i} and {j} lie on a cycle")
    return Poset(size, tuple(up), tuple(labels) if labels is not None else None)


def chain(n: int) -> Poset:
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Poset:
    return build_poset(n, [])


# -------------------------------------------------------------------- lattices

@dataclass(frozen=True)
class FiniteDistributiveLattice:
    poset: Poset
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    bottom: int
    top: int

    @property
    def size(self) -> int:
        return self.poset.size

    def __len__(self) -> int:
        return self.poset.size

    def leq(self, a: int, b: int) -> bool:
        return self.poset.leq(a, b)

    def name(self, i: int) -> str:
        return self.poset.name(i)

    @property
    def names(self) -> list[str]:
        return [self.name(i) for i in range(self.size)]

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        for x in xs:
            acc = self.meet[acc][x]
        return acc

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = self.join[acc][x]
        return acc

    def complement(self, x: int) -> int | None:
        for y in range(self.size):
            if self.meet[x][y] == self.bottom and self.join[x][y] == self.top:
                return y
        return None

    def is_boolean(self) -> bool:
        return all(self.complement(x) is not None for x in range(self.size))

    @cached_property
    def implication(self) -> tuple[tuple[int, ...], ...]:
        from .algebra import heyting_implication
        return heyting_implication(self)

    def principal_filter(self, a: int) -> int:
        return self.poset.up[a]

    def principal_ideal(self, a: int) -> int:
        return self.poset.down[a]


def lattice_from_poset(p: Poset, check_distributive: bool = True) -> FiniteDistributiveLattice:
    """Meet and join tables of ``p``; validates lattice, bounds and distributivity."""
    n = p.size
    if n > MAX_LATTICE_SIZE:
        raise SizeLimit(f"lattices are limited to {MAX_LATTICE_SIZE} elements, got {n}")
    if n == 0:
        raise NoBounds("the empty poset has no bounds")
    by_down = {d: i for i, d in enumerate(p.down)}
    by_up = {u: i for i, u in enumerate(p.up)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            g = by_down.get(p.down[a] & p.down[b])
            if g is None:
                raise NotLattice(a, b, "greatest lower bound")
            l = by_up.get(p.up[a] & p.up[b])
            if l is None:
                raise NotLattice(a, b, "least upper bound")
            meet[a][b] = meet[b][a] = g
            join[a][b] = join[b][a] = l
    full = p.full
    bottom = next((i for i in range(n) if p.up[i] == full), None)
    top = next((i for i in range(n) if p.down[i] == full), None)
    if bottom is None or top is None:
        raise NoBounds("missing bottom or top")
    if check_distributive:
        for x in range(n):
            mx = meet[x]
            for y in range(n):
                for z in range(n):
                    if mx[join[y][z]] != join[mx[y]][mx[z]]:
                        raise NotDistributive((x, y, z))
    return FiniteDistributiveLattice(p, tuple(map(tuple, meet)), tuple(map(tuple, join)),
                                     bottom, top)


def join_irreducibles(L: FiniteDistributiveLattice) -> int:
    """Bit-vector of the join-irreducible elements of ``L``."""
    out = 0
    for x in range(L.size):
        if x == L.bottom:
            continue
        below = L.poset.down[x] & ~(1 << x)
        # x is join-irreducible iff the join of everything strictly below it is not x
        if L.join_all(bits(below)) != x:
            out |= 1 << x
    return out


def meet_irreducibles(L: FiniteDistributiveLattice) -> int:
    out = 0
    for x in range(L.size):
        if x == L.top:
            continue
        above = L.poset.up[x] & ~(1 << x)
        if L.meet_all(bits(above)) != x:
            out |= 1 << x
    return out


# ------------------------------------------------------------ subset families

@dataclass(frozen=True)
class SubsetFamily:
    universe: Poset
    members: tuple[int, ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.members)})

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, s: int) -> bool:
        return s in self._index

    def index(self, s: int) -> int:
        return self._index[s]

    def label(self, s: int) -> str:
        return "{" + ",".join(self.universe.name(i) for i in bits(s)) + "}"

    def to_lattice(self) -> FiniteDistributiveLattice:
        """The family ordered by inclusion, with ∩ and ∪ as meet and join."""
        ms = self.members
        n = len(ms)
        up = tuple(mask_of(j for j in range(n) if ms[i] & ~ms[j] == 0) for i in range(n))
        labels = tuple(self.label(m) for m in ms)
        poset = Poset(n, up, labels)
        idx = self._index
        meet = tuple(tuple(idx[a & b] for b in ms) for a in ms)
        join = tuple(tuple(idx[a | b] for b in ms) for a in ms)
        return FiniteDistributiveLattice(poset, meet, join, idx[min(ms)], idx[max(ms, key=popcount)])


def up_sets(p: Poset) -> SubsetFamily:
    """All up-closed subsets of ``p`` in ascending bit-vector order."""
    # visit elements so that everything strictly above x is decided before x
    order = sorted(range(p.size), key=lambda i: -popcount(p.down[i]))
    found: list[int] = []

    def extend(k: int, current: int) -> None:
        if k == len(order):
            found.append(current)
            return
        x = order[k]
        extend(k + 1, current)
        if p.up[x] & ~(1 << x) & ~current == 0:
            extend(k + 1, current | 1 << x)

    extend(0, 0)
    return SubsetFamily(p, tuple(sorted(found)))


def down_sets(p: Poset) -> SubsetFamily:
    full = p.full
    return SubsetFamily(p, tuple(sorted(full & ~u for u in up_sets(p).members)))


def count_up_sets(p: Poset, limit: int | None = None) -> int:
    order = sorted(range(p.size), key=lambda i: -popcount(p.down[i]))
    count = 0

    def extend(k: int, current: int) -> bool:
        nonlocal count
        if k == len(order):
            count += 1
            return limit is not None and count > limit
        x = order[k]
        if extend(k + 1, current):
            return True
        if p.up[x] & ~(1 << x) & ~current == 0:
            return extend(k + 1, current | 1 << x)
        return False

    extend(0, 0)
    return count


def up_closure(p: Poset, s: int) -> int:
    return p.up_closure(s)


def down_closure(p: Poset, s: int) -> int:
    return p.down_closure(s)


# --------------------------------------------------------- isomorphism census

def canonical_form(p: Poset) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lexicographically least relabelled up-table and the permutation achieving it."""
    best = None
    best_perm = None
    n = p.size
    for perm in itertools.permutations(range(n)):
        up = [0] * n
        for i, u in enumerate(p.up):
            m = 0
            for j in bits(u):
                m |= 1 << perm[j]
            up[perm[i]] = m
        key = tuple(up)
        if best is None or key < best:
            best, best_perm = key, perm
    return best, best_perm


def _extensions(p: Poset) -> Iterator[Poset]:
    """Every poset obtained by adding one new maximal element to ``p``."""
    n = p.size
    for d in down_sets(p).members:
        up = list(p.up)
        for i in bits(d):
            up[i] |= 1 << n
        up.append(1 << n)
        yield Poset(n + 1, tuple(up))


def posets_up_to_iso(n: int) -> list[Poset]:
    """One canonical representative of every poset with exactly ``n`` points."""
    level = {(): Poset(0, ())}
    for _ in range(n):
        nxt = {}
        for p in level.values():
            for q in _extensions(p):
                key, _ = canonical_form(q)
                nxt.setdefault(key, Poset(q.size, key))
        level = nxt
    return [level[k] for k in sorted(level)]


def lattice_census(max_size: int) -> list[tuple[Poset, FiniteDistributiveLattice]]:
    """All distributive lattices with at most ``max_size`` elements, up to isomorphism.

    Each lattice is the up-set lattice of its poset of join-irreducibles; the
    list is ordered by lattice size and then by canonical poset form.
    """
    if max_size < 1:
        return []
    seen: dict[tuple, Poset] = {(): Poset(0, ())}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for p in frontier:
            for q in _extensions(p):
                if count_up_sets(q, max_size) > max_size:
                    continue
                key, _ = canonical_form(q)
                if key not in seen:
                    seen[key] = Poset(q.size, key)
                    nxt.append(seen[key])
        frontier = nxt
    out = []
    for key, p in seen.items():
        L = up_sets(p).to_lattice()
        out.append((p, L))
    out.sort(key=lambda pl: (pl[1].size, pl[0].size, pl[0].up))
    return out
