"""Congruences of finite tense algebras, computed two independent ways.

The dual route enumerates the closed tPS-subsets Y of the prime-filter space
and forms Θ(Y); the brute-force route closes principal congruences under the
algebra's operations and joins them.  Simplicity and subdirect irreducibility
are decided on the dual side and cross-checked against the brute-force lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import (OPERATORS, TdlAlgebra, TenseFilter, TenseIdeal, all_tense_filters,
                      all_tense_ideals, classify, d_invariants, d_limit, dhat_limit,
                      heyting_implication, is_tense_filter, is_tense_ideal)
from .duality import TdlFrame, dual_space, prime_filter_space, tense_relation
from .errors import NotTenseFilter, NotTenseIdeal, NotTpsSet, SizeLimit
from .order import FiniteDistributiveLattice, bits, mask_of

MAX_TPS_POINTS = 20
MAX_LATTICE_ALGEBRA = 10
MAX_BRUTEFORCE = 8


# ---------------------------------------------------------------- partitions

def canonical_partition(labels: Sequence) -> tuple[int, ...]:
    """Relabel blocks by order of first appearance."""
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in labels)


@dataclass(frozen=True)
class Congruence:
    algebra: TdlAlgebra
    partition: tuple[int, ...]

    def related(self, a: int, b: int) -> bool:
        return self.partition[a] == self.partition[b]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, b in enumerate(self.partition):
            out.setdefault(b, []).append(x)
        return list(out.values())

    def refines(self, other: "Congruence") -> bool:
        """True when self ⊆ other as relations."""
        return _refines(self.partition, other.partition)

    @property
    def is_identity(self) -> bool:
        return len(set(self.partition)) == len(self.partition)

    @property
    def is_total(self) -> bool:
        return len(set(self.partition)) <= 1

    def describe(self) -> str:
        A = self.algebra
        return " | ".join(",".join(A.name(x) for x in block) for block in self.blocks())


def _refines(p: Sequence[int], q: Sequence[int]) -> bool:
    n = len(p)
    return all(q[a] == q[b] for a in range(n) for b in range(a + 1, n) if p[a] == p[b])


def is_compatible(partition: Sequence[int], unary: Iterable[Sequence[int]],
                  binary: Iterable[Sequence[Sequence[int]]]) -> bool:
    n = len(partition)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if partition[a] == partition[b]]
    for f in unary:
        if any(partition[f[a]] != partition[f[b]] for a, b in pairs):
            return False
    for g in binary:
        for a, b in pairs:
            for c in range(n):
                if partition[g[a][c]] != partition[g[b][c]] or partition[g[c][a]] != partition[g[c][b]]:
                    return False
    return True


def _signature(A: TdlAlgebra, heyting: bool = False):
    L = A.lattice
    unary = [A.op(name) for name in OPERATORS]
    binary = [L.meet, L.join]
    if heyting:
        binary.append(A.imp)
    return unary, binary


# ------------------------------------------------------------------ tPS-sets

@dataclass(frozen=True)
class TpsSubsetReport:
    subset: int
    is_tps: bool
    witness: tuple[str, int, int] | None = None


def is_tps_subset(X: TdlFrame, Y: int) -> TpsSubsetReport:
    """Check tc1 and tc2 for every pair of points."""
    p = X.poset
    for x in bits(Y):
        Rx, Rix = X.R[x] & Y, X.Rinv[x] & Y
        # tc1: x ∈ R⁻¹(y) ∩ Y, i.e. y ∈ R(x) with x ∈ Y
        for y in bits(X.R[x]):
            if not (Rx & p.down[y] and Rx & p.up[y]):
                return TpsSubsetReport(Y, False, ("tc1", x, y))
        # tc2: x ∈ R(y) ∩ Y, i.e. y ∈ R⁻¹(x) with x ∈ Y
        for y in bits(X.Rinv[x]):
            if not (Rix & p.down[y] and Rix & p.up[y]):
                return TpsSubsetReport(Y, False, ("tc2", x, y))
    report = TpsSubsetReport(Y, True)
    if p.is_up_set(Y) or p.is_down_set(Y):
        _check_closed_characterisations(X, Y, report.is_tps)
    return report


def _check_closed_characterisations(X: TdlFrame, Y: int, verdict: bool) -> None:
    tc34 = all(X.R[x] & ~Y == 0 and X.Rinv[x] & ~Y == 0 for x in bits(Y))
    meet_form = Y == X.box(Y) & Y & X.past_box(Y)
    join_form = Y == X.diamond(Y) | Y | X.past_diamond(Y)
    assert verdict == tc34 == meet_form == join_form, "closed tPS-set characterisations disagree"


@dataclass(frozen=True)
class TpsFamily:
    space: TdlFrame
    members: tuple[int, ...]
    upward: tuple[int, ...]
    downward: tuple[int, ...]


@lru_cache(maxsize=4096)
def all_tps_subsets(X: TdlFrame) -> TpsFamily:
    if X.size > MAX_TPS_POINTS:
        raise SizeLimit(f"tPS-set enumeration is limited to {MAX_TPS_POINTS} points")
    members = tuple(Y for Y in range(1 << X.size) if is_tps_subset(X, Y).is_tps)
    p = X.poset
    return TpsFamily(X, members,
                     tuple(Y for Y in members if p.is_up_set(Y)),
                     tuple(Y for Y in members if p.is_down_set(Y)))


# --------------------------------------------------------------- Θ(Y) route

@lru_cache(maxsize=4096)
def _sigma_masks(A: TdlAlgebra) -> tuple[int, ...]:
    """σ(a) as a bit-vector over the points of the prime-filter space."""
    points = prime_filter_space(A).points
    return tuple(mask_of(k for k, T in enumerate(points) if T >> a & 1) for a in range(A.size))


def congruence_from_subset(A: TdlAlgebra, Y: int, X: TdlFrame | None = None) -> Congruence:
    X = X or dual_space(A)
    if not is_tps_subset(X, Y).is_tps:
        raise NotTpsSet(f"subset {Y:#b} is not a tPS-set")
    sig = _sigma_masks(A)
    theta = Congruence(A, canonical_partition([s & Y for s in sig]))
    assert is_compatible(theta.partition, *_signature(A)), "Θ(Y) must be a congruence"
    return theta


@dataclass(frozen=True)
class CongruenceLattice:
    algebra: TdlAlgebra
    congruences: tuple[Congruence, ...]
    subsets: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.congruences)

    def partitions(self) -> set[tuple[int, ...]]:
        return {c.partition for c in self.congruences}


def congruence_lattice(A: TdlAlgebra) -> CongruenceLattice:
    """{Θ(Y) : Y closed tPS-set}, with the anti-isomorphism to (C_t, ⊆) verified."""
    if A.size > MAX_LATTICE_ALGEBRA:
        raise SizeLimit(f"congruence lattices are limited to {MAX_LATTICE_ALGEBRA} elements")
    X = dual_space(A)
    family = all_tps_subsets(X)
    thetas = [congruence_from_subset(A, Y, X) for Y in family.members]
    assert len({t.partition for t in thetas}) == len(thetas), "Θ must be injective"
    for Y, tY in zip(family.members, thetas):
        for Z, tZ in zip(family.members, thetas):
            assert (Y & ~Z == 0) == tZ.refines(tY), "Θ must reverse inclusion"
    return CongruenceLattice(A, tuple(thetas), family.members)


# ---------------------------------------------------------- brute force route

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def partition(self) -> tuple[int, ...]:
        return canonical_partition([self.find(x) for x in range(len(self.parent))])


def generated_congruence(n: int, pairs: Iterable[tuple[int, int]], unary, binary) -> tuple[int, ...]:
    """Least congruence containing ``pairs`` for the given operation tables."""
    uf = _UnionFind(n)
    work = list(pairs)
    while work:
        a, b = work.pop()
        if not uf.union(a, b):
            continue
        for f in unary:
            work.append((f[a], f[b]))
        for g in binary:
            for c in range(n):
                work.append((g[a][c], g[b][c]))
                work.append((g[c][a], g[c][b]))
    return uf.partition()


def _join(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    uf = _UnionFind(len(p))
    for part in (p, q):
        first: dict[int, int] = {}
        for x, b in enumerate(part):
            uf.union(first.setdefault(b, x), x)
    return uf.partition()


def all_congruences(n: int, unary, binary) -> list[tuple[int, ...]]:
    """Every congruence of a finite algebra given by its operation tables."""
    principal = {generated_congruence(n, [(a, b)], unary, binary)
                 for a in range(n) for b in range(a + 1, n)}
    found = {tuple(range(n))} | principal
    frontier = set(found)
    while frontier:
        new = set()
        for p in frontier:
            for q in principal:
                j = _join(p, q)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda p: (-len(set(p)), p))


@lru_cache(maxsize=4096)
def _partitions(A: TdlAlgebra, heyting: bool) -> tuple[tuple[int, ...], ...]:
    return tuple(all_congruences(A.size, *_signature(A, heyting)))


def congruences_bruteforce(A: TdlAlgebra, heyting: bool = False) -> list[Congruence]:
    """Congruences found by closing principal congruences under joins.

    With ``heyting`` the signature also contains the relative pseudocomplement.
    """
    if A.size > MAX_BRUTEFORCE:
        raise SizeLimit(f"brute-force congruences are limited to {MAX_BRUTEFORCE} elements")
    return [Congruence(A, p) for p in _partitions(A, heyting)]


# ---------------------------------------------------- filters, ideals, ρ, σ

def sigma_of_filter(A: TdlAlgebra, S: int) -> int:
    points = prime_filter_space(A).points
    return mask_of(k for k, T in enumerate(points) if S & ~T == 0)


def sigma_of_ideal(A: TdlAlgebra, I: int) -> int:
    points = prime_filter_space(A).points
    return mask_of(k for k, T in enumerate(points) if not T & I)


def rho_of_upset(A: TdlAlgebra, Y: int) -> int:
    """{a : Y ⊆ σ(a)}, i.e. the intersection of the prime filters in Y."""
    points = prime_filter_space(A).points
    out = (1 << A.size) - 1
    for k in bits(Y):
        out &= points[k]
    return out


def rho_of_downset(A: TdlAlgebra, Z: int) -> int:
    """The complement of the union of the prime filters in Z."""
    points = prime_filter_space(A).points
    union = 0
    for k in bits(Z):
        union |= points[k]
    return ((1 << A.size) - 1) & ~union


def _members(S) -> int:
    return S.members if isinstance(S, (TenseFilter, TenseIdeal)) else S


def filter_congruence(A: TdlAlgebra, S: TenseFilter | int) -> Congruence:
    """Θ_S: a ≡ b iff a ∧ s = b ∧ s for some s ∈ S."""
    S = _members(S)
    if not is_tense_filter(A, S):
        raise NotTenseFilter(f"{S:#b} is not a tense filter")
    L = A.lattice
    n = A.size
    uf = _UnionFind(n)
    for a in range(n):
        for b in range(n):
            if any(L.meet[a][s] == L.meet[b][s] for s in bits(S)):
                uf.union(a, b)
    theta = Congruence(A, uf.partition())
    assert is_compatible(theta.partition, *_signature(A))
    return theta


def ideal_congruence(A: TdlAlgebra, I: TenseIdeal | int) -> Congruence:
    """Θ_I: a ≡ b iff a ∨ i = b ∨ i for some i ∈ I."""
    I = _members(I)
    if not is_tense_ideal(A, I):
        raise NotTenseIdeal(f"{I:#b} is not a tense ideal")
    L = A.lattice
    n = A.size
    uf = _UnionFind(n)
    for a in range(n):
        for b in range(n):
            if any(L.join[a][i] == L.join[b][i] for i in bits(I)):
                uf.union(a, b)
    theta = Congruence(A, uf.partition())
    assert is_compatible(theta.partition, *_signature(A))
    return theta


# ---------------------------------------------------------- simple and SI

@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    precheck_fired: bool
    tps_sets: tuple[int, ...]
    limits_trivial: bool
    filters_trivial: bool
    fixed_points_trivial: bool


def _simplicity_criteria(A: TdlAlgebra) -> tuple[bool, bool, bool]:
    zero, one = A.zero, A.one
    middle = [a for a in range(A.size) if a not in (zero, one)]
    b = all(d_limit(A, a) == zero and dhat_limit(A, a) == one for a in middle)
    everything = (1 << A.size) - 1
    filters = {f.members for f in all_tense_filters(A)}
    ideals = {i.members for i in all_tense_ideals(A)}
    c = filters == {everything, 1 << one} and ideals == {everything, 1 << zero}
    d = d_invariants(A) == (1 << zero | 1 << one)
    return b, c, d


def is_simple(A: TdlAlgebra) -> SimplicityVerdict:
    """Simple iff the only closed tPS-sets are ∅ and the whole space.

    The trivial one-element algebra has a single congruence and is not simple.
    """
    fixed = d_invariants(A)
    precheck = fixed != (1 << A.zero | 1 << A.one)
    X = dual_space(A)
    family = all_tps_subsets(X)
    simple = A.size > 1 and set(family.members) == {0, X.poset.full}
    assert not (precheck and simple), "A^d ≠ {0,1} must rule out simplicity"
    return SimplicityVerdict(simple, precheck, family.members, *_simplicity_criteria(A))


@dataclass(frozen=True)
class SIVerdict:
    subdirectly_irreducible: bool
    greatest_subset: int | None
    monolith: Congruence | None
    diagnostics: str | None = None


def is_subdirectly_irreducible(A: TdlAlgebra) -> SIVerdict:
    X = dual_space(A)
    family = all_tps_subsets(X)
    full = X.poset.full
    proper = [Y for Y in family.members if Y != full]
    if not proper:
        return SIVerdict(False, None, None, "no proper closed tPS-set (trivial algebra)")
    maximal = [Y for Y in proper if not any(Z != Y and Y & ~Z == 0 for Z in proper)]
    if len(maximal) != 1:
        return SIVerdict(False, None, None)
    Z = maximal[0]
    assert all(Y & ~Z == 0 for Y in proper)
    return SIVerdict(True, Z, congruence_from_subset(A, Z, X))


def si_from_congruences(partitions: Iterable[Sequence[int]]) -> bool:
    """A least congruence above the identity exists among ``partitions``."""
    parts = [tuple(p) for p in partitions]
    if not parts:
        return False
    n = len(parts[0])
    nontrivial = [p for p in parts if len(set(p)) < n]
    if not nontrivial:
        return False
    return any(all(_refines(m, p) for p in nontrivial) for m in nontrivial)


# --------------------------------------------------------- subclass reports

@dataclass
class SubclassReport:
    boolean: dict[str, bool] | None = None
    heyting: dict[str, bool] = field(default_factory=dict)
    demorgan: dict | None = None

    def consistent(self) -> bool:
        ok = True
        if self.boolean is not None:
            b = self.boolean
            ok &= b["simple"] == b["d_limits_zero"] == b["filters_trivial"] == b["fixed_points_trivial"]
            ok &= b["si"] == b["d_limits_bounded"]
        h = self.heyting
        ok &= h["si_with_implication"] == h["greatest_proper_fixed_point"] == h["fixed_point_algebra_si"]
        if self.demorgan is not None:
            ok &= self.demorgan["preserves_R"]
        return bool(ok)


def _sub_lattice(L: FiniteDistributiveLattice, members: list[int]) -> FiniteDistributiveLattice:
    from .order import Poset
    pos = {x: k for k, x in enumerate(members)}
    up = tuple(mask_of(pos[y] for y in members if L.leq(x, y)) for x in members)
    poset = Poset(len(members), up, tuple(L.name(x) for x in members))
    meet = tuple(tuple(pos[L.meet[x][y]] for y in members) for x in members)
    join = tuple(tuple(pos[L.join[x][y]] for y in members) for x in members)
    return FiniteDistributiveLattice(poset, meet, join, pos[L.bottom], pos[L.top])


def de_morgan_space_map(A: TdlAlgebra) -> tuple[int, ...]:
    """g_A(S) = {x : ∼x ∉ S} as a permutation of the prime-filter points."""
    space = prime_filter_space(A)
    neg = A.neg
    out = []
    for S in space.points:
        image = mask_of(x for x in range(A.size) if not S >> neg[x] & 1)
        out.append(space.index(image))
    return tuple(out)


def subclass_reports(A: TdlAlgebra) -> SubclassReport:
    cls = classify(A)
    report = SubclassReport()
    one, zero = A.one, A.zero
    if cls.boolean and A.size > 1:
        simple = is_simple(A).simple
        si = is_subdirectly_irreducible(A).subdirectly_irreducible
        not_one = [a for a in range(A.size) if a != one]
        everything = (1 << A.size) - 1
        filters = {f.members for f in all_tense_filters(A)}
        ideals = {i.members for i in all_tense_ideals(A)}
        report.boolean = {
            "simple": simple,
            "d_limits_zero": all(d_limit(A, a) == zero for a in not_one),
            "filters_trivial": filters == {everything, 1 << one} and ideals == {everything, 1 << zero},
            "fixed_points_trivial": d_invariants(A) == (1 << zero | 1 << one),
            "si": si,
            "d_limits_bounded": any(all(A.lattice.leq(d_limit(A, a), b) for a in not_one)
                            for b in not_one),
        }
    # Heyting case: congruences in the signature with implication
    fixed = list(bits(d_invariants(A)))
    proper = [a for a in fixed if a != one]
    u_exists = any(all(A.lattice.leq(a, u) for a in proper) for u in proper)
    hcons = _partitions(A, True)
    Ad = _sub_lattice(A.lattice, fixed)
    ad_cons = all_congruences(Ad.size, [], [Ad.meet, Ad.join, heyting_implication(Ad)])
    report.heyting = {
        "si_with_implication": si_from_congruences(hcons),
        "greatest_proper_fixed_point": u_exists,
        "fixed_point_algebra_si": si_from_congruences(ad_cons),
        "si_without_implication": is_subdirectly_irreducible(A).subdirectly_irreducible,
    }
    if cls.demorgan:
        g = de_morgan_space_map(A)
        X = TdlFrame(prime_filter_space(A).poset, tense_relation(A))
        preserves = all(X.R[g[s]] >> g[t] & 1 for s, t in X.pairs())
        report.demorgan = {"g": g, "preserves_R": preserves}
    return report
