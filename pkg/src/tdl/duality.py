"""Finite dualities between tense algebras and relational structures.

On a finite poset the Priestley topology is discrete, so the clopen up-sets of
a space are simply all of its up-sets and the first tPS axiom is vacuous.
Both the topological duality (Φ, Ψ with σ_A, ε_X) and the discrete one
(canonical frame, complex algebra with h_A, k_X) are therefore computed on the
same concrete data; they differ only in which axioms are validated.

Points are indexed in ascending bit-vector order of the prime filters they
stand for, and up-sets of a frame in ascending bit-vector order, so every
isomorphism is an explicit table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from .algebra import OPERATORS, TdlAlgebra, build_tdl_algebra, is_lattice_filter
from .errors import NotHomomorphism, NotTpsFunction, TdlError
from .order import (FiniteDistributiveLattice, Poset, SubsetFamily, bits, join_irreducibles,
                    mask_of, up_sets)


# ---------------------------------------------------------------- relations

@dataclass(frozen=True)
class TdlFrame:
    """A finite poset with a binary relation; ``R[x]`` is the bit-vector R(x)."""

    poset: Poset
    R: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.poset.size

    @cached_property
    def Rinv(self) -> tuple[int, ...]:
        inv = [0] * self.size
        for x, succ in enumerate(self.R):
            for y in bits(succ):
                inv[y] |= 1 << x
        return tuple(inv)

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in bits(self.R[x])]

    def name(self, x: int) -> str:
        return self.poset.name(x)

    def image(self, s: int, inverse: bool = False) -> int:
        rel = self.Rinv if inverse else self.R
        out = 0
        for x in bits(s):
            out |= rel[x]
        return out

    # the four relational operators on subsets
    def box(self, Y: int) -> int:
        return mask_of(x for x in range(self.size) if self.R[x] & ~Y == 0)

    def past_box(self, Y: int) -> int:
        return mask_of(x for x in range(self.size) if self.Rinv[x] & ~Y == 0)

    def diamond(self, Y: int) -> int:
        return mask_of(x for x in range(self.size) if self.R[x] & Y)

    def past_diamond(self, Y: int) -> int:
        return mask_of(x for x in range(self.size) if self.Rinv[x] & Y)

    def operator(self, name: str):
        return {"G": self.box, "H": self.past_box, "F": self.diamond, "P": self.past_diamond}[name]


class TpsSpace(TdlFrame):
    """A finite tense Priestley space (a :class:`TdlFrame` checked against tPS2/tPS3)."""


def frame_from_pairs(p: Poset, pairs) -> TdlFrame:
    R = [0] * p.size
    for x, y in pairs:
        R[x] |= 1 << y
    return TdlFrame(p, tuple(R))


@dataclass
class FrameReport:
    failures: list[tuple[str, int]] = field(default_factory=list)
    starred_failures: list[tuple[str, int]] = field(default_factory=list)

    @property
    def is_frame(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.is_frame:
            return "all frame conditions hold"
        return "; ".join(f"{tag} fails at point {x}" for tag, x in self.failures)


def _frame_conditions(X: TdlFrame) -> tuple[list, list]:
    p = X.poset
    R, Ri = X.R, X.Rinv
    plain, starred = [], []
    for x in range(X.size):
        Rx, Rix = R[x], Ri[x]
        R_up = X.image(p.up[x])
        Ri_up = X.image(p.up[x], inverse=True)
        R_down = X.image(p.down[x])
        Ri_down = X.image(p.down[x], inverse=True)
        up_Rx, down_Rx = p.up_closure(Rx), p.down_closure(Rx)
        up_Rix, down_Rix = p.up_closure(Rix), p.down_closure(Rix)
        convex = Rx == up_Rx & down_Rx
        checks = [("K1", R_up & ~up_Rx == 0), ("K2", Ri_up & ~up_Rix == 0),
                  ("K3", R_down & ~down_Rx == 0), ("K4", Ri_down & ~down_Rix == 0),
                  ("K5", convex)]
        plain.extend((tag, x) for tag, ok in checks if not ok)
        stars = [("K1*", R_up == up_Rx), ("K2*", Ri_up == up_Rix), ("K5", convex)]
        starred.extend((tag, x) for tag, ok in stars if not ok)
    return plain, starred


def is_tdl_frame(p: Poset, R: Sequence[int] | TdlFrame) -> FrameReport:
    """Check K1-K5 and, independently, K1*, K2*, K5; the two verdicts must agree."""
    X = R if isinstance(R, TdlFrame) else TdlFrame(p, tuple(R))
    plain, starred = _frame_conditions(X)
    assert (not plain) == (not starred), "K1-K5 and K1*/K2*/K5 disagree"
    return FrameReport(plain, starred)


def frame_fast_check(X: TdlFrame) -> bool:
    """K1*, K2* and K5 only; used by enumerations."""
    p = X.poset
    R, Ri = X.R, X.Rinv
    for x in range(X.size):
        Rx = R[x]
        if Rx != p.up_closure(Rx) & p.down_closure(Rx):
            return False
        if X.image(p.up[x]) != p.up_closure(Rx):
            return False
        if X.image(p.up[x], inverse=True) != p.up_closure(Ri[x]):
            return False
    return True


def preserves_up_sets(X: TdlFrame, name: str) -> bool:
    op = X.operator(name)
    return all(X.poset.is_up_set(op(U)) for U in up_sets(X.poset))


def tps_report(X: TdlFrame) -> list[str]:
    """tPS2 and tPS3 failures (tPS1 is vacuous on a finite discrete space)."""
    p = X.poset
    out = []
    for x in range(X.size):
        if X.R[x] != p.up_closure(X.R[x]) & p.down_closure(X.R[x]):
            out.append(f"tPS2 at {X.name(x)}")
    for name in OPERATORS:
        if not preserves_up_sets(X, name):
            out.append(f"tPS3 for {name}")
    return out


# ------------------------------------------------------------- prime filters

@dataclass(frozen=True)
class PrimeFilterSpace:
    algebra: TdlAlgebra
    points: tuple[int, ...]

    @cached_property
    def poset(self) -> Poset:
        pts = self.points
        up = tuple(mask_of(j for j, T in enumerate(pts) if S & ~T == 0) for S in pts)
        L = self.algebra.lattice
        labels = tuple(_filter_label(L, S) for S in pts)
        return Poset(len(pts), up, labels)

    def index(self, S: int) -> int:
        return self.points.index(S)


def _filter_label(L: FiniteDistributiveLattice, S: int) -> str:
    # a prime filter of a finite lattice is principal; name it by its generator
    return "^" + L.name(L.meet_all(bits(S)))


def is_prime_filter(L: FiniteDistributiveLattice, S: int) -> bool:
    if not is_lattice_filter(L, S) or S >> L.bottom & 1:
        return False
    return all(S >> x & 1 or S >> y & 1 for x in range(L.size) for y in range(L.size)
               if S >> L.join[x][y] & 1)


def prime_filters_bruteforce(L: FiniteDistributiveLattice) -> list[int]:
    return [S for S in range(1 << L.size) if is_prime_filter(L, S)]


@lru_cache(maxsize=1024)
def _prime_points(L: FiniteDistributiveLattice) -> tuple[int, ...]:
    points = tuple(sorted(L.poset.up[j] for j in bits(join_irreducibles(L))))
    if L.size <= 10:
        assert list(points) == prime_filters_bruteforce(L)
    return points


def prime_filter_space(A: TdlAlgebra) -> PrimeFilterSpace:
    return PrimeFilterSpace(A, _prime_points(A.lattice))


def _preimage(table: Sequence[int], S: int) -> int:
    return mask_of(a for a, v in enumerate(table) if S >> v & 1)


def _relation(points: Sequence[int], box: Sequence[int], diamond: Sequence[int]) -> tuple[int, ...]:
    R = []
    for S in points:
        lo, hi = _preimage(box, S), _preimage(diamond, S)
        R.append(mask_of(k for k, T in enumerate(points) if lo & ~T == 0 and T & ~hi == 0))
    return tuple(R)


def tense_relation(A: TdlAlgebra, space: PrimeFilterSpace | None = None) -> tuple[int, ...]:
    """R_A as one bit-vector of successors per point of the prime-filter space."""
    space = space or prime_filter_space(A)
    R = _relation(space.points, A.G, A.F)
    R_past = _relation(space.points, A.H, A.P)
    assert TdlFrame(space.poset, R).Rinv == R_past, "R_HP must be the converse of R_GF"
    return R


@lru_cache(maxsize=4096)
def dual_space(A: TdlAlgebra) -> TpsSpace:
    space = prime_filter_space(A)
    X = TpsSpace(space.poset, tense_relation(A, space))
    problems = tps_report(X)
    if problems:
        raise TdlError("dual space violates " + ", ".join(problems))
    return X


def canonical_frame(A: TdlAlgebra) -> TdlFrame:
    space = prime_filter_space(A)
    X = TdlFrame(space.poset, tense_relation(A, space))
    report = is_tdl_frame(X.poset, X)
    if not report.is_frame:
        raise TdlError("canonical frame violates " + report.summary())
    return X


# --------------------------------------------------------- complex algebras

@lru_cache(maxsize=8192)
def upset_algebra(X: TdlFrame) -> TdlAlgebra:
    """The algebra of all up-sets with G_R, H_{R⁻¹}, F_R, P_{R⁻¹}."""
    family = up_sets(X.poset)
    L = family.to_lattice()
    tables = []
    for name in OPERATORS:
        op = X.operator(name)
        tables.append(tuple(family.index(op(U)) for U in family.members))
    return build_tdl_algebra(L, *tables)


complex_algebra = upset_algebra


def powerset_operators(X: TdlFrame) -> dict[str, list[int]]:
    """The four operators on every subset of X (the full complex algebra of the relation)."""
    return {name: [X.operator(name)(Y) for Y in range(1 << X.size)] for name in OPERATORS}


# ------------------------------------------------------------------- maps

@dataclass(frozen=True)
class AlgebraMap:
    source: TdlAlgebra
    target: TdlAlgebra
    table: tuple[int, ...]


@dataclass
class HomReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def is_tdl_homomorphism(f: AlgebraMap) -> HomReport:
    A, B, h = f.source, f.target, f.table
    LA, LB = A.lattice, B.lattice
    out = HomReport()
    if h[LA.bottom] != LB.bottom:
        out.failures.append("0 not preserved")
    if h[LA.top] != LB.top:
        out.failures.append("1 not preserved")
    for x in range(A.size):
        for y in range(A.size):
            if h[LA.meet[x][y]] != LB.meet[h[x]][h[y]]:
                out.failures.append(f"meet at ({LA.name(x)},{LA.name(y)})")
            if h[LA.join[x][y]] != LB.join[h[x]][h[y]]:
                out.failures.append(f"join at ({LA.name(x)},{LA.name(y)})")
        for name in OPERATORS:
            if h[A.op(name)[x]] != B.op(name)[h[x]]:
                out.failures.append(f"{name} at {LA.name(x)}")
    return out


def _require_hom(f: AlgebraMap) -> None:
    report = is_tdl_homomorphism(f)
    if not report.ok:
        raise NotHomomorphism(report.failures[0])


def _is_bijection(table: Sequence[int], size: int) -> bool:
    return sorted(table) == list(range(size))


def sigma_map(A: TdlAlgebra) -> AlgebraMap:
    """σ_A(a) = {T : a ∈ T} into the up-set algebra of the dual space."""
    space = prime_filter_space(A)
    X = dual_space(A)
    target = upset_algebra(X)
    family = up_sets(X.poset)
    table = tuple(family.index(mask_of(k for k, T in enumerate(space.points) if T >> a & 1))
                  for a in range(A.size))
    f = AlgebraMap(A, target, table)
    _require_hom(f)
    assert _is_bijection(table, target.size), "sigma must be bijective on a finite algebra"
    return f


def h_embedding(A: TdlAlgebra) -> AlgebraMap:
    """h_A into the complex algebra of the canonical frame."""
    space = prime_filter_space(A)
    X = canonical_frame(A)
    target = upset_algebra(X)
    family = up_sets(X.poset)
    table = tuple(family.index(mask_of(k for k, T in enumerate(space.points) if T >> a & 1))
                  for a in range(A.size))
    f = AlgebraMap(A, target, table)
    _require_hom(f)
    assert _is_bijection(table, target.size), "h_A must be an isomorphism on a finite algebra"
    return f


def _point_map(X: TdlFrame) -> tuple[tuple[int, ...], TdlFrame]:
    """x ↦ {U : x ∈ U} as indices into the prime-filter space of the up-set algebra."""
    family = up_sets(X.poset)
    B = upset_algebra(X)
    space = prime_filter_space(B)
    table = tuple(space.index(mask_of(i for i, U in enumerate(family.members) if U >> x & 1))
                  for x in range(X.size))
    target = TdlFrame(space.poset, tense_relation(B, space))
    return table, target


def _is_structure_iso(table: Sequence[int], X: TdlFrame, Y: TdlFrame) -> bool:
    if not _is_bijection(table, Y.size):
        return False
    for x in range(X.size):
        for y in range(X.size):
            if X.poset.leq(x, y) != Y.poset.leq(table[x], table[y]):
                return False
            if bool(X.R[x] >> y & 1) != bool(Y.R[table[x]] >> table[y] & 1):
                return False
    return True


def epsilon_map(X: TdlFrame) -> tuple[int, ...]:
    """ε_X : X → Φ(Ψ(X)), verified to be an order- and relation-isomorphism."""
    problems = tps_report(X)
    if problems:
        raise TdlError("not a tPS-space: " + ", ".join(problems))
    table, target = _point_map(X)
    assert _is_structure_iso(table, X, target), "epsilon must be an isomorphism"
    return table


def k_embedding(X: TdlFrame) -> tuple[int, ...]:
    """k_X : X → 𝔐(𝔠(X)), verified to be an order- and relation-isomorphism."""
    report = is_tdl_frame(X.poset, X)
    if not report.is_frame:
        raise TdlError("not a frame: " + report.summary())
    table, target = _point_map(X)
    assert _is_structure_iso(table, X, target), "k_X must be an isomorphism"
    return table


# ----------------------------------------------------------- morphism duals

def dual_of_hom(f: AlgebraMap) -> tuple[int, ...]:
    """Φ(h): prime filters of the target to prime filters of the source, S ↦ h⁻¹(S)."""
    _require_hom(f)
    src = prime_filter_space(f.source)
    dst = prime_filter_space(f.target)
    table = tuple(src.index(_preimage(f.table, S)) for S in dst.points)
    report = is_tps_function(table, dual_space(f.target), dual_space(f.source))
    if not report.ok:
        raise NotTpsFunction(report.failures[0])
    return table


def is_tps_function(g: Sequence[int], X1: TdlFrame, X2: TdlFrame) -> HomReport:
    out = HomReport()
    p1, p2 = X1.poset, X2.poset
    for x in range(X1.size):
        for y in range(X1.size):
            if p1.leq(x, y) and not p2.leq(g[x], g[y]):
                out.failures.append(f"order at ({X1.name(x)},{X1.name(y)})")
    for x in range(X1.size):
        image = mask_of(g[z] for z in bits(X1.R[x]))
        if image & ~X2.R[g[x]]:
            out.failures.append(f"tPSf1 at {X1.name(x)}")
        if mask_of(g[z] for z in bits(X1.Rinv[x])) & ~X2.Rinv[g[x]]:
            out.failures.append(f"tPSf1' at {X1.name(x)}")
        for rel1, rel2, tag in ((X1.R, X2.R, "tPSf2"), (X1.Rinv, X2.Rinv, "tPSf3")):
            for y in bits(rel2[g[x]]):
                zs = list(bits(rel1[x]))
                low = any(p2.leq(g[z], y) for z in zs)
                high = any(p2.leq(y, g[w]) for w in zs)
                if not (low and high):
                    out.failures.append(f"{tag} at ({X1.name(x)},{X2.name(y)})")
    return out


def dual_of_function(g: Sequence[int], X1: TdlFrame, X2: TdlFrame) -> AlgebraMap:
    """Ψ(g): up-sets of X2 to up-sets of X1, U ↦ g⁻¹(U)."""
    report = is_tps_function(g, X1, X2)
    if not report.ok:
        raise NotTpsFunction(report.failures[0])
    fam1, fam2 = up_sets(X1.poset), up_sets(X2.poset)
    table = tuple(fam1.index(_preimage(g, U)) for U in fam2.members)
    f = AlgebraMap(upset_algebra(X2), upset_algebra(X1), table)
    _require_hom(f)
    return f


def naturality_algebra_square(f: AlgebraMap) -> bool:
    """Ψ(Φ(h)) ∘ σ_A = σ_B ∘ h."""
    phi = dual_of_hom(f)
    psi = dual_of_function(phi, dual_space(f.target), dual_space(f.source))
    sa, sb = sigma_map(f.source), sigma_map(f.target)
    return all(psi.table[sa.table[a]] == sb.table[f.table[a]] for a in range(f.source.size))


def naturality_space_square(g: Sequence[int], X1: TdlFrame, X2: TdlFrame) -> bool:
    """Φ(Ψ(g)) ∘ ε_X1 = ε_X2 ∘ g."""
    psi = dual_of_function(g, X1, X2)
    phi = dual_of_hom(psi)
    e1, e2 = epsilon_map(X1), epsilon_map(X2)
    return all(phi[e1[x]] == e2[g[x]] for x in range(X1.size))


def identity_map(A: TdlAlgebra) -> AlgebraMap:
    return AlgebraMap(A, A, tuple(range(A.size)))


def upset_family(X: TdlFrame) -> SubsetFamily:
    return up_sets(X.poset)


# ------------------------------------------------------------- enumeration

def automorphisms(p: Poset) -> list[tuple[int, ...]]:
    import itertools
    out = []
    for perm in itertools.permutations(range(p.size)):
        if all(p.up[perm[i]] == mask_of(perm[j] for j in bits(p.up[i])) for i in range(p.size)):
            out.append(perm)
    return out


def _convex_sets(p: Poset) -> list[int]:
    return [s for s in range(1 << p.size) if s == p.up_closure(s) & p.down_closure(s)]


def frames_on(p: Poset, up_to_iso: bool = True):
    """Every tDL-frame structure on ``p`` in ascending order of the R table.

    With ``up_to_iso`` only the least member of each orbit under the
    automorphisms of ``p`` is produced.
    """
    import itertools
    n = p.size
    identity = tuple(range(n))
    # each automorphism as (point permutation, bit-vector lookup table)
    autos = [(a, [mask_of(a[y] for y in bits(s)) for s in range(1 << n)])
             for a in automorphisms(p) if a != identity] if up_to_iso else []
    up = p.up
    convex = _convex_sets(p)
    up_close = [p.up_closure(s) for s in range(1 << n)]
    for R in itertools.product(convex, repeat=n):
        Rinv = [0] * n
        for x in range(n):
            for y in bits(R[x]):
                Rinv[y] |= 1 << x
        ok = True
        for x in range(n):
            img = img_inv = 0
            for z in bits(up[x]):
                img |= R[z]
                img_inv |= Rinv[z]
            if img != up_close[R[x]] or img_inv != up_close[Rinv[x]]:
                ok = False
                break
        if not ok:
            continue
        if autos and any(_permuted(R, a, table) < R for a, table in autos):
            continue
        yield TdlFrame(p, R)


def _permuted(R: Sequence[int], perm: Sequence[int], table: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(R)
    for x, succ in enumerate(R):
        out[perm[x]] = table[succ]
    return tuple(out)


def enumerate_frames(max_points: int, up_to_iso: bool = True):
    """All tDL-frames with at most ``max_points`` points, posets in canonical order."""
    from .order import posets_up_to_iso
    for n in range(max_points + 1):
        for p in posets_up_to_iso(n):
            yield from frames_on(p, up_to_iso)
