import itertools

import pytest

from support import load_algebra
from tdl.algebra import all_tense_filters, all_tense_ideals, build_tdl_algebra
from tdl.congruence import (canonical_partition, congruence_from_subset, congruence_lattice,
                            congruences_bruteforce, filter_congruence, ideal_congruence,
                            is_simple, is_subdirectly_irreducible, is_tps_subset, rho_of_downset,
                            rho_of_upset, si_from_congruences, sigma_of_filter, sigma_of_ideal,
                            subclass_reports)
from tdl.duality import dual_space
from tdl.errors import NotTenseFilter, NotTenseIdeal, NotTpsSet
from tdl.order import bits, chain, lattice_from_poset


def set_partitions(n):
    """Every partition of range(n) as a canonical label tuple."""
    def rec(i, labels, blocks):
        if i == n:
            yield tuple(labels)
            return
        for b in range(blocks + 1):
            labels.append(b)
            yield from rec(i + 1, labels, max(blocks, b + 1))
            labels.pop()
    yield from rec(0, [], 0)


def compatible(A, part, heyting=False):
    L = A.lattice
    ops = [A.G, A.H, A.F, A.P]
    bins = [L.meet, L.join] + ([A.imp] if heyting else [])
    n = A.size
    for a, b in itertools.combinations(range(n), 2):
        if part[a] != part[b]:
            continue
        if any(part[f[a]] != part[f[b]] for f in ops):
            return False
        if any(part[g[a][c]] != part[g[b][c]] for g in bins for c in range(n)):
            return False
    return True


def all_partition_congruences(A, heyting=False):
    return {p for p in set_partitions(A.size) if compatible(A, p, heyting)}


def lat(n):
    return lattice_from_poset(chain(n))


# -------------------------------------------------------------- examples

def test_example_is_simple(worked):
    v = is_simple(worked)
    assert v.simple and not v.precheck_fired
    X = dual_space(worked)
    assert set(v.tps_sets) == {0, X.poset.full}
    assert len(congruences_bruteforce(worked)) == 2


def test_boolean_identity_congruences():
    A = load_algebra("boolean4_identity.json")
    # identity operators: congruences are the lattice congruences of 2 x 2
    assert len(congruences_bruteforce(A)) == 4
    assert not is_simple(A).simple
    assert not is_subdirectly_irreducible(A).subdirectly_irreducible


def test_trivial_algebra():
    A = load_algebra("trivial.json")
    assert len(congruences_bruteforce(A)) == 1
    assert not is_simple(A).simple
    si = is_subdirectly_irreducible(A)
    assert not si.subdirectly_irreducible and si.diagnostics


def test_three_chain_identity_is_not_si():
    ident = (0, 1, 2)
    A = build_tdl_algebra(lat(3), ident, ident, ident, ident)
    assert not is_simple(A).simple
    si = is_subdirectly_irreducible(A)
    # Con is a 4-element Boolean lattice for the 3-chain, so no monolith
    assert len(congruences_bruteforce(A)) == 4
    assert not si.subdirectly_irreducible


def test_precheck_example():
    ident = (0, 1, 2)
    A = build_tdl_algebra(lat(3), ident, ident, ident, ident)
    assert is_simple(A).precheck_fired


# ------------------------------------------------------- brute force oracle

def test_congruences_against_all_partitions(small_sweep):
    for A in small_sweep:
        truth = all_partition_congruences(A)
        assert {c.partition for c in congruences_bruteforce(A)} == truth
        assert congruence_lattice(A).partitions() == truth


def test_heyting_congruences_against_all_partitions(small_sweep):
    for A in small_sweep:
        truth = all_partition_congruences(A, heyting=True)
        assert {c.partition for c in congruences_bruteforce(A, heyting=True)} == truth


def test_congruence_order_reversal(small_sweep):
    for A in small_sweep:
        cl = congruence_lattice(A)
        for (Y, tY), (Z, tZ) in itertools.product(zip(cl.subsets, cl.congruences), repeat=2):
            assert (Y & ~Z == 0) == tZ.refines(tY)


def test_tps_subsets_and_errors(worked):
    X = dual_space(worked)
    closed = [Y for Y in range(1 << X.size) if is_tps_subset(X, Y).is_tps]
    assert closed == [0, X.poset.full]
    bad = next(Y for Y in range(1 << X.size) if not is_tps_subset(X, Y).is_tps)
    assert is_tps_subset(X, bad).witness is not None
    with pytest.raises(NotTpsSet):
        congruence_from_subset(worked, bad)


def test_filter_and_ideal_congruences(small_sweep):
    for A in small_sweep:
        L = A.lattice
        for S in all_tense_filters(A):
            theta = filter_congruence(A, S)
            for a, b in itertools.product(range(A.size), repeat=2):
                related = any(L.meet[a][s] == L.meet[b][s] for s in bits(S.members))
                assert theta.related(a, b) == related
            Y = sigma_of_filter(A, S.members)
            assert rho_of_upset(A, Y) == S.members
            assert theta.partition == congruence_from_subset(A, Y).partition
        for I in all_tense_ideals(A):
            theta = ideal_congruence(A, I)
            for a, b in itertools.product(range(A.size), repeat=2):
                related = any(L.join[a][i] == L.join[b][i] for i in bits(I.members))
                assert theta.related(a, b) == related
            Z = sigma_of_ideal(A, I.members)
            assert rho_of_downset(A, Z) == I.members
            assert theta.partition == congruence_from_subset(A, Z).partition


def test_filter_errors(worked):
    a = worked.lattice.names.index("a")
    with pytest.raises(NotTenseFilter):
        filter_congruence(worked, 1 << a)
    with pytest.raises(NotTenseIdeal):
        ideal_congruence(worked, 1 << a)


# ---------------------------------------------------------- simple and SI

def test_simple_and_si_agree_with_partitions(small_sweep):
    for A in small_sweep:
        truth = all_partition_congruences(A)
        v = is_simple(A)
        assert v.simple == (len(truth) == 2)
        assert not (v.precheck_fired and v.simple)
        assert v.limits_trivial == v.filters_trivial == v.fixed_points_trivial
        assert is_subdirectly_irreducible(A).subdirectly_irreducible == \
            si_from_congruences(truth)


def test_monolith_is_least_nontrivial(small_sweep):
    for A in small_sweep:
        si = is_subdirectly_irreducible(A)
        if not si.subdirectly_irreducible:
            continue
        others = [c for c in congruences_bruteforce(A) if not c.is_identity]
        assert all(si.monolith.refines(c) for c in others)


def test_subclass_reports(small_sweep):
    for A in small_sweep:
        assert subclass_reports(A).consistent()


def test_si_from_congruences():
    assert not si_from_congruences([])
    assert not si_from_congruences([(0,)])
    assert si_from_congruences([(0, 1), (0, 0)])
    # two incomparable atoms over the identity
    assert not si_from_congruences([(0, 1, 2), (0, 0, 1), (0, 1, 1), (0, 0, 0)])


def test_canonical_partition():
    assert canonical_partition(["x", "y", "x"]) == (0, 1, 0)
