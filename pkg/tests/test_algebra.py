import itertools

import pytest
from hypothesis import given, settings, strategies as st

from support import brute_tense_filters, brute_tense_ideals, least_containing, load_algebra, sweep
from tdl.algebra import (TdlAlgebra, all_tense_filters, all_tense_ideals, boolean_elements,
                         build_tdl_algebra, check_alternative_axioms, check_axioms,
                         check_de_morgan, classify, d_invariants, d_iter, d_limit, d_op,
                         de_morgan_negations, derived_properties, dhat_limit, dhat_op,
                         enumerate_tdl_algebras, generate_tense_filter, generate_tense_ideal,
                         heyting_implication, left_adjoint, meet_preserving_maps)
from tdl.errors import AxiomViolation, DeMorganLawViolation, EmptyGenerator, NoAdjoint
from tdl.order import bits, build_poset, chain, lattice_census, lattice_from_poset

NAMES = ["0", "a", "b", "c", "d", "1"]


def lat(n):
    return lattice_from_poset(chain(n))


# ---------------------------------------------------------- worked example

def test_example_tables(worked):
    table = {"G": "bbbbd1", "H": "0a01a1", "F": "0acccc", "P": "0d01d1"}
    for op, row in table.items():
        for x, y in zip(NAMES, row):
            assert worked.name(worked.op(op)[worked.lattice.names.index(x)]) == y


def test_example_axioms(worked):
    L = worked.lattice
    assert check_axioms(L, worked.G, worked.H, worked.F, worked.P).passed
    assert derived_properties(worked).passed
    for variant in "bc":
        assert check_alternative_axioms(worked, variant).passed


def test_example_filters(worked):
    zero, one = worked.zero, worked.one
    assert d_invariants(worked) == 1 << zero | 1 << one
    full = (1 << worked.size) - 1
    assert [f.members for f in all_tense_filters(worked)] == sorted([1 << one, full])
    assert [i.members for i in all_tense_ideals(worked)] == sorted([1 << zero, full])


def test_example_boolean_part(worked):
    mask, B = boolean_elements(worked)
    assert {worked.name(x) for x in bits(mask)} == {"0", "b", "c", "1"}
    assert check_axioms(B.lattice, B.G, B.H, B.F, B.P).passed
    check_de_morgan(B)


# ---------------------------------------------------------- construction

def test_violation_report():
    L = lat(2)
    with pytest.raises(AxiomViolation) as err:
        build_tdl_algebra(L, (0, 1), (0, 1), (0, 0), (0, 1))
    report = err.value.report
    assert "t4" in report.failed_axioms()
    assert "t4 (G) at (0,1)" in report.summary()


def test_tables_must_be_total():
    with pytest.raises(ValueError):
        check_axioms(lat(2), (0,), (0, 1), (0, 1), (0, 1))


def test_bad_negation():
    L = lat(2)
    with pytest.raises(DeMorganLawViolation):
        build_tdl_algebra(L, (0, 1), (0, 1), (0, 1), (0, 1), neg=(0, 1))


def test_extreme_structures():
    for _, L in lattice_census(6):
        ident = tuple(range(L.size))
        assert check_axioms(L, ident, ident, ident, ident).passed
        G = tuple(L.top for _ in range(L.size))
        F = tuple(L.bottom for _ in range(L.size))
        assert check_axioms(L, G, G, F, F).passed


# ------------------------------------------------------ brute-force census

def brute_structures(L):
    """All (G, H, F, P) satisfying t1-t8, by filtering all maps on the carrier."""
    n, one, zero = L.size, L.top, L.bottom
    maps = list(itertools.product(range(n), repeat=n))
    boxes = [g for g in maps if g[one] == one and all(
        g[L.meet[x][y]] == L.meet[g[x]][g[y]] for x in range(n) for y in range(n))]
    dias = [f for f in maps if f[zero] == zero and all(
        f[L.join[x][y]] == L.join[f[x]][f[y]] for x in range(n) for y in range(n))]
    pairs = [(g, p) for g in boxes for p in dias
             if all(L.leq(x, g[p[x]]) and L.leq(p[g[x]], x) for x in range(n))]
    out = []
    for (G, P), (H, F) in itertools.product(pairs, repeat=2):
        if check_axioms(L, G, H, F, P).passed:
            out.append((G, H, F, P))
    return sorted(out)


def test_enumeration_matches_brute_force():
    for _, L in lattice_census(4):
        got = sorted((A.G, A.H, A.F, A.P) for A in enumerate_tdl_algebras(L))
        assert got == brute_structures(L)


def test_two_chain_has_two_structures():
    structures = enumerate_tdl_algebras(lat(2))
    assert len(structures) == 2
    assert {A.G for A in structures} == {(0, 1), (1, 1)}


def test_meet_preserving_maps_complete():
    for _, L in lattice_census(5):
        n = L.size
        brute = sorted(g for g in itertools.product(range(n), repeat=n)
                       if g[L.top] == L.top and all(g[L.meet[x][y]] == L.meet[g[x]][g[y]]
                                                    for x in range(n) for y in range(n)))
        assert meet_preserving_maps(L) == brute


def test_left_adjoint():
    for _, L in lattice_census(5):
        for G in meet_preserving_maps(L):
            P = left_adjoint(L, G)
            assert all(L.leq(P[x], y) == L.leq(x, G[y])
                       for x in range(L.size) for y in range(L.size))
    with pytest.raises(NoAdjoint):
        # not meet-preserving: nothing maps to the top
        left_adjoint(lat(3), (0, 0, 1))


# -------------------------------------------------------- sweep properties

def test_sweep_properties(small_sweep):
    for A in small_sweep:
        assert derived_properties(A).passed
        assert check_alternative_axioms(A, "b").passed
        assert check_alternative_axioms(A, "c").passed


def test_alternative_axioms_reject():
    A = TdlAlgebra(lat(2), (0, 1), (0, 1), (0, 0), (0, 1))
    assert not check_alternative_axioms(A, "b").passed
    assert not check_alternative_axioms(A, "c").passed
    with pytest.raises(ValueError):
        check_alternative_axioms(A, "z")


def test_d_operators(small_sweep):
    for A in small_sweep:
        L = A.lattice
        fixed = d_invariants(A)
        for x in range(A.size):
            assert L.leq(d_op(A, x), x) and L.leq(x, dhat_op(A, x))
            assert all(L.leq(d_iter(A, x, k + 1), d_iter(A, x, k)) for k in range(A.size))
            assert fixed >> d_limit(A, x) & 1 and fixed >> dhat_limit(A, x) & 1


def test_filters_and_ideals_brute_force(small_sweep):
    for A in small_sweep:
        assert [f.members for f in all_tense_filters(A)] == brute_tense_filters(A)
        assert [i.members for i in all_tense_ideals(A)] == brute_tense_ideals(A)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_generated_filter_is_least(data):
    A = data.draw(st.sampled_from(sweep(5)))
    X = data.draw(st.integers(1, (1 << A.size) - 1))
    assert generate_tense_filter(A, X).members == least_containing(brute_tense_filters(A), X)
    assert generate_tense_ideal(A, X).members == least_containing(brute_tense_ideals(A), X)


def test_empty_generator(worked):
    with pytest.raises(EmptyGenerator):
        generate_tense_filter(worked, 0)
    with pytest.raises(EmptyGenerator):
        generate_tense_ideal(worked, 0)


# ----------------------------------------------------------- subclasses

def test_heyting_implication_brute_force():
    for _, L in lattice_census(7):
        imp = heyting_implication(L)
        for x, y, z in itertools.product(range(L.size), repeat=3):
            assert L.leq(z, imp[x][y]) == L.leq(L.meet[z][x], y)


def test_de_morgan_negations_brute_force():
    for _, L in lattice_census(6):
        n = L.size
        brute = sorted(t for t in itertools.permutations(range(n))
                       if all(t[t[x]] == x for x in range(n))
                       and all(t[L.join[x][y]] == L.meet[t[x]][t[y]]
                               for x in range(n) for y in range(n)))
        assert de_morgan_negations(L) == brute
    square = lattice_from_poset(build_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))
    assert len(de_morgan_negations(square)) == 2


def test_classify():
    square = lattice_from_poset(build_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))
    ident = (0, 1, 2, 3)
    c = classify(build_tdl_algebra(square, ident, ident, ident, ident))
    assert c.boolean and c.heyting and not c.demorgan
    A = load_algebra("boolean4_identity.json")
    assert classify(A).demorgan
    assert not classify(build_tdl_algebra(lat(3), (0, 1, 2), (0, 1, 2), (0, 1, 2),
                                          (0, 1, 2))).boolean
