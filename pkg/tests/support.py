"""Shared oracles and data for the test suite.

Everything here is computed independently of the library's own shortcuts:
brute force over subsets, element tuples and explicit formula pools.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

import tdl
from tdl.algebra import TdlAlgebra, enumerate_tdl_algebras
from tdl.io import algebra_from_doc, frame_from_doc, model_from_doc, read_document
from tdl.logic.calculus import ProofTree, check_proof
from tdl.logic.syntax import (BOT, TOP, And, Formula, Imp, Modal, Neg, Or, Sequent, Tilde, Var,
                              mk_modal, parse_formula)
from tdl.order import bits, lattice_census

FIXTURES = Path(tdl.__file__).parent / "data" / "fixtures"
SWEEP_SIZE = 6


def fixture(name: str) -> Path:
    return FIXTURES / name


def load_algebra(name: str) -> TdlAlgebra:
    return algebra_from_doc(read_document(fixture(name)))


def load_frame(name: str):
    return frame_from_doc(read_document(fixture(name)))


def load_model(name: str):
    return model_from_doc(read_document(fixture(name)))


@lru_cache(maxsize=None)
def sweep(max_size: int = SWEEP_SIZE) -> tuple[TdlAlgebra, ...]:
    """Every tense algebra on every distributive lattice with at most ``max_size`` elements."""
    return tuple(A for _, L in lattice_census(max_size) for A in enumerate_tdl_algebras(L))


# ------------------------------------------------------------------ lattices

def subsets(n: int):
    return range(1 << n)


def brute_tense_filters(A: TdlAlgebra) -> list[int]:
    """Tense filters straight from the definition, over all subsets."""
    L = A.lattice
    out = []
    for s in subsets(A.size):
        members = list(bits(s))
        if not s >> L.top & 1:
            continue
        if any(L.leq(x, y) and not s >> y & 1 for x in members for y in range(A.size)):
            continue
        if any(not s >> L.meet[x][y] & 1 for x in members for y in members):
            continue
        if any(not (s >> A.G[x] & 1 and s >> A.H[x] & 1) for x in members):
            continue
        out.append(s)
    return out


def brute_tense_ideals(A: TdlAlgebra) -> list[int]:
    L = A.lattice
    out = []
    for s in subsets(A.size):
        members = list(bits(s))
        if not s >> L.bottom & 1:
            continue
        if any(L.leq(y, x) and not s >> y & 1 for x in members for y in range(A.size)):
            continue
        if any(not s >> L.join[x][y] & 1 for x in members for y in members):
            continue
        if any(not (s >> A.F[x] & 1 and s >> A.P[x] & 1) for x in members):
            continue
        out.append(s)
    return out


def least_containing(family: list[int], X: int) -> int | None:
    above = [s for s in family if X & ~s == 0]
    if not above:
        return None
    meet = above[0]
    for s in above[1:]:
        meet &= s
    assert meet in above, "the family must be closed under intersection"
    return meet


# ------------------------------------------------------------ formula pools

UNARY = {"lt": ("G", "H", "F", "P"), "ltc": ("G", "H", "F", "P", "neg"),
         "lti": ("G", "H", "F", "P", "neg"), "ltdm": ("G", "H", "F", "P", "tilde")}
BINARY = {"lt": ("and", "or"), "ltc": ("and", "or", "imp"), "lti": ("and", "or", "imp"),
          "ltdm": ("and", "or")}


def apply(op: str, calc: str, *args: Formula) -> Formula:
    if op in ("G", "H", "F", "P"):
        return mk_modal(op, args[0], calc)
    if op == "neg":
        return Neg(args[0])
    if op == "tilde":
        return Tilde(args[0])
    if op == "imp":
        return Imp(*args)
    return Formula(op, args)


def formulas(depth: int, calc: str = "lt", variables=("p", "q")) -> list[Formula]:
    """All formulas of depth at most ``depth`` over the calculus' connectives."""
    level = [Var(v) for v in variables] + [TOP, BOT]
    seen = dict.fromkeys(level)
    for _ in range(depth):
        current = list(seen)
        for op in UNARY[calc]:
            for f in current:
                seen.setdefault(apply(op, calc, f))
        for op in BINARY[calc]:
            for f, g in itertools.product(current, repeat=2):
                seen.setdefault(apply(op, calc, f, g))
    return list(seen)


def formula_strategy(calc="lt"):
    leaves = st.sampled_from([Var("p"), Var("q"), Var("x_1"), TOP, BOT])
    unary = [lambda a, op=op: Modal(op, a) for op in "GHFP"]
    if calc in ("ltc", "lti"):
        unary.append(Neg)
    if calc == "ltdm":
        unary.append(Tilde)
    binary = [And, Or] + ([Imp] if calc in ("ltc", "lti") else [])

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(unary), children).map(lambda t: t[0](t[1])),
            st.tuples(st.sampled_from(binary), children, children).map(lambda t: t[0](t[1], t[2])))

    return st.recursive(leaves, extend, max_leaves=8)


def random_formula(rng: random.Random, depth: int, calc: str = "lt",
                   variables=("p", "q")) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([Var(v) for v in variables] + [TOP, BOT])
    if rng.random() < 0.5:
        return apply(rng.choice(UNARY[calc]), calc, random_formula(rng, depth - 1, calc, variables))
    return apply(rng.choice(BINARY[calc]), calc,
                 random_formula(rng, depth - 1, calc, variables),
                 random_formula(rng, depth - 1, calc, variables))


def depth(f: Formula) -> int:
    return 1 + max((depth(a) for a in f.args), default=-1)


# ------------------------------------------------------------- rule schemas
#
# Each schema is given twice: once over formulas (premise and conclusion
# sequents, used with check_proof and holds) and once over lattice elements
# (the sides' meet and join at a single valuation).  Contexts are lists of
# formulas or elements.

def _seq(left, right) -> Sequent:
    return Sequent.of(left, right)


def _box(calc, op, fs):
    return [mk_modal(op, f, calc) for f in fs]


def formula_rule(rule: str, calc: str, g: list, d: list, a: Formula, b: Formula):
    """(premises, conclusion) of one instance, or None when the shape does not apply."""
    m = lambda op, f: mk_modal(op, f, calc)  # noqa: E731
    if rule == "we_i":
        return [_seq(g, d)], _seq(g + [a], d)
    if rule == "we_d":
        return [_seq(g, d)], _seq(g, d + [a])
    if rule == "cut":
        return [_seq(g, d + [a]), _seq(g + [a], d)], _seq(g, d)
    if rule == "and_l":
        return [_seq(g + [a, b], d)], _seq(g + [And(a, b)], d)
    if rule == "and_r":
        return [_seq(g, d + [a]), _seq(g, d + [b])], _seq(g, d + [And(a, b)])
    if rule == "or_l":
        return [_seq(g + [a], d), _seq(g + [b], d)], _seq(g + [Or(a, b)], d)
    if rule == "or_r":
        return [_seq(g, d + [a, b])], _seq(g, d + [Or(a, b)])
    for box, dia in (("G", "F"), ("H", "P")):
        if rule == box + "*":
            return [_seq(g, d + [a])], _seq(_box(calc, box, g), _box(calc, dia, d) + [m(box, a)])
        if rule == "*" + dia:
            return [_seq(g + [a], d)], _seq(_box(calc, box, g) + [m(dia, a)], _box(calc, dia, d))
    doubles = {"PG": ("P", "G"), "FH": ("F", "H"), "GP": ("G", "P"), "HF": ("H", "F")}
    if rule in doubles:
        outer, inner = doubles[rule]
        if rule in ("PG", "FH"):
            return [_seq([a], d)], _seq([m(outer, m(inner, a))], d)
        return [_seq(g, [a])], _seq(g, [m(outer, m(inner, a))])
    if rule == "neg_l":
        if calc == "lti":
            return [_seq(g, [a])], _seq(g + [Neg(a)], [])
        return [_seq(g, d + [a])], _seq(g + [Neg(a)], d)
    if rule == "neg_r":
        if calc == "lti":
            return [_seq(g + [a], [])], _seq(g, [Neg(a)])
        return [_seq(g + [a], d)], _seq(g, d + [Neg(a)])
    if rule == "imp_l":
        return [_seq(g, d + [a]), _seq(g + [b], d)], _seq(g + [Imp(a, b)], d)
    if rule == "imp_r":
        dd = [] if calc == "lti" else d
        return [_seq(g + [a], dd + [b])], _seq(g, dd + [Imp(a, b)])
    if rule == "tilde":
        return [_seq([a], [b])], _seq([Tilde(b)], [Tilde(a)])
    if rule == "tt_l":
        return [_seq(g + [a], d)], _seq(g + [Tilde(Tilde(a))], d)
    if rule == "tt_r":
        return [_seq(g, d + [a])], _seq(g, d + [Tilde(Tilde(a))])
    for box, dia in (("G", "F"), ("H", "P")):
        if rule == "m" + box:
            return [_seq(g, [a])], _seq(_box(calc, box, g), [m(box, a)])
        if rule == "m" + dia:
            return [_seq([a], d)], _seq([m(dia, a)], _box(calc, dia, d))
        if rule == "n" + box:
            return [_seq([], [a])], _seq([], [m(box, a)])
        if rule == "n" + dia:
            return [_seq([a], [])], _seq([m(dia, a)], [])
    adjoint = {"AdG": ("P", "G", True), "AdH": ("F", "H", True),
               "AdP": ("P", "G", False), "AdF": ("F", "H", False)}
    if rule in adjoint:
        dia, box, to_box = adjoint[rule]
        if to_box:
            return [_seq([m(dia, a)], [b])], _seq([a], [m(box, b)])
        return [_seq([a], [m(box, b)])], _seq([m(dia, a)], [b])
    raise KeyError(rule)


class ElementOps:
    """Algebra tables as arrays, so a schema can be read over all tuples at once."""

    def __init__(self, A: TdlAlgebra):
        L = A.lattice
        self.A, self.n = A, A.size
        self.one, self.zero = L.top, L.bottom
        self.meet = np.array(L.meet)
        self.join = np.array(L.join)
        self.leq = np.array([[L.leq(x, y) for y in range(A.size)] for x in range(A.size)])
        self.imp = np.array(A.imp)
        self.un = {k: np.array(A.op(k)) for k in ("G", "H", "F", "P")}
        self.un["neg"] = self.imp[:, L.bottom]
        if A.neg is not None:
            self.un["tilde"] = np.array(A.neg)

    def o(self, name, x):
        return self.un[name][x]

    def fold(self, table, unit, xs):
        out = unit
        for x in xs:
            out = table[out, x]
        return out


class Contexts:
    """Summaries of every context of at most ``max_len`` elements.

    ``gm``/``dj`` are the meet/join of the members, ``box[op]`` the meet of
    op applied memberwise and ``dia[op]`` the join of op applied memberwise.
    """

    def __init__(self, E: ElementOps, max_len: int = 2):
        self.members = list(contexts(E.n, max_len))
        M = lambda xs: E.fold(E.meet, E.one, xs)  # noqa: E731
        J = lambda xs: E.fold(E.join, E.zero, xs)  # noqa: E731
        self.gm = np.array([M(c) for c in self.members])
        self.dj = np.array([J(c) for c in self.members])
        self.size = np.array([len(c) for c in self.members])
        self.box = {op: np.array([M([E.un[op][x] for x in c]) for c in self.members])
                    for op in ("G", "H")}
        self.dia = {op: np.array([J([E.un[op][x] for x in c]) for c in self.members])
                    for op in ("F", "P")}


def element_rule(rule: str, calc: str, E: ElementOps, C: Contexts):
    """(premise flags, conclusion flag) over the grid (Γ, Δ, a, b), as boolean arrays."""
    c, n = len(C.members), E.n
    gi, di, a, b = np.ix_(range(c), range(c), range(n), range(n))
    gm, dj = C.gm[gi], C.dj[di]
    le, mt, jn, o = (lambda x, y: E.leq[x, y]), (lambda x, y: E.meet[x, y]), \
        (lambda x, y: E.join[x, y]), E.o
    empty_d = C.size[di] == 0
    if rule == "we_i":
        return [le(gm, dj)], le(mt(gm, a), dj)
    if rule == "we_d":
        return [le(gm, dj)], le(gm, jn(dj, a))
    if rule == "cut":
        return [le(gm, jn(dj, a)), le(mt(gm, a), dj)], le(gm, dj)
    if rule == "and_l":
        return [le(mt(mt(gm, a), b), dj)], le(mt(gm, mt(a, b)), dj)
    if rule == "and_r":
        return [le(gm, jn(dj, a)), le(gm, jn(dj, b))], le(gm, jn(dj, mt(a, b)))
    if rule == "or_l":
        return [le(mt(gm, a), dj), le(mt(gm, b), dj)], le(mt(gm, jn(a, b)), dj)
    if rule == "or_r":
        return [le(gm, jn(jn(dj, a), b))], le(gm, jn(dj, jn(a, b)))
    for box, dia in (("G", "F"), ("H", "P")):
        boxed, dias = C.box[box][gi], C.dia[dia][di]
        if rule == box + "*":
            return [le(gm, jn(dj, a))], le(boxed, jn(dias, o(box, a)))
        if rule == "*" + dia:
            return [le(mt(gm, a), dj)], le(mt(boxed, o(dia, a)), dias)
        if rule == "m" + box:
            return [le(gm, a)], le(boxed, o(box, a))
        if rule == "m" + dia:
            return [le(a, dj)], le(o(dia, a), dias)
        if rule == "n" + box:
            return [le(E.one, a)], le(E.one, o(box, a))
        if rule == "n" + dia:
            return [le(a, E.zero)], le(o(dia, a), E.zero)
    doubles = {"PG": ("P", "G"), "FH": ("F", "H"), "GP": ("G", "P"), "HF": ("H", "F")}
    if rule in doubles:
        outer, inner = doubles[rule]
        twice = o(outer, o(inner, a))
        if rule in ("PG", "FH"):
            return [le(a, dj)], le(twice, dj)
        return [le(gm, a)], le(gm, twice)
    if rule == "neg_l":
        if calc == "lti":
            return [le(gm, a)], le(mt(gm, o("neg", a)), E.zero)
        return [le(gm, jn(dj, a))], le(mt(gm, o("neg", a)), dj)
    if rule == "neg_r":
        if calc == "lti":
            return [le(mt(gm, a), E.zero)], le(gm, o("neg", a))
        return [le(mt(gm, a), dj)], le(gm, jn(dj, o("neg", a)))
    if rule == "imp_l":
        return [le(gm, jn(dj, a)), le(mt(gm, b), dj)], le(mt(gm, E.imp[a, b]), dj)
    if rule == "imp_r":
        prem, concl = [le(mt(gm, a), jn(dj, b))], le(gm, jn(dj, E.imp[a, b]))
        if calc == "lti":
            # single succedent: only the instances with an empty Δ exist
            return [p | ~empty_d for p in prem], concl | ~empty_d
        return prem, concl
    if rule == "tilde":
        return [le(a, b)], le(o("tilde", b), o("tilde", a))
    if rule == "tt_l":
        return [le(mt(gm, a), dj)], le(mt(gm, o("tilde", o("tilde", a))), dj)
    if rule == "tt_r":
        return [le(gm, jn(dj, a))], le(gm, jn(dj, o("tilde", o("tilde", a))))
    adjoint = {"AdG": ("P", "G", True), "AdH": ("F", "H", True),
               "AdP": ("P", "G", False), "AdF": ("F", "H", False)}
    if rule in adjoint:
        dia, box, to_box = adjoint[rule]
        if to_box:
            return [le(o(dia, a), b)], le(a, o(box, b))
        return [le(a, o(box, b))], le(o(dia, a), b)
    raise KeyError(rule)


AXIOMS = ("ax", "bot", "top", "hyp")


def schematic_rules(calc: str) -> list[str]:
    from tdl.logic.calculus import rules_for
    return sorted(r for r in rules_for(calc) if r not in AXIOMS)


def contexts(n: int, max_len: int = 2):
    for k in range(max_len + 1):
        yield from itertools.combinations_with_replacement(range(n), k)


def element_counterexample(A: TdlAlgebra, rule: str, calc: str):
    """First (Γ, Δ, a, b) where every premise holds and the conclusion fails.

    Sound element-wise means sound for every formula instance, at any depth:
    each side of a sequent is evaluated at one valuation at a time.
    """
    E = ElementOps(A)
    C = Contexts(E)
    prem, concl = element_rule(rule, calc, E, C)
    ok = np.ones(np.broadcast(*prem, concl).shape, dtype=bool)
    for p in prem:
        ok &= p
    bad = np.argwhere(ok & ~concl)
    if bad.size == 0:
        return None
    g, d, a, b = bad[0]
    return C.members[g], C.members[d], int(a), int(b)


def rule_instance(rng: random.Random, rule: str, calc: str, max_depth: int = 2):
    """A random depth-bounded instance, confirmed by the proof checker."""
    pick = lambda: random_formula(rng, max_depth, calc)  # noqa: E731
    for _ in range(1000):
        g = [pick() for _ in range(rng.randint(0, 2))]
        d = [pick() for _ in range(rng.randint(0, 2))]
        prem, concl = formula_rule(rule, calc, g, d, pick(), pick())
        tree = ProofTree(concl, rule, tuple(ProofTree(p, "hyp") for p in prem))
        try:
            check_proof(tree, calc, hypotheses=prem)
        except tdl.errors.RuleMismatch:
            continue    # a context accidentally collided with a principal formula
        return prem, concl
    raise AssertionError(f"no checker-accepted instance of {rule} in {calc}")


def parse(text: str, calc: str = "lt") -> Formula:
    return parse_formula(text, calc)


def value_classes(A: TdlAlgebra, pool: list[Formula], variables=("p", "q")):
    """Representative formulas, one per distinct value vector."""
    from tdl.logic.semantics import value_vector
    memo: dict = {}
    seen: dict[bytes, Formula] = {}
    for f in pool:
        key = np.asarray(value_vector(A, f, variables, memo)).tobytes()
        seen.setdefault(key, f)
    return list(seen.values())
