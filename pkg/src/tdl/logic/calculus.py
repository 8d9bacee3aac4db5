"""Proof trees for Lt and its extensions, and a node-by-node proof checker.

Rule identifiers
----------------
Axioms ``ax`` (α⇒α), ``bot`` (⊥⇒), ``top`` (⇒⊤); ``hyp`` marks a schematic
leaf that must be one of the supplied hypotheses.  Structural ``we_i``,
``we_d``, ``cut``.  Logical ``and_l``, ``and_r``, ``or_l``, ``or_r``, ``G*``,
``*F``, ``H*``, ``*P``, ``PG``, ``FH``, ``GP``, ``HF``.  Extensions:
``neg_l``, ``neg_r``, ``imp_l``, ``imp_r`` (ltc, lti) and ``tilde``, ``tt_l``,
``tt_r`` (ltdm).  Derived rules accepted as single steps and expandable into
primitive ones: ``mG``, ``mH``, ``mF``, ``mP``, ``nG``, ``nH``, ``nF``,
``nP``, ``AdG``, ``AdH``, ``AdP``, ``AdF``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from ..errors import RuleMismatch
from .syntax import (BOT, TOP, Formula, Sequent, And, Or, as_modal, big_and, big_or,
                     mk_modal, render)

BASE_RULES = ("ax", "bot", "top", "hyp", "we_i", "we_d", "cut", "and_l", "and_r", "or_l",
              "or_r", "G*", "*F", "H*", "*P", "PG", "FH", "GP", "HF")
EXTRA_RULES = {
    "lt": (),
    "ltc": ("neg_l", "neg_r", "imp_l", "imp_r"),
    "lti": ("neg_l", "neg_r", "imp_l", "imp_r"),
    "ltdm": ("tilde", "tt_l", "tt_r"),
}
DERIVED_RULES = ("mG", "mH", "mF", "mP", "nG", "nH", "nF", "nP", "AdG", "AdH", "AdP", "AdF")


@dataclass(frozen=True)
class ProofTree:
    conclusion: Sequent
    rule: str
    premises: tuple["ProofTree", ...] = ()
    label: str | None = None

    def nodes(self) -> Iterator["ProofTree"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def render(self, indent: int = 0) -> str:
        lines = [f"{'  ' * indent}{self.conclusion}   [{self.rule}]"]
        for p in self.premises:
            lines.append(p.render(indent + 1))
        return "\n".join(lines)


def rules_for(calc: str) -> set[str]:
    return set(BASE_RULES) | set(EXTRA_RULES[calc]) | set(DERIVED_RULES)


# ------------------------------------------------------------------ matching

def _contexts(side: frozenset, principal: Formula) -> list[frozenset]:
    """Every Γ with Γ ∪ {principal} = side (sides are sets)."""
    if principal not in side:
        return []
    rest = side - {principal}
    return [rest, side]


def _unwrap_all(fs: Iterable[Formula], op: str, calc: str) -> frozenset | None:
    out = []
    for f in fs:
        body = as_modal(op, f, calc)
        if body is None:
            return None
        out.append(body)
    return frozenset(out)


def _is(f: Formula, op: str) -> bool:
    return f.op == op


class _Checker:
    def __init__(self, calc: str, hypotheses: Iterable[Sequent]):
        self.calc = calc
        self.hypotheses = frozenset(hypotheses)
        self.allowed = rules_for(calc)

    # each rule returns None on success or a reason string
    def check(self, node: ProofTree) -> str | None:
        rule = node.rule
        if rule not in self.allowed:
            return f"rule {rule!r} is not available in {self.calc}"
        method: Callable = getattr(self, "_r_" + _RULE_METHOD.get(rule, rule))
        arity = _ARITY.get(rule, 1)
        if len(node.premises) != arity:
            return f"rule {rule} takes {arity} premise(s), got {len(node.premises)}"
        prem = [p.conclusion for p in node.premises]
        return method(node.conclusion, *prem)

    # axioms
    def _r_ax(self, c: Sequent) -> str | None:
        if len(c.left) == 1 and c.left == c.right:
            return None
        return "axiom must have the form α ⇒ α"

    def _r_bot(self, c: Sequent) -> str | None:
        return None if c.left == {BOT} and not c.right else "axiom must be ⊥ ⇒"

    def _r_top(self, c: Sequent) -> str | None:
        return None if not c.left and c.right == {TOP} else "axiom must be ⇒ ⊤"

    def _r_hyp(self, c: Sequent) -> str | None:
        return None if c in self.hypotheses else "leaf is not among the hypotheses"

    # structural
    def _r_we_i(self, c: Sequent, p: Sequent) -> str | None:
        if p.right == c.right and p.left <= c.left and len(c.left - p.left) <= 1:
            return None
        return "[we]_i adds exactly one antecedent formula"

    def _r_we_d(self, c: Sequent, p: Sequent) -> str | None:
        if p.left == c.left and p.right <= c.right and len(c.right - p.right) <= 1:
            return None
        return "[we]_d adds exactly one succedent formula"

    def _r_cut(self, c: Sequent, p1: Sequent, p2: Sequent) -> str | None:
        if p1.left != c.left or p2.right != c.right:
            return "cut premises must share the context Γ ⇒ Δ"
        for a in (p1.right - c.right) | (p2.left - c.left) | (p1.right & p2.left):
            if p1.right == c.right | {a} and p2.left == c.left | {a}:
                return None
        return "no cut formula fits Γ ⇒ Δ, α and α, Γ ⇒ Δ"

    # lattice connectives
    def _left_rule(self, c: Sequent, prem: list[Sequent], op: str, build) -> str | None:
        for phi in c.left:
            if phi.op != op:
                continue
            for gamma in _contexts(c.left, phi):
                expected = build(gamma, c.right, *phi.args)
                if sorted(map(_key, expected)) == sorted(map(_key, prem)):
                    return None
        return f"no principal {op} formula in the antecedent matches"

    def _right_rule(self, c: Sequent, prem: list[Sequent], op: str, build) -> str | None:
        for phi in c.right:
            if phi.op != op:
                continue
            for delta in _contexts(c.right, phi):
                expected = build(c.left, delta, *phi.args)
                if sorted(map(_key, expected)) == sorted(map(_key, prem)):
                    return None
        return f"no principal {op} formula in the succedent matches"

    def _r_and_l(self, c, p):
        return self._left_rule(c, [p], "and", lambda g, d, a, b: [Sequent(g | {a, b}, d)])

    def _r_and_r(self, c, p1, p2):
        return self._right_rule(c, [p1, p2], "and",
                                lambda g, d, a, b: [Sequent(g, d | {a}), Sequent(g, d | {b})])

    def _r_or_l(self, c, p1, p2):
        return self._left_rule(c, [p1, p2], "or",
                               lambda g, d, a, b: [Sequent(g | {a}, d), Sequent(g | {b}, d)])

    def _r_or_r(self, c, p):
        return self._right_rule(c, [p], "or", lambda g, d, a, b: [Sequent(g, d | {a, b})])

    # modal rules
    def _box_right(self, c: Sequent, p: Sequent, box: str, dia: str) -> str | None:
        gamma = _unwrap_all(c.left, box, self.calc)
        if gamma is None:
            return f"every antecedent formula must have the form {box}γ"
        for phi in c.right:
            alpha = as_modal(box, phi, self.calc)
            if alpha is None:
                continue
            for rest in _contexts(c.right, phi):
                delta = _unwrap_all(rest, dia, self.calc)
                if delta is not None and p == Sequent(gamma, delta | {alpha}):
                    return None
        return f"conclusion is not {box}Γ ⇒ {dia}Δ, {box}α over the premise"

    def _dia_left(self, c: Sequent, p: Sequent, box: str, dia: str) -> str | None:
        delta = _unwrap_all(c.right, dia, self.calc)
        if delta is None:
            return f"every succedent formula must have the form {dia}δ"
        for phi in c.left:
            alpha = as_modal(dia, phi, self.calc)
            if alpha is None:
                continue
            for rest in _contexts(c.left, phi):
                gamma = _unwrap_all(rest, box, self.calc)
                if gamma is not None and p == Sequent(gamma | {alpha}, delta):
                    return None
        return f"conclusion is not {box}Γ, {dia}α ⇒ {dia}Δ over the premise"

    def _r_Gstar(self, c, p):
        return self._box_right(c, p, "G", "F")

    def _r_Hstar(self, c, p):
        return self._box_right(c, p, "H", "P")

    def _r_starF(self, c, p):
        return self._dia_left(c, p, "G", "F")

    def _r_starP(self, c, p):
        return self._dia_left(c, p, "H", "P")

    def _double_left(self, c: Sequent, p: Sequent, outer: str, inner: str) -> str | None:
        if len(c.left) == 1:
            (phi,) = c.left
            mid = as_modal(outer, phi, self.calc)
            alpha = as_modal(inner, mid, self.calc) if mid is not None else None
            if alpha is not None and p == Sequent(frozenset({alpha}), c.right):
                return None
        return f"expected {outer}{inner}α ⇒ Δ over α ⇒ Δ"

    def _double_right(self, c: Sequent, p: Sequent, outer: str, inner: str) -> str | None:
        if len(c.right) == 1:
            (phi,) = c.right
            mid = as_modal(outer, phi, self.calc)
            alpha = as_modal(inner, mid, self.calc) if mid is not None else None
            if alpha is not None and p == Sequent(c.left, frozenset({alpha})):
                return None
        return f"expected Γ ⇒ {outer}{inner}α over Γ ⇒ α (no extra succedent)"

    def _r_PG(self, c, p):
        return self._double_left(c, p, "P", "G")

    def _r_FH(self, c, p):
        return self._double_left(c, p, "F", "H")

    def _r_GP(self, c, p):
        return self._double_right(c, p, "G", "P")

    def _r_HF(self, c, p):
        return self._double_right(c, p, "H", "F")

    # negation and implication
    def _r_neg_l(self, c, p):
        if self.calc == "lti":
            if c.right:
                return "intuitionistic [¬⇒] has an empty succedent"
            return self._left_rule(c, [p], "neg", lambda g, d, a: [Sequent(g, frozenset({a}))])
        return self._left_rule(c, [p], "neg", lambda g, d, a: [Sequent(g, d | {a})])

    def _r_neg_r(self, c, p):
        if self.calc == "lti":
            if len(c.right) != 1:
                return "intuitionistic [⇒¬] has a single succedent formula"
            return self._right_rule(c, [p], "neg",
                                    lambda g, d, a: [Sequent(g | {a}, frozenset())] if not d else [])
        return self._right_rule(c, [p], "neg", lambda g, d, a: [Sequent(g | {a}, d)])

    def _r_imp_l(self, c, p1, p2):
        return self._left_rule(c, [p1, p2], "imp",
                               lambda g, d, a, b: [Sequent(g, d | {a}), Sequent(g | {b}, d)])

    def _r_imp_r(self, c, p):
        if self.calc == "lti" and len(c.right) != 1:
            return "intuitionistic [⇒→] has a single succedent formula"
        return self._right_rule(c, [p], "imp", lambda g, d, a, b: (
            [Sequent(g | {a}, d | {b})] if self.calc != "lti" or not d else []))

    # De Morgan negation
    def _r_tilde(self, c, p):
        if len(c.left) == 1 and len(c.right) == 1 and len(p.left) == 1 and len(p.right) == 1:
            (nb,), (na,) = c.left, c.right
            (a,), (b,) = p.left, p.right
            if nb.op == "tilde" and na.op == "tilde" and nb.args[0] == b and na.args[0] == a:
                return None
        return "expected ∼β ⇒ ∼α over α ⇒ β"

    def _r_tt_l(self, c, p):
        for phi in c.left:
            if phi.op == "tilde" and phi.args[0].op == "tilde":
                alpha = phi.args[0].args[0]
                if any(p == Sequent(g | {alpha}, c.right) for g in _contexts(c.left, phi)):
                    return None
        return "expected Γ, ∼∼α ⇒ Δ over Γ, α ⇒ Δ"

    def _r_tt_r(self, c, p):
        for phi in c.right:
            if phi.op == "tilde" and phi.args[0].op == "tilde":
                alpha = phi.args[0].args[0]
                if any(p == Sequent(c.left, d | {alpha}) for d in _contexts(c.right, phi)):
                    return None
        return "expected Γ ⇒ Δ, ∼∼α over Γ ⇒ Δ, α"

    # derived rules
    def _r_mbox(self, c, p, box):
        gamma = _unwrap_all(c.left, box, self.calc)
        if gamma is not None and len(c.right) == 1:
            alpha = as_modal(box, next(iter(c.right)), self.calc)
            if alpha is not None and p == Sequent(gamma, frozenset({alpha})):
                return None
        return f"expected {box}Γ ⇒ {box}α over Γ ⇒ α"

    def _r_mdia(self, c, p, dia):
        delta = _unwrap_all(c.right, dia, self.calc)
        if delta is not None and len(c.left) == 1:
            alpha = as_modal(dia, next(iter(c.left)), self.calc)
            if alpha is not None and p == Sequent(frozenset({alpha}), delta):
                return None
        return f"expected {dia}α ⇒ {dia}Δ over α ⇒ Δ"

    def _r_mG(self, c, p):
        return self._r_mbox(c, p, "G")

    def _r_mH(self, c, p):
        return self._r_mbox(c, p, "H")

    def _r_mF(self, c, p):
        return self._r_mdia(c, p, "F")

    def _r_mP(self, c, p):
        return self._r_mdia(c, p, "P")

    def _r_nbox(self, c, p, box):
        if not c.left and not p.left and len(c.right) == 1 and len(p.right) == 1:
            if as_modal(box, next(iter(c.right)), self.calc) == next(iter(p.right)):
                return None
        return f"expected ⇒ {box}α over ⇒ α"

    def _r_ndia(self, c, p, dia):
        if not c.right and not p.right and len(c.left) == 1 and len(p.left) == 1:
            if as_modal(dia, next(iter(c.left)), self.calc) == next(iter(p.left)):
                return None
        return f"expected {dia}α ⇒ over α ⇒"

    def _r_nG(self, c, p):
        return self._r_nbox(c, p, "G")

    def _r_nH(self, c, p):
        return self._r_nbox(c, p, "H")

    def _r_nF(self, c, p):
        return self._r_ndia(c, p, "F")

    def _r_nP(self, c, p):
        return self._r_ndia(c, p, "P")

    def _r_adjoint(self, c, p, dia, box, to_box):
        # to_box: dia α ⇒ β / α ⇒ box β ; otherwise α ⇒ box β / dia α ⇒ β
        if not (len(c.left) == len(c.right) == len(p.left) == len(p.right) == 1):
            return "adjunction rules relate single-formula sequents"
        (cl,), (cr,), (pl,), (pr,) = c.left, c.right, p.left, p.right
        if to_box:
            if as_modal(dia, pl, self.calc) == cl and as_modal(box, cr, self.calc) == pr:
                return None
            return f"expected α ⇒ {box}β over {dia}α ⇒ β"
        if as_modal(dia, cl, self.calc) == pl and as_modal(box, pr, self.calc) == cr:
            return None
        return f"expected {dia}α ⇒ β over α ⇒ {box}β"

    def _r_AdG(self, c, p):
        return self._r_adjoint(c, p, "P", "G", True)

    def _r_AdH(self, c, p):
        return self._r_adjoint(c, p, "F", "H", True)

    def _r_AdP(self, c, p):
        return self._r_adjoint(c, p, "P", "G", False)

    def _r_AdF(self, c, p):
        return self._r_adjoint(c, p, "F", "H", False)


def _key(s: Sequent):
    return (sorted(map(render, s.left)), sorted(map(render, s.right)))


_RULE_METHOD = {"G*": "Gstar", "H*": "Hstar", "*F": "starF", "*P": "starP"}
_ARITY = {"ax": 0, "bot": 0, "top": 0, "hyp": 0, "cut": 2, "and_r": 2, "or_l": 2, "imp_l": 2}


def check_proof(tree: ProofTree, calc: str = "lt", hypotheses: Iterable[Sequent] = ()) -> bool:
    """Verify every node; raise :class:`RuleMismatch` at the first bad node (pre-order)."""
    checker = _Checker(calc, hypotheses)
    for node in tree.nodes():
        reason = checker.check(node)
        if reason is not None:
            raise RuleMismatch(node, reason)
    return True


# -------------------------------------------------------- building helpers

def identity(f: Formula) -> ProofTree:
    return ProofTree(Sequent.of([f], [f]), "ax")


def weaken_to(proof: ProofTree, target: Sequent) -> ProofTree:
    """Extend ``proof`` by single-formula weakenings until it concludes ``target``."""
    c = proof.conclusion
    if not (c.left <= target.left and c.right <= target.right):
        raise ValueError("target must contain the proved sequent")
    for f in sorted(target.left - c.left, key=render):
        c = Sequent(c.left | {f}, c.right)
        proof = ProofTree(c, "we_i", (proof,))
    for f in sorted(target.right - c.right, key=render):
        c = Sequent(c.left, c.right | {f})
        proof = ProofTree(c, "we_d", (proof,))
    return proof


def cut(left: ProofTree, right: ProofTree, formula: Formula) -> ProofTree:
    """Cut with context sharing: weakens both premises to a common Γ ⇒ Δ first."""
    l, r = left.conclusion, right.conclusion
    gamma = l.left | (r.left - {formula})
    delta = (l.right - {formula}) | r.right
    p1 = weaken_to(left, Sequent(gamma, delta | {formula}))
    p2 = weaken_to(right, Sequent(gamma | {formula}, delta))
    return ProofTree(Sequent(gamma, delta), "cut", (p1, p2))


# ---------------------------------------------------------- derived rules

def expand_derived(tree: ProofTree, calc: str = "lt") -> ProofTree:
    """Replace every derived-rule step by a derivation in the primitive rules."""
    premises = tuple(expand_derived(p, calc) for p in tree.premises)
    rule = tree.rule
    c = tree.conclusion
    if rule in ("mG", "nG"):
        return ProofTree(c, "G*", premises, tree.label)
    if rule in ("mH", "nH"):
        return ProofTree(c, "H*", premises, tree.label)
    if rule in ("mF", "nF"):
        return ProofTree(c, "*F", premises, tree.label)
    if rule in ("mP", "nP"):
        return ProofTree(c, "*P", premises, tree.label)
    if rule in ("AdG", "AdH", "AdP", "AdF"):
        return _expand_adjoint(rule, c, premises[0], calc)
    return ProofTree(c, rule, premises, tree.label)


def _expand_adjoint(rule: str, c: Sequent, sub: ProofTree, calc: str) -> ProofTree:
    (a,), (b,) = c.left, c.right
    if rule in ("AdG", "AdH"):
        # α ⇒ □β from ◇α ⇒ β: α ⇒ □◇α by [GP]/[HF], □◇α ⇒ □β by [G*]/[H*], cut
        box, dia, unit = ("G", "P", "GP") if rule == "AdG" else ("H", "F", "HF")
        beta = as_modal(box, b, calc)
        da = mk_modal(dia, a, calc)
        bda = mk_modal(box, da, calc)
        unit_proof = ProofTree(Sequent.of([a], [bda]), unit, (identity(a),))
        lifted = ProofTree(Sequent.of([bda], [b]), box + "*", (sub,))
        assert sub.conclusion == Sequent.of([da], [beta])
        return cut(unit_proof, lifted, bda)
    # ◇α ⇒ β from α ⇒ □β: ◇α ⇒ ◇□β by [*P]/[*F], ◇□β ⇒ β by [PG]/[FH], cut
    dia, box, counit = ("P", "G", "PG") if rule == "AdP" else ("F", "H", "FH")
    alpha = as_modal(dia, a, calc)
    bb = mk_modal(box, b, calc)
    dbb = mk_modal(dia, bb, calc)
    assert sub.conclusion == Sequent.of([alpha], [bb])
    lifted = ProofTree(Sequent.of([a], [dbb]), "*" + dia, (sub,))
    counit_proof = ProofTree(Sequent.of([dbb], [b]), counit, (identity(b),))
    return cut(lifted, counit_proof, dbb)


# --------------------------------------------------- conjunction/disjunction

def to_single_formula(tree: ProofTree) -> ProofTree:
    """From a proof of Γ ⇒ Δ build one of ⋀Γ ⇒ ⋁Δ using [∧⇒] and [⇒∨]."""
    proof = tree
    c = tree.conclusion
    left = sorted(c.left, key=render)
    right = sorted(c.right, key=render)
    if not left:
        proof = weaken_to(proof, Sequent(c.left | {TOP}, c.right))
    else:
        acc = left[0]
        for f in left[1:]:
            s = proof.conclusion
            conj = And(acc, f)
            proof = ProofTree(Sequent((s.left - {acc, f}) | {conj}, s.right), "and_l", (proof,))
            acc = conj
    c = proof.conclusion
    if not right:
        proof = weaken_to(proof, Sequent(c.left, c.right | {BOT}))
    else:
        acc = right[0]
        for f in right[1:]:
            s = proof.conclusion
            disj = Or(acc, f)
            proof = ProofTree(Sequent(s.left, (s.right - {acc, f}) | {disj}), "or_r", (proof,))
            acc = disj
    expected = Sequent.of([big_and(left)], [big_or(right)])
    assert proof.conclusion == expected
    return proof
