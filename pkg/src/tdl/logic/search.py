"""Bounded backward proof search without cut.

Invertible steps (the lattice connectives, and the classical negation and
implication rules) are applied eagerly with the principal formula dropped.
The remaining rules are tried in a fixed order with maximal contexts, and the
result is weakened back to the goal.  Failure means *unknown*, never *refuted*.
"""

from __future__ import annotations

from .calculus import ProofTree, check_proof, identity, weaken_to
from .syntax import BOT, TOP, Sequent, as_modal, render

DEFAULT_DEPTH = 8


class _Search:
    def __init__(self, calc: str, depth: int):
        self.calc = calc
        self.depth = depth
        self.proved: dict[Sequent, ProofTree] = {}
        self.failed: dict[Sequent, int] = {}
        self.path: set[Sequent] = set()
        self.loop_hit = False

    def _unwrap(self, fs, op):
        out = []
        for f in fs:
            body = as_modal(op, f, self.calc)
            if body is not None:
                out.append(body)
        return frozenset(out)

    def prove(self, s: Sequent, budget: int) -> ProofTree | None:
        if s in self.proved:
            return self.proved[s]
        if self.failed.get(s, -1) >= budget:
            return None
        if s in self.path:
            self.loop_hit = True
            return None
        closed = self._axiom(s)
        if closed is not None:
            self.proved[s] = closed
            return closed
        if budget <= 0:
            return None
        outer_loop = self.loop_hit
        self.loop_hit = False
        self.path.add(s)
        try:
            proof = self._invertible(s, budget) or self._search(s, budget)
        finally:
            self.path.discard(s)
        if proof is not None:
            self.proved[s] = proof
        elif not self.loop_hit:
            self.failed[s] = budget
        self.loop_hit = self.loop_hit or outer_loop
        return proof

    # ------------------------------------------------------------ closing
    def _axiom(self, s: Sequent) -> ProofTree | None:
        common = sorted(s.left & s.right, key=render)
        if common:
            return weaken_to(identity(common[0]), s)
        if BOT in s.left:
            return weaken_to(ProofTree(Sequent.of([BOT], []), "bot"), s)
        if TOP in s.right:
            return weaken_to(ProofTree(Sequent.of([], [TOP]), "top"), s)
        return None

    # --------------------------------------------------------- invertible
    def _invertible(self, s: Sequent, budget: int) -> ProofTree | None:
        classical = self.calc == "ltc"
        for f in sorted(s.left, key=render):
            rest = s.left - {f}
            if f.op == "and":
                return self._unary(s, "and_l", Sequent(rest | set(f.args), s.right), budget)
            if f.op == "or":
                a, b = f.args
                return self._binary(s, "or_l", Sequent(rest | {a}, s.right),
                                    Sequent(rest | {b}, s.right), budget)
            if classical and f.op == "neg":
                return self._unary(s, "neg_l", Sequent(rest, s.right | {f.args[0]}), budget)
            if classical and f.op == "imp":
                a, b = f.args
                return self._binary(s, "imp_l", Sequent(rest, s.right | {a}),
                                    Sequent(rest | {b}, s.right), budget)
            if self.calc == "ltdm" and f.op == "tilde" and f.args[0].op == "tilde":
                return self._unary(s, "tt_l", Sequent(rest | {f.args[0].args[0]}, s.right), budget)
        for f in sorted(s.right, key=render):
            rest = s.right - {f}
            if f.op == "or":
                return self._unary(s, "or_r", Sequent(s.left, rest | set(f.args)), budget)
            if f.op == "and":
                a, b = f.args
                return self._binary(s, "and_r", Sequent(s.left, rest | {a}),
                                    Sequent(s.left, rest | {b}), budget)
            if classical and f.op == "neg":
                return self._unary(s, "neg_r", Sequent(s.left | {f.args[0]}, rest), budget)
            if classical and f.op == "imp":
                a, b = f.args
                return self._unary(s, "imp_r", Sequent(s.left | {a}, rest | {b}), budget)
            if self.calc == "ltdm" and f.op == "tilde" and f.args[0].op == "tilde":
                return self._unary(s, "tt_r", Sequent(s.left, rest | {f.args[0].args[0]}), budget)
        return None

    def _unary(self, s, rule, premise, budget):
        sub = self.prove(premise, budget - 1)
        return None if sub is None else ProofTree(s, rule, (sub,))

    def _binary(self, s, rule, p1, p2, budget):
        a = self.prove(p1, budget - 1)
        if a is None:
            return None
        b = self.prove(p2, budget - 1)
        return None if b is None else ProofTree(s, rule, (a, b))

    # -------------------------------------------------------- choice points
    def _search(self, s: Sequent, budget: int) -> ProofTree | None:
        for conclusion, rule, premises in self._candidates(s):
            subs = []
            for p in premises:
                sub = self.prove(p, budget - 1)
                if sub is None:
                    break
                subs.append(sub)
            else:
                return weaken_to(ProofTree(conclusion, rule, tuple(subs)), s)
        return None

    def _candidates(self, s: Sequent):
        calc = self.calc
        L, R = s.left, s.right
        for box, dia in (("G", "F"), ("H", "P")):
            boxed = frozenset(f for f in L if as_modal(box, f, calc) is not None)
            gamma = self._unwrap(boxed, box)
            dias = frozenset(f for f in R if as_modal(dia, f, calc) is not None)
            delta = self._unwrap(dias, dia)
            for f in sorted(R, key=render):
                alpha = as_modal(box, f, calc)
                if alpha is not None:
                    yield Sequent(boxed, dias | {f}), box + "*", [Sequent(gamma, delta | {alpha})]
            left_dias = [f for f in sorted(L, key=render) if as_modal(dia, f, calc) is not None]
            for f in left_dias:
                alpha = as_modal(dia, f, calc)
                yield Sequent(boxed | {f}, dias), "*" + dia, [Sequent(gamma | {alpha}, delta)]
        for outer, inner, rule in (("P", "G", "PG"), ("F", "H", "FH")):
            for f in sorted(L, key=render):
                mid = as_modal(outer, f, calc)
                alpha = as_modal(inner, mid, calc) if mid is not None else None
                if alpha is not None:
                    yield Sequent.of([f], R), rule, [Sequent.of([alpha], R)]
        for outer, inner, rule in (("G", "P", "GP"), ("H", "F", "HF")):
            for f in sorted(R, key=render):
                mid = as_modal(outer, f, calc)
                alpha = as_modal(inner, mid, calc) if mid is not None else None
                if alpha is not None:
                    yield Sequent.of(L, [f]), rule, [Sequent.of(L, [alpha])]
        if calc == "lti":
            yield from self._intuitionistic(s)
        if calc == "ltdm":
            for nb in sorted(L, key=render):
                for na in sorted(R, key=render):
                    if nb.op == "tilde" and na.op == "tilde":
                        yield (Sequent.of([nb], [na]), "tilde",
                               [Sequent.of([na.args[0]], [nb.args[0]])])

    def _intuitionistic(self, s: Sequent):
        L, R = s.left, s.right
        for f in sorted(R, key=render):
            if f.op == "imp":
                a, b = f.args
                yield Sequent.of(L, [f]), "imp_r", [Sequent(L | {a}, frozenset({b}))]
            if f.op == "neg":
                yield Sequent.of(L, [f]), "neg_r", [Sequent(L | {f.args[0]}, frozenset())]
        for f in sorted(L, key=render):
            if f.op == "imp":
                a, b = f.args
                yield s, "imp_l", [Sequent(L, R | {a}), Sequent(L | {b}, R)]
            if f.op == "neg":
                yield Sequent(L, frozenset()), "neg_l", [Sequent(L, frozenset({f.args[0]}))]


def prove(s: Sequent, calc: str = "lt", depth: int = DEFAULT_DEPTH) -> ProofTree | None:
    """A checked cut-free proof of ``s``, or None when the bounded search gives up."""
    proof = _Search(calc, depth).prove(s, depth)
    if proof is not None:
        check_proof(proof, calc)
    return proof
