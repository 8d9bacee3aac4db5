"""Algebraic semantics: evaluation, degree-preserving validity and countermodels."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from ..algebra import TdlAlgebra, algebras_for
from ..errors import MissingConnective, SizeLimit
from ..order import lattice_census
from .syntax import Formula, Sequent

MAX_VARIABLES = 4
MAX_COUNTERMODEL_SIZE = 8


@dataclass(frozen=True)
class Valuation:
    algebra: TdlAlgebra
    assignment: tuple[tuple[str, int], ...]

    @staticmethod
    def of(algebra: TdlAlgebra, mapping: Mapping[str, int]) -> "Valuation":
        return Valuation(algebra, tuple(sorted(mapping.items())))

    def __getitem__(self, name: str) -> int:
        return dict(self.assignment)[name]

    def describe(self) -> str:
        return ", ".join(f"{v}↦{self.algebra.name(x)}" for v, x in self.assignment)


def _require(A: TdlAlgebra, op: str) -> None:
    if op == "tilde" and A.neg is None:
        raise MissingConnective("the algebra has no De Morgan negation")


def evaluate(v: Valuation | tuple[TdlAlgebra, Mapping[str, int]], f: Formula) -> int:
    """Homomorphic extension of a valuation, by structural recursion."""
    if isinstance(v, Valuation):
        A, env = v.algebra, dict(v.assignment)
    else:
        A, env = v
    L = A.lattice

    def ev(g: Formula) -> int:
        op = g.op
        if op == "var":
            return env[g.name]
        if op == "top":
            return L.top
        if op == "bot":
            return L.bottom
        if op == "and":
            return L.meet[ev(g.args[0])][ev(g.args[1])]
        if op == "or":
            return L.join[ev(g.args[0])][ev(g.args[1])]
        if op == "imp":
            return A.imp[ev(g.args[0])][ev(g.args[1])]
        if op == "neg":
            return A.imp[ev(g.args[0])][L.bottom]
        if op == "tilde":
            _require(A, op)
            return A.neg[ev(g.args[0])]
        return A.op(op)[ev(g.args[0])]

    return ev(f)


# ------------------------------------------------------ vectorised evaluation

@lru_cache(maxsize=16384)
def _tables(A: TdlAlgebra) -> dict[str, np.ndarray]:
    L = A.lattice
    out = {
        "meet": np.array(L.meet, dtype=np.int8),
        "join": np.array(L.join, dtype=np.int8),
        "imp": np.array(A.imp, dtype=np.int8),
        "leq": np.array([[L.leq(a, b) for b in range(A.size)] for a in range(A.size)]),
    }
    for name in ("G", "H", "F", "P"):
        out[name] = np.array(A.op(name), dtype=np.int8)
    out["neg"] = np.array([A.imp[x][L.bottom] for x in range(A.size)], dtype=np.int8)
    if A.neg is not None:
        out["tilde"] = np.array(A.neg, dtype=np.int8)
    return out


def valuation_grid(n: int, k: int) -> np.ndarray:
    """Row i lists the value of variable i under every valuation, first variable slowest."""
    if k == 0:
        return np.zeros((0, 1), dtype=np.int8)
    return np.indices((n,) * k, dtype=np.int8).reshape(k, -1)


def value_vector(A: TdlAlgebra, f: Formula, variables: tuple[str, ...],
                 memo: dict | None = None) -> np.ndarray:
    T = _tables(A)
    grid = valuation_grid(A.size, len(variables))
    width = grid.shape[1]
    index = {v: i for i, v in enumerate(variables)}
    memo = {} if memo is None else memo

    def ev(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        op = g.op
        if op == "var":
            r = grid[index[g.name]]
        elif op == "top":
            r = np.full(width, A.lattice.top, dtype=np.int8)
        elif op == "bot":
            r = np.full(width, A.lattice.bottom, dtype=np.int8)
        elif op in ("and", "or", "imp"):
            table = T["meet" if op == "and" else "join" if op == "or" else "imp"]
            r = table[ev(g.args[0]), ev(g.args[1])]
        else:
            if op not in T:
                raise MissingConnective("the algebra has no De Morgan negation")
            r = T[op][ev(g.args[0])]
        memo[g] = r
        return r

    return ev(f)


def _sides(A: TdlAlgebra, s: Sequent, variables: tuple[str, ...]):
    T = _tables(A)
    width = A.size ** len(variables)
    memo: dict = {}
    lhs = np.full(width, A.lattice.top, dtype=np.int8)
    for f in s.left:
        lhs = T["meet"][lhs, value_vector(A, f, variables, memo)]
    rhs = np.full(width, A.lattice.bottom, dtype=np.int8)
    for f in s.right:
        rhs = T["join"][rhs, value_vector(A, f, variables, memo)]
    return lhs, rhs


def _variables(s: Sequent, limit: int) -> tuple[str, ...]:
    names = tuple(sorted(s.variables()))
    if len(names) > limit:
        raise SizeLimit(f"sequent has {len(names)} variables; the limit is {limit}")
    return names


def first_failure(A: TdlAlgebra, s: Sequent, max_variables: int = MAX_VARIABLES) -> Valuation | None:
    """The first valuation (lexicographic, variables sorted by name) refuting ``s``."""
    names = _variables(s, max_variables)
    lhs, rhs = _sides(A, s, names)
    bad = np.flatnonzero(~_tables(A)["leq"][lhs, rhs])
    if bad.size == 0:
        return None
    column = valuation_grid(A.size, len(names))[:, bad[0]]
    return Valuation.of(A, {v: int(x) for v, x in zip(names, column)})


def holds(A: TdlAlgebra, s: Sequent, max_variables: int = MAX_VARIABLES) -> bool:
    """⋀h(Γ) ≤ ⋁h(Δ) for every valuation h, with ⋀∅ = 1 and ⋁∅ = 0."""
    names = _variables(s, max_variables)
    lhs, rhs = _sides(A, s, names)
    return bool(_tables(A)["leq"][lhs, rhs].all())


def consequence(s: Sequent, algebras: Iterable[TdlAlgebra]) -> bool:
    return all(holds(A, s) for A in algebras)


@lru_cache(maxsize=64)
def algebra_class(calc: str, max_size: int) -> tuple[TdlAlgebra, ...]:
    """Algebras matching a calculus over every distributive lattice up to ``max_size``,
    in canonical order."""
    if max_size > MAX_COUNTERMODEL_SIZE:
        raise SizeLimit(f"algebra classes are limited to {MAX_COUNTERMODEL_SIZE} elements")
    out = []
    for _, L in lattice_census(max_size):
        out.extend(algebras_for(L, calc))
    return tuple(out)


def countermodel(s: Sequent, max_size: int = 6, calc: str = "lt") -> tuple[TdlAlgebra, Valuation] | None:
    """The canonically first algebra and valuation refuting ``s``, if any."""
    for A in algebra_class(calc, max_size):
        v = first_failure(A, s)
        if v is not None:
            return A, v
    return None
