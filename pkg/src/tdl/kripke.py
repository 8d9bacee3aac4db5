"""Relational semantics: models on tDL-frames and the bridge to complex algebras.

Satisfaction is defined for the base signature only (lattice connectives, the
four tense operators and the constants).  Points and up-sets are bit-vectors as
everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Mapping

import numpy as np

from .algebra import TdlAlgebra
from .duality import TdlFrame, enumerate_frames, upset_algebra
from .errors import SizeLimit, TdlError, UnsupportedConnective
from .logic.semantics import Valuation, _tables, evaluate, holds, valuation_grid
from .logic.syntax import BOT, TOP, And, Formula, Modal, Or, Sequent, Var
from .order import bits, up_sets

MAX_FRAME_VARIABLES = 3
MAX_FRAME_POINTS = 5
_BASE_OPS = {"var", "top", "bot", "and", "or", "G", "H", "F", "P"}


def _require_base(f: Formula) -> None:
    for g in f.subformulas():
        if g.op not in _BASE_OPS:
            raise UnsupportedConnective(
                f"'{g.op}' has no satisfaction clause on frames; only &, |, G, H, F, P, top, bot")


@dataclass(frozen=True)
class KripkeModel:
    frame: TdlFrame
    meaning: tuple[tuple[str, int], ...]

    def __post_init__(self):
        p = self.frame.poset
        for name, U in self.meaning:
            if U >> self.frame.size:
                raise TdlError(f"meaning of {name} mentions a point outside the frame")
            if not p.is_up_set(U):
                raise TdlError(f"meaning of {name} is not an up-set")

    @staticmethod
    def of(frame: TdlFrame, meaning: Mapping[str, int]) -> "KripkeModel":
        return KripkeModel(frame, tuple(sorted(meaning.items())))

    @cached_property
    def env(self) -> dict[str, int]:
        return dict(self.meaning)

    def describe(self) -> str:
        X = self.frame
        return ", ".join(f"{v}↦{{{','.join(X.name(x) for x in bits(U))}}}"
                         for v, U in self.meaning)


def satisfies(M: KripkeModel, x: int, f: Formula) -> bool:
    """𝓜, x ⊨ f by the clauses for the base signature."""
    _require_base(f)
    return _sat(M, x, f)


def _sat(M: KripkeModel, x: int, f: Formula) -> bool:
    op, X = f.op, M.frame
    if op == "top":
        return True
    if op == "bot":
        return False
    if op == "var":
        try:
            return bool(M.env[f.name] >> x & 1)
        except KeyError:
            raise TdlError(f"the model gives no meaning to {f.name}") from None
    if op == "and":
        return _sat(M, x, f.args[0]) and _sat(M, x, f.args[1])
    if op == "or":
        return _sat(M, x, f.args[0]) or _sat(M, x, f.args[1])
    body = f.args[0]
    if op == "G":
        return all(_sat(M, y, body) for y in bits(X.R[x]))
    if op == "H":
        return all(_sat(M, y, body) for y in range(X.size) if X.R[y] >> x & 1)
    if op == "F":
        return any(_sat(M, y, body) for y in bits(X.R[x]))
    return any(_sat(M, y, body) for y in range(X.size) if X.R[y] >> x & 1)


def _as_valuation(M: KripkeModel, B: TdlAlgebra, variables) -> Valuation:
    family = up_sets(M.frame.poset)
    return Valuation.of(B, {v: family.index(M.env[v]) for v in variables if v in M.env})


def extension(M: KripkeModel, f: Formula, check: bool = True) -> int:
    """The set of points satisfying ``f``.

    With ``check`` the result is compared with the value of ``f`` in the
    complex algebra under the valuation induced by the meaning map.
    """
    _require_base(f)
    X = M.frame
    ext = sum(1 << x for x in range(X.size) if _sat(M, x, f))
    if check:
        B = upset_algebra(X)
        family = up_sets(X.poset)
        value = evaluate(_as_valuation(M, B, f.variables()), f)
        assert family.members[value] == ext, "extension differs from complex-algebra evaluation"
        assert X.poset.is_up_set(ext), "extension is not an up-set"
    return ext


def valid_in_model(M: KripkeModel, s: Sequent) -> bool:
    """m̄(⋀Γ) ⊆ m̄(⋁Δ), with an empty meet the whole frame and an empty join ∅."""
    left = (1 << M.frame.size) - 1
    for f in s.left:
        left &= extension(M, f, check=False)
    right = 0
    for f in s.right:
        right |= extension(M, f, check=False)
    return left & ~right == 0


# ------------------------------------------------- frame validity, vectorised

@dataclass(frozen=True)
class _FrameTables:
    """Lookup tables for the relational operators on every subset of a small frame."""

    full: int
    upsets: np.ndarray
    ops: dict[str, np.ndarray] = field(hash=False, compare=False)


@lru_cache(maxsize=4096)
def _frame_tables(X: TdlFrame) -> _FrameTables:
    n = X.size
    Rinv = [sum(1 << y for y in range(n) if X.R[y] >> x & 1) for x in range(n)]
    subsets = range(1 << n)

    def table(rel, universal):
        out = np.zeros(1 << n, dtype=np.int64)
        for Y in subsets:
            m = 0
            for x in range(n):
                hit = rel[x] & ~Y == 0 if universal else rel[x] & Y != 0
                m |= hit << x
            out[Y] = m
        return out

    ops = {"G": table(X.R, True), "H": table(Rinv, True),
           "F": table(X.R, False), "P": table(Rinv, False)}
    family = up_sets(X.poset)
    return _FrameTables((1 << n) - 1, np.array(family.members, dtype=np.int64), ops)


def _meaning_grid(X: TdlFrame, variables: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Every meaning map over ``variables``, as one column of up-sets per variable."""
    T = _frame_tables(X)
    k, u = len(variables), len(T.upsets)
    idx = np.indices((u,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=int)
    return {v: T.upsets[idx[i]] for i, v in enumerate(variables)}


def _extensions(X: TdlFrame, f: Formula, grid: dict[str, np.ndarray], size: int,
                memo: dict) -> np.ndarray:
    if f in memo:
        return memo[f]
    T = _frame_tables(X)
    op = f.op
    if op == "top":
        out = np.full(size, T.full, dtype=np.int64)
    elif op == "bot":
        out = np.zeros(size, dtype=np.int64)
    elif op == "var":
        out = grid[f.name]
    elif op == "and":
        out = _extensions(X, f.args[0], grid, size, memo) & _extensions(X, f.args[1], grid, size, memo)
    elif op == "or":
        out = _extensions(X, f.args[0], grid, size, memo) | _extensions(X, f.args[1], grid, size, memo)
    else:
        out = T.ops[op][_extensions(X, f.args[0], grid, size, memo)]
    memo[f] = out
    return out


def _sequent_failures(X: TdlFrame, s: Sequent) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    for f in (*s.left, *s.right):
        _require_base(f)
    variables = tuple(sorted(s.variables()))
    if len(variables) > MAX_FRAME_VARIABLES:
        raise SizeLimit(f"{len(variables)} variables; frame validity is limited to "
                        f"{MAX_FRAME_VARIABLES}")
    if X.size > MAX_FRAME_POINTS:
        raise SizeLimit(f"frame has {X.size} points; the limit is {MAX_FRAME_POINTS}")
    grid = _meaning_grid(X, variables)
    size = len(next(iter(grid.values()))) if grid else 1
    memo: dict = {}
    T = _frame_tables(X)
    left = np.full(size, T.full, dtype=np.int64)
    for f in s.left:
        left &= _extensions(X, f, grid, size, memo)
    right = np.zeros(size, dtype=np.int64)
    for f in s.right:
        right |= _extensions(X, f, grid, size, memo)
    return (left & ~right) != 0, grid


def valid_in_frame(X: TdlFrame, s: Sequent) -> bool:
    """Valid in every model on ``X`` (exhaustive over meaning maps)."""
    bad, _ = _sequent_failures(X, s)
    return not bad.any()


def first_frame_failure(X: TdlFrame, s: Sequent) -> KripkeModel | None:
    bad, grid = _sequent_failures(X, s)
    hits = np.flatnonzero(bad)
    if not len(hits):
        return None
    i = int(hits[0])
    return KripkeModel.of(X, {v: int(col[i]) for v, col in grid.items()})


def frame_countermodel(s: Sequent, max_points: int = 4) -> KripkeModel | None:
    """The first model, in canonical frame order, where ``s`` fails."""
    if max_points > MAX_FRAME_POINTS:
        raise SizeLimit(f"frame search is limited to {MAX_FRAME_POINTS} points")
    for X in enumerate_frames(max_points):
        M = first_frame_failure(X, s)
        if M is not None:
            return M
    return None


def frame_and_algebra_agree(X: TdlFrame, s: Sequent) -> bool:
    """Frame validity of ``s`` coincides with validity in the complex algebra."""
    return valid_in_frame(X, s) == holds(upset_algebra(X), s)


def meanings(X: TdlFrame, variables) -> Iterator[KripkeModel]:
    family = up_sets(X.poset).members
    variables = sorted(variables)
    for choice in itertools.product(family, repeat=len(variables)):
        yield KripkeModel.of(X, dict(zip(variables, choice)))


# ------------------------------------------------------------ bridge check

@dataclass(frozen=True)
class BridgeReport:
    frame: TdlFrame
    meanings: int
    reached: int
    failure: tuple[KripkeModel, Formula] | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


_UNARY = ("G", "H", "F", "P")


def bridge_check(X: TdlFrame, variables: tuple[str, ...] = ("p", "q"),
                 depth: int = 3) -> BridgeReport:
    """Compare extensions with complex-algebra values for all formulas up to ``depth``.

    Under a fixed meaning map the value of a formula of depth d+1 is one
    operation applied to values of formulas of depth at most d under the same
    map.  So it suffices to track, per meaning map, which up-sets occur as
    values at each depth, and to check every operation application on them
    against the relational clauses.  ``reached`` counts (meaning, value) pairs.
    """
    T = _frame_tables(X)
    B = upset_algebra(X)
    AT = {k: np.asarray(v, dtype=np.int64) for k, v in _tables(B).items()}
    ups = T.upsets
    U = len(ups)
    frame_un = {name: T.ops[name][ups] for name in _UNARY}
    frame_bin = {"meet": ups[:, None] & ups[None, :], "join": ups[:, None] | ups[None, :]}
    wrong = {name: frame_un[name] != ups[AT[name]] for name in _UNARY}
    wrong.update({name: frame_bin[name] != ups[AT[name]] for name in ("meet", "join")})

    grid = valuation_grid(U, len(variables)).astype(np.int64)
    M = grid.shape[1]
    reached = np.zeros((M, U), dtype=bool)
    rows = np.arange(M)
    for col in grid:
        reached[rows, col] = True
    reached[:, B.lattice.top] = True
    reached[:, B.lattice.bottom] = True
    history = [reached]

    def onehot(table: np.ndarray) -> np.ndarray:
        out = np.zeros((table.size, U), dtype=np.int32)
        out[np.arange(table.size), table.ravel()] = 1
        return out

    for level in range(depth):
        new = reached.copy()
        for name in _UNARY:
            bad = reached & wrong[name][None, :]
            if bad.any():
                m, u = map(int, np.argwhere(bad)[0])
                return _bridge_failure(X, variables, grid, history, m, name, u, None, B)
            new |= (reached.astype(np.int32) @ onehot(AT[name])) > 0
        pairs = reached[:, :, None] & reached[:, None, :]
        for name in ("meet", "join"):
            bad = pairs & wrong[name][None]
            if bad.any():
                m, u, w = map(int, np.argwhere(bad)[0])
                return _bridge_failure(X, variables, grid, history, m, name, u, w, B)
            new |= (pairs.reshape(M, U * U).astype(np.int32) @ onehot(AT[name])) > 0
        reached = new
        history.append(reached)
    return BridgeReport(X, M, int(reached.sum()))


def _bridge_failure(X, variables, grid, history, m, name, u, w, B) -> BridgeReport:
    """Rebuild a formula witnessing a disagreement found by :func:`bridge_check`."""
    T = _tables(B)
    leaves = {int(col[m]): Var(v) for v, col in reversed(list(zip(variables, grid)))}
    leaves.setdefault(B.lattice.top, TOP)
    leaves.setdefault(B.lattice.bottom, BOT)

    def witness(value: int, level: int) -> Formula:
        if level == 0 or history[level - 1][m, value]:
            return leaves[value] if level == 0 else witness(value, level - 1)
        prev = np.flatnonzero(history[level - 1][m])
        for op in _UNARY:
            for a in prev:
                if T[op][a] == value:
                    return Modal(op, witness(int(a), level - 1))
        for op, ctor in (("meet", And), ("join", Or)):
            for a in prev:
                for b in prev:
                    if T[op][a][b] == value:
                        return ctor(witness(int(a), level - 1), witness(int(b), level - 1))
        raise AssertionError("value recorded as reached without a witness")

    level = len(history) - 1
    if w is None:
        f = Modal(name, witness(u, level))
    else:
        f = (And if name == "meet" else Or)(witness(u, level), witness(w, level))
    family = up_sets(X.poset).members
    model = KripkeModel.of(X, {v: family[int(col[m])] for v, col in zip(variables, grid)})
    return BridgeReport(X, grid.shape[1], int(history[-1].sum()), (model, f))
