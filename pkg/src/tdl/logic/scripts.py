"""Proof scripts: a plain-text format for proof trees, and the bundled collection.

A file holds blocks such as::

    [name]
    system: lt
    hypotheses: p => G q ; q =>          (optional)
    conclusion: P p => q
    1 hyp : p => G q
    2 mP 1 : P p => P G q
    ...

Each node line is ``id rule premise-ids... : sequent``; the last node is the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from ..errors import DocumentError, TdlError
from .calculus import ProofTree, check_proof, expand_derived, to_single_formula
from .semantics import algebra_class, holds
from .syntax import CALCULI, Sequent, parse_sequent, render_sequent

BUNDLED_FILES = ("lt.proofs", "ltc.proofs", "lti.proofs", "ltdm.proofs")
VALIDITY_BOUND = 5


@dataclass(frozen=True)
class Script:
    name: str
    system: str
    hypotheses: tuple[Sequent, ...]
    conclusion: Sequent
    proof: ProofTree


def parse_scripts(text: str) -> list[Script]:
    blocks: list[tuple[str, list[tuple[int, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            blocks.append((line[1:-1].strip(), []))
        elif not blocks:
            raise DocumentError(f"line {lineno}: content before the first [name] header")
        else:
            blocks[-1][1].append((lineno, line))
    return [_parse_block(name, lines) for name, lines in blocks]


def _parse_block(name: str, lines: list[tuple[int, str]]) -> Script:
    fields: dict[str, str] = {}
    nodes: dict[str, ProofTree] = {}
    last = None
    for lineno, line in lines:
        key, sep, value = line.partition(":")
        key = key.strip()
        if key in ("system", "hypotheses", "conclusion") and sep:
            fields[key] = value.strip()
            if key == "system" and fields[key] not in CALCULI:
                raise DocumentError(f"[{name}] unknown system {fields[key]!r}")
            continue
        system = fields.get("system", "lt")
        if not sep:
            raise DocumentError(f"[{name}] line {lineno}: expected 'id rule premises : sequent'")
        head = key.split()
        if len(head) < 2:
            raise DocumentError(f"[{name}] line {lineno}: node needs an id and a rule")
        node_id, rule, prem_ids = head[0], head[1], head[2:]
        missing = [p for p in prem_ids if p not in nodes]
        if missing:
            raise DocumentError(f"[{name}] line {lineno}: unknown premise {missing[0]}")
        try:
            sequent = parse_sequent(value, system)
        except TdlError as exc:
            raise DocumentError(f"[{name}] line {lineno}: {exc}") from exc
        nodes[node_id] = ProofTree(sequent, rule, tuple(nodes[p] for p in prem_ids), node_id)
        last = nodes[node_id]
    system = fields.get("system", "lt")
    if last is None or "conclusion" not in fields:
        raise DocumentError(f"[{name}] needs a conclusion and at least one node")
    try:
        hyps = tuple(parse_sequent(h, system)
                     for h in fields.get("hypotheses", "").split(";") if h.strip())
        conclusion = parse_sequent(fields["conclusion"], system)
    except TdlError as exc:
        raise DocumentError(f"[{name}] {exc}") from exc
    if last.conclusion != conclusion:
        raise DocumentError(f"[{name}] root proves {render_sequent(last.conclusion)}, "
                            f"not the declared conclusion")
    return Script(name, system, hyps, conclusion, last)


def format_script(script: Script) -> str:
    """Serialize a script; node ids are assigned in post-order."""
    lines = [f"[{script.name}]", f"system: {script.system}"]
    if script.hypotheses:
        lines.append("hypotheses: " + " ; ".join(render_sequent(h) for h in script.hypotheses))
    lines.append(f"conclusion: {render_sequent(script.conclusion)}")
    ids: dict[int, str] = {}

    def emit(node: ProofTree) -> str:
        prem = [emit(p) for p in node.premises]
        key = str(len(ids) + 1)
        ids[id(node)] = key
        lines.append(" ".join([key, node.rule, *prem]) + " : " + render_sequent(node.conclusion))
        return key

    emit(script.proof)
    return "\n".join(lines) + "\n"


def load_bundled(files: Iterable[str] = BUNDLED_FILES) -> list[Script]:
    out = []
    base = resources.files("tdl.data") / "scripts"
    for name in files:
        out.extend(parse_scripts((base / name).read_text(encoding="utf-8")))
    return out


@dataclass(frozen=True)
class ScriptResult:
    name: str
    system: str
    checked: bool
    valid: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.checked and self.valid


def rule_valid(script: Script, max_size: int = VALIDITY_BOUND) -> bool:
    """In every algebra of the matching class, the hypotheses entail the conclusion."""
    for A in algebra_class(script.system, max_size):
        if all(holds(A, h) for h in script.hypotheses) and not holds(A, script.conclusion):
            return False
    return True


def run_script(script: Script, max_size: int = VALIDITY_BOUND) -> ScriptResult:
    try:
        check_proof(script.proof, script.system, script.hypotheses)
        check_proof(expand_derived(script.proof, script.system), script.system, script.hypotheses)
        check_proof(to_single_formula(script.proof), script.system, script.hypotheses)
    except TdlError as exc:
        return ScriptResult(script.name, script.system, False, False, str(exc))
    valid = rule_valid(script, max_size)
    return ScriptResult(script.name, script.system, True, valid,
                        None if valid else "conclusion fails in a finite algebra")


def run_bundled_proofs(calc: str | None = None, max_size: int = VALIDITY_BOUND) -> list[ScriptResult]:
    return [run_script(s, max_size) for s in load_bundled() if calc is None or s.system == calc]
