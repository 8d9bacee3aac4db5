"""JSON documents for algebras, frames, models and proof scripts.

Files name elements and points; everything else in the package works with
indices.  Documents are validated against a JSON schema before any
structure is built from them, and unknown fields are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from .algebra import OPERATORS, TdlAlgebra, build_tdl_algebra
from .duality import TdlFrame
from .errors import DocumentError, TdlError
from .kripke import KripkeModel
from .logic.calculus import ProofTree
from .logic.scripts import Script, parse_scripts
from .logic.syntax import CALCULI, render_sequent
from .order import FiniteDistributiveLattice, Poset, bits, build_poset, lattice_from_poset

_NAMES = {"type": "array", "items": {"type": "string", "minLength": 1}}
_PAIRS = {"type": "array",
          "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}}
_MAP = {"type": "object", "additionalProperties": {"type": "string"}}

FRAME_SCHEMA = {
    "type": "object",
    "properties": {"type": {"const": "tdl-frame"}, "points": _NAMES, "leq": _PAIRS, "R": _PAIRS},
    "required": ["points", "leq", "R"],
    "additionalProperties": False,
}

SCHEMAS: dict[str, dict] = {
    "tdl-algebra": {
        "type": "object",
        "properties": {"type": {"const": "tdl-algebra"}, "elements": _NAMES, "leq": _PAIRS,
                       **{op: _MAP for op in OPERATORS}, "neg": _MAP},
        "required": ["type", "elements", "leq", *OPERATORS],
        "additionalProperties": False,
    },
    "tdl-frame": {**FRAME_SCHEMA, "required": ["type", "points", "leq", "R"]},
    "kripke-model": {
        "type": "object",
        "properties": {"type": {"const": "kripke-model"}, "frame": FRAME_SCHEMA,
                       "meaning": {"type": "object", "additionalProperties": _NAMES}},
        "required": ["type", "frame", "meaning"],
        "additionalProperties": False,
    },
    "proof-script": {
        "type": "object",
        "properties": {
            "type": {"const": "proof-script"},
            "name": {"type": "string"},
            "system": {"enum": list(CALCULI)},
            "hypotheses": {"type": "array", "items": {"type": "string"}},
            "conclusion": {"type": "string"},
            "nodes": {"type": "array", "minItems": 1, "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "rule": {"type": "string"},
                               "premises": {"type": "array", "items": {"type": "string"}},
                               "sequent": {"type": "string"}},
                "required": ["id", "rule", "sequent"],
                "additionalProperties": False}},
        },
        "required": ["type", "name", "system", "conclusion", "nodes"],
        "additionalProperties": False,
    },
}


def validate(doc: Any) -> str:
    """Check ``doc`` against the schema selected by its type tag; return the tag."""
    if not isinstance(doc, dict) or doc.get("type") not in SCHEMAS:
        raise DocumentError(f"unknown document type; expected one of {', '.join(SCHEMAS)}")
    try:
        jsonschema.validate(doc, SCHEMAS[doc["type"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise DocumentError(f"{where}: {exc.message}") from None
    return doc["type"]


def read_document(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    validate(doc)
    return doc


def dumps(doc: dict) -> str:
    validate(doc)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ------------------------------------------------------------------ helpers

def _index(names: list[str], what: str) -> dict[str, int]:
    if len(set(names)) != len(names):
        raise DocumentError(f"duplicate {what} names")
    return {n: i for i, n in enumerate(names)}


def _lookup(index: dict[str, int], name: str, what: str) -> int:
    try:
        return index[name]
    except KeyError:
        raise DocumentError(f"unknown {what} {name!r}") from None


def _poset(names: list[str], leq: list[list[str]], what: str) -> Poset:
    idx = _index(names, what)
    pairs = [(_lookup(idx, a, what), _lookup(idx, b, what)) for a, b in leq]
    try:
        return build_poset(len(names), pairs, names)
    except TdlError as exc:
        raise DocumentError(f"order: {exc}") from None


def _covers(p: Poset) -> list[list[str]]:
    return [[p.name(a), p.name(b)] for a, b in p.covers()]


# ------------------------------------------------------------------ algebras

@dataclass(frozen=True)
class AlgebraParts:
    """An algebra document resolved to indices, before the axioms are checked."""

    lattice: FiniteDistributiveLattice
    G: tuple[int, ...]
    H: tuple[int, ...]
    F: tuple[int, ...]
    P: tuple[int, ...]
    neg: tuple[int, ...] | None

    def build(self) -> TdlAlgebra:
        return build_tdl_algebra(self.lattice, self.G, self.H, self.F, self.P, self.neg)


def algebra_parts(doc: dict) -> AlgebraParts:
    if validate(doc) != "tdl-algebra":
        raise DocumentError(f"expected a tdl-algebra document, got {doc['type']}")
    names = doc["elements"]
    idx = _index(names, "element")
    p = _poset(names, doc["leq"], "element")
    try:
        L = lattice_from_poset(p)
    except TdlError as exc:
        raise DocumentError(f"not a distributive lattice: {exc}") from None

    def table(key: str) -> tuple[int, ...]:
        m = doc[key]
        missing = [n for n in names if n not in m]
        if missing:
            raise DocumentError(f"{key}: no value for {missing[0]!r}")
        extra = [n for n in m if n not in idx]
        if extra:
            raise DocumentError(f"{key}: unknown element {extra[0]!r}")
        return tuple(_lookup(idx, m[n], "element") for n in names)

    G, H, F, P = (table(op) for op in OPERATORS)
    return AlgebraParts(L, G, H, F, P, table("neg") if "neg" in doc else None)


def algebra_from_doc(doc: dict) -> TdlAlgebra:
    return algebra_parts(doc).build()


def algebra_to_doc(A: TdlAlgebra) -> dict:
    L = A.lattice
    names = L.names
    doc = {"type": "tdl-algebra", "elements": names, "leq": _covers(L.poset)}
    for op in OPERATORS:
        doc[op] = {names[x]: names[y] for x, y in enumerate(A.op(op))}
    if A.neg is not None:
        doc["neg"] = {names[x]: names[y] for x, y in enumerate(A.neg)}
    return doc


# -------------------------------------------------------------------- frames

def _frame_body(doc: dict) -> TdlFrame:
    names = doc["points"]
    idx = _index(names, "point")
    p = _poset(names, doc["leq"], "point")
    R = [0] * len(names)
    for a, b in doc["R"]:
        R[_lookup(idx, a, "point")] |= 1 << _lookup(idx, b, "point")
    return TdlFrame(p, tuple(R))


def frame_from_doc(doc: dict) -> TdlFrame:
    if validate(doc) != "tdl-frame":
        raise DocumentError(f"expected a tdl-frame document, got {doc['type']}")
    return _frame_body(doc)


def frame_to_doc(X: TdlFrame) -> dict:
    p = X.poset
    return {"type": "tdl-frame", "points": [p.name(i) for i in range(p.size)],
            "leq": _covers(p), "R": [[p.name(a), p.name(b)] for a, b in X.pairs()]}


def model_from_doc(doc: dict) -> KripkeModel:
    if validate(doc) != "kripke-model":
        raise DocumentError(f"expected a kripke-model document, got {doc['type']}")
    X = _frame_body(doc["frame"])
    idx = _index(doc["frame"]["points"], "point")
    meaning = {v: sum(1 << _lookup(idx, x, "point") for x in pts)
               for v, pts in doc["meaning"].items()}
    try:
        return KripkeModel.of(X, meaning)
    except TdlError as exc:
        raise DocumentError(str(exc)) from None


def model_to_doc(M: KripkeModel) -> dict:
    X = M.frame
    return {"type": "kripke-model", "frame": frame_to_doc(X),
            "meaning": {v: [X.name(x) for x in bits(U)] for v, U in M.meaning}}


# ------------------------------------------------------------------- scripts

def script_from_doc(doc: dict) -> Script:
    if validate(doc) != "proof-script":
        raise DocumentError(f"expected a proof-script document, got {doc['type']}")
    lines = [f"[{doc['name']}]", f"system: {doc['system']}"]
    if doc.get("hypotheses"):
        lines.append("hypotheses: " + " ; ".join(doc["hypotheses"]))
    lines.append(f"conclusion: {doc['conclusion']}")
    for node in doc["nodes"]:
        lines.append(" ".join([node["id"], node["rule"], *node.get("premises", [])])
                     + " : " + node["sequent"])
    return parse_scripts("\n".join(lines))[0]


def script_to_doc(script: Script) -> dict:
    nodes: list[dict] = []

    def emit(t: ProofTree) -> str:
        prem = [emit(p) for p in t.premises]
        key = str(len(nodes) + 1)
        nodes.append({"id": key, "rule": t.rule, "premises": prem,
                      "sequent": render_sequent(t.conclusion)})
        return key

    emit(script.proof)
    return {"type": "proof-script", "name": script.name, "system": script.system,
            "hypotheses": [render_sequent(h) for h in script.hypotheses],
            "conclusion": render_sequent(script.conclusion), "nodes": nodes}


def read_scripts(path: str | Path) -> list[Script]:
    """A ``.json`` proof-script document or a plain-text script file."""
    path = Path(path)
    if path.suffix == ".json":
        return [script_from_doc(read_document(path))]
    try:
        return parse_scripts(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None

