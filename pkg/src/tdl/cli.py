"""Command-line interface: ``tdl <command> ...``.

Exit codes: 0 success (valid, proved, isomorphism confirmed, no countermodel),
1 a violation or countermodel was found, 2 malformed input, 3 the proof search
gave up without an answer.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Callable

from . import io
from .algebra import check_axioms, classify, derived_properties
from .congruence import congruence_lattice, is_simple, is_subdirectly_irreducible
from .duality import (canonical_frame, dual_space, epsilon_map, h_embedding, is_tdl_frame,
                      k_embedding, sigma_map, upset_algebra)
from .errors import TdlError
from .kripke import extension, first_frame_failure, frame_countermodel, valid_in_model
from .logic.scripts import VALIDITY_BOUND, load_bundled, run_script
from .logic.search import DEFAULT_DEPTH, prove
from .logic.semantics import countermodel, first_failure
from .logic.syntax import CALCULI, parse_formula, parse_sequent, render, render_sequent
from .order import bits

OK, VIOLATION, BAD_INPUT, UNKNOWN = 0, 1, 2, 3


class Report:
    """Collects text lines and a JSON payload; emits one of them at the end."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def __setitem__(self, key: str, value) -> None:
        self.data[key] = value

    def render(self) -> str:
        if self.fmt == "json":
            return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        return "\n".join(self.lines) + "\n"


def _env_bound(default: int) -> int:
    raw = os.environ.get("TDL_MAX_SIZE")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise TdlError(f"TDL_MAX_SIZE must be an integer, got {raw!r}") from None


def _emit_document(args, doc: dict, rep: Report) -> None:
    """Documents go to --out when given, otherwise they become the JSON payload."""
    text = io.dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        rep.line(f"wrote {doc['type']} to {args.out}")
    else:
        rep.line(text.rstrip("\n"))
    rep["document"] = doc


def _load_algebra(path: str):
    return io.algebra_from_doc(io.read_document(path))


def _frame_lines(X) -> list[str]:
    p = X.poset
    pairs = ", ".join(f"({p.name(a)},{p.name(b)})" for a, b in X.pairs())
    return [f"points: {X.size}", f"R: {len(X.pairs())} pairs {{{pairs}}}"]


# ------------------------------------------------------------------ commands

def cmd_check(args, rep: Report) -> int:
    parts = io.algebra_parts(io.read_document(args.file))
    report = check_axioms(parts.lattice, parts.G, parts.H, parts.F, parts.P)
    rep["axioms"] = [report.describe(v) for v in report.violations]
    if not report.passed:
        rep.line("not a tDL-algebra")
        for v in report.violations:
            rep.line("  " + report.describe(v))
        rep["valid"] = False
        return VIOLATION
    A = parts.build()
    derived = derived_properties(A)
    kinds = classify(A)
    rep.line(f"tDL-algebra with {A.size} elements: axioms t1-t8 hold")
    rep.line("derived properties: " + derived.summary())
    rep.line(f"boolean: {'yes' if kinds.boolean else 'no'}; "
             f"heyting: {'yes' if kinds.heyting else 'no'}")
    rep["valid"] = True
    rep["derived"] = [derived.describe(v) for v in derived.violations]
    rep["boolean"], rep["heyting"] = kinds.boolean, kinds.heyting
    return OK


def _algebra_or_frame(path: str):
    doc = io.read_document(path)
    if doc["type"] == "tdl-algebra":
        return io.algebra_from_doc(doc), None
    if doc["type"] == "tdl-frame":
        return None, io.frame_from_doc(doc)
    raise TdlError(f"expected an algebra or a frame, got {doc['type']}")


def cmd_dual(args, rep: Report) -> int:
    X = dual_space(_load_algebra(args.file))
    for text in _frame_lines(X):
        rep.line("# " + text)
    _emit_document(args, io.frame_to_doc(X), rep)
    return OK


def cmd_frame(args, rep: Report) -> int:
    X = canonical_frame(_load_algebra(args.file))
    for text in _frame_lines(X):
        rep.line("# " + text)
    _emit_document(args, io.frame_to_doc(X), rep)
    return OK


def cmd_complex(args, rep: Report) -> int:
    X = io.frame_from_doc(io.read_document(args.file))
    report = is_tdl_frame(X.poset, X)
    if not report.is_frame:
        rep.line("not a tDL-frame: " + report.summary())
        rep["frame"] = False
        return VIOLATION
    B = upset_algebra(X)
    rep.line(f"# complex algebra with {B.size} elements")
    _emit_document(args, io.algebra_to_doc(B), rep)
    return OK


def cmd_roundtrip(args, rep: Report) -> int:
    A, X = _algebra_or_frame(args.file)
    try:
        if A is not None:
            sigma = sigma_map(A)
            h = h_embedding(A)
            rep.line("sigma: isomorphism onto the up-sets of the dual space")
            rep.line("h: isomorphism onto the complex algebra of the canonical frame")
            rep["sigma"], rep["h"] = list(sigma.table), list(h.table)
        else:
            eps = epsilon_map(X)
            k = k_embedding(X)
            rep.line("epsilon: order and relation isomorphism")
            rep.line("k: order and relation isomorphism")
            rep["epsilon"], rep["k"] = list(eps), list(k)
    except (TdlError, AssertionError) as exc:
        rep.line(f"round trip failed: {exc}")
        rep["ok"] = False
        return VIOLATION
    rep["ok"] = True
    return OK


def cmd_congruences(args, rep: Report) -> int:
    A = _load_algebra(args.file)
    lat = congruence_lattice(A)
    X = dual_space(A)
    for Y, theta in zip(lat.subsets, lat.congruences):
        label = "{" + ",".join(X.name(x) for x in bits(Y)) + "}"
        rep.line(f"Y = {label}: {theta.describe()}")
    rep.line(f"congruences: {len(lat)}")
    rep["congruences"] = [theta.describe() for theta in lat.congruences]
    return OK


def cmd_simple(args, rep: Report) -> int:
    A = _load_algebra(args.file)
    v = is_simple(A)
    n = len(congruence_lattice(A))
    rep.line(f"simple: {'yes' if v.simple else 'no'}; congruences: {n}")
    X = dual_space(A)
    sets = ", ".join("{" + ",".join(X.name(x) for x in bits(Y)) + "}" for Y in v.tps_sets)
    rep.line(f"closed tPS-sets: {sets}")
    rep.line(f"A^d precheck: {'not simple' if v.precheck_fired else 'inconclusive'}")
    rep["simple"], rep["congruences"] = v.simple, n
    rep["precheck_fired"] = v.precheck_fired
    return OK


def cmd_si(args, rep: Report) -> int:
    A = _load_algebra(args.file)
    v = is_subdirectly_irreducible(A)
    simple = is_simple(A).simple
    n = len(congruence_lattice(A))
    rep.line(f"simple: {'yes' if simple else 'no'}; SI: {'yes' if v.subdirectly_irreducible else 'no'}; "
             f"congruences: {n}")
    if v.monolith is not None:
        rep.line(f"monolith: {v.monolith.describe()}")
    if v.diagnostics:
        rep.line(f"note: {v.diagnostics}")
    rep["simple"], rep["si"], rep["congruences"] = simple, v.subdirectly_irreducible, n
    rep["monolith"] = v.monolith.describe() if v.monolith is not None else None
    return OK


def cmd_prove(args, rep: Report) -> int:
    s = parse_sequent(args.sequent, args.system)
    proof = prove(s, args.system, args.depth)
    if proof is None:
        rep.line(f"unknown: no cut-free proof of {render_sequent(s)} within depth {args.depth}")
        rep["result"] = "unknown"
        return UNKNOWN
    rep.line(f"proved: {render_sequent(s)}")
    rep.line(proof.render())
    rep["result"] = "proved"
    rep["size"] = proof.size()
    return OK


def _valuation_lines(A, v) -> list[str]:
    return [f"algebra ({A.size} elements):"] + [
        "  " + line for line in io.dumps(io.algebra_to_doc(A)).splitlines()
    ] + [f"valuation: {v.describe()}"]


def cmd_valid(args, rep: Report) -> int:
    A = _load_algebra(args.algebra)
    s = parse_sequent(args.sequent, args.system)
    v = first_failure(A, s)
    if v is None:
        rep.line(f"valid: {render_sequent(s)}")
        rep["valid"] = True
        return OK
    rep.line(f"not valid: {render_sequent(s)}")
    rep.line(f"valuation: {v.describe()}")
    rep["valid"] = False
    rep["valuation"] = dict(v.assignment)
    return VIOLATION


def cmd_countermodel(args, rep: Report) -> int:
    s = parse_sequent(args.sequent, args.system)
    default = 4 if args.frames else 6
    bound = args.max_size if args.max_size is not None else _env_bound(default)
    if args.frames:
        M = frame_countermodel(s, bound)
        if M is None:
            rep.line(f"no frame countermodel with at most {bound} points")
            rep["found"] = False
            return OK
        rep.line(f"countermodel: {render_sequent(s)} fails in the model")
        rep.line(io.dumps(io.model_to_doc(M)).rstrip("\n"))
        rep["found"] = True
        rep["model"] = io.model_to_doc(M)
        return VIOLATION
    hit = countermodel(s, bound, args.system)
    if hit is None:
        rep.line(f"no countermodel with at most {bound} elements")
        rep["found"] = False
        return OK
    A, v = hit
    rep.line(f"countermodel: {render_sequent(s)} fails")
    for text in _valuation_lines(A, v):
        rep.line(text)
    rep["found"] = True
    rep["algebra"] = io.algebra_to_doc(A)
    rep["valuation"] = {name: A.name(x) for name, x in v.assignment}
    return VIOLATION


def cmd_kripke(args, rep: Report) -> int:
    if (args.frame is None) == (args.model is None):
        raise TdlError("give exactly one of --frame or --model")
    text = args.formula
    is_sequent = "=>" in text
    if args.model is not None:
        M = io.model_from_doc(io.read_document(args.model))
        X = M.frame
        if not is_sequent:
            f = parse_formula(text, args.system)
            ext = extension(M, f)
            names = [X.name(x) for x in bits(ext)]
            rep.line(f"extension of {render(f)}: {{{','.join(names)}}}")
            rep["extension"] = names
            return OK
        s = parse_sequent(text, args.system)
        ok = valid_in_model(M, s)
        rep.line(f"{'valid' if ok else 'not valid'} in the model: {render_sequent(s)}")
        rep["valid"] = ok
        return OK if ok else VIOLATION
    X = io.frame_from_doc(io.read_document(args.frame))
    report = is_tdl_frame(X.poset, X)
    if not report.is_frame:
        rep.line("not a tDL-frame: " + report.summary())
        return VIOLATION
    s = parse_sequent(text if is_sequent else "=> " + text, args.system)
    M = first_frame_failure(X, s)
    if M is None:
        rep.line(f"valid in the frame: {render_sequent(s)}")
        rep["valid"] = True
        return OK
    rep.line(f"not valid in the frame: {render_sequent(s)}")
    rep.line(f"meaning: {M.describe()}")
    rep["valid"] = False
    rep["meaning"] = io.model_to_doc(M)["meaning"]
    return VIOLATION


def cmd_scripts(args, rep: Report) -> int:
    scripts = io.read_scripts(args.file) if args.file else load_bundled()
    if args.system:
        scripts = [s for s in scripts if s.system == args.system]
    bound = _env_bound(VALIDITY_BOUND)
    results = [run_script(s, bound) for s in scripts]
    for r in results:
        status = "ok" if r.ok else f"FAILED ({r.error})"
        rep.line(f"{r.system:5} {r.name}: {status}")
    failed = sum(not r.ok for r in results)
    rep.line(f"{len(results) - failed}/{len(results)} scripts passed")
    rep["results"] = [{"name": r.name, "system": r.system, "ok": r.ok, "error": r.error}
                      for r in results]
    return VIOLATION if failed else OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdl", description="Tense distributive lattices: "
                                     "algebras, dualities, congruences and the sequent calculus.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--out", help="write the emitted document to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(handler=handler)
        return p

    for name, handler, help in (
        ("check", cmd_check, "validate an algebra against the axioms"),
        ("dual", cmd_dual, "dual tense Priestley space of an algebra"),
        ("frame", cmd_frame, "canonical frame of an algebra"),
        ("congruences", cmd_congruences, "congruence lattice via closed tPS-sets"),
        ("simple", cmd_simple, "simplicity test"),
        ("si", cmd_si, "subdirect irreducibility test"),
    ):
        command(name, handler, help).add_argument("file")
    command("complex", cmd_complex, "complex algebra of a frame").add_argument("file")
    command("roundtrip", cmd_roundtrip,
            "check the duality isomorphisms for an algebra or a frame").add_argument("file")

    p = command("prove", cmd_prove, "cut-free proof search")
    p.add_argument("--system", choices=CALCULI, default="lt")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("sequent")

    p = command("valid", cmd_valid, "validity of a sequent in one algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--system", choices=CALCULI, default="lt")
    p.add_argument("sequent")

    p = command("countermodel", cmd_countermodel, "search small algebras (or frames) for a countermodel")
    p.add_argument("--max-size", type=int, default=None,
                   help="largest algebra (default 6) or frame (default 4) to try")
    p.add_argument("--system", choices=CALCULI, default="lt")
    p.add_argument("--frames", action="store_true", help="search tDL-frames instead of algebras")
    p.add_argument("sequent")

    p = command("kripke", cmd_kripke, "satisfaction and validity on frames and models")
    p.add_argument("--frame")
    p.add_argument("--model")
    p.add_argument("--system", choices=CALCULI, default="lt",
                   help="parse with this calculus; only the base connectives have frame clauses")
    p.add_argument("formula", help="a formula (extension) or a sequent (validity)")

    p = command("scripts", cmd_scripts, "check bundled or user proof scripts")
    p.add_argument("--system", choices=CALCULI)
    p.add_argument("--file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    rep = Report(args.format)
    try:
        code = args.handler(args, rep)
    except TdlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    text = rep.render()
    if args.out and "document" not in rep.data:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
