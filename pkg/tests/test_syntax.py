import pytest
from hypothesis import given, settings, strategies as st

from support import formula_strategy
from tdl.errors import FormulaSyntaxError
from tdl.logic.syntax import (TOP, And, F, G, H, Imp, Neg, Or, Sequent, Tilde, Var, parse_formula,
                              parse_sequent, render, render_sequent)

p, q, r = Var("p"), Var("q"), Var("r")


def test_precedence():
    assert parse_formula("G p & q") == And(G(p), q)
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("G F p") == G(F(p))
    assert parse_formula("p -> q -> r", "ltc") == Imp(p, Imp(q, r))
    assert parse_formula("~p & q", "lti") == And(Neg(p), q)
    assert parse_formula("p & q | r") == Or(And(p, q), r)


def test_associativity_of_lattice_connectives():
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert parse_formula("p | q | r") == Or(Or(p, q), r)


def test_sequents():
    s = parse_sequent("p, G q => F (p & q)")
    assert s == Sequent.of([p, G(q)], [F(And(p, q))])
    assert parse_sequent("=>") == Sequent.of()
    assert parse_sequent("q, p, p => ") == Sequent.of([p, q], [])
    assert parse_sequent("=> top") == Sequent.of([], [TOP])


@pytest.mark.parametrize("text,calc,pos", [
    ("p -> -> q", "ltc", 5),
    ("p &", "lt", 3),
    ("(p | q", "lt", 6),
    ("p q", "lt", 2),
    ("p $ q", "lt", 2),
    ("p -> q", "lt", 2),
    ("~p", "lt", 0),
])
def test_syntax_errors(text, calc, pos):
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula(text, calc)
    assert err.value.position == pos


def test_sequent_needs_arrow():
    with pytest.raises(FormulaSyntaxError):
        parse_sequent("p, q")


def test_de_morgan_diamonds_are_abbreviations():
    assert parse_formula("F p", "ltdm") == Tilde(G(Tilde(p)))
    assert parse_formula("P p", "ltdm") == Tilde(H(Tilde(p)))
    assert parse_formula("~p", "ltdm") == Tilde(p)
    assert parse_formula("~p", "ltc") == Neg(p)


def test_unknown_calculus():
    with pytest.raises(ValueError):
        parse_formula("p", "k4")


@pytest.mark.parametrize("calc", ["lt", "ltc", "ltdm"])
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_render_parse_roundtrip(calc, data):
    f = data.draw(formula_strategy(calc))
    if calc == "ltdm":
        # diamonds come back in their tilde encoding
        f = parse_formula(render(f), calc)
    assert parse_formula(render(f), calc) == f
    assert parse_formula("  " + render(f).replace(" ", "  ") + " ", calc) == f


@settings(max_examples=80, deadline=None)
@given(st.lists(formula_strategy(), max_size=3), st.lists(formula_strategy(), max_size=3))
def test_sequent_roundtrip(left, right):
    s = Sequent.of(left, right)
    assert parse_sequent(render_sequent(s)) == s


def test_formula_helpers():
    f = parse_formula("G (p & q) | F r")
    assert f.variables() == {"p", "q", "r"}
    assert f.depth() == 3
    assert sum(1 for _ in f.subformulas()) == 7
