import pytest
from hypothesis import given, strategies as st

import termgen
from mathbridge import ast, popcorn
from mathbridge.ast import Apply, Bind, Sym, Var
from mathbridge.errors import PopcornSyntax, UnboundSugar, UnknownInfix, Unprintable
from mathbridge.popcorn import QUALIFIED, SUGARED, PopcornConfig, Sugar

PLUS = Apply(Sym(ast.PLUS), (Var("x"), ast.Int(1)))


def app(sym, *args):
    return Apply(Sym(sym), args)


def test_qualified_and_sugared_parse_alike():
    assert popcorn.parse_popcorn("arith1.plus($x,1)") == PLUS
    assert popcorn.parse_popcorn("$x+1") == PLUS
    assert popcorn.parse_popcorn("1") == ast.Int(1)
    assert popcorn.parse_popcorn("2.5") == ast.Float(2.5)


def test_printing_modes():
    assert popcorn.print_popcorn(PLUS, SUGARED) == "$x+1"
    assert popcorn.print_popcorn(PLUS, QUALIFIED) == "arith1.plus($x,1)"


def test_parenthesization():
    t = app(ast.TIMES, PLUS, Var("y"))
    assert popcorn.print_popcorn(t) == "($x+1)*$y"
    assert popcorn.parse_popcorn("($x+1)*$y") == t
    assert popcorn.parse_popcorn("$x+1*$y") == app(ast.PLUS, Var("x"), app(ast.TIMES, ast.Int(1), Var("y")))


def test_left_and_right_associativity():
    a, b, c = Var("a"), Var("b"), Var("c")
    assert popcorn.parse_popcorn("$a-$b-$c") == app(ast.MINUS, app(ast.MINUS, a, b), c)
    assert popcorn.parse_popcorn("$a->$b->$c") == app(ast.IMPLIES, a, app(ast.IMPLIES, b, c))
    right = app(ast.MINUS, a, app(ast.MINUS, b, c))
    assert popcorn.parse_popcorn(popcorn.print_popcorn(right)) == right


def test_nary_plus_is_flat():
    assert popcorn.parse_popcorn("$a+$b+$c") == app(ast.PLUS, Var("a"), Var("b"), Var("c"))


def test_binder_syntax():
    t = popcorn.parse_popcorn("quant1.forall[$a,$b] -> $a*$b = $b*$a")
    assert isinstance(t, Bind) and t.binder == ast.FORALL
    assert [v.name for v in t.vars] == ["a", "b"]
    assert popcorn.parse_popcorn(popcorn.print_popcorn(t)) == t


def test_extension_symbols_print_qualified():
    t = popcorn.parse_popcorn("minmax2.max_sf(interval1.interval_cc(0, 1), fns1.lambda[$x]->$x)")
    assert "minmax2.max_sf(" in popcorn.print_popcorn(t, SUGARED)


def test_syntax_error_reports_position():
    with pytest.raises(PopcornSyntax) as info:
        popcorn.parse_popcorn("$x +\n  )")
    assert info.value.position == (2, 3)


def test_unknown_infix():
    with pytest.raises(UnknownInfix):
        popcorn.parse_popcorn("$x ^ 2")


def test_unbound_sugar():
    cfg = PopcornConfig(Sugar.SUGARED, {k: v for k, v in popcorn.DEFAULT_INFIX.items() if k != "+"})
    with pytest.raises(UnboundSugar):
        popcorn.parse_popcorn("$x+1", cfg)


def test_foreign_is_unprintable():
    with pytest.raises(Unprintable):
        popcorn.print_popcorn(ast.Foreign("image/png", b"\x89PNG"))


def test_fixture_files_parse(fixtures):
    for name in ("max-sf.pop", "argmax.pop", "argmaxone.pop", "exists-unique.pop"):
        t = popcorn.parse_popcorn((fixtures / name).read_text())
        for cfg in (SUGARED, QUALIFIED):
            assert popcorn.parse_popcorn(popcorn.print_popcorn(t, cfg), cfg) == t


# -- properties -------------------------------------------------------------

ARITH = [ast.PLUS, ast.MINUS, ast.TIMES, ast.DIVIDE, ast.EQ, ast.LT, ast.LEQ, ast.AND, ast.OR,
         ast.IMPLIES, ast.UNARY_MINUS]


def arith_tree(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([Var("x"), Var("y"), ast.Int(rng.randint(0, 9)), ast.Float(0.5)])
    op = rng.choice(ARITH)
    if op == ast.UNARY_MINUS:
        return app(op, arith_tree(rng, depth - 1))
    n = rng.randint(2, 3) if op in (ast.PLUS, ast.TIMES, ast.AND, ast.OR) else 2
    return app(op, *(arith_tree(rng, depth - 1) for _ in range(n)))


@given(st.randoms(use_true_random=False))
def test_printing_keeps_grouping(rng):
    t = arith_tree(rng, 5)
    assert popcorn.parse_popcorn(popcorn.print_popcorn(t, SUGARED)) == t


@given(st.randoms(use_true_random=False))
def test_round_trip_both_modes(rng):
    t = termgen.om_term(rng, depth=4, popcorn=True)
    sugared = popcorn.parse_popcorn(popcorn.print_popcorn(t, SUGARED), SUGARED)
    qualified = popcorn.parse_popcorn(popcorn.print_popcorn(t, QUALIFIED), QUALIFIED)
    assert sugared == t
    assert qualified == t
