from hypothesis import given, strategies as st

import pytest

import termgen
from mathbridge import ast
from mathbridge.ast import Apply, Bind, BoundVar, Sym, Var
from mathbridge.errors import DuplicateBindingName, MalformedTerm


def f(*args):
    return Apply(Var("f"), args)


def test_free_variables_skip_bound_names():
    t = Bind(ast.FORALL, ("x",), f(Var("x"), Var("y")))
    assert ast.free_variables(t) == {"f", "y"}
    assert ast.free_variables(Apply(Sym(ast.PLUS), (Var("x"), ast.Int(1)))) == {"x"}
    assert ast.free_variables(ast.Int(3)) == set()


def test_condition_sees_bound_variables():
    t = Bind(ast.MAX_BINDER, ("x",), Var("x"), condition=f(Var("x"), Var("S")))
    assert ast.free_variables(t) == {"f", "S"}


def test_fresh_name_takes_least_unused_suffix():
    assert ast.fresh_name("x", {"x"}) == "x!1"
    assert ast.fresh_name("x", {"x", "x!1"}) == "x!2"
    assert ast.fresh_name("x!1", {"x", "x!1"}) == "x!2"


def test_simultaneous_substitution_swaps():
    t = f(Var("x"), Var("y"))
    swapped = ast.substitute_simultaneous(t, [("x", Var("y")), ("y", Var("x"))])
    assert swapped == f(Var("y"), Var("x"))


def test_substitution_avoids_capture():
    t = Bind(ast.FORALL, ("y",), f(Var("x"), Var("y")))
    out = ast.substitute_simultaneous(t, [("x", Var("y"))])
    assert isinstance(out, Bind)
    (v,) = out.vars
    assert v.name != "y"
    assert out.body == f(Var("y"), Var(v.name))


def test_substitution_rejects_duplicate_names():
    with pytest.raises(DuplicateBindingName):
        ast.substitute_simultaneous(Var("x"), [("x", ast.Int(1)), ("x", ast.Int(2))])


def test_alpha_equal_ignores_bound_names():
    a = Bind(ast.FORALL, ("x",), f(Var("x")))
    b = Bind(ast.FORALL, ("z",), f(Var("z")))
    c = Bind(ast.FORALL, ("z",), f(Var("x")))
    assert ast.alpha_equal(a, b)
    assert not ast.alpha_equal(a, c)


def test_alpha_equal_respects_shadowing():
    inner = Bind(ast.FORALL, ("x",), f(Var("x")))
    a = Bind(ast.FORALL, ("x",), Apply(Var("g"), (Var("x"), inner)))
    b = Bind(ast.FORALL, ("y",), Apply(Var("g"), (Var("y"), Bind(ast.FORALL, ("x",), f(Var("x"))))))
    c = Bind(ast.FORALL, ("y",), Apply(Var("g"), (Var("y"), Bind(ast.FORALL, ("x",), f(Var("y"))))))
    assert ast.alpha_equal(a, b)
    assert not ast.alpha_equal(a, c)


def test_malformed_terms_rejected():
    with pytest.raises(MalformedTerm):
        Bind(ast.FORALL, (), Var("x"))
    with pytest.raises(MalformedTerm):
        ast.Lit(ast.LitKind.INTEGER, "1")
    with pytest.raises(MalformedTerm):
        BoundVar("")


def test_float_literals_compare_by_bits():
    assert ast.Float(0.0) != ast.Float(-0.0)
    assert ast.Float(float("nan")) == ast.Float(float("nan"))


# -- properties -------------------------------------------------------------

terms = st.randoms(use_true_random=False).map(lambda r: termgen.om_term(r, depth=4))


@given(terms, st.sampled_from(["x", "y", "a", "P"]))
def test_substituting_a_closed_term_removes_the_variable(t, x):
    c = ast.Int(42)
    out = ast.substitute_simultaneous(t, [(x, c)])
    assert ast.free_variables(out) == ast.free_variables(t) - {x}


@given(terms)
def test_substitution_missing_free_variables_is_identity(t):
    missing = "never_free_here"
    assert missing not in ast.free_variables(t)
    assert ast.substitute_simultaneous(t, [(missing, ast.Int(0))]) == t


@given(terms)
def test_swap_twice_is_alpha_identity(t):
    swap = [("x", Var("y")), ("y", Var("x"))]
    twice = ast.substitute_simultaneous(ast.substitute_simultaneous(t, swap), swap)
    assert ast.alpha_equal(twice, t)


@given(terms, terms, terms)
def test_alpha_equal_is_an_equivalence(a, b, c):
    assert ast.alpha_equal(a, a)
    assert ast.alpha_equal(a, b) == ast.alpha_equal(b, a)
    if ast.alpha_equal(a, b) and ast.alpha_equal(b, c):
        assert ast.alpha_equal(a, c)


@given(terms)
def test_renaming_bound_variables_preserves_alpha_class(t):
    renamed = ast.rename_bound(t, ast.all_names(t))
    assert ast.alpha_equal(renamed, t)
    assert ast.free_variables(renamed) == ast.free_variables(t)
