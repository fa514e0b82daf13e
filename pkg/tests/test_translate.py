import pytest
from hypothesis import assume, given, strategies as st

from mathbridge import ast, extensions, omxml, oracle, smtlib, sorts, translate
from mathbridge.ast import Apply, Attributed, Bind, BoundVar, Lit, LitKind, Sort, Sym, Var
from mathbridge.errors import (
    BadConfig, IrreversibleMangling, UnloweredExtension, UnmappedBinder, UnmappedSymbol, UnsortableVariable,
    UntranslatableLiteral,
)
from mathbridge.translate import SymbolMap

PLUS = Apply(Sym(ast.PLUS), (Var("x"), ast.Int(1)))


def app(sym, *args):
    return Apply(Sym(sym), args)


def show(t):
    return smtlib.print_smt(t)


def test_plus():
    assert show(translate.om_to_smt(PLUS)) == "(+ x 1)"
    assert translate.smt_to_om(smtlib.parse_term("(+ x 1)")) == PLUS


def test_identities_follow_the_profile():
    assert show(translate.om_to_smt(Sym(ast.ONE))) == "1"
    assert show(translate.om_to_smt(Sym(ast.ZERO))) == "0"
    real = sorts.TheoryProfile(identity=ast.REAL)
    assert show(translate.om_to_smt(Sym(ast.ONE), profile=real)) == "1.0"


def test_literals_stay_literals():
    assert translate.smt_to_om(smtlib.parse_term("1")) == ast.Int(1)
    assert translate.smt_to_om(smtlib.parse_term("0.5")) == ast.Float(0.5)
    assert translate.smt_to_om(smtlib.parse_term("(- 3)")) == ast.Int(-3)
    assert show(translate.om_to_smt(ast.Int(-3))) == "(- 3)"
    assert show(translate.om_to_smt(ast.Float(0.1))) == "0.1000000000000000055511151231257827021181583404541015625"


def test_commutativity_with_int_table(fixtures):
    doc = omxml.parse_om_xml((fixtures / "commutativity.om.xml").read_text())
    table = sorts.SignatureTable(var_sorts={"a": ast.INT, "b": ast.INT})
    out = translate.om_to_smt(doc.root, SymbolMap.default(times="arith2"), table)
    text = show(out)
    assert text == "(forall ((a Int) (b Int)) (= (* a b) (* b a)))"
    assert sorts.check_sorts(smtlib.parse_term(text), sorts.SignatureTable()) == ast.BOOL


def test_times_direction_flag(fixtures):
    t = smtlib.parse_term("(* a b)")
    assert translate.smt_to_om(t) == app(ast.TIMES, Var("a"), Var("b"))
    assert translate.smt_to_om(t, SymbolMap.default(times="arith2")) == app(ast.TIMES2, Var("a"), Var("b"))
    # both OpenMath symbols go to *
    for m in (SymbolMap.default(), SymbolMap.default(times="arith2")):
        assert show(translate.om_to_smt(app(ast.TIMES, Var("a"), Var("b")), m)) == "(* a b)"
        assert show(translate.om_to_smt(app(ast.TIMES2, Var("a"), Var("b")), m)) == "(* a b)"


def test_commutativity_needs_the_arith2_flag(fixtures):
    root = omxml.parse_om_term((fixtures / "commutativity.om.xml").read_text())
    table = sorts.SignatureTable(var_sorts={"a": ast.REAL, "b": ast.REAL})
    assert translate.roundtrip_check(root, SymbolMap.default(times="arith2"), table)
    rt = translate.roundtrip_check(root, SymbolMap.default(), table)
    assert not rt and "arith1" in rt.diagnostic


def test_bound_sorts_come_back_as_attributions():
    t = translate.smt_to_om(smtlib.parse_term("(forall ((a S)(b S)) (= a b))"))
    assert isinstance(t, Bind) and t.binder == ast.FORALL
    assert [v.sort for v in t.vars] == [Sort("S"), Sort("S")]
    xml = omxml.print_om_xml(t)
    assert xml.count('<OMS cd="sts" name="sort"/>') == 2
    assert omxml.parse_om_term(xml) == t


def test_lambda_round_trip_fails_with_diagnostic():
    t = Bind(ast.LAMBDA, ("x",), Var("x"))
    rt = translate.roundtrip_check(t)
    assert not rt and "UnmappedBinder" in rt.diagnostic
    with pytest.raises(UnmappedBinder):
        translate.om_to_smt(t)


def test_translation_errors():
    with pytest.raises(UnsortableVariable):
        translate.om_to_smt(Bind(ast.FORALL, ("x",), Sym(ast.TRUE)))
    with pytest.raises(UnloweredExtension):
        translate.om_to_smt(Bind(ast.EXISTS_UNIQUE, (BoundVar("x", ast.INT),), Sym(ast.TRUE)))
    with pytest.raises(IrreversibleMangling):
        translate.smt_to_om(smtlib.parse_term("|a.b.c|"))
    with pytest.raises(IrreversibleMangling):
        translate.om_to_smt(Var("cd.name"))
    with pytest.raises(UntranslatableLiteral):
        translate.smt_to_om(smtlib.parse_term("#xFF"))
    with pytest.raises(UnmappedSymbol):
        translate.smt_to_om(smtlib.parse_term("(ite p 1 2)"))


def test_attributions_are_dropped():
    key = ast.om_symbol("altenc", "latex")
    t = app(ast.PLUS, Attributed(((key, Lit(LitKind.STRING, "x")),), Var("x")), ast.Int(1))
    assert show(translate.om_to_smt(t)) == "(+ x 1)"
    assert translate.roundtrip_check(t)


def test_symbol_map_file():
    m = translate.load_symbol_map("""
        # trig functions
        transc1.sin = sin
        arith2.times -> *
    """)
    t = app(ast.om_symbol("transc1", "sin"), Var("x"))
    assert show(translate.om_to_smt(t, m)) == "(sin x)"
    assert translate.smt_to_om(smtlib.parse_term("(sin x)"), m) == t
    with pytest.raises(BadConfig):
        translate.load_symbol_map("not a line")
    with pytest.raises(BadConfig):
        SymbolMap({ast.PLUS: "+", ast.MINUS: "+"})


def test_script_terms():
    s = smtlib.parse_script("(declare-fun x () Int)(assert (<= 0 x))(check-sat)")
    assert translate.om_script_terms(s) == [app(ast.LEQ, ast.Int(0), Var("x"))]


# -- properties -------------------------------------------------------------------

name_chars = st.characters(blacklist_categories=("Cs", "Z", "Cc"), blacklist_characters=".|\\")
names = st.text(name_chars, min_size=1, max_size=8)


@given(names, names)
def test_mangled_symbols_round_trip(cd, name):
    sym = ast.om_symbol(cd, name)
    assume(sym.origin is ast.Origin.OPENMATH_CD)
    assume(sym not in (ast.ONE, ast.ZERO) and SymbolMap.default().to_smt(sym) is None)
    assume(all(not c.isspace() for c in cd + name))
    for t in (Sym(sym), app(sym, Var("x"), ast.Int(2))):
        text = show(translate.om_to_smt(t))
        assert text.count("|") % 2 == 0 and f"|{cd}.{name}|" in text
        assert translate.smt_to_om(smtlib.parse_term(text)) == t


INT = ast.INT


def quantified(rng, depth, env):
    """Boolean OpenMath term over Int variables in env."""
    def num(d):
        if d == 0 or rng.random() < 0.4:
            pool = [ast.Int(rng.randint(-1, 2))] + [Var(v) for v in env]
            return rng.choice(pool)
        op = rng.choice([ast.PLUS, ast.TIMES, ast.MINUS])
        return app(op, num(d - 1), num(d - 1))

    r = rng.random()
    if depth == 0 or r < 0.3:
        return app(rng.choice([ast.EQ, ast.LEQ, ast.LT]), num(2), num(2))
    if r < 0.55:
        return app(rng.choice([ast.AND, ast.OR, ast.IMPLIES]), quantified(rng, depth - 1, env),
                   quantified(rng, depth - 1, env))
    if r < 0.65:
        return app(ast.NOT, quantified(rng, depth - 1, env))
    v = rng.choice(["x", "y", "z"])
    body = quantified(rng, depth - 1, env | {v})
    if rng.random() < 0.25:
        return Bind(ast.EXISTS_UNIQUE, (BoundVar(v, INT),), body)
    return Bind(rng.choice([ast.FORALL, ast.EXISTS]), (BoundVar(v, INT),), body)


@given(st.randoms(use_true_random=False), st.sampled_from(list(extensions.ExistsUnique)))
def test_translation_commutes_with_desugaring(rng, eu):
    t = quantified(rng, 4, frozenset())
    interp = oracle.Interpretation({INT: (0, 1, 2)})
    lowered = extensions.desugar(t, extensions.DesugarStrategy(eu))
    smt = translate.om_to_smt(lowered)
    back = translate.smt_to_om(smtlib.parse_term(show(smt)))
    expected = oracle.eval_term(t, interp)
    assert oracle.eval_term(lowered, interp) == expected
    assert oracle.eval_term(smt, interp) == expected
    assert oracle.eval_term(back, interp) == expected
    assert translate.roundtrip_check(lowered)
