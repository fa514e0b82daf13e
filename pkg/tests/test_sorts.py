import pytest
from hypothesis import given, strategies as st

from mathbridge import ast, smtlib, sorts
from mathbridge.ast import Apply, Bind, BoundVar, Lit, LitKind, Sort, Sym, Var
from mathbridge.errors import (
    ArityMismatch, BadConfig, BadSignatureXml, SortMismatch, UnknownStsCombinator, UnknownSymbolSort,
    UnsortedFreeVariable,
)
from mathbridge.sorts import Mapsto, NAssoc, SortVar, StsSignature

S, T = Sort("S"), Sort("T")
OM = 'xmlns="http://www.openmath.org/OpenMath"'


def sig(name, body):
    return f'<Signature name="{name}"><OMOBJ {OM}>{body}</OMOBJ></Signature>'


def mapsto(*parts):
    return '<OMA><OMS cd="sts" name="mapsto"/>' + "".join(parts) + "</OMA>"


def v(name):
    return f'<OMV name="{name}"/>'


@pytest.fixture
def times_sts(fixtures):
    return sorts.load_sts((fixtures / "arith2.sts.xml").read_text(), "arith2")


def test_load_times_signature(times_sts):
    assert times_sts == [StsSignature(ast.TIMES2, NAssoc(SortVar("AbelianSemiGroup"), SortVar("AbelianSemiGroup")))]


def test_nullary_mapsto():
    (s,) = sorts.load_sts(sig("one", mapsto(v("R"))), "alg1")
    assert s == StsSignature(ast.ONE, Mapsto((), SortVar("R")))


def test_positional_mapsto():
    (s,) = sorts.load_sts(sig("eq", mapsto(v("S"), v("S"), '<OMS cd="sts" name="Bool"/>')), "relation1")
    assert s.symbol == ast.EQ
    assert s.shape.args == (SortVar("S"), SortVar("S"))
    assert len(s.shape.args) == 2


def test_cd_signatures_wrapper():
    text = f'<CDSignatures cd="my_cd">{sig("f", mapsto(v("A"), v("A")))}{sig("g", mapsto(v("B")))}</CDSignatures>'
    assert [s.symbol.name for s in sorts.load_sts(text)] == ["f", "g"]


@pytest.mark.parametrize("text, err", [
    ("<Signature name='x'>", BadSignatureXml),
    ("<Foo/>", BadSignatureXml),
    (sig("f", '<OMA><OMS cd="sts" name="weird"/><OMV name="A"/></OMA>'), UnknownStsCombinator),
])
def test_load_errors(text, err):
    with pytest.raises(err):
        sorts.load_sts(text, "my_cd")


def test_profile_file():
    p = sorts.load_profile("# ints are reals here\nliteral.Integer=Real\nidentity=Real\n")
    assert p.literal_sort(LitKind.INTEGER) == ast.REAL and p.identity == ast.REAL
    with pytest.raises(BadConfig):
        sorts.load_profile("literal.Nope=Int")
    with pytest.raises(BadConfig):
        sorts.load_profile("colour=blue")


def test_literal_sorts_follow_the_profile():
    table = sorts.SignatureTable.standard()
    assert sorts.check_sorts(ast.Int(1), table) == ast.INT
    assert sorts.check_sorts(ast.Float(1.5), table) == ast.REAL
    assert sorts.check_sorts(Lit(LitKind.DECIMAL, "0.5"), table) == ast.REAL
    table.profile = sorts.load_profile("literal.Integer=Real")
    assert sorts.check_sorts(ast.Int(1), table) == ast.REAL


def table_with(**var_sorts):
    t = sorts.SignatureTable.standard()
    t.var_sorts.update(var_sorts)
    return t


def test_times_of_structure_elements(times_sts):
    table = table_with(a=S, b=S).add(times_sts)
    assert sorts.check_sorts(Apply(Sym(ast.TIMES2), (Var("a"), Var("b"))), table) == S


def test_sort_var_scope_is_per_application(times_sts):
    table = table_with(a=S, b=S, c=T, d=T).add(times_sts)
    table.declared_funs["pair"] = ((S, T), Sort("P"))
    t = Apply(Var("pair"), (Apply(Sym(ast.TIMES2), (Var("a"), Var("b"))),
                            Apply(Sym(ast.TIMES2), (Var("c"), Var("d")))))
    assert sorts.check_sorts(t, table) == Sort("P")


def test_unary_times_is_rejected(times_sts):
    table = table_with(a=S).add(times_sts)
    with pytest.raises(ArityMismatch):
        sorts.check_sorts(Apply(Sym(ast.TIMES2), (Var("a"),)), table)


def test_quantifier_body_must_be_bool():
    t = Bind(ast.FORALL, (BoundVar("x", ast.INT),), Apply(Sym(ast.PLUS), (Var("x"), ast.Int(1))))
    with pytest.raises(SortMismatch):
        sorts.check_sorts(t, sorts.SignatureTable.standard())


def test_error_kinds():
    table = sorts.SignatureTable.standard()
    with pytest.raises(UnsortedFreeVariable):
        sorts.check_sorts(Var("x"), table)
    with pytest.raises(UnknownSymbolSort):
        sorts.check_sorts(Sym(ast.om_symbol("transc1", "sin")), table)
    with pytest.raises(SortMismatch) as info:
        sorts.check_sorts(Apply(Sym(ast.AND), (Sym(ast.TRUE), ast.Int(2))), table)
    assert info.value.path == (2,) and info.value.expected == ast.BOOL and info.value.found == ast.INT


def test_smt_declarations():
    script = smtlib.parse_script("""
        (declare-sort U 0)
        (declare-fun f (Int) Int)
        (declare-fun u () U)
        (assert (= (f 1) (f (f 2))))
        (assert (= u u))
    """)
    table = sorts.SignatureTable().declare(script)
    for c in script.commands:
        if isinstance(c, smtlib.Assert):
            assert sorts.check_sorts(c.term, table) == ast.BOOL
    with pytest.raises(SortMismatch):
        sorts.check_sorts(smtlib.parse_term("(f u)"), table)


def test_smt_commutativity_is_bool():
    t = smtlib.parse_term("(forall ((a Real) (b Real)) (= (* a b) (* b a)))")
    assert sorts.check_sorts(t, sorts.SignatureTable()) == ast.BOOL


def test_numerals_are_overloaded_in_real_context():
    t = smtlib.parse_term("(forall ((x Real)) (<= 0 (- 1 x)))")
    assert sorts.check_sorts(t, sorts.SignatureTable()) == ast.BOOL


# -- properties -------------------------------------------------------------

NUMS = [ast.INT, ast.REAL]


def typed_term(rng, depth, want, env=None):
    """A well-sorted SMT term of sort ``want``; env maps variable names to sorts."""
    env = env or {"x": ast.INT, "y": ast.REAL, "p": ast.BOOL}
    consts = {ast.INT: Lit(LitKind.NUMERAL, "3"), ast.REAL: Lit(LitKind.DECIMAL, "0.5"),
              ast.BOOL: Sym(smtlib.SMT_TRUE)}
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([consts[want]] + [Var(n) for n, s in sorted(env.items()) if s == want])
    if want == ast.BOOL:
        r = rng.random()
        if r < 0.3:
            s = rng.choice(NUMS)
            return smtlib.smt_app(rng.choice(["<=", "="]), typed_term(rng, depth - 1, s, env),
                                  typed_term(rng, depth - 1, s, env))
        if r < 0.6:
            return smtlib.smt_app("and", *(typed_term(rng, depth - 1, ast.BOOL, env)
                                           for _ in range(rng.randint(1, 3))))
        name = rng.choice(["q", "x", "p"])
        s = rng.choice(NUMS + [ast.BOOL])
        body = typed_term(rng, depth - 1, ast.BOOL, {**env, name: s})
        return Bind(rng.choice([smtlib.SMT_FORALL, smtlib.SMT_EXISTS]), (BoundVar(name, s),), body)
    op = rng.choice(["+", "*", "-"])
    return smtlib.smt_app(op, *(typed_term(rng, depth - 1, want, env) for _ in range(rng.randint(2, 3))))


def base_table():
    return sorts.SignatureTable(var_sorts={"x": ast.INT, "y": ast.REAL, "p": ast.BOOL})


@given(st.randoms(use_true_random=False), st.sampled_from([ast.INT, ast.REAL, ast.BOOL]))
def test_checking_is_deterministic_and_alpha_invariant(rng, want):
    t = typed_term(rng, 4, want)
    table = base_table()
    first = sorts.check_sorts(t, table)
    assert first == want
    assert sorts.check_sorts(t, table) == first
    assert sorts.check_sorts(ast.rename_bound(t, ast.all_names(t) | {"x", "y", "p"}), table) == first


@given(st.randoms(use_true_random=False), st.sampled_from([ast.INT, ast.REAL, ast.BOOL]))
def test_checking_is_monotone_in_the_table(rng, want):
    t = typed_term(rng, 4, want)
    table = base_table()
    s = sorts.check_sorts(t, table)
    bigger = base_table()
    bigger.var_sorts["unused"] = Sort("U")
    bigger.declared_funs["g"] = ((ast.INT,), ast.INT)
    bigger.add([StsSignature(ast.om_symbol("my_cd", "h"), Mapsto((S,), S))])
    assert sorts.check_sorts(t, bigger) == s


@given(st.randoms(use_true_random=False))
def test_argument_order_does_not_matter_for_nassoc(rng):
    table = table_with(**{n: S for n in "abcd"}).add(
        sorts.load_sts(sig("times", mapsto('<OMA><OMS cd="sts" name="nassoc"/><OMV name="G"/></OMA>', v("G"))),
                       "arith2"))
    names = list("abcd")
    rng.shuffle(names)
    t = Apply(Sym(ast.TIMES2), tuple(Var(n) for n in names[:rng.randint(2, 4)]))
    assert sorts.check_sorts(t, table) == S
