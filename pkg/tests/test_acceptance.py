"""Acceptance suite: one group of tests per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import time
from fractions import Fraction

import pytest

import termgen
from golden import GOLDEN_CASES, normalize
from mathbridge import ast, extensions, omxml, oracle, popcorn, smtlib, sorts, translate
from mathbridge.ast import Apply, Bind, BoundVar, Sort, Sym, Var
from mathbridge.errors import ArityMismatch, SortMismatch
from mathbridge.extensions import DesugarStrategy, ExistsUnique


def crit(n, title):
    return pytest.mark.criterion(n, title)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


# 1 -------------------------------------------------------------------------

C1 = "parallel encodings of x+1 agree and round-trip"


@crit(1, C1)
def test_plus_listing_translates_to_smt_and_popcorn(fixtures):
    with Timer(1.0):
        t = omxml.parse_om_term((fixtures / "plus.om.xml").read_text())
        assert smtlib.print_smt(translate.om_to_smt(t)) == "(+ x 1)"
        assert popcorn.print_popcorn(t, popcorn.SUGARED) == "$x+1"
        assert popcorn.print_popcorn(t, popcorn.QUALIFIED) == "arith1.plus($x,1)"


@crit(1, C1)
def test_plus_three_syntaxes_round_trip_alpha_equal(fixtures):
    with Timer(1.0):
        t = omxml.parse_om_term((fixtures / "plus.om.xml").read_text())
        from_xml = omxml.parse_om_term(omxml.print_om_xml(t))
        from_sugar = popcorn.parse_popcorn("$x+1")
        from_qualified = popcorn.parse_popcorn("arith1.plus($x,1)", popcorn.QUALIFIED)
        from_smt = translate.smt_to_om(smtlib.parse_term("(+ x 1)"))
        for other in (from_xml, from_sugar, from_qualified, from_smt):
            assert ast.alpha_equal(t, other)
        assert translate.roundtrip_check(t)


# 2 -------------------------------------------------------------------------

C2 = "commutativity FMP crosses to a sorted forall and back"


@crit(2, C2)
def test_commutativity_cross_translation(fixtures):
    with Timer(1.0):
        doc = omxml.parse_om_xml((fixtures / "commutativity.om.xml").read_text())
        table = sorts.SignatureTable(var_sorts={"a": ast.REAL, "b": ast.REAL})
        m = translate.SymbolMap.default(times="arith2")
        smt = translate.om_to_smt(doc.root, m, table)
        text = smtlib.print_smt(smt)
        assert text == "(forall ((a Real) (b Real)) (= (* a b) (* b a)))"
        assert text == (fixtures / "commutativity.smt2").read_text().strip()
        reparsed = smtlib.parse_term(text)
        assert reparsed == smt
        assert isinstance(reparsed, Bind) and reparsed.binder == smtlib.SMT_FORALL
        assert all(v.sort is not None for v in reparsed.vars)
        assert sorts.check_sorts(reparsed, sorts.SignatureTable.standard()) == ast.BOOL
        back = translate.smt_to_om(reparsed, m)
        assert ast.alpha_equal(ast.strip_attributions(back, sorts=True), doc.root)
        assert translate.roundtrip_check(doc.root, m, table)


# 3 -------------------------------------------------------------------------

C3 = "both exists-unique expansions match exactly-one semantics on every predicate"


def _eu_term(sort):
    return Bind(ast.EXISTS_UNIQUE, (BoundVar("x", sort),), Apply(Var("P"), (Var("x"),)))


@crit(3, C3)
def test_exists_unique_expansions_agree_exhaustively():
    with Timer(5.0):
        checked = 0
        for n in range(1, 5):
            d = Sort("D")
            carrier = tuple(oracle.Element("D", i) for i in range(n))
            t = _eu_term(d)
            alt = extensions.desugar(t, DesugarStrategy(ExistsUnique.ALTERNATION))
            twoq = extensions.desugar(t, DesugarStrategy(ExistsUnique.TWO_QUANTIFIER))
            smt_alt, smt_twoq = translate.om_to_smt(alt), translate.om_to_smt(twoq)
            for pred in oracle.enumerate_predicates(carrier, bound=4):
                interp = oracle.Interpretation({d: carrier}, {"P": {(k,): v for k, v in pred.items()}})
                exactly_one = sum(pred.values()) == 1
                results = [oracle.eval_term(x, interp) for x in (t, alt, twoq, smt_alt, smt_twoq)]
                assert results == [exactly_one] * 5, (n, pred, results)
                checked += 1
        assert checked == 2 + 4 + 8 + 16


# 4 -------------------------------------------------------------------------

C4 = "repetition accounting of the two expansions"


def _copies_of_p(t):
    return sum(1 for s in ast.subterms(t) if isinstance(s, Apply) and s.head == Var("P"))


def _binders(t, sym):
    return [s for s in ast.subterms(t) if isinstance(s, Bind) and s.binder == sym]


def _alternations(t, above=None):
    """Largest number of exists/forall switches along any path."""
    best = 0
    kind = {ast.EXISTS: "E", ast.FORALL: "A"}.get(t.binder) if isinstance(t, Bind) else None
    for c in ast.children(t):
        here = kind or above
        best = max(best, _alternations(c, here))
    if kind and above and kind != above:
        best += 1
    return best


@crit(4, C4)
def test_two_quantifier_form_has_three_copies_and_two_universals():
    twoq = extensions.desugar(_eu_term(Sort("D")), DesugarStrategy(ExistsUnique.TWO_QUANTIFIER))
    assert _copies_of_p(twoq) == 3
    foralls = _binders(twoq, ast.FORALL)
    assert len(foralls) == 2
    assert sum(len(b.vars) for b in foralls) == 2
    assert len(_binders(twoq, ast.EXISTS)) == 1
    assert _alternations(twoq) == 0


@crit(4, C4)
def test_alternation_form_has_two_copies_and_one_alternation():
    alt = extensions.desugar(_eu_term(Sort("D")), DesugarStrategy(ExistsUnique.ALTERNATION))
    assert _copies_of_p(alt) == 2
    assert len(_binders(alt, ast.FORALL)) == 1
    assert len(_binders(alt, ast.EXISTS)) == 1
    assert _alternations(alt) == 1


# 5 -------------------------------------------------------------------------

C5 = "max of x(1-x) on the grid is 1/4, argmax {1/2}, witness 1/2"


@pytest.fixture
def grid(fixtures):
    interp = oracle.load_interpretation((fixtures / "grid.interp").read_text())
    assert interp.carriers[ast.REAL] == tuple(Fraction(k, 4) for k in range(5))
    return interp


@crit(5, C5)
def test_both_max_forms_lower_to_one_quarter(fixtures, grid):
    with Timer(1.0):
        idiom = omxml.parse_om_term((fixtures / "max-idiom.om.xml").read_text())
        binder = omxml.parse_om_term((fixtures / "max-binder.om.xml").read_text())
        sf = popcorn.parse_popcorn((fixtures / "max-sf.pop").read_text())
        for t in (binder, sf):
            lowered = extensions.desugar(t)
            assert not extensions.extension_symbols(lowered)
            assert ast.alpha_equal(lowered, idiom)
            value = oracle.eval_term(lowered, grid)
            assert value == Fraction(1, 4) and isinstance(value, Fraction)
        assert oracle.eval_term(idiom, grid) == Fraction(1, 4)


@crit(5, C5)
def test_argmax_is_the_singleton_half(fixtures, grid):
    with Timer(1.0):
        t = popcorn.parse_popcorn((fixtures / "argmax.pop").read_text())
        lowered = extensions.desugar(t)
        assert not extensions.extension_symbols(lowered)
        assert oracle.eval_term(lowered, grid) == oracle.SetValue((Fraction(1, 2),))
        assert oracle.eval_term(t, grid) == oracle.SetValue((Fraction(1, 2),))


@crit(5, C5)
def test_argmaxone_script_witness_is_half(fixtures, grid):
    with Timer(1.0):
        t = popcorn.parse_popcorn((fixtures / "argmaxone.pop").read_text())
        goal, cons = extensions.argmaxone_goal(t)
        script = extensions.lower_argmaxone_to_script(goal, cons)
        assert smtlib.print_smt(script) == (fixtures / "argmaxone.smt2").read_text()
        result = oracle.eval_script(script, grid)
        assert result.status is smtlib.Status.SAT
        assert result.model == ((Var("x"), smtlib.value_term(Fraction(1, 2))),)
        assert smtlib.print_smt(result) == "sat\n((x (/ 1 2)))\n"


# 6 -------------------------------------------------------------------------

C6 = "shadowing and simultaneous let"


@crit(6, C6)
def test_shadowed_forall_matches_nested_unary_reading():
    with Timer(1.0):
        shadowed = smtlib.parse_term("(forall ((x A) (x B)) (P x))")
        nested = smtlib.parse_term("(forall ((x A)) (forall ((x B)) (P x)))")
        mixed = smtlib.parse_term("(forall ((x A) (x B)) (Q c x))")
        mixed_nested = smtlib.parse_term("(forall ((x A)) (forall ((x B)) (Q c x)))")
        a, b = Sort("A"), Sort("B")
        count = 0
        for na, nb in itertools.product((1, 2), repeat=2):
            ca = tuple(oracle.Element("A", i) for i in range(na))
            cb = tuple(oracle.Element("B", i) for i in range(nb))
            for pred in oracle.enumerate_predicates(cb):
                interp = oracle.Interpretation({a: ca, b: cb}, {"P": {(k,): v for k, v in pred.items()}})
                assert oracle.eval_term(shadowed, interp) == oracle.eval_term(nested, interp)
                count += 1
            points = list(itertools.product(ca, cb))
            for bits in itertools.product((False, True), repeat=len(points)):
                for c in ca:
                    interp = oracle.Interpretation({a: ca, b: cb}, {"Q": dict(zip(points, bits))}, {"c": c})
                    assert oracle.eval_term(mixed, interp) == oracle.eval_term(mixed_nested, interp)
                    count += 1
        assert count > 0


@crit(6, C6)
def test_let_swap_is_simultaneous():
    t = smtlib.parse_term("(let ((x y) (y x)) (f x y))")
    assert t == Apply(Var("f"), (Var("y"), Var("x")))
    assert smtlib.print_smt(t) == "(f y x)"


# 7 -------------------------------------------------------------------------

C7 = "generated round trips and frozen golden files"

SYNTAXES = {
    "omxml": (omxml.print_om_xml, lambda s: omxml.parse_om_xml(s).root),
    "popcorn": (popcorn.print_popcorn, popcorn.parse_popcorn),
    "smt2": (smtlib.print_smt, smtlib.parse_term),
}


@crit(7, C7)
@pytest.mark.parametrize("syntax", sorted(SYNTAXES))
def test_thousand_generated_terms_round_trip(syntax):
    with Timer(30.0):
        show, read = SYNTAXES[syntax]
        terms = termgen.corpus(syntax, 1000)
        assert len(terms) == 1000
        for t in terms:
            assert read(show(t)) == t


@crit(7, C7)
@pytest.mark.parametrize("case", GOLDEN_CASES, ids=lambda c: c[0])
def test_fixture_matches_golden_bytes(fixtures, case):
    name, kind = case
    golden = (fixtures / "golden" / (name + ".golden")).read_bytes()
    once = normalize((fixtures / name).read_text(encoding="utf-8"), kind).encode("utf-8")
    assert once == golden
    assert normalize(golden.decode("utf-8"), kind).encode("utf-8") == golden


# 8 -------------------------------------------------------------------------

C8 = "nassoc signature for arith2.times"


@pytest.fixture
def times_table(fixtures):
    table = sorts.SignatureTable.standard()
    table.add(sorts.load_sts((fixtures / "arith2.sts.xml").read_text(), "arith2"))
    table.var_sorts.update({"a": Sort("S"), "b": Sort("S"), "c": Sort("S"), "d": Sort("S"), "t": Sort("T")})
    return table


def _times(*names):
    return Apply(Sym(ast.TIMES2), tuple(Var(n) for n in names))


@crit(8, C8)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_nassoc_accepts_same_sort_applications(times_table, n):
    assert sorts.check_sorts(_times(*"abcd"[:n]), times_table) == Sort("S")


@crit(8, C8)
def test_nassoc_rejects_single_argument(times_table):
    with pytest.raises(ArityMismatch) as info:
        sorts.check_sorts(Apply(Sym(ast.EQ), (_times("a"), Var("b"))), times_table)
    assert info.value.path == (1,)


@crit(8, C8)
def test_nassoc_rejects_mixed_sorts_at_the_offending_argument(times_table):
    with pytest.raises(SortMismatch) as info:
        sorts.check_sorts(_times("a", "b", "t"), times_table)
    assert info.value.path == (3,)
    assert info.value.expected == Sort("S") and info.value.found == Sort("T")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
