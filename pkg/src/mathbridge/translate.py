"""Bidirectional OpenMath <-> SMT-LIB translation.

Symbols travel through a ``SymbolMap``. OpenMath symbols without an SMT-LIB
counterpart are mangled into uninterpreted names ``cd.name`` (printed as
``|cd.name|``), and demangled on the way back.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass, field

from . import ast, smtlib
from .ast import Apply, Attributed, Bind, BoundVar, Lit, LitKind, Sym, Term, Var
from .errors import (
    BadConfig, IrreversibleMangling, MathBridgeError, TranslationError, UnloweredExtension,
    UnmappedBinder, UnmappedSymbol, UnsortableVariable, UntranslatableLiteral,
)
from .sorts import SignatureTable, TheoryProfile

# -- symbol map ------------------------------------------------------------

_DEFAULT_PAIRS = [
    (ast.PLUS, "+"), (ast.MINUS, "-"), (ast.DIVIDE, "/"), (ast.ABS, "abs"),
    (ast.EQ, "="), (ast.NEQ, "distinct"),
    (ast.LT, "<"), (ast.LEQ, "<="), (ast.GT, ">"), (ast.GEQ, ">="),
    (ast.AND, "and"), (ast.OR, "or"), (ast.NOT, "not"), (ast.IMPLIES, "=>"),
    (ast.TRUE, "true"), (ast.FALSE, "false"),
    (ast.FORALL, "forall"), (ast.EXISTS, "exists"),
]


@dataclass
class SymbolMap:
    """Injective OpenMath symbol <-> SMT-LIB token pairs plus forward-only aliases.

    An alias translates to SMT-LIB but the token comes back as the paired symbol.
    """

    pairs: dict[ast.Symbol, str] = field(default_factory=dict)
    aliases: dict[ast.Symbol, str] = field(default_factory=dict)

    def __post_init__(self):
        tokens = list(self.pairs.values())
        if len(set(tokens)) != len(tokens):
            dup = next(t for t in tokens if tokens.count(t) > 1)
            raise BadConfig(f"token {dup!r} is paired with two symbols")
        for s, tok in self.aliases.items():
            if s in self.pairs:
                raise BadConfig(f"{s} is both paired and aliased")
            if tok not in tokens:
                raise BadConfig(f"alias {s} -> {tok} targets an unpaired token")
        self._reverse = {tok: s for s, tok in self.pairs.items()}

    @classmethod
    def default(cls, times: str = "arith1") -> "SymbolMap":
        if times not in ("arith1", "arith2"):
            raise BadConfig(f"times must be arith1 or arith2, not {times!r}")
        main, alt = (ast.TIMES, ast.TIMES2) if times == "arith1" else (ast.TIMES2, ast.TIMES)
        pairs = dict(_DEFAULT_PAIRS)
        pairs[main] = "*"
        return cls(pairs, {alt: "*"})

    def to_smt(self, s: ast.Symbol) -> str | None:
        return self.pairs.get(s) or self.aliases.get(s)

    def from_smt(self, token: str) -> ast.Symbol | None:
        return self._reverse.get(token)

    def override(self, sym: ast.Symbol, token: str, alias: bool = False) -> "SymbolMap":
        pairs = dict(self.pairs)
        aliases = dict(self.aliases)
        pairs.pop(sym, None)
        aliases.pop(sym, None)
        if alias:
            aliases[sym] = token
        else:
            for s, t in list(pairs.items()):
                if t == token:
                    del pairs[s]
            pairs[sym] = token
        aliases = {s: t for s, t in aliases.items() if t in pairs.values()}
        return SymbolMap(pairs, aliases)


_MAP_LINE = re.compile(r"^([^.\s]+)\.(\S+)\s*(=|->)\s*(\S+)$")


def load_symbol_map(text: str, base: SymbolMap | None = None) -> SymbolMap:
    """Lines ``cd.name = token`` (pair) or ``cd.name -> token`` (alias); ``#`` starts a comment."""
    m = base if base is not None else SymbolMap.default()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        g = _MAP_LINE.match(line)
        if not g:
            raise BadConfig(f"cannot read map entry {raw.strip()!r}", position=(n, 1))
        cd, name, op, token = g.groups()
        try:
            m = m.override(ast.om_symbol(cd, name), token, alias=(op == "->"))
        except BadConfig as exc:
            raise BadConfig(exc.message, position=(n, 1)) from None
    return m


# -- OpenMath -> SMT-LIB ---------------------------------------------------

_MANGLED = re.compile(r"^([^.\s|]+)\.([^.\s|]+)$")


def _token_term(token: str) -> Term:
    if token in smtlib.THEORY_SYMBOLS:
        return Sym(smtlib.theory_symbol(token))
    return Var(token)


def _identity(sym: ast.Symbol, profile: TheoryProfile) -> Lit:
    one = sym == ast.ONE
    if profile.identity == ast.REAL:
        return Lit(LitKind.DECIMAL, "1.0" if one else "0.0")
    return Lit(LitKind.NUMERAL, "1" if one else "0")


def _om_lit(t: Lit) -> Term:
    k, p = t.kind, t.payload
    if k is LitKind.INTEGER:
        if p < 0:
            return smtlib.smt_app("-", Lit(LitKind.NUMERAL, str(-p)))
        return Lit(LitKind.NUMERAL, str(p))
    if k is LitKind.FLOAT64:
        if not ast.finite_float(p):
            raise UntranslatableLiteral(f"non-finite float {p!r} has no SMT-LIB decimal")
        from decimal import Decimal

        d = format(Decimal(p), "f")
        if "." not in d:
            d += ".0"
        if d.startswith("-"):
            return smtlib.smt_app("-", Lit(LitKind.DECIMAL, d[1:]))
        return Lit(LitKind.DECIMAL, d)
    if k is LitKind.STRING:
        return t
    if k in ast.SPELLED_KINDS:
        return t
    raise UntranslatableLiteral(f"{k.value} literals have no SMT-LIB counterpart")


def om_to_smt(t: Term, symbol_map: SymbolMap | None = None, table: SignatureTable | None = None,
              profile: TheoryProfile | None = None) -> Term:
    """Translate an OpenMath term into an SMT-LIB term. Attributions are dropped."""
    m = symbol_map or SymbolMap.default()
    var_sorts = table.var_sorts if table is not None else {}
    profile = profile or (table.profile if table is not None else TheoryProfile())

    def sym(s: ast.Symbol) -> Term:
        if s.origin is ast.Origin.EXTENSION:
            raise UnloweredExtension(f"extension symbol {s} must be desugared before translation")
        if s.origin is ast.Origin.SMT_THEORY:
            return Sym(s)
        if s in (ast.ONE, ast.ZERO):
            return _identity(s, profile)
        tok = m.to_smt(s)
        if tok in ("forall", "exists"):
            raise UnmappedSymbol(f"binder symbol {s} used outside a binding")
        if tok is not None:
            return _token_term(tok)
        if not _MANGLED.match(s.qualified):
            raise IrreversibleMangling(f"symbol {s} cannot be mangled reversibly")
        return Var(s.qualified)

    def go(s: Term, bound: frozenset[str]) -> Term:
        if isinstance(s, Sym):
            return sym(s.symbol)
        if isinstance(s, Var):
            if s.name not in bound and ("." in s.name or m.from_smt(s.name) is not None):
                raise IrreversibleMangling(f"free variable {s.name} would read back as a symbol")
            return s
        if isinstance(s, Lit):
            return _om_lit(s)
        if isinstance(s, Attributed):
            return go(s.base, bound)
        if isinstance(s, Apply):
            if not s.args:
                raise UnmappedSymbol("nullary application has no SMT-LIB counterpart")
            args = tuple(go(a, bound) for a in s.args)
            if s.head == Sym(ast.UNARY_MINUS):
                if len(args) != 1:
                    raise UnmappedSymbol("unary_minus takes one argument")
                return smtlib.smt_app("-", *args)
            head = go(s.head, bound)
            if not isinstance(head, (Sym, Var)):
                raise UnmappedSymbol("SMT-LIB application heads must be symbols")
            return Apply(head, args)
        if isinstance(s, Bind):
            if s.binder.origin is ast.Origin.EXTENSION:
                raise UnloweredExtension(f"binder {s.binder} must be desugared before translation")
            tok = m.to_smt(s.binder) if s.binder.origin is ast.Origin.OPENMATH_CD else s.binder.name
            if tok not in ("forall", "exists"):
                raise UnmappedBinder(f"binder {s.binder} has no SMT-LIB quantifier")
            if s.condition is not None:
                raise UnmappedBinder(f"restricted {s.binder} has no SMT-LIB counterpart")
            vs = []
            for v in s.vars:
                sort = v.sort or var_sorts.get(v.name)
                if sort is None:
                    raise UnsortableVariable(f"bound variable {v.name} has no sort")
                vs.append(BoundVar(v.name, sort))
            binder = smtlib.SMT_FORALL if tok == "forall" else smtlib.SMT_EXISTS
            return Bind(binder, tuple(vs), go(s.body, bound | {v.name for v in vs}))
        raise UnmappedSymbol(f"{type(s).__name__} has no SMT-LIB counterpart")

    return go(t, frozenset())


# -- SMT-LIB -> OpenMath ---------------------------------------------------


def _smt_lit(t: Lit) -> Lit:
    k, p = t.kind, t.payload
    if k is LitKind.NUMERAL:
        return ast.Int(int(p))
    if k is LitKind.DECIMAL:
        return ast.Float(float(p))
    if k is LitKind.STRING:
        return t
    if k in (LitKind.INTEGER, LitKind.FLOAT64):
        return t
    raise UntranslatableLiteral(f"{k.value} literal {p} is outside the arithmetic profile")


def smt_to_om(t: Term, symbol_map: SymbolMap | None = None) -> Term:
    """Translate an SMT-LIB term into an OpenMath term, demangling ``cd.name`` names."""
    m = symbol_map or SymbolMap.default()

    def token_symbol(tok: str) -> Term:
        s = m.from_smt(tok)
        if s is None:
            raise UnmappedSymbol(f"SMT-LIB symbol {tok} has no OpenMath counterpart")
        return Sym(s)

    def go(s: Term, bound: frozenset[str]) -> Term:
        if isinstance(s, Sym):
            if s.symbol.origin is not ast.Origin.SMT_THEORY:
                return s
            return token_symbol(s.symbol.name)
        if isinstance(s, Var):
            if s.name in bound:
                return s
            if m.from_smt(s.name) is not None:
                return Sym(m.from_smt(s.name))
            if "." in s.name:
                g = _MANGLED.match(s.name)
                if not g:
                    raise IrreversibleMangling(f"name {s.name} is not of the form cd.name")
                return Sym(ast.om_symbol(*g.groups()))
            return s
        if isinstance(s, Lit):
            return _smt_lit(s)
        if isinstance(s, Apply):
            h = s.head
            if isinstance(h, Sym) and h.symbol.origin is ast.Origin.SMT_THEORY:
                tok = h.symbol.name
                if tok == "-" and len(s.args) == 1:
                    a = s.args[0]
                    if isinstance(a, Lit) and a.kind is LitKind.NUMERAL:
                        return ast.Int(-int(a.payload))
                    if isinstance(a, Lit) and a.kind is LitKind.DECIMAL:
                        return ast.Float(-float(a.payload))
                    return Apply(Sym(ast.UNARY_MINUS), (go(a, bound),))
                if tok == "=>" and len(s.args) > 2:
                    args = [go(a, bound) for a in s.args]
                    out = args[-1]
                    for a in reversed(args[:-1]):
                        out = Apply(token_symbol("=>"), (a, out))
                    return out
            return Apply(go(h, bound), tuple(go(a, bound) for a in s.args))
        if isinstance(s, Bind):
            if s.binder not in (smtlib.SMT_FORALL, smtlib.SMT_EXISTS):
                return Bind(s.binder, s.vars, go(s.body, bound | {v.name for v in s.vars}),
                            None if s.condition is None else go(s.condition, bound | {v.name for v in s.vars}))
            binder = m.from_smt(s.binder.name)
            if binder is None:
                raise UnmappedBinder(f"quantifier {s.binder.name} has no OpenMath binder")
            return Bind(binder, s.vars, go(s.body, bound | {v.name for v in s.vars}))
        raise UnmappedSymbol(f"{type(s).__name__} has no OpenMath counterpart")

    return go(t, frozenset())


# -- round trip ------------------------------------------------------------


@dataclass(frozen=True)
class RoundTrip:
    ok: bool
    diagnostic: str = ""
    smt: Term | None = None
    back: Term | None = None

    def __bool__(self) -> bool:
        return self.ok


def _show(t: Term) -> str:
    from .omxml import print_om_term

    try:
        return print_om_term(t)
    except MathBridgeError:
        return repr(t)


def roundtrip_check(t: Term, symbol_map: SymbolMap | None = None,
                    table: SignatureTable | None = None) -> RoundTrip:
    """Translate t to SMT-LIB and back; compare modulo attributions, sorts and bound names."""
    m = symbol_map or SymbolMap.default()
    try:
        smt = om_to_smt(t, m, table)
        back = smt_to_om(smt, m)
    except (TranslationError, UnloweredExtension) as exc:
        return RoundTrip(False, f"{exc.kind}: {exc}")
    want = ast.strip_attributions(t, sorts=True)
    got = ast.strip_attributions(back, sorts=True)
    if ast.alpha_equal(want, got):
        return RoundTrip(True, "", smt, back)
    diff = "\n".join(difflib.unified_diff(
        _show(want).splitlines(), _show(got).splitlines(), "original", "round-trip", lineterm=""))
    return RoundTrip(False, diff or "terms differ", smt, back)


def om_script_terms(script: smtlib.Script, symbol_map: SymbolMap | None = None) -> list[Term]:
    """OpenMath translation of every asserted term in a script."""
    return [smt_to_om(c.term, symbol_map) for c in script.commands if isinstance(c, smtlib.Assert)]
