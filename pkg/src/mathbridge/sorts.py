"""Well-sortedness: Small Type System signatures and SMT-LIB declarations."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, Union

from . import ast, smtlib
from .ast import Apply, Attributed, Bind, Lit, LitKind, Sort, Sym, Term, Var
from .errors import (
    ArityMismatch, BadConfig, BadSignatureXml, SortError, SortMismatch, UnknownElement,
    UnknownStsCombinator, UnknownSymbolSort, UnsortedFreeVariable, XmlSyntax,
)


@dataclass(frozen=True)
class SortVar:
    """A sort variable such as ``AbelianSemiGroup``; ``allowed`` optionally restricts it."""

    name: str
    allowed: frozenset[Sort] | None = None

    def __str__(self) -> str:
        return self.name


SortLike = Union[Sort, SortVar]


@dataclass(frozen=True)
class Mapsto:
    args: tuple[SortLike, ...]
    result: SortLike


@dataclass(frozen=True)
class NAssoc:
    element: SortLike
    result: SortLike
    min_arity: int = 2


@dataclass(frozen=True)
class StsSignature:
    symbol: ast.Symbol
    shape: Union[Mapsto, NAssoc]


def arrow(args: Iterable[Sort], result: Sort) -> Sort:
    return Sort("->", (*args, result))


# -- theory profile --------------------------------------------------------

DEFAULT_LITERAL_SORTS = {
    LitKind.INTEGER: ast.INT,
    LitKind.FLOAT64: ast.REAL,
    LitKind.NUMERAL: ast.INT,
    LitKind.DECIMAL: ast.REAL,
    LitKind.STRING: Sort("String"),
}


@dataclass(frozen=True)
class TheoryProfile:
    literal_sorts: dict = field(default_factory=lambda: dict(DEFAULT_LITERAL_SORTS))
    # sort of alg1.one / alg1.zero when they become literals
    identity: Sort = ast.INT

    def literal_sort(self, kind: LitKind) -> Sort | None:
        return self.literal_sorts.get(kind)


def load_profile(text: str) -> TheoryProfile:
    """Read ``literal.<kind>=<sort>`` lines (plus an optional ``identity=<sort>``)."""
    sorts = dict(DEFAULT_LITERAL_SORTS)
    identity = ast.INT
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not value:
            raise BadConfig(f"expected key=value, got {raw!r}", position=(n, 1))
        if key == "identity":
            identity = Sort(value)
        elif key.startswith("literal."):
            try:
                kind = LitKind(key[len("literal."):])
            except ValueError:
                raise BadConfig(f"unknown literal kind in {key!r}", position=(n, 1)) from None
            sorts[kind] = Sort(value)
        else:
            raise BadConfig(f"unknown profile key {key!r}", position=(n, 1))
    return TheoryProfile(sorts, identity)


# -- STS loading -----------------------------------------------------------


def load_sts(text: str, cd: str | None = None) -> list[StsSignature]:
    """Parse STS signature XML.

    The root may be ``<CDSignatures cd=...>`` holding ``<Signature>`` elements or
    a single ``<Signature>``; a bare signature takes its CD from ``cd``.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise BadSignatureXml(str(exc), position=exc.position) from None
    tag = _local(root.tag)
    if tag == "CDSignatures":
        cd = root.get("cd", cd)
        elements = [e for e in root if _local(e.tag) == "Signature"]
    elif tag == "Signature":
        elements = [root]
    else:
        raise BadSignatureXml(f"unexpected root element <{tag}>")
    if cd is None:
        raise BadSignatureXml("no content dictionary given for the signatures")
    return [_signature(e, cd) for e in elements]


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _signature(el: ET.Element, cd: str) -> StsSignature:
    from .omxml import parse_element

    name = el.get("name")
    if not name:
        raise BadSignatureXml("Signature without a name")
    kids = list(el)
    if len(kids) != 1:
        raise BadSignatureXml(f"Signature {name!r} must hold one object")
    obj = kids[0]
    if _local(obj.tag) == "OMOBJ":
        inner = list(obj)
        if len(inner) != 1:
            raise BadSignatureXml(f"Signature {name!r}: OMOBJ must hold one object")
        obj = inner[0]
    try:
        term = parse_element(obj)
    except (UnknownElement, XmlSyntax) as exc:
        raise BadSignatureXml(f"Signature {name!r}: {exc}") from None
    return StsSignature(ast.om_symbol(cd, name), _shape(term))


def _is_app(t: Term, sym: ast.Symbol) -> bool:
    return isinstance(t, Apply) and t.head == Sym(sym)


def _shape(t: Term) -> Union[Mapsto, NAssoc]:
    if not _is_app(t, ast.MAPSTO):
        return Mapsto((), _sort_expr(t))
    if not t.args:
        raise BadSignatureXml("mapsto needs at least a result")
    *args, result = t.args
    res = _sort_expr(result)
    if any(_is_app(a, ast.NASSOC) for a in args):
        if len(args) != 1:
            raise BadSignatureXml("nassoc must be the only argument of mapsto")
        (inner,) = args
        if len(inner.args) != 1:
            raise BadSignatureXml("nassoc takes exactly one sort")
        return NAssoc(_sort_expr(inner.args[0]), res)
    return Mapsto(tuple(_sort_expr(a) for a in args), res)


def _sort_expr(t: Term) -> SortLike:
    if isinstance(t, Var):
        return SortVar(t.name)
    if isinstance(t, Sym):
        if t.symbol.namespace == "sts" and t.symbol.name in ("mapsto", "nassoc", "nary"):
            raise UnknownStsCombinator(f"{t.symbol} cannot stand alone as a sort")
        return Sort(t.symbol.name)
    if isinstance(t, Apply) and isinstance(t.head, Sym):
        raise UnknownStsCombinator(f"unsupported sort combinator {t.head.symbol}")
    raise BadSignatureXml("sorts are OMV sort variables or OMS sort names")


# -- table -----------------------------------------------------------------

_NUM = frozenset({ast.INT, ast.REAL})


def _smt_signatures() -> dict[ast.Symbol, list[StsSignature]]:
    A = SortVar("A")
    N = SortVar("N", _NUM)
    B = ast.BOOL
    table = {
        "true": [Mapsto((), B)], "false": [Mapsto((), B)],
        "not": [Mapsto((B,), B)],
        "=>": [NAssoc(B, B)], "and": [NAssoc(B, B, 1)], "or": [NAssoc(B, B, 1)], "xor": [NAssoc(B, B)],
        "=": [NAssoc(A, B)], "distinct": [NAssoc(A, B)],
        "ite": [Mapsto((B, A, A), A)],
        "+": [NAssoc(N, N)], "*": [NAssoc(N, N)],
        "-": [Mapsto((N,), N), NAssoc(N, N)],
        "/": [NAssoc(ast.REAL, ast.REAL)],
        "div": [NAssoc(ast.INT, ast.INT)], "mod": [Mapsto((ast.INT, ast.INT), ast.INT)],
        "abs": [Mapsto((ast.INT,), ast.INT)],
        "<": [NAssoc(N, B)], "<=": [NAssoc(N, B)], ">": [NAssoc(N, B)], ">=": [NAssoc(N, B)],
    }
    out = {}
    for tok, shapes in table.items():
        sym = smtlib.theory_symbol(tok)
        out[sym] = [StsSignature(sym, s) for s in shapes]
    return out


SMT_SIGNATURES = _smt_signatures()


def standard_om_signatures() -> list[StsSignature]:
    """Signatures for the registry's arithmetic, relation and logic symbols."""
    N = SortVar("N", _NUM)
    A = SortVar("A")
    B = ast.BOOL
    shapes = {
        ast.PLUS: NAssoc(N, N), ast.TIMES: NAssoc(N, N), ast.TIMES2: NAssoc(N, N),
        ast.MINUS: Mapsto((N, N), N), ast.UNARY_MINUS: Mapsto((N,), N),
        ast.DIVIDE: Mapsto((N, N), N), ast.ABS: Mapsto((N,), N),
        ast.EQ: Mapsto((A, A), B), ast.NEQ: Mapsto((A, A), B),
        ast.LT: Mapsto((N, N), B), ast.LEQ: Mapsto((N, N), B),
        ast.GT: Mapsto((N, N), B), ast.GEQ: Mapsto((N, N), B),
        ast.AND: NAssoc(B, B, 1), ast.OR: NAssoc(B, B, 1), ast.NOT: Mapsto((B,), B),
        ast.IMPLIES: Mapsto((B, B), B), ast.TRUE: Mapsto((), B), ast.FALSE: Mapsto((), B),
        ast.ONE: Mapsto((), ast.INT), ast.ZERO: Mapsto((), ast.INT),
        ast.INTERVAL_CC: Mapsto((N, N), Sort("Set", (ast.REAL,))),
        ast.SET_IN: Mapsto((A, SortVar("S")), B),
        ast.MAX: Mapsto((Sort("Set", (ast.REAL,)),), ast.REAL),
        ast.MIN: Mapsto((Sort("Set", (ast.REAL,)),), ast.REAL),
    }
    return [StsSignature(s, shape) for s, shape in shapes.items()]


@dataclass
class SignatureTable:
    sts: dict[ast.Symbol, list[StsSignature]] = field(default_factory=dict)
    declared_sorts: dict[str, int] = field(default_factory=dict)
    declared_funs: dict[str, tuple[tuple[Sort, ...], Sort]] = field(default_factory=dict)
    var_sorts: dict[str, Sort] = field(default_factory=dict)
    profile: TheoryProfile = field(default_factory=TheoryProfile)

    def add(self, sigs: Iterable[StsSignature], replace: bool = True) -> "SignatureTable":
        incoming: dict[ast.Symbol, list[StsSignature]] = {}
        for s in sigs:
            incoming.setdefault(s.symbol, []).append(s)
        for sym, lst in incoming.items():
            if replace or sym not in self.sts:
                self.sts[sym] = lst
            else:
                self.sts[sym] = self.sts[sym] + lst
        return self

    def declare(self, script: smtlib.Script) -> "SignatureTable":
        for c in script.commands:
            if isinstance(c, smtlib.DeclareSort):
                self.declared_sorts[c.name] = c.arity
            elif isinstance(c, smtlib.DeclareFun):
                self.declared_funs[c.name] = (c.arg_sorts, c.result)
            elif isinstance(c, smtlib.DefineFun):
                self.declared_funs[c.name] = (tuple(p.sort for p in c.params), c.result)
        return self

    def signatures(self, sym: ast.Symbol) -> list[StsSignature] | None:
        found = self.sts.get(sym)
        if found is None and sym.origin is ast.Origin.SMT_THEORY:
            found = SMT_SIGNATURES.get(sym)
        return found

    @classmethod
    def standard(cls) -> "SignatureTable":
        return cls().add(standard_om_signatures())


# -- checking --------------------------------------------------------------

Path = tuple


def check_sorts(t: Term, table: SignatureTable) -> Sort:
    """Return the sort of t, or raise a SortError naming the offending position."""
    return _Checker(table).check(t, {}, ())


_INT_LITERALS = (LitKind.INTEGER, LitKind.NUMERAL)
_BOOL_BINDERS = {ast.FORALL, ast.EXISTS, ast.EXISTS_UNIQUE, smtlib.SMT_FORALL, smtlib.SMT_EXISTS}


class _Checker:
    def __init__(self, table: SignatureTable):
        self.table = table

    def check(self, t: Term, env: dict[str, Sort], path: Path) -> Sort:
        if isinstance(t, Attributed):
            return self.check(t.base, env, path)
        if isinstance(t, Lit):
            s = self.table.profile.literal_sort(t.kind)
            if s is None:
                raise UnknownSymbolSort(f"no sort for {t.kind.value} literals in this profile", path)
            return s
        if isinstance(t, Var):
            return self.var_sort(t.name, env, path)
        if isinstance(t, Sym):
            return self.apply_symbol(t.symbol, [], path, standalone=True)
        if isinstance(t, Apply):
            args = [self.check(a, env, path + (i + 1,)) for i, a in enumerate(t.args)]
            # integer numerals also denote reals
            flex = [isinstance(a, Lit) and a.kind in _INT_LITERALS and s == ast.INT for a, s in zip(t.args, args)]
            if isinstance(t.head, Sym):
                return self.apply_symbol(t.head.symbol, args, path, flex=flex)
            if isinstance(t.head, Var) and t.head.name not in env and t.head.name in self.table.declared_funs:
                dom, rng = self.table.declared_funs[t.head.name]
                return self.unify_shape(Mapsto(dom, rng), args, path, str(t.head.name), flex)
            fs = self.check(t.head, env, path + (0,))
            if fs.name != "->":
                raise SortMismatch(f"applying a non-function of sort {fs}", path + (0,), "->", fs)
            return self.unify_shape(Mapsto(fs.args[:-1], fs.args[-1]), args, path, "function", flex)
        if isinstance(t, Bind):
            return self.bind(t, env, path)
        raise UnknownSymbolSort(f"cannot sort {type(t).__name__}", path)

    def var_sort(self, name: str, env: dict[str, Sort], path: Path) -> Sort:
        if name in env:
            return env[name]
        if name in self.table.var_sorts:
            return self.table.var_sorts[name]
        decl = self.table.declared_funs.get(name)
        if decl is not None:
            dom, rng = decl
            return arrow(dom, rng) if dom else rng
        raise UnsortedFreeVariable(f"variable {name!r} has no sort", path)

    def bind(self, t: Bind, env: dict[str, Sort], path: Path) -> Sort:
        inner = dict(env)
        vsorts = []
        for v in t.vars:
            s = v.sort or self.table.var_sorts.get(v.name)
            if s is None:
                raise UnsortedFreeVariable(f"bound variable {v.name!r} has no sort", path)
            inner[v.name] = s
            vsorts.append(s)
        if t.condition is not None:
            c = self.check(t.condition, inner, path + ("cond",))
            if c != ast.BOOL:
                raise SortMismatch("binder condition must be Bool", path + ("cond",), ast.BOOL, c)
        body = self.check(t.body, inner, path + ("body",))
        b = t.binder
        if b in _BOOL_BINDERS:
            if body != ast.BOOL:
                raise SortMismatch(f"{b} body must be Bool", path + ("body",), ast.BOOL, body)
            return ast.BOOL
        if b == ast.LAMBDA:
            return arrow(vsorts, body)
        if b == ast.MAX_BINDER:
            return body
        if b == ast.ARGMAX:
            return Sort("Set", (vsorts[0],))
        if b == ast.ARGMAXONE:
            return vsorts[0]
        raise UnknownSymbolSort(f"no sort rule for binder {b}", path)

    def apply_symbol(self, sym: ast.Symbol, args: list[Sort], path: Path, standalone=False, flex=None) -> Sort:
        sigs = self.table.signatures(sym)
        if not sigs:
            raise UnknownSymbolSort(f"no signature for {sym}", path)
        if standalone:
            for sig in sigs:
                sh = sig.shape
                if isinstance(sh, Mapsto) and not sh.args:
                    return self.unify_shape(sh, [], path, str(sym))
            sh = sigs[0].shape
            if isinstance(sh, Mapsto) and all(isinstance(a, Sort) for a in (*sh.args, sh.result)):
                return arrow(sh.args, sh.result)
            raise ArityMismatch(f"{sym} used without arguments", path)
        errors: list[SortError] = []
        for sig in sigs:
            try:
                return self.unify_shape(sig.shape, args, path, str(sym), flex)
            except SortError as exc:
                errors.append(exc)
        # prefer a sort error from a signature whose arity fit
        for exc in errors:
            if not isinstance(exc, ArityMismatch):
                raise exc
        raise errors[0]

    def unify_shape(self, shape, args: list[Sort], path: Path, what: str, flex=None) -> Sort:
        binding: dict[str, Sort] = {}
        if isinstance(shape, NAssoc):
            if len(args) < shape.min_arity:
                raise ArityMismatch(
                    f"{what} is n-ary and needs at least {shape.min_arity} arguments, got {len(args)}", path)
            expected = [shape.element] * len(args)
        else:
            if len(args) != len(shape.args):
                raise ArityMismatch(f"{what} takes {len(shape.args)} arguments, got {len(args)}", path)
            expected = list(shape.args)
        flex = flex or [False] * len(args)
        # rigid arguments fix sort variables first; numerals then fit Int or Real
        for i, (want, got) in enumerate(zip(expected, args)):
            if not flex[i]:
                self.match(want, got, binding, path + (i + 1,), what)
        for i, (want, got) in enumerate(zip(expected, args)):
            if flex[i]:
                target = want if isinstance(want, Sort) else binding.get(want.name)
                if target == ast.REAL:
                    got = ast.REAL
                self.match(want, got, binding, path + (i + 1,), what)
        return self.resolve(shape.result, binding, path, what)

    def match(self, want: SortLike, got: Sort, binding: dict, path: Path, what: str) -> None:
        if isinstance(want, Sort):
            if want != got:
                raise SortMismatch(f"{what}: expected {want}, found {got}", path, want, got)
            return
        if want.name in binding:
            if binding[want.name] != got:
                prev = binding[want.name]
                raise SortMismatch(f"{what}: expected {prev} (as {want.name}), found {got}", path, prev, got)
            return
        if want.allowed is not None and got not in want.allowed:
            raise SortMismatch(f"{what}: {got} is not allowed for {want.name}", path, want, got)
        binding[want.name] = got

    def resolve(self, s: SortLike, binding: dict, path: Path, what: str) -> Sort:
        if isinstance(s, Sort):
            return s
        if s.name not in binding:
            raise SortError(f"{what}: result sort variable {s.name} is unconstrained", path)
        return binding[s.name]
