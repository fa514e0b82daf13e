"""SMT-LIB s-expressions, terms, scripts (with maximize/minimize) and solver results."""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import ast
from .ast import Apply, Bind, BoundVar, Lit, LitKind, Sort, Sym, Term, Var
from .errors import (
    Arity, BadToken, DuplicateLetName, InvalidModel, ParseError, Unprintable,
    UnbalancedParen, UnknownSymbol, UnloweredExtension, UnsortedBinder,
)

# -- s-expressions ---------------------------------------------------------


class AtomKind(enum.Enum):
    NUMERAL = "Numeral"
    DECIMAL = "Decimal"
    HEXADECIMAL = "Hexadecimal"
    BINARY = "Binary"
    STRING = "String"
    SYMBOL = "SymbolToken"
    KEYWORD = "Keyword"


@dataclass(frozen=True)
class Atom:
    kind: AtomKind
    text: str
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def symbol_name(self) -> str:
        """Symbol content with |quotes| removed."""
        if self.text.startswith("|"):
            return self.text[1:-1]
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...] = ()
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


SExpr = Union[Atom, SList]

_SMT_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<Hexadecimal>\#x[0-9A-Fa-f]+)
  | (?P<Binary>\#b[01]+)
  | (?P<Decimal>[0-9]+\.[0-9]+)
  | (?P<Numeral>[0-9]+)
  | (?P<String>"(?:[^"]|"")*")
  | (?P<Keyword>:[A-Za-z0-9~!@$%^&*_+=<>.?/\-]+)
  | (?P<SymbolToken>[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*|\|[^|\\]*\|)
    """,
    re.X,
)
_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")


def _pos(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def lex_sexpr(text: str) -> list[SExpr]:
    """Tokenize and group text into top-level s-expressions."""
    stack: list[list] = [[]]
    opens: list[int] = []
    i = 0
    while i < len(text):
        m = _SMT_TOKEN.match(text, i)
        if m is None:
            raise BadToken(f"unexpected character {text[i]!r}", position=_pos(text, i))
        # a numeral glued to symbol characters (e.g. 12ab) is not a token
        kind = m.lastgroup
        end = m.end()
        if kind in ("Numeral", "Decimal", "Hexadecimal", "Binary") and end < len(text) and _SIMPLE_SYMBOL.match(text[end]):
            raise BadToken(f"malformed constant near {text[i:end + 1]!r}", position=_pos(text, i))
        if kind == "lpar":
            opens.append(i)
            stack.append([])
        elif kind == "rpar":
            if not opens:
                raise UnbalancedParen("unexpected ')'", position=_pos(text, i))
            start = opens.pop()
            items = stack.pop()
            stack[-1].append(SList(tuple(items), _pos(text, start)))
        elif kind not in ("ws", "comment"):
            stack[-1].append(Atom(AtomKind(kind), m.group(), _pos(text, i)))
        i = end
    if opens:
        raise UnbalancedParen("unclosed '('", position=_pos(text, opens[-1]))
    return stack[0]


def print_sexpr(s: SExpr) -> str:
    if isinstance(s, Atom):
        return s.text
    return "(" + " ".join(print_sexpr(x) for x in s.items) + ")"


def quote_symbol(name: str) -> str:
    """Spell a symbol; names containing '.' are always quoted (mangled OpenMath symbols)."""
    if _SIMPLE_SYMBOL.match(name) and "." not in name and name not in RESERVED and name not in THEORY_SYMBOLS:
        return name
    if "|" in name or "\\" in name:
        raise Unprintable(f"symbol {name!r} cannot be quoted")
    return f"|{name}|"


RESERVED = frozenset({"let", "forall", "exists", "match", "par", "_", "!", "as", "NUMERAL", "DECIMAL", "STRING"})

# -- theory symbols --------------------------------------------------------

CORE = "Core"
ARITH = "Reals_Ints"

# token -> (theory, min arity, max arity or None)
THEORY_SYMBOLS: dict[str, tuple[str, int, int | None]] = {
    "true": (CORE, 0, 0),
    "false": (CORE, 0, 0),
    "not": (CORE, 1, 1),
    "=>": (CORE, 2, None),
    "and": (CORE, 1, None),
    "or": (CORE, 1, None),
    "xor": (CORE, 2, None),
    "=": (CORE, 2, None),
    "distinct": (CORE, 2, None),
    "ite": (CORE, 3, 3),
    "+": (ARITH, 2, None),
    "-": (ARITH, 1, None),
    "*": (ARITH, 2, None),
    "/": (ARITH, 2, None),
    "div": (ARITH, 2, None),
    "mod": (ARITH, 2, 2),
    "abs": (ARITH, 1, 1),
    "<": (ARITH, 2, None),
    "<=": (ARITH, 2, None),
    ">": (ARITH, 2, None),
    ">=": (ARITH, 2, None),
}


def theory_symbol(token: str) -> ast.Symbol:
    theory = THEORY_SYMBOLS[token][0]
    return ast.Symbol(theory, token, ast.Origin.SMT_THEORY)


SMT_FORALL = ast.Symbol(CORE, "forall", ast.Origin.SMT_THEORY)
SMT_EXISTS = ast.Symbol(CORE, "exists", ast.Origin.SMT_THEORY)
SMT_TRUE = theory_symbol("true")
SMT_FALSE = theory_symbol("false")


def smt_app(token: str, *args: Term) -> Term:
    return Apply(Sym(theory_symbol(token)), args)


# -- scope -----------------------------------------------------------------


@dataclass
class Scope:
    """Declared sorts and functions visible while parsing terms.

    A permissive scope (strict=False) accepts unknown atoms as variables.
    """

    sorts: dict[str, int] = field(default_factory=dict)
    funs: dict[str, tuple[tuple[Sort, ...], Sort]] = field(default_factory=dict)
    strict: bool = False

    def copy(self) -> "Scope":
        return Scope(dict(self.sorts), dict(self.funs), self.strict)


# -- term parsing ----------------------------------------------------------


def _lit(atom: Atom) -> Lit:
    if atom.kind is AtomKind.STRING:
        return Lit(LitKind.STRING, atom.text[1:-1].replace('""', '"'))
    return Lit(LitKind(atom.kind.value), atom.text)


def parse_sort(s: SExpr, scope: Scope | None = None) -> Sort:
    if isinstance(s, Atom):
        if s.kind is not AtomKind.SYMBOL:
            raise ParseError(f"expected a sort, found {s.text!r}", position=s.pos)
        name = s.symbol_name
        if scope is not None and scope.strict and name not in ast.INTERPRETED_SORTS and name not in scope.sorts:
            raise UnknownSymbol(f"undeclared sort {name!r}", position=s.pos)
        return Sort(name)
    if not s.items or not isinstance(s.items[0], Atom):
        raise ParseError("malformed sort", position=s.pos)
    args = tuple(parse_sort(a, scope) for a in s.items[1:])
    head = s.items[0].symbol_name
    if scope is not None and scope.strict and head not in ("Array",):
        if scope.sorts.get(head) != len(args):
            raise UnknownSymbol(f"undeclared sort constructor {head!r}", position=s.pos)
    return Sort(head, args)


def parse_smt_term(s: SExpr, ctx: Scope | None = None) -> Term:
    """Convert a term-shaped s-expression to a Term.

    ``let`` is expanded on the spot; repeated quantifier variables are renamed
    so that the last occurrence is the one the body sees.
    """
    return _term(s, ctx or Scope(), frozenset())


def _term(s: SExpr, ctx: Scope, bound: frozenset[str]) -> Term:
    if isinstance(s, Atom):
        if s.kind is AtomKind.KEYWORD:
            raise ParseError(f"keyword {s.text} is not a term", position=s.pos)
        if s.kind is not AtomKind.SYMBOL:
            return _lit(s)
        name = s.symbol_name
        quoted = s.text.startswith("|")
        if name in bound:
            return Var(name)
        if not quoted and name in THEORY_SYMBOLS:
            _check_arity(name, 0, s)
            return Sym(theory_symbol(name))
        if name in ctx.funs:
            if ctx.funs[name][0]:
                raise Arity(f"{name} expects {len(ctx.funs[name][0])} arguments", position=s.pos)
            return Var(name)
        if ctx.strict:
            raise UnknownSymbol(f"unknown symbol {name!r}", position=s.pos)
        return Var(name)
    items = s.items
    if not items:
        raise ParseError("empty application ()", position=s.pos)
    head = items[0]
    if isinstance(head, Atom) and head.kind is AtomKind.SYMBOL and not head.text.startswith("|"):
        if head.text in ("forall", "exists"):
            return _quantifier(s, ctx, bound)
        if head.text == "let":
            return _let(s, ctx, bound)
        if head.text in ("!", "_", "as", "match"):
            raise ParseError(f"'{head.text}' terms are not supported", position=s.pos)
    if not isinstance(head, Atom) or head.kind is not AtomKind.SYMBOL:
        raise ParseError("application head must be a symbol", position=s.pos)
    args = tuple(_term(a, ctx, bound) for a in items[1:])
    name = head.symbol_name
    if name in bound:
        return Apply(Var(name), args)
    if not head.text.startswith("|") and name in THEORY_SYMBOLS:
        _check_arity(name, len(args), s)
        return Apply(Sym(theory_symbol(name)), args)
    if name in ctx.funs:
        want = len(ctx.funs[name][0])
        if want != len(args):
            raise Arity(f"{name} expects {want} arguments, got {len(args)}", position=s.pos)
    elif ctx.strict:
        raise UnknownSymbol(f"unknown function {name!r}", position=head.pos)
    return Apply(Var(name), args)


def _check_arity(token: str, n: int, s: SExpr) -> None:
    _, lo, hi = THEORY_SYMBOLS[token]
    if n < lo or (hi is not None and n > hi):
        raise Arity(f"{token} applied to {n} arguments", position=s.pos)


def _var_list(s: SExpr) -> list[tuple[Atom, SExpr]]:
    if not isinstance(s, SList) or not s.items:
        raise ParseError("expected a non-empty binding list", position=getattr(s, "pos", None))
    out = []
    for b in s.items:
        if not (isinstance(b, SList) and len(b.items) == 2 and isinstance(b.items[0], Atom)
                and b.items[0].kind is AtomKind.SYMBOL):
            raise ParseError("malformed binding", position=b.pos)
        out.append((b.items[0], b.items[1]))
    return out


def _quantifier(s: SList, ctx: Scope, bound: frozenset[str]) -> Term:
    if len(s.items) != 3:
        raise ParseError(f"{s.items[0].text} takes a variable list and a body", position=s.pos)
    pairs = _var_list(s.items[1])
    vars_ = [BoundVar(a.symbol_name, parse_sort(srt, ctx)) for a, srt in pairs]
    body = _term(s.items[2], ctx, bound | {v.name for v in vars_})
    binder = SMT_FORALL if s.items[0].text == "forall" else SMT_EXISTS
    return Bind(binder, ast.normalize_shadowing(vars_, body), body)


def _let(s: SList, ctx: Scope, bound: frozenset[str]) -> Term:
    if len(s.items) != 3:
        raise ParseError("let takes a binding list and a body", position=s.pos)
    pairs = _var_list(s.items[1])
    names = [a.symbol_name for a, _ in pairs]
    seen = set()
    for a, _ in pairs:
        if a.symbol_name in seen:
            raise DuplicateLetName(f"let binds {a.symbol_name!r} twice", position=a.pos)
        seen.add(a.symbol_name)
    values = [_term(v, ctx, bound) for _, v in pairs]
    body = _term(s.items[2], ctx, bound | set(names))
    return ast.substitute_simultaneous(body, list(zip(names, values)))


def parse_term(text: str, ctx: Scope | None = None) -> Term:
    exprs = lex_sexpr(text)
    if len(exprs) != 1:
        raise ParseError(f"expected one term, found {len(exprs)} s-expressions")
    return parse_smt_term(exprs[0], ctx)


# -- scripts ---------------------------------------------------------------


@dataclass(frozen=True)
class SetLogic:
    name: str


@dataclass(frozen=True)
class DeclareSort:
    name: str
    arity: int = 0


@dataclass(frozen=True)
class DeclareFun:
    name: str
    arg_sorts: tuple[Sort, ...]
    result: Sort


@dataclass(frozen=True)
class DefineFun:
    name: str
    params: tuple[BoundVar, ...]
    result: Sort
    body: Term


@dataclass(frozen=True)
class Assert:
    term: Term


@dataclass(frozen=True)
class CheckSat:
    pass


@dataclass(frozen=True)
class GetValue:
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class GetModel:
    pass


@dataclass(frozen=True)
class Maximize:
    term: Term
    options: tuple[tuple[str, SExpr], ...] = ()


@dataclass(frozen=True)
class Minimize:
    term: Term
    options: tuple[tuple[str, SExpr], ...] = ()


@dataclass(frozen=True)
class Exit:
    pass


@dataclass(frozen=True)
class Passthrough:
    """A command this toolkit does not interpret, kept verbatim."""

    sexpr: SExpr


Command = Union[SetLogic, DeclareSort, DeclareFun, DefineFun, Assert, CheckSat, GetValue,
                GetModel, Maximize, Minimize, Exit, Passthrough]


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "commands", tuple(self.commands))

    def scope(self, strict: bool = True) -> Scope:
        sc = Scope(strict=strict)
        for c in self.commands:
            _declare(sc, c)
        return sc


def _declare(sc: Scope, c: Command) -> None:
    if isinstance(c, DeclareSort):
        sc.sorts[c.name] = c.arity
    elif isinstance(c, DeclareFun):
        sc.funs[c.name] = (c.arg_sorts, c.result)
    elif isinstance(c, DefineFun):
        sc.funs[c.name] = (tuple(p.sort for p in c.params), c.result)


def _cmd_args(s: SList, n: int | None) -> tuple:
    args = s.items[1:]
    if n is not None and len(args) != n:
        raise ParseError(f"{s.items[0].text} takes {n} arguments", position=s.pos)
    return args


def _symbol_arg(a: SExpr) -> str:
    if not isinstance(a, Atom) or a.kind is not AtomKind.SYMBOL:
        raise ParseError("expected a symbol", position=getattr(a, "pos", None))
    return a.symbol_name


def _goal_options(items: Sequence[SExpr]) -> tuple:
    opts = []
    it = list(items)
    while it:
        k = it.pop(0)
        if not isinstance(k, Atom) or k.kind is not AtomKind.KEYWORD or not it:
            raise ParseError("goal options are :keyword value pairs", position=getattr(k, "pos", None))
        opts.append((k.text, it.pop(0)))
    return tuple(opts)


def parse_command(s: SExpr, scope: Scope) -> Command:
    if not isinstance(s, SList) or not s.items or not isinstance(s.items[0], Atom):
        raise ParseError("a command is a parenthesized list", position=getattr(s, "pos", None))
    head = s.items[0].text
    if head == "set-logic":
        return SetLogic(_symbol_arg(_cmd_args(s, 1)[0]))
    if head == "declare-sort":
        args = s.items[1:]
        if len(args) not in (1, 2):
            raise ParseError("declare-sort takes a name and an optional arity", position=s.pos)
        arity = 0
        if len(args) == 2:
            if not (isinstance(args[1], Atom) and args[1].kind is AtomKind.NUMERAL):
                raise ParseError("sort arity must be a numeral", position=s.pos)
            arity = int(args[1].text)
        return DeclareSort(_symbol_arg(args[0]), arity)
    if head == "declare-fun":
        name, dom, rng = _cmd_args(s, 3)
        if not isinstance(dom, SList):
            raise ParseError("declare-fun needs a sort list", position=s.pos)
        return DeclareFun(_symbol_arg(name), tuple(parse_sort(d, scope) for d in dom.items), parse_sort(rng, scope))
    if head == "declare-const":
        name, rng = _cmd_args(s, 2)
        return DeclareFun(_symbol_arg(name), (), parse_sort(rng, scope))
    if head == "define-fun":
        name, params, rng, body = _cmd_args(s, 4)
        if not isinstance(params, SList):
            raise ParseError("define-fun needs a parameter list", position=s.pos)
        ps = tuple(BoundVar(a.symbol_name, parse_sort(srt, scope)) for a, srt in
                   ([] if not params.items else _var_list(params)))
        inner = scope.copy()
        for p in ps:
            inner.funs[p.name] = ((), p.sort)
        return DefineFun(_symbol_arg(name), ps, parse_sort(rng, scope), parse_smt_term(body, inner))
    if head == "assert":
        return Assert(parse_smt_term(_cmd_args(s, 1)[0], scope))
    if head == "check-sat":
        _cmd_args(s, 0)
        return CheckSat()
    if head == "get-value":
        (terms,) = _cmd_args(s, 1)
        if not isinstance(terms, SList) or not terms.items:
            raise ParseError("get-value needs a non-empty term list", position=s.pos)
        return GetValue(tuple(parse_smt_term(t, scope) for t in terms.items))
    if head == "get-model":
        _cmd_args(s, 0)
        return GetModel()
    if head in ("maximize", "minimize"):
        if len(s.items) < 2:
            raise ParseError(f"{head} needs an objective", position=s.pos)
        cls = Maximize if head == "maximize" else Minimize
        return cls(parse_smt_term(s.items[1], scope), _goal_options(s.items[2:]))
    if head == "exit":
        _cmd_args(s, 0)
        return Exit()
    warnings.warn(f"passing through unknown command {head!r}", stacklevel=3)
    return Passthrough(s)


def parse_script(text: str, strict: bool = False) -> Script:
    """Parse a command sequence. With strict=True undeclared symbols are errors."""
    scope = Scope(strict=strict)
    cmds = []
    for s in lex_sexpr(text):
        c = parse_command(s, scope)
        _declare(scope, c)
        cmds.append(c)
    return Script(tuple(cmds))


def looks_like_script(text: str) -> bool:
    exprs = lex_sexpr(text)
    return bool(exprs) and all(
        isinstance(e, SList) and e.items and isinstance(e.items[0], Atom) and e.items[0].text in COMMAND_WORDS
        for e in exprs
    )


COMMAND_WORDS = frozenset({
    "set-logic", "declare-sort", "declare-fun", "declare-const", "define-fun", "assert",
    "check-sat", "get-value", "get-model", "maximize", "minimize", "exit", "set-option",
    "set-info", "push", "pop", "get-objectives", "echo",
})

# -- solver results --------------------------------------------------------


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolverResult:
    status: Status
    model: tuple[tuple[Term, Term], ...] | None = None

    def __post_init__(self):
        if self.model is not None:
            object.__setattr__(self, "model", tuple((k, v) for k, v in self.model))
            if self.status is not Status.SAT:
                raise InvalidModel("only a sat result carries a model")
            lhs = [k for k, _ in self.model]
            if len(set(lhs)) != len(lhs):
                raise InvalidModel("two model bindings share a left-hand term")
            for _, v in self.model:
                if not is_canonical_value(v):
                    raise InvalidModel(f"model value {v!r} is not a canonical literal")


def _numeral(t: Term) -> int | None:
    if isinstance(t, Lit) and t.kind is LitKind.NUMERAL and (t.payload == "0" or not t.payload.startswith("0")):
        return int(t.payload)
    return None


def _is_op(t: Term, token: str, n: int) -> bool:
    return (isinstance(t, Apply) and t.head == Sym(theory_symbol(token)) and len(t.args) == n)


def canonical_value(t: Term) -> Fraction | bool | str | None:
    """Decode a canonical model value; None if t is not canonical."""
    if t in (Sym(SMT_TRUE), Sym(SMT_FALSE)):
        return t == Sym(SMT_TRUE)
    if isinstance(t, Var) and re.fullmatch(r".+!val![0-9]+", t.name):
        return t.name
    n = _numeral(t)
    if n is not None:
        return Fraction(n)
    if _is_op(t, "/", 2):
        p, q = _numeral(t.args[0]), _numeral(t.args[1])
        if p is not None and q is not None and q > 1 and Fraction(p, q).denominator == q and p != 0:
            return Fraction(p, q)
        return None
    if _is_op(t, "-", 1):
        inner = canonical_value(t.args[0])
        if isinstance(inner, Fraction) and not isinstance(inner, bool) and inner > 0:
            return -inner
    return None


def is_canonical_value(t: Term) -> bool:
    return canonical_value(t) is not None


def value_term(v) -> Term:
    """Canonical term for a rational, boolean or uninterpreted element label."""
    if isinstance(v, bool):
        return Sym(SMT_TRUE if v else SMT_FALSE)
    if isinstance(v, str):
        return Var(v)
    v = Fraction(v)
    if v < 0:
        return smt_app("-", value_term(-v))
    if v.denominator == 1:
        return Lit(LitKind.NUMERAL, str(v.numerator))
    return smt_app("/", Lit(LitKind.NUMERAL, str(v.numerator)), Lit(LitKind.NUMERAL, str(v.denominator)))


def parse_solver_result(text: str) -> SolverResult:
    exprs = lex_sexpr(text)
    if not exprs or not isinstance(exprs[0], Atom) or exprs[0].text not in ("sat", "unsat", "unknown"):
        raise ParseError("solver output must start with sat, unsat or unknown")
    status = Status(exprs[0].text)
    model = None
    if len(exprs) > 1:
        block = exprs[1]
        if not isinstance(block, SList):
            raise ParseError("model block must be a list")
        model = []
        for pair in block.items:
            if not isinstance(pair, SList) or len(pair.items) != 2:
                raise ParseError("model entries are (term value) pairs")
            model.append((parse_smt_term(pair.items[0]), parse_smt_term(pair.items[1])))
    return SolverResult(status, None if model is None else tuple(model))


# -- printing --------------------------------------------------------------


def print_smt(x: Union[Term, Script, Command, SolverResult, Sort]) -> str:
    if isinstance(x, Script):
        return "".join(print_command(c) + "\n" for c in x.commands)
    if isinstance(x, SolverResult):
        out = x.status.value + "\n"
        if x.model is not None:
            out += "(" + " ".join(f"({_term_str(k)} {_term_str(v)})" for k, v in x.model) + ")\n"
        return out
    if isinstance(x, Sort):
        return _sort_str(x)
    if isinstance(x, Term):
        return _term_str(x)
    return print_command(x)


def _sort_str(s: Sort) -> str:
    if not s.args:
        return quote_symbol(s.name)
    return "(" + " ".join([quote_symbol(s.name), *(_sort_str(a) for a in s.args)]) + ")"


def _sym_token(s: ast.Symbol) -> str:
    if s.origin is ast.Origin.EXTENSION:
        raise UnloweredExtension(f"extension symbol {s} must be lowered before printing SMT-LIB")
    if s.origin is not ast.Origin.SMT_THEORY:
        raise Unprintable(f"OpenMath symbol {s} must be translated before printing SMT-LIB")
    return s.name


def _term_str(t: Term) -> str:
    if isinstance(t, Var):
        return quote_symbol(t.name)
    if isinstance(t, Sym):
        return _sym_token(t.symbol)
    if isinstance(t, Lit):
        k, p = t.kind, t.payload
        if k in ast.SPELLED_KINDS:
            return p
        if k is LitKind.STRING:
            return '"' + p.replace('"', '""') + '"'
        if k is LitKind.INTEGER:
            return str(p) if p >= 0 else f"(- {-p})"
        raise Unprintable(f"{k.value} literal has no SMT-LIB spelling")
    if isinstance(t, Apply):
        if not t.args:
            raise Unprintable("nullary application has no SMT-LIB spelling")
        if isinstance(t.head, Sym):
            head = _sym_token(t.head.symbol)
        elif isinstance(t.head, Var):
            head = quote_symbol(t.head.name)
        else:
            raise Unprintable("SMT-LIB application heads must be symbols")
        return "(" + " ".join([head, *(_term_str(a) for a in t.args)]) + ")"
    if isinstance(t, Bind):
        if t.binder.origin is ast.Origin.EXTENSION:
            raise UnloweredExtension(f"binder {t.binder} must be desugared first")
        if t.binder not in (SMT_FORALL, SMT_EXISTS) or t.condition is not None:
            raise Unprintable(f"binder {t.binder} has no SMT-LIB counterpart")
        if any(v.sort is None for v in t.vars):
            raise UnsortedBinder("quantified variables need sorts")
        vs = " ".join(f"({quote_symbol(v.name)} {_sort_str(v.sort)})" for v in t.vars)
        return f"({t.binder.name} ({vs}) {_term_str(t.body)})"
    if isinstance(t, ast.Attributed):
        raise Unprintable("attributions have no SMT-LIB spelling")
    raise Unprintable(f"cannot print {type(t).__name__} as SMT-LIB")


def _goal_str(word: str, g) -> str:
    opts = "".join(f" {k} {print_sexpr(v)}" for k, v in g.options)
    return f"({word} {_term_str(g.term)}{opts})"


def print_command(c: Command) -> str:
    if isinstance(c, SetLogic):
        return f"(set-logic {quote_symbol(c.name)})"
    if isinstance(c, DeclareSort):
        return f"(declare-sort {quote_symbol(c.name)} {c.arity})"
    if isinstance(c, DeclareFun):
        dom = " ".join(_sort_str(s) for s in c.arg_sorts)
        return f"(declare-fun {quote_symbol(c.name)} ({dom}) {_sort_str(c.result)})"
    if isinstance(c, DefineFun):
        ps = " ".join(f"({quote_symbol(p.name)} {_sort_str(p.sort)})" for p in c.params)
        return f"(define-fun {quote_symbol(c.name)} ({ps}) {_sort_str(c.result)} {_term_str(c.body)})"
    if isinstance(c, Assert):
        return f"(assert {_term_str(c.term)})"
    if isinstance(c, CheckSat):
        return "(check-sat)"
    if isinstance(c, GetValue):
        return "(get-value (" + " ".join(_term_str(t) for t in c.terms) + "))"
    if isinstance(c, GetModel):
        return "(get-model)"
    if isinstance(c, Maximize):
        return _goal_str("maximize", c)
    if isinstance(c, Minimize):
        return _goal_str("minimize", c)
    if isinstance(c, Exit):
        return "(exit)"
    if isinstance(c, Passthrough):
        return print_sexpr(c.sexpr)
    raise Unprintable(f"unknown command {c!r}")


def iter_terms(script: Script) -> Iterable[Term]:
    for c in script.commands:
        if isinstance(c, (Assert, Maximize, Minimize)):
            yield c.term
        elif isinstance(c, GetValue):
            yield from c.terms
        elif isinstance(c, DefineFun):
            yield c.body
