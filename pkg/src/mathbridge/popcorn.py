"""POPCORN: the compact text syntax for OpenMath objects.

Grammar of this dialect (precedence low to high)::

    expr    := binder | implies
    binder  := cd.name '[' bvar (',' bvar)* ('|' expr)? ']' '->' expr
    implies := or ('->' implies)?                 right-associative
    or      := and ('or' and)*
    and     := rel ('and' rel)*
    rel     := sum (('=' | '!=' | '<' | '<=' | 'in') sum)*
    sum     := prod (('+' | '-') prod)*
    prod    := unary (('*' | '/') unary)*
    unary   := '-' unary | postfix
    postfix := atom ('(' args ')' | '{' attrs '}')*
    atom    := '$'name | cd.name | number | string | '(' expr ')'
             | 'error' '(' cd.name (',' expr)* ')' | '%' base64 '%'

Chains of the associative operators ``+ * and or`` build one n-ary
application; every other binary operator nests to the left.
"""

from __future__ import annotations

import base64
import enum
import re
from dataclasses import dataclass, field
from typing import Mapping

from . import ast
from .ast import Apply, Attributed, Bind, BoundVar, ErrorTerm, Foreign, Lit, LitKind, Sort, Sym, Term, Var
from .errors import PopcornSyntax, UnboundSugar, UnknownInfix, Unprintable


class Sugar(enum.Enum):
    QUALIFIED = "qualified"
    SUGARED = "sugared"


# operator -> (precedence, associativity); higher binds tighter
PRECEDENCE: dict[str, tuple[int, str]] = {
    "->": (1, "right"),
    "or": (2, "left"),
    "and": (3, "left"),
    "=": (4, "left"),
    "!=": (4, "left"),
    "<": (4, "left"),
    "<=": (4, "left"),
    "in": (4, "left"),
    "+": (5, "left"),
    "-": (5, "left"),
    "*": (6, "left"),
    "/": (6, "left"),
}
UNARY_PREC = 7
ATOM_PREC = 8
BINDER_PREC = 0

DEFAULT_INFIX: dict[str, ast.Symbol] = {
    "->": ast.IMPLIES,
    "or": ast.OR,
    "and": ast.AND,
    "=": ast.EQ,
    "!=": ast.NEQ,
    "<": ast.LT,
    "<=": ast.LEQ,
    "in": ast.SET_IN,
    "+": ast.PLUS,
    "-": ast.MINUS,
    "*": ast.TIMES,
    "/": ast.DIVIDE,
}
NARY_OPS = frozenset({"+", "*", "and", "or"})


@dataclass(frozen=True)
class PopcornConfig:
    sugar: Sugar = Sugar.SUGARED
    infix: Mapping[str, ast.Symbol] = field(default_factory=lambda: dict(DEFAULT_INFIX))
    unary_minus: ast.Symbol | None = ast.UNARY_MINUS


QUALIFIED = PopcornConfig(Sugar.QUALIFIED)
SUGARED = PopcornConfig(Sugar.SUGARED)

# -- lexer -----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<float>[0-9]+\.[0-9]+(?:[eE][+-]?[0-9]+)?)
  | (?P<int>[0-9]+)
  | (?P<var>\$[A-Za-z_][A-Za-z0-9_]*(?:![0-9]+)*)
  | (?P<qname>[A-Za-z_][A-Za-z0-9_]*\.[A-Za-z_][A-Za-z0-9_]*)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\]|\\["\\])*")
  | (?P<bytes>%[A-Za-z0-9+/=]*%)
  | (?P<op>->|!=|<=|[-+*/=<])
  | (?P<punct>[()\[\]{},|:])
  | (?P<other>.)
    """,
    re.X | re.S,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    glued: bool  # no whitespace before this token


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    glued = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        if kind == "ws":
            glued = False
        else:
            if kind == "word" and m.group() in ("and", "or", "in"):
                kind = "op"
            toks.append(_Tok(kind, m.group(), pos, glued))
            glued = True
        pos = m.end()
    toks.append(_Tok("eof", "", len(text), glued))
    return toks


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, cfg: PopcornConfig):
        self.text = text
        self.cfg = cfg
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None, cls=PopcornSyntax):
        tok = tok or self.tok
        return cls(msg, position=_line_col(self.text, tok.pos))

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind in ("string",):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def parse(self) -> Term:
        t = self.expr()
        if self.tok.kind != "eof":
            if self.tok.kind == "other":
                raise self.error(f"unknown operator {self.tok.text!r}", cls=UnknownInfix)
            raise self.error(f"unexpected {self.tok.text!r}")
        return t

    def expr(self) -> Term:
        return self.binary(1)

    def infix_symbol(self, tok: _Tok) -> ast.Symbol:
        sym = self.cfg.infix.get(tok.text)
        if sym is None:
            raise self.error(f"operator {tok.text!r} has no registered symbol", tok, UnboundSugar)
        return sym

    def binary(self, min_prec: int) -> Term:
        left = self.unary()
        chain_op = None  # operator that built `left` in this loop, for n-ary flattening
        while True:
            tok = self.tok
            if tok.kind == "other":
                raise self.error(f"unknown operator {tok.text!r}", cls=UnknownInfix)
            if tok.kind != "op" or tok.text not in PRECEDENCE:
                return left
            prec, assoc = PRECEDENCE[tok.text]
            if prec < min_prec:
                return left
            self.advance()
            sym = self.infix_symbol(tok)
            right = self.binary(prec if assoc == "right" else prec + 1)
            if chain_op == tok.text and tok.text in NARY_OPS:
                left = Apply(left.head, left.args + (right,))
            else:
                left = Apply(Sym(sym), (left, right))
            chain_op = tok.text

    def unary(self) -> Term:
        tok = self.tok
        if tok.kind == "op" and tok.text == "-":
            nxt = self.toks[self.i + 1]
            if nxt.glued and nxt.kind in ("int", "float"):
                self.advance()
                return self.postfix(self.number(self.advance(), negative=True))
            self.advance()
            if self.cfg.unary_minus is None:
                raise self.error("unary minus has no registered symbol", tok, UnboundSugar)
            return Apply(Sym(self.cfg.unary_minus), (self.unary(),))
        # a binder extends as far right as possible
        if tok.kind == "qname" and self.toks[self.i + 1].text == "[":
            return self.binder()
        return self.postfix(self.atom())

    def number(self, tok: _Tok, negative: bool = False) -> Lit:
        sign = "-" if negative else ""
        if tok.kind == "int":
            return Lit(LitKind.INTEGER, int(sign + tok.text))
        return Lit(LitKind.FLOAT64, float(sign + tok.text))

    def atom(self) -> Term:
        tok = self.advance()
        if tok.kind == "var":
            return Var(tok.text[1:])
        if tok.kind == "qname":
            cd, name = tok.text.split(".")
            return Sym(ast.om_symbol(cd, name))
        if tok.kind in ("int", "float"):
            return self.number(tok)
        if tok.kind == "string":
            body = tok.text[1:-1]
            return Lit(LitKind.STRING, re.sub(r"\\(.)", r"\1", body))
        if tok.kind == "bytes":
            try:
                return Lit(LitKind.BYTES, base64.b64decode(tok.text[1:-1], validate=True))
            except ValueError:
                raise self.error("bad base64 in byte array", tok) from None
        if tok.kind == "word" and tok.text == "error":
            self.expect("(")
            head = self.advance()
            if head.kind != "qname":
                raise self.error("error() needs a cd.name symbol first", head)
            args = []
            while self.tok.text == ",":
                self.advance()
                args.append(self.expr())
            self.expect(")")
            return ErrorTerm(ast.om_symbol(*head.text.split(".")), tuple(args))
        if tok.text == "(" and tok.kind == "punct":
            t = self.expr()
            self.expect(")")
            return t
        if tok.kind == "other":
            raise self.error(f"unknown operator {tok.text!r}", tok, UnknownInfix)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}", tok)

    def postfix(self, t: Term) -> Term:
        while True:
            tok = self.tok
            if tok.kind == "punct" and tok.text == "(" and tok.glued:
                self.advance()
                args = []
                if self.tok.text != ")":
                    args.append(self.expr())
                    while self.tok.text == ",":
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                t = Apply(t, tuple(args))
            elif tok.kind == "punct" and tok.text == "{":
                self.advance()
                pairs = [self.attr_pair()]
                while self.tok.text == ",":
                    self.advance()
                    pairs.append(self.attr_pair())
                self.expect("}")
                t = Attributed(tuple(pairs), t)
            else:
                return t

    def attr_pair(self):
        key = self.advance()
        if key.kind != "qname":
            raise self.error("attribution key must be a cd.name symbol", key)
        self.expect("->")
        return ast.om_symbol(*key.text.split(".")), self.expr()

    def sort(self) -> Sort:
        tok = self.advance()
        if tok.kind != "word":
            raise self.error("expected a sort name", tok)
        args = []
        if self.tok.text == "(" and self.tok.glued:
            self.advance()
            args.append(self.sort())
            while self.tok.text == ",":
                self.advance()
                args.append(self.sort())
            self.expect(")")
        return Sort(tok.text, tuple(args))

    def binder(self) -> Term:
        head = self.advance()
        sym = ast.om_symbol(*head.text.split("."))
        self.expect("[")
        bvars = [self.bvar()]
        while self.tok.text == ",":
            self.advance()
            bvars.append(self.bvar())
        cond = None
        if self.tok.text == "|":
            self.advance()
            cond = self.expr()
        self.expect("]")
        self.expect("->")
        body = self.expr()
        names = [v.name for v in bvars]
        if len(set(names)) != len(names):
            raise self.error(f"repeated bound variable in {head.text}", head)
        return Bind(sym, tuple(bvars), body, cond)

    def bvar(self) -> BoundVar:
        tok = self.advance()
        if tok.kind != "var":
            raise self.error("bound variables are written $name", tok)
        sort = None
        if self.tok.text == ":":
            self.advance()
            sort = self.sort()
        return BoundVar(tok.text[1:], sort)


def parse_popcorn(text: str, cfg: PopcornConfig = SUGARED) -> Term:
    return _Parser(text, cfg).parse()


# -- printer ---------------------------------------------------------------

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_VARNAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(?:![0-9]+)*$")


def print_popcorn(t: Term, cfg: PopcornConfig = SUGARED) -> str:
    return _Printer(cfg).show(t)[0]


class _Printer:
    def __init__(self, cfg: PopcornConfig):
        self.cfg = cfg
        self.sugar = cfg.sugar is Sugar.SUGARED
        self.ops = {sym: op for op, sym in cfg.infix.items()} if self.sugar else {}

    def wrap(self, t: Term, need: int) -> str:
        s, prec = self.show(t)
        return f"({s})" if prec < need else s

    def show(self, t: Term) -> tuple[str, int]:
        if isinstance(t, Var):
            if not _VARNAME.match(t.name):
                raise Unprintable(f"variable name {t.name!r} is not POPCORN-safe")
            return "$" + t.name, ATOM_PREC
        if isinstance(t, Sym):
            return self.sym(t.symbol), ATOM_PREC
        if isinstance(t, Lit):
            return self.lit(t)
        if isinstance(t, Apply):
            return self.apply(t)
        if isinstance(t, Bind):
            vs = ",".join(self.bvar(v) for v in t.vars)
            if t.condition is not None:
                vs += "|" + self.show(t.condition)[0]
            return f"{self.sym(t.binder)}[{vs}]->{self.show(t.body)[0]}", BINDER_PREC
        if isinstance(t, Attributed):
            base = self.wrap(t.base, ATOM_PREC)
            pairs = ",".join(f"{self.sym(k)}->{self.show(v)[0]}" for k, v in t.pairs)
            return f"{base}{{{pairs}}}", ATOM_PREC
        if isinstance(t, ErrorTerm):
            parts = [self.sym(t.symbol)] + [self.show(a)[0] for a in t.args]
            return f"error({','.join(parts)})", ATOM_PREC
        if isinstance(t, Foreign):
            raise Unprintable("foreign objects have no POPCORN form")
        raise Unprintable(f"cannot print {type(t).__name__}")

    def sym(self, s: ast.Symbol) -> str:
        if not (_IDENT.match(s.namespace) and _IDENT.match(s.name)):
            raise Unprintable(f"symbol {s} is not POPCORN-safe")
        return s.qualified

    def bvar(self, v: BoundVar) -> str:
        if not _VARNAME.match(v.name):
            raise Unprintable(f"variable name {v.name!r} is not POPCORN-safe")
        return "$" + v.name if v.sort is None else f"${v.name}:{self.sort(v.sort)}"

    def sort(self, s: Sort) -> str:
        if not _IDENT.match(s.name) or s.name in ("and", "or", "in", "error"):
            raise Unprintable(f"sort name {s.name!r} is not POPCORN-safe")
        if not s.args:
            return s.name
        return s.name + "(" + ",".join(self.sort(a) for a in s.args) + ")"

    def lit(self, t: Lit) -> tuple[str, int]:
        k, p = t.kind, t.payload
        if k is LitKind.INTEGER:
            return str(p), ATOM_PREC
        if k is LitKind.FLOAT64:
            if not ast.finite_float(p):
                raise Unprintable("non-finite floats have no POPCORN form")
            s = repr(p)
            if "." not in s:
                mant, _, exp = s.partition("e")
                s = f"{mant}.0" + (f"e{exp}" if exp else "")
            return s, ATOM_PREC
        if k is LitKind.STRING:
            return '"' + p.replace("\\", "\\\\").replace('"', '\\"') + '"', ATOM_PREC
        if k is LitKind.BYTES:
            return "%" + base64.b64encode(p).decode("ascii") + "%", ATOM_PREC
        raise Unprintable(f"{k.value} literal has no POPCORN form")

    def apply(self, t: Apply) -> tuple[str, int]:
        head, args = t.head, t.args
        if isinstance(head, Sym) and self.sugar:
            sym = head.symbol
            if sym == self.cfg.unary_minus and len(args) == 1:
                inner = self.wrap(args[0], UNARY_PREC)
                if inner[:1].isdigit():
                    # "-1" would read back as a negative literal
                    inner = f"({inner})"
                return "-" + inner, UNARY_PREC
            op = self.ops.get(sym)
            if op is not None and (len(args) == 2 or (op in NARY_OPS and len(args) > 2)):
                return self.infix(op, args)
        fn = self.wrap(head, ATOM_PREC)
        return fn + "(" + ",".join(self.show(a)[0] for a in args) + ")", ATOM_PREC

    def infix(self, op: str, args) -> tuple[str, int]:
        prec, assoc = PRECEDENCE[op]
        parts = []
        for i, a in enumerate(args):
            s, p = self.show(a)
            if p < prec:
                need = True
            elif p > prec:
                need = False
            elif assoc == "right":
                need = i == 0
            elif i > 0:
                need = True
            else:
                # leftmost operand at equal precedence: safe unless it would
                # be absorbed into this n-ary chain
                need = op in NARY_OPS and self._is_op(a, op)
            parts.append(f"({s})" if need else s)
        glue = f" {op} " if op.isalpha() else op
        return glue.join(parts), prec

    def _is_op(self, t: Term, op: str) -> bool:
        return isinstance(t, Apply) and isinstance(t.head, Sym) and self.ops.get(t.head.symbol) == op and len(t.args) >= 2
