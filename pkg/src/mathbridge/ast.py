"""Unified term representation for OpenMath objects and SMT-LIB terms.

Everything here is immutable. Terms are frozen dataclasses whose list-valued
fields are stored as tuples, so terms hash, compare structurally and can be
shared freely.
"""

from __future__ import annotations

import enum
import math
import re
import struct
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from .errors import DuplicateBindingName, MalformedTerm


class Origin(enum.Enum):
    OPENMATH_CD = "OpenMathCD"
    SMT_THEORY = "SMTTheory"
    EXTENSION = "Extension"


_NO_SPACE = re.compile(r"^\S+$")


@dataclass(frozen=True)
class Symbol:
    namespace: str
    name: str
    origin: Origin = Origin.OPENMATH_CD

    def __post_init__(self):
        if not _NO_SPACE.match(self.namespace or "") or not _NO_SPACE.match(self.name or ""):
            raise MalformedTerm(f"bad symbol {self.namespace!r}.{self.name!r}")

    @property
    def qualified(self) -> str:
        return f"{self.namespace}.{self.name}"

    def __str__(self) -> str:
        return self.qualified


class LitKind(enum.Enum):
    INTEGER = "Integer"
    FLOAT64 = "Float64"
    STRING = "String"
    BYTES = "ByteArray"
    NUMERAL = "Numeral"
    DECIMAL = "Decimal"
    HEXADECIMAL = "Hexadecimal"
    BINARY = "Binary"


# kinds whose payload is the exact source spelling
SPELLED_KINDS = frozenset({LitKind.NUMERAL, LitKind.DECIMAL, LitKind.HEXADECIMAL, LitKind.BINARY})


def float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def float_from_bits(bits: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", bits))[0]


INTERPRETED_SORTS = frozenset({"Bool", "Int", "Real", "String"})


@dataclass(frozen=True)
class Sort:
    name: str
    args: tuple["Sort", ...] = ()
    interpreted: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.interpreted is None:
            object.__setattr__(self, "interpreted", self.name in INTERPRETED_SORTS and not self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return "(" + " ".join([self.name, *map(str, self.args)]) + ")"


BOOL = Sort("Bool")
INT = Sort("Int")
REAL = Sort("Real")


@dataclass(frozen=True)
class BoundVar:
    name: str
    sort: Sort | None = None

    def __post_init__(self):
        if not self.name:
            raise MalformedTerm("bound variable with empty name")


class Term:
    """Marker base class for term variants."""

    __slots__ = ()


@dataclass(frozen=True)
class Sym(Term):
    symbol: Symbol


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True, eq=False)
class Lit(Term):
    kind: LitKind
    payload: Union[int, float, str, bytes]

    def __post_init__(self):
        k, p = self.kind, self.payload
        ok = {
            LitKind.INTEGER: isinstance(p, int) and not isinstance(p, bool),
            LitKind.FLOAT64: isinstance(p, float),
            LitKind.STRING: isinstance(p, str),
            LitKind.BYTES: isinstance(p, bytes),
        }.get(k, isinstance(p, str))
        if not ok:
            raise MalformedTerm(f"{k.value} literal with payload {p!r}")

    def _key(self):
        if self.kind is LitKind.FLOAT64:
            return (self.kind, float_bits(self.payload))
        return (self.kind, self.payload)

    def __eq__(self, other):
        return isinstance(other, Lit) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Lit({self.kind.value}, {self.payload!r})"


def Int(n: int) -> Lit:
    return Lit(LitKind.INTEGER, n)


def Float(x: float) -> Lit:
    return Lit(LitKind.FLOAT64, float(x))


@dataclass(frozen=True)
class Apply(Term):
    head: Term
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Bind(Term):
    binder: Symbol
    vars: tuple[BoundVar, ...]
    body: Term
    condition: Term | None = None

    def __post_init__(self):
        vs = tuple(v if isinstance(v, BoundVar) else BoundVar(v) for v in self.vars)
        object.__setattr__(self, "vars", vs)
        if not vs:
            raise MalformedTerm("binding without bound variables")
        if self.binder.origin is Origin.SMT_THEORY and any(v.sort is None for v in vs):
            raise MalformedTerm(f"SMT-LIB {self.binder.name} needs sorted variables")


@dataclass(frozen=True)
class Attributed(Term):
    pairs: tuple[tuple[Symbol, Term], ...]
    base: Term

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((k, v) for k, v in self.pairs))


@dataclass(frozen=True)
class ErrorTerm(Term):
    symbol: Symbol
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Foreign(Term):
    encoding: str
    blob: bytes


# -- known symbols ---------------------------------------------------------

KNOWN: dict[str, Symbol] = {}
EXTENSION_CDS = frozenset({"quant2", "minmax2"})


def _known(cd: str, name: str, origin: Origin = Origin.OPENMATH_CD) -> Symbol:
    s = Symbol(cd, name, origin)
    KNOWN[s.qualified] = s
    return s


PLUS = _known("arith1", "plus")
TIMES = _known("arith1", "times")
MINUS = _known("arith1", "minus")
UNARY_MINUS = _known("arith1", "unary_minus")
DIVIDE = _known("arith1", "divide")
ABS = _known("arith1", "abs")
TIMES2 = _known("arith2", "times")
ONE = _known("alg1", "one")
ZERO = _known("alg1", "zero")
FORALL = _known("quant1", "forall")
EXISTS = _known("quant1", "exists")
EQ = _known("relation1", "eq")
NEQ = _known("relation1", "neq")
LT = _known("relation1", "lt")
LEQ = _known("relation1", "leq")
GT = _known("relation1", "gt")
GEQ = _known("relation1", "geq")
AND = _known("logic1", "and")
OR = _known("logic1", "or")
NOT = _known("logic1", "not")
IMPLIES = _known("logic1", "implies")
TRUE = _known("logic1", "true")
FALSE = _known("logic1", "false")
SET = _known("set1", "set")
EMPTYSET = _known("set1", "emptyset")
SET_MAP = _known("set1", "map")
SET_IN = _known("set1", "in")
SUCHTHAT = _known("set1", "suchthat")
LAMBDA = _known("fns1", "lambda")
INTERVAL_CC = _known("interval1", "interval_cc")
MAX = _known("minmax1", "max")
MIN = _known("minmax1", "min")
MAPSTO = _known("sts", "mapsto")
NASSOC = _known("sts", "nassoc")

EXISTS_UNIQUE = _known("quant2", "exists_unique", Origin.EXTENSION)
MAX_BINDER = _known("minmax2", "max", Origin.EXTENSION)
MAX_SF = _known("minmax2", "max_sf", Origin.EXTENSION)
ARGMAX = _known("minmax2", "argmax", Origin.EXTENSION)
ARGMAXONE = _known("minmax2", "argmaxone", Origin.EXTENSION)
# attribution key carrying the sort of an OpenMath bound variable
SORT_ATTR = _known("sts", "sort", Origin.EXTENSION)


def om_symbol(cd: str, name: str) -> Symbol:
    """Resolve an OpenMath cd/name pair through the registry."""
    found = KNOWN.get(f"{cd}.{name}")
    if found is not None:
        return found
    origin = Origin.EXTENSION if cd in EXTENSION_CDS else Origin.OPENMATH_CD
    return Symbol(cd, name, origin)


# -- traversal -------------------------------------------------------------


def children(t: Term) -> Iterator[Term]:
    if isinstance(t, Apply):
        yield t.head
        yield from t.args
    elif isinstance(t, Bind):
        if t.condition is not None:
            yield t.condition
        yield t.body
    elif isinstance(t, Attributed):
        for _, v in t.pairs:
            yield v
        yield t.base
    elif isinstance(t, ErrorTerm):
        yield from t.args


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order walk over every subterm, including t itself."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(list(children(s))))


def symbols(t: Term) -> set[Symbol]:
    out: set[Symbol] = set()
    for s in subterms(t):
        if isinstance(s, Sym):
            out.add(s.symbol)
        elif isinstance(s, Bind):
            out.add(s.binder)
        elif isinstance(s, Attributed):
            out.update(k for k, _ in s.pairs)
        elif isinstance(s, ErrorTerm):
            out.add(s.symbol)
    return out


def free_variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Bind):
        inner = free_variables(t.body)
        if t.condition is not None:
            inner |= free_variables(t.condition)
        return inner - {v.name for v in t.vars}
    out: set[str] = set()
    for c in children(t):
        out |= free_variables(c)
    return out


def all_names(t: Term) -> set[str]:
    """Every variable name occurring in t, free or bound."""
    names: set[str] = set()
    for s in subterms(t):
        if isinstance(s, Var):
            names.add(s.name)
        elif isinstance(s, Bind):
            names.update(v.name for v in s.vars)
    return names


_SUFFIX = re.compile(r"^(.*?)(?:!\d+)?$", re.S)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """Least ``base!n`` (n >= 1) not in avoid. An existing ``!n`` suffix is replaced."""
    root = _SUFFIX.match(base).group(1) or base
    n = 1
    while f"{root}!{n}" in avoid:
        n += 1
    return f"{root}!{n}"


# -- substitution ----------------------------------------------------------


def substitute_simultaneous(t: Term, bindings: Sequence[tuple[str, Term]]) -> Term:
    """Replace free occurrences of every name at once, renaming binders to avoid capture."""
    names = [n for n, _ in bindings]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateBindingName(f"name {dup!r} bound twice")
    mapping = dict(bindings)
    if not mapping:
        return t
    avoid = set(all_names(t)) | set(mapping)
    for r in mapping.values():
        avoid |= all_names(r)
    return _subst(t, mapping, avoid)


def _subst(t: Term, mapping: Mapping[str, Term], avoid: set[str]) -> Term:
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Apply):
        return Apply(_subst(t.head, mapping, avoid), tuple(_subst(a, mapping, avoid) for a in t.args))
    if isinstance(t, Attributed):
        pairs = tuple((k, _subst(v, mapping, avoid)) for k, v in t.pairs)
        return Attributed(pairs, _subst(t.base, mapping, avoid))
    if isinstance(t, ErrorTerm):
        return ErrorTerm(t.symbol, tuple(_subst(a, mapping, avoid) for a in t.args))
    if isinstance(t, Bind):
        bound = {v.name for v in t.vars}
        scope_fv = free_variables(t.body)
        if t.condition is not None:
            scope_fv |= free_variables(t.condition)
        inner = {k: v for k, v in mapping.items() if k not in bound and k in scope_fv}
        if not inner:
            return t
        captured: set[str] = set()
        for r in inner.values():
            captured |= free_variables(r)
        new_vars = []
        renames: dict[str, Term] = {}
        for v in t.vars:
            if v.name in captured:
                new = fresh_name(v.name, avoid)
                avoid.add(new)
                renames[v.name] = Var(new)
                new_vars.append(BoundVar(new, v.sort))
            else:
                new_vars.append(v)
        inner.update(renames)
        cond = None if t.condition is None else _subst(t.condition, inner, avoid)
        return Bind(t.binder, tuple(new_vars), _subst(t.body, inner, avoid), cond)
    return t


def rename_bound(t: Term, avoid: set[str] | None = None) -> Term:
    """Rename every bound variable to a fresh name (used to exercise alpha-equivalence)."""
    avoid = set(all_names(t)) if avoid is None else avoid

    def go(s: Term) -> Term:
        if isinstance(s, Bind):
            new_vars, ren = [], []
            for v in s.vars:
                new = fresh_name(v.name, avoid)
                avoid.add(new)
                new_vars.append(BoundVar(new, v.sort))
                ren.append((v.name, Var(new)))
            # later duplicates shadow earlier ones
            mapping = dict(ren)
            body = _subst(go(s.body), mapping, avoid)
            cond = None if s.condition is None else _subst(go(s.condition), mapping, avoid)
            return Bind(s.binder, tuple(new_vars), body, cond)
        return _rebuild(s, go)

    return go(t)


def _rebuild(t: Term, f) -> Term:
    if isinstance(t, Apply):
        return Apply(f(t.head), tuple(f(a) for a in t.args))
    if isinstance(t, Attributed):
        return Attributed(tuple((k, f(v)) for k, v in t.pairs), f(t.base))
    if isinstance(t, ErrorTerm):
        return ErrorTerm(t.symbol, tuple(f(a) for a in t.args))
    if isinstance(t, Bind):
        cond = None if t.condition is None else f(t.condition)
        return Bind(t.binder, t.vars, f(t.body), cond)
    return t


def map_bottom_up(t: Term, f) -> Term:
    """Apply f to every subterm, children first."""
    return f(_rebuild(t, lambda c: map_bottom_up(c, f)))


def normalize_shadowing(vars: Sequence[BoundVar], body: Term, condition: Term | None = None) -> tuple[BoundVar, ...]:
    """Rename earlier duplicates of a bound-variable list fresh; later ones shadow them.

    The shadowed occurrences are unreferenced in the scope, so only the list changes.
    """
    names = [v.name for v in vars]
    if len(set(names)) == len(names):
        return tuple(vars)
    avoid = set(names) | all_names(body)
    if condition is not None:
        avoid |= all_names(condition)
    out = []
    for i, v in enumerate(vars):
        if v.name in names[i + 1:]:
            new = fresh_name(v.name, avoid)
            avoid.add(new)
            out.append(BoundVar(new, v.sort))
        else:
            out.append(v)
    return tuple(out)


def strip_attributions(t: Term, sorts: bool = False) -> Term:
    """Drop Attributed wrappers (and, if sorts=True, bound-variable sorts)."""

    def go(s: Term) -> Term:
        if isinstance(s, Attributed):
            return go(s.base)
        if isinstance(s, Bind) and sorts:
            cond = None if s.condition is None else go(s.condition)
            return Bind(s.binder, tuple(BoundVar(v.name) for v in s.vars), go(s.body), cond)
        return _rebuild(s, go)

    return go(t)


# -- alpha equivalence -----------------------------------------------------


def alpha_equal(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {}, [0])


def _alpha(a: Term, b: Term, ea: dict, eb: dict, counter: list) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        ia, ib = ea.get(a.name), eb.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if isinstance(a, Apply):
        return len(a.args) == len(b.args) and all(
            _alpha(x, y, ea, eb, counter) for x, y in zip((a.head, *a.args), (b.head, *b.args))
        )
    if isinstance(a, Bind):
        if a.binder != b.binder or len(a.vars) != len(b.vars):
            return False
        if (a.condition is None) != (b.condition is None):
            return False
        ea, eb = dict(ea), dict(eb)
        for va, vb in zip(a.vars, b.vars):
            if va.sort != vb.sort:
                return False
            counter[0] += 1
            ea[va.name] = eb[vb.name] = counter[0]
        if a.condition is not None and not _alpha(a.condition, b.condition, ea, eb, counter):
            return False
        return _alpha(a.body, b.body, ea, eb, counter)
    if isinstance(a, Attributed):
        if len(a.pairs) != len(b.pairs):
            return False
        for (ka, va), (kb, vb) in zip(a.pairs, b.pairs):
            if ka != kb or not _alpha(va, vb, ea, eb, counter):
                return False
        return _alpha(a.base, b.base, ea, eb, counter)
    if isinstance(a, ErrorTerm):
        return a.symbol == b.symbol and len(a.args) == len(b.args) and all(
            _alpha(x, y, ea, eb, counter) for x, y in zip(a.args, b.args)
        )
    return a == b


def is_closed(t: Term) -> bool:
    return not free_variables(t)


def finite_float(x: float) -> bool:
    return not (math.isinf(x) or math.isnan(x))
