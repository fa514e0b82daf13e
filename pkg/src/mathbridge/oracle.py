"""Brute-force reference semantics over finite interpretations.

The oracle evaluates terms (OpenMath or SMT-LIB flavoured) by enumeration and
answers optimization scripts by exhaustive search. It evaluates the extension
constructs natively, so it can cross-check their lowerings.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Mapping, Sequence, Union

from . import ast, smtlib
from .ast import Apply, Attributed, Bind, Lit, LitKind, Sort, Sym, Term, Var
from .errors import (
    BadInterpretation, BoundExceeded, EmptyMax, EvaluationError, InfiniteDomain,
    NoGoalBeforeGetValue, NonBooleanQuantifierBody,
)

# -- values ----------------------------------------------------------------


@dataclass(frozen=True)
class Element:
    """Member of an uninterpreted carrier. Identity is (sort, index)."""

    sort: str
    index: int
    label: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.label or f"{self.sort}!val!{self.index}"


@dataclass(frozen=True)
class FunctionValue:
    fn: Callable[[tuple], Any] = field(compare=False)
    name: str = "<lambda>"

    def __call__(self, *args):
        return self.fn(tuple(args))


@dataclass(frozen=True)
class SetValue:
    """Finite set, deduplicated and kept in canonical order."""

    items: tuple = ()

    @classmethod
    def of(cls, values) -> "SetValue":
        seen = {}
        for v in values:
            seen.setdefault(value_key(v), v)
        return cls(tuple(seen[k] for k in sorted(seen)))

    def __contains__(self, v) -> bool:
        k = value_key(v)
        return any(value_key(x) == k for x in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other):
        return isinstance(other, SetValue) and value_key(self) == value_key(other)

    def __hash__(self):
        return hash(value_key(self))


Value = Union[bool, Fraction, Element, SetValue, FunctionValue]


def value_key(v) -> tuple:
    """Total order used for canonical enumeration. Booleans never collide with 0/1."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, (int, Fraction)):
        return (1, Fraction(v))
    if isinstance(v, Element):
        return (2, v.sort, v.index)
    if isinstance(v, SetValue):
        return (3, tuple(value_key(x) for x in v.items))
    raise EvaluationError(f"value {v!r} has no canonical order")


def value_eq(a, b) -> bool:
    return value_key(a) == value_key(b)


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    if isinstance(v, Element):
        return str(v)
    if isinstance(v, SetValue):
        return "{" + ", ".join(format_value(x) for x in v.items) + "}"
    if isinstance(v, FunctionValue):
        return f"<function {v.name}>"
    return repr(v)


# -- interpretations -------------------------------------------------------


@dataclass
class Interpretation:
    carriers: dict[Sort, tuple] = field(default_factory=dict)
    funs: dict[str, Any] = field(default_factory=dict)  # name or cd.name -> table or callable
    var_env: dict[str, Any] = field(default_factory=dict)
    grid: int | None = None
    default_sort: Sort | None = None

    def __post_init__(self):
        for s, c in self.carriers.items():
            if not c:
                raise BadInterpretation(f"carrier of {s} is empty")
            self.carriers[s] = tuple(sorted(SetValue.of(c).items, key=value_key))

    def carrier(self, sort: Sort | None) -> tuple:
        if sort is None:
            if self.default_sort is not None:
                sort = self.default_sort
            elif len(self.carriers) == 1:
                return next(iter(self.carriers.values()))
            else:
                raise InfiniteDomain("unsorted bound variable and no default carrier")
        found = self.carriers.get(sort)
        if found is None:
            raise InfiniteDomain(f"no finite carrier for sort {sort}")
        return found


def _as_function(f, name: str) -> FunctionValue:
    if isinstance(f, FunctionValue):
        return f
    if callable(f):
        return FunctionValue(lambda args: f(*args), name)
    table = dict(f)

    def look(args: tuple):
        if args in table:
            return table[args]
        if len(args) == 1 and args[0] in table:
            return table[args[0]]
        raise EvaluationError(f"{name} is undefined at {', '.join(format_value(a) for a in args)}")

    return FunctionValue(look, name)


# -- builtin semantics -----------------------------------------------------


def _num(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise EvaluationError(f"expected a number, got {format_value(v)}")
    return Fraction(v)


def _bool(v) -> bool:
    if not isinstance(v, bool):
        raise EvaluationError(f"expected a Boolean, got {format_value(v)}")
    return v


def _set(v) -> SetValue:
    if not isinstance(v, SetValue):
        raise EvaluationError(f"expected a set, got {format_value(v)}")
    return v


def _fun(v) -> FunctionValue:
    if not isinstance(v, FunctionValue):
        raise EvaluationError(f"expected a function, got {format_value(v)}")
    return v


def _sum(args):
    return sum((_num(a) for a in args), Fraction(0))


def _prod(args):
    out = Fraction(1)
    for a in args:
        out *= _num(a)
    return out


def _div(args):
    out = _num(args[0])
    for a in args[1:]:
        d = _num(a)
        if d == 0:
            raise EvaluationError("division by zero")
        out /= d
    return out


def _sub(args):
    if len(args) == 1:
        return -_num(args[0])
    out = _num(args[0])
    for a in args[1:]:
        out -= _num(a)
    return out


def _chain(rel):
    def go(args):
        return all(rel(a, b) for a, b in zip(args, args[1:]))
    return go


def _implies(args):
    out = _bool(args[-1])
    for a in reversed(args[:-1]):
        out = (not _bool(a)) or out
    return out


def _distinct(args):
    keys = [value_key(a) for a in args]
    return len(set(keys)) == len(keys)


def _intdiv(args):
    a, b = _num(args[0]), _num(args[1])
    if b == 0:
        raise EvaluationError("division by zero")
    q = a // b if b > 0 else -(a // -b)
    return Fraction(q)


def _mod(args):
    a, b = _num(args[0]), _num(args[1])
    return a - b * _intdiv(args)


def _max(args):
    s = _set(args[0])
    if not s.items:
        raise EmptyMax("maximum of the empty set")
    return max(_num(x) for x in s.items)


def _min(args):
    s = _set(args[0])
    if not s.items:
        raise EmptyMax("minimum of the empty set")
    return min(_num(x) for x in s.items)


def _lt(a, b):
    return _num(a) < _num(b)


def _leq(a, b):
    return _num(a) <= _num(b)


_BOTH: dict[str, Callable] = {
    "plus": _sum, "times": _prod, "minus": _sub, "divide": _div,
    "eq": _chain(value_eq), "lt": _chain(_lt), "leq": _chain(_leq),
    "gt": _chain(lambda a, b: _lt(b, a)), "geq": _chain(lambda a, b: _leq(b, a)),
    "and": lambda args: all(_bool(a) for a in args),
    "or": lambda args: any(_bool(a) for a in args),
    "not": lambda args: not _bool(args[0]),
    "implies": _implies,
    "abs": lambda args: abs(_num(args[0])),
}

_OM_BUILTINS: dict[ast.Symbol, Callable] = {
    ast.PLUS: _BOTH["plus"], ast.TIMES: _BOTH["times"], ast.TIMES2: _BOTH["times"],
    ast.MINUS: _BOTH["minus"], ast.UNARY_MINUS: lambda args: -_num(args[0]),
    ast.DIVIDE: _BOTH["divide"], ast.ABS: _BOTH["abs"],
    ast.EQ: _BOTH["eq"], ast.NEQ: lambda args: not value_eq(args[0], args[1]),
    ast.LT: _BOTH["lt"], ast.LEQ: _BOTH["leq"], ast.GT: _BOTH["gt"], ast.GEQ: _BOTH["geq"],
    ast.AND: _BOTH["and"], ast.OR: _BOTH["or"], ast.NOT: _BOTH["not"], ast.IMPLIES: _implies,
    ast.SET: lambda args: SetValue.of(args),
    ast.SET_IN: lambda args: args[0] in _set(args[1]),
    ast.SET_MAP: lambda args: SetValue.of(_fun(args[0])(x) for x in _set(args[1]).items),
    ast.SUCHTHAT: lambda args: SetValue.of(x for x in _set(args[0]).items if _bool(_fun(args[1])(x))),
    ast.MAX: _max, ast.MIN: _min,
}

_OM_CONSTANTS: dict[ast.Symbol, Any] = {
    ast.TRUE: True, ast.FALSE: False, ast.ONE: Fraction(1), ast.ZERO: Fraction(0),
    ast.EMPTYSET: SetValue(),
}

_SMT_BUILTINS: dict[str, Callable] = {
    "not": _BOTH["not"], "=>": _implies, "and": _BOTH["and"], "or": _BOTH["or"],
    "xor": lambda args: sum(_bool(a) for a in args) % 2 == 1,
    "=": _BOTH["eq"], "distinct": _distinct,
    "+": _sum, "-": _sub, "*": _prod, "/": _div, "div": _intdiv, "mod": _mod,
    "abs": _BOTH["abs"], "<": _BOTH["lt"], "<=": _BOTH["leq"], ">": _BOTH["gt"], ">=": _BOTH["geq"],
}

_QUANTIFIERS = {ast.FORALL, ast.EXISTS, ast.EXISTS_UNIQUE, smtlib.SMT_FORALL, smtlib.SMT_EXISTS}


def _lit_value(t: Lit):
    k, p = t.kind, t.payload
    if k is LitKind.INTEGER:
        return Fraction(p)
    if k is LitKind.FLOAT64:
        if not ast.finite_float(p):
            raise EvaluationError(f"non-finite float {p!r}")
        return Fraction(p)
    if k is LitKind.NUMERAL:
        return Fraction(int(p))
    if k is LitKind.DECIMAL:
        return Fraction(p)
    if k is LitKind.HEXADECIMAL:
        return Fraction(int(p[2:], 16))
    if k is LitKind.BINARY:
        return Fraction(int(p[2:], 2))
    raise EvaluationError(f"{k.value} literals have no numeric or Boolean value")


# -- evaluation ------------------------------------------------------------


class _Evaluator:
    def __init__(self, interp: Interpretation):
        self.i = interp

    def eval(self, t: Term, env: Mapping[str, Any]):
        if isinstance(t, Lit):
            return _lit_value(t)
        if isinstance(t, Var):
            return self.var(t.name, env)
        if isinstance(t, Sym):
            return self.sym(t.symbol)
        if isinstance(t, Attributed):
            return self.eval(t.base, env)
        if isinstance(t, Apply):
            return self.apply(t, env)
        if isinstance(t, Bind):
            return self.bind(t, env)
        raise EvaluationError(f"cannot evaluate {type(t).__name__}")

    def var(self, name: str, env):
        if name in env:
            return env[name]
        if name in self.i.funs:
            f = self.i.funs[name]
            if isinstance(f, Mapping) and () in f:
                return f[()]
            return _as_function(f, name)
        raise EvaluationError(f"unbound variable {name}")

    def sym(self, s: ast.Symbol):
        if s.qualified in self.i.funs:
            f = self.i.funs[s.qualified]
            if isinstance(f, Mapping) and () in f:
                return f[()]
            return _as_function(f, s.qualified)
        if s in _OM_CONSTANTS:
            return _OM_CONSTANTS[s]
        if s == smtlib.SMT_TRUE:
            return True
        if s == smtlib.SMT_FALSE:
            return False
        if s in _OM_BUILTINS:
            return FunctionValue(_OM_BUILTINS[s], s.qualified)
        if s.origin is ast.Origin.SMT_THEORY and s.name in _SMT_BUILTINS:
            return FunctionValue(_SMT_BUILTINS[s.name], s.name)
        raise EvaluationError(f"symbol {s} has no interpretation")

    def apply(self, t: Apply, env):
        h = t.head
        if isinstance(h, Sym):
            s = h.symbol
            if s.origin is ast.Origin.SMT_THEORY and s.name == "ite" and s.qualified not in self.i.funs:
                c = _bool(self.eval(t.args[0], env))
                return self.eval(t.args[1] if c else t.args[2], env)
            if s == ast.INTERVAL_CC and s.qualified not in self.i.funs:
                return self.interval(*(self.eval(a, env) for a in t.args))
            if s == ast.MAX_SF and s.qualified not in self.i.funs:
                st, f = (self.eval(a, env) for a in t.args)
                return _max([SetValue.of(_fun(f)(x) for x in _set(st).items)])
        f = _fun(self.eval(h, env))
        return f(*(self.eval(a, env) for a in t.args))

    def interval(self, a, b) -> SetValue:
        a, b = _num(a), _num(b)
        if self.i.grid is None:
            raise InfiniteDomain("interval_cc needs a grid resolution")
        n = self.i.grid
        if a > b:
            return SetValue()
        return SetValue.of(a + k * (b - a) / n for k in range(n + 1))

    def assignments(self, vars: Sequence[ast.BoundVar], env) -> Iterator[dict]:
        carriers = [self.i.carrier(v.sort) for v in vars]
        for combo in itertools.product(*carriers):
            e = dict(env)
            for v, val in zip(vars, combo):
                e[v.name] = val
            yield e

    def domain(self, t: Bind, env) -> list:
        """Values of the single bound variable satisfying the binder's condition."""
        v = t.vars[0]
        if t.condition is None:
            raise EvaluationError(f"{t.binder} needs a restricting condition")
        try:
            candidates = self.i.carrier(v.sort)
        except InfiniteDomain:
            candidates = self.membership_candidates(v.name, t.condition, env)
        out = []
        for val in candidates:
            e = dict(env)
            e[v.name] = val
            if _bool(self.eval(t.condition, e)):
                out.append(val)
        return out

    def membership_candidates(self, x: str, cond: Term, env):
        conjuncts = list(cond.args) if isinstance(cond, Apply) and cond.head == Sym(ast.AND) else [cond]
        for c in conjuncts:
            if (isinstance(c, Apply) and c.head == Sym(ast.SET_IN) and len(c.args) == 2
                    and c.args[0] == Var(x) and x not in ast.free_variables(c.args[1])):
                return _set(self.eval(c.args[1], env)).items
        raise InfiniteDomain(f"no finite range for {x}")

    def bind(self, t: Bind, env):
        b = t.binder
        if b in _QUANTIFIERS:
            count = 0
            for e in self.assignments(t.vars, env):
                if t.condition is not None and not _bool(self.eval(t.condition, e)):
                    continue
                r = self.eval(t.body, e)
                if not isinstance(r, bool):
                    raise NonBooleanQuantifierBody(f"{b} body evaluated to {format_value(r)}")
                if b in (ast.FORALL, smtlib.SMT_FORALL) and not r:
                    return False
                if b in (ast.EXISTS, smtlib.SMT_EXISTS) and r:
                    return True
                count += r
                if b == ast.EXISTS_UNIQUE and count > 1:
                    return False
            if b == ast.EXISTS_UNIQUE:
                return count == 1
            return b in (ast.FORALL, smtlib.SMT_FORALL)
        if b == ast.LAMBDA:
            names = [v.name for v in t.vars]

            def call(args, env=dict(env)):
                if len(args) != len(names):
                    raise EvaluationError(f"lambda expects {len(names)} arguments, got {len(args)}")
                e = dict(env)
                e.update(zip(names, args))
                return self.eval(t.body, e)

            return FunctionValue(call)
        if b in (ast.MAX_BINDER, ast.ARGMAX, ast.ARGMAXONE):
            if len(t.vars) != 1:
                raise EvaluationError(f"{b} binds one variable")
            name = t.vars[0].name
            scored = []
            for val in self.domain(t, env):
                e = dict(env)
                e[name] = val
                scored.append((val, _num(self.eval(t.body, e))))
            if not scored:
                raise EmptyMax(f"{b} over an empty domain")
            best = max(s for _, s in scored)
            if b == ast.MAX_BINDER:
                return best
            winners = SetValue.of(v for v, s in scored if s == best)
            return winners if b == ast.ARGMAX else winners.items[0]
        raise EvaluationError(f"binder {b} has no interpretation")


def eval_term(t: Term, interp: Interpretation | None = None):
    """Evaluate t in the given finite interpretation."""
    interp = interp or Interpretation()
    return _Evaluator(interp).eval(t, dict(interp.var_env))


# -- predicate enumeration -------------------------------------------------


def enumerate_predicates(carrier: Sequence, bound: int = 4) -> Iterator[dict]:
    """Every Boolean predicate over carrier, as {value: bool}; 2**n of them."""
    carrier = list(carrier)
    if len(carrier) > bound:
        raise BoundExceeded(f"carrier of size {len(carrier)} exceeds bound {bound}")
    for bits in itertools.product((False, True), repeat=len(carrier)):
        yield dict(zip(carrier, bits))


# -- scripts ---------------------------------------------------------------


DEFAULT_UNINTERPRETED_SIZE = 2


@dataclass(frozen=True)
class _Unknown:
    name: str
    arity: int
    domain: tuple  # candidate values (constants) or candidate tables (functions)


def _tables(arg_carriers: list[tuple], results: tuple, limit: int) -> list[dict]:
    points = list(itertools.product(*arg_carriers))
    total = len(results) ** len(points)
    if total > limit:
        raise BoundExceeded(f"{total} candidate function tables exceed the search bound {limit}")
    return [dict(zip(points, vals)) for vals in itertools.product(results, repeat=len(points))]


def eval_script(script: smtlib.Script, interp: Interpretation | None = None,
                max_assignments: int = 1_000_000) -> smtlib.SolverResult:
    """Answer a script by exhaustive search.

    Goals are optimized lexicographically in command order. Among equally good
    assignments the first one met in declaration and carrier order wins.
    """
    interp = interp or Interpretation()
    carriers = dict(interp.carriers)
    funs = dict(interp.funs)
    unknowns: list[_Unknown] = []
    asserts: list[Term] = []
    goals: list = []
    result: smtlib.SolverResult | None = None
    best: dict | None = None
    model: list = []
    checked = False

    def carrier(s: Sort) -> tuple:
        if s == ast.BOOL:
            return (False, True)
        if s not in carriers:
            raise InfiniteDomain(f"no finite carrier for sort {s}")
        return carriers[s]

    for c in script.commands:
        if isinstance(c, smtlib.DeclareSort):
            if Sort(c.name) not in carriers:
                carriers[Sort(c.name)] = tuple(
                    Element(c.name, i, f"{c.name}!val!{i}") for i in range(DEFAULT_UNINTERPRETED_SIZE))
        elif isinstance(c, smtlib.DeclareFun):
            if c.name in interp.var_env or c.name in funs:
                continue
            if not c.arg_sorts:
                unknowns.append(_Unknown(c.name, 0, carrier(c.result)))
            else:
                tabs = _tables([carrier(s) for s in c.arg_sorts], carrier(c.result), max_assignments)
                unknowns.append(_Unknown(c.name, len(c.arg_sorts), tuple(tabs)))
        elif isinstance(c, smtlib.DefineFun):
            funs[c.name] = _defined(c, interp, funs)
        elif isinstance(c, smtlib.Assert):
            asserts.append(c.term)
        elif isinstance(c, (smtlib.Maximize, smtlib.Minimize)):
            goals.append(c)
        elif isinstance(c, smtlib.CheckSat):
            checked = True
            model = []
            best = _search(unknowns, asserts, goals, interp, funs, carriers, max_assignments)
            result = smtlib.SolverResult(smtlib.Status.SAT if best is not None else smtlib.Status.UNSAT)
        elif isinstance(c, smtlib.GetValue):
            if not checked:
                raise NoGoalBeforeGetValue("get-value before check-sat")
            if best is None:
                continue
            ev = _Evaluator(Interpretation(carriers, best["funs"], {}, interp.grid, interp.default_sort))
            for term in c.terms:
                if any(term == k for k, _ in model):
                    continue
                model.append((term, _model_value(ev.eval(term, best["env"]))))
    if result is None:
        return smtlib.SolverResult(smtlib.Status.UNKNOWN)
    if result.status is not smtlib.Status.SAT:
        return result
    if not model:
        model = [(Var(u.name), _model_value(best["env"][u.name])) for u in unknowns if u.arity == 0]
    return smtlib.SolverResult(smtlib.Status.SAT, tuple(model))


def _model_value(v) -> Term:
    if isinstance(v, Element):
        return smtlib.value_term(f"{v.sort}!val!{v.index}")
    if isinstance(v, (bool, int, Fraction)):
        return smtlib.value_term(v)
    raise EvaluationError(f"cannot report {format_value(v)} as a model value")


def _defined(c: smtlib.DefineFun, interp: Interpretation, funs: dict):
    names = [p.name for p in c.params]

    def call(*args):
        ev = _Evaluator(Interpretation(dict(interp.carriers), funs, {}, interp.grid, interp.default_sort))
        env = dict(interp.var_env)
        env.update(zip(names, args))
        return ev.eval(c.body, env)

    if not names:
        return _Lazy(call)
    return FunctionValue(lambda args: call(*args), c.name)


class _Lazy(dict):
    """Nullary defined function: looked up as a constant on each use."""

    def __init__(self, thunk):
        super().__init__()
        self.thunk = thunk

    def __contains__(self, key):
        return key == ()

    def __getitem__(self, key):
        if key != ():
            raise KeyError(key)
        return self.thunk()


def _search(unknowns, asserts, goals, interp, funs, carriers, limit) -> dict | None:
    total = 1
    for u in unknowns:
        total *= len(u.domain)
    if total > limit:
        raise BoundExceeded(f"{total} assignments exceed the search bound {limit}")
    best = None
    best_score = None
    for combo in itertools.product(*(u.domain for u in unknowns)):
        env = dict(interp.var_env)
        fs = dict(funs)
        for u, val in zip(unknowns, combo):
            if u.arity == 0:
                env[u.name] = val
            else:
                fs[u.name] = val
        ev = _Evaluator(Interpretation(carriers, fs, {}, interp.grid, interp.default_sort))
        if not all(_bool(ev.eval(a, env)) for a in asserts):
            continue
        score = tuple(
            _num(ev.eval(g.term, env)) * (1 if isinstance(g, smtlib.Maximize) else -1) for g in goals)
        if best is None or score > best_score:
            best, best_score = {"env": env, "funs": fs}, score
            if not goals:
                break
    return best


# -- interpretation files --------------------------------------------------

_RATIONAL = re.compile(r"^-?\d+(?:/\d+)?$")
_DECIMAL = re.compile(r"^-?\d+\.\d+$")
_IDENT = re.compile(r"^[A-Za-z_][\w.!]*$")


def _split_commas(s: str) -> list[str]:
    return [p.strip() for p in s.split(",") if p.strip()]


def load_interpretation(text: str) -> Interpretation:
    """Parse the line-oriented interpretation format.

    ::

        # comment
        sort S = {0, 1/2, 1}
        sort D = {a, b}            # identifiers make uninterpreted elements
        sort Real = grid(0, 1, 4)  # {0, 1/4, ..., 1}
        grid = 4
        default = S
        var x = 1/2
        fun P(a) = true
        fun arith1.plus(0, 1) = 1
    """
    carriers: dict[Sort, tuple] = {}
    elements: dict[str, Element] = {}
    funs: dict[str, dict] = {}
    env: dict[str, Any] = {}
    grid = None
    default = None

    def value(tok: str, n: int):
        tok = tok.strip()
        if tok in ("true", "false"):
            return tok == "true"
        if _RATIONAL.match(tok):
            return Fraction(tok)
        if _DECIMAL.match(tok):
            return Fraction(tok)
        if tok in elements:
            return elements[tok]
        raise BadInterpretation(f"unknown value {tok!r}", position=(n, 1))

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        lhs, eq, rhs = rest.partition("=") if word in ("sort", "var", "fun") else line.partition("=")
        if not eq:
            raise BadInterpretation(f"expected '=' in {raw.strip()!r}", position=(n, 1))
        lhs, rhs = lhs.strip(), rhs.strip()
        if word == "sort":
            name = lhs
            m = re.fullmatch(r"grid\((.*)\)", rhs)
            if m:
                parts = _split_commas(m.group(1))
                if len(parts) != 3:
                    raise BadInterpretation("grid(a, b, n) takes three arguments", position=(n, 1))
                a, b = value(parts[0], n), value(parts[1], n)
                k = int(parts[2])
                if k <= 0:
                    raise BadInterpretation("grid resolution must be positive", position=(n, 1))
                carriers[Sort(name)] = tuple(a + i * (b - a) / k for i in range(k + 1))
            elif rhs.startswith("{") and rhs.endswith("}"):
                vals = []
                for i, tok in enumerate(_split_commas(rhs[1:-1])):
                    if _RATIONAL.match(tok) or _DECIMAL.match(tok) or tok in ("true", "false"):
                        vals.append(value(tok, n))
                    elif _IDENT.match(tok):
                        el = Element(name, i, tok)
                        if tok in elements:
                            raise BadInterpretation(f"element {tok} defined twice", position=(n, 1))
                        elements[tok] = el
                        vals.append(el)
                    else:
                        raise BadInterpretation(f"bad carrier element {tok!r}", position=(n, 1))
                if not vals:
                    raise BadInterpretation(f"carrier of {name} is empty", position=(n, 1))
                carriers[Sort(name)] = tuple(vals)
            else:
                raise BadInterpretation("carrier must be {...} or grid(a, b, n)", position=(n, 1))
        elif word == "var":
            env[lhs] = value(rhs, n)
        elif word == "fun":
            m = re.fullmatch(r"([^\s(]+)\s*(?:\((.*)\))?", lhs)
            if not m:
                raise BadInterpretation(f"bad function entry {lhs!r}", position=(n, 1))
            args = tuple(value(a, n) for a in _split_commas(m.group(2) or ""))
            funs.setdefault(m.group(1), {})[args] = value(rhs, n)
        elif lhs == "grid":
            try:
                grid = int(rhs)
            except ValueError:
                raise BadInterpretation(f"bad grid {rhs!r}", position=(n, 1)) from None
        elif lhs == "default":
            default = Sort(rhs)
        else:
            raise BadInterpretation(f"unknown directive {raw.strip()!r}", position=(n, 1))
    if default is not None and default not in carriers:
        raise BadInterpretation(f"default sort {default} has no carrier")
    return Interpretation(carriers, funs, env, grid, default)
