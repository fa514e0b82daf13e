"""Proposed constructors and their lowering to standard OpenMath / SMT-LIB.

* ``quant2.exists_unique`` desugars through one of two classical encodings:
  the alternation form ``∃x (P(x) ∧ ∀y (P(y) ⇒ x = y))`` or the two-quantifier
  form ``(∃x P(x)) ∧ ∀y ∀z (P(y) ∧ P(z) ⇒ y = z)``.
* ``minmax2.max`` (binder with a restricting predicate) and
  ``minmax2.max_sf`` (set plus function) lower to ``minmax1.max(set1.map(λ, S))``.
* ``minmax2.argmax`` lowers to a ``set1.suchthat`` comprehension.
* ``minmax2.argmaxone`` has no term-level meaning; it becomes an
  optimization script (maximize, check-sat, get-value).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from . import ast, smtlib
from .ast import Apply, Bind, BoundVar, Sort, Sym, Term, Var
from .errors import (
    ConditionMissing, ExtensionError, MultiVarNotSupported, NotAMaxForm, NotArgmaxForm,
    NotExistsUnique, SortError, TranslationError, UnsortedGoal,
)


class ExistsUnique(enum.Enum):
    ALTERNATION = "eq1"
    TWO_QUANTIFIER = "eq2"


class MaxForm(enum.Enum):
    SET_FUNCTION = "sf"
    RESTRICTED_BINDER = "binder"


@dataclass(frozen=True)
class DesugarStrategy:
    exists_unique: ExistsUnique = ExistsUnique.ALTERNATION
    max_form: MaxForm = MaxForm.RESTRICTED_BINDER


class Direction(enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


@dataclass(frozen=True)
class OptimizationGoal:
    direction: Direction
    objective: Term
    witness_vars: tuple[tuple[str, Sort], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "witness_vars", tuple((n, s) for n, s in self.witness_vars))


def _app(sym: ast.Symbol, *args: Term) -> Apply:
    return Apply(Sym(sym), args)


# -- exists-unique ---------------------------------------------------------


def desugar_exists_unique(b: Term, strat: DesugarStrategy = DesugarStrategy()) -> Term:
    if not isinstance(b, Bind) or b.binder != ast.EXISTS_UNIQUE:
        raise NotExistsUnique("expected a quant2.exists_unique binding")
    if len(b.vars) != 1:
        raise MultiVarNotSupported("unique existence is only defined for one bound variable")
    if b.condition is not None:
        raise NotExistsUnique("exists_unique takes no restricting condition")
    x = b.vars[0]
    p = b.body
    avoid = ast.all_names(b)
    y = ast.fresh_name(x.name, avoid)
    p_y = ast.substitute_simultaneous(p, [(x.name, Var(y))])
    if strat.exists_unique is ExistsUnique.ALTERNATION:
        unique = Bind(ast.FORALL, (BoundVar(y, x.sort),), _app(ast.IMPLIES, p_y, _app(ast.EQ, Var(x.name), Var(y))))
        return Bind(ast.EXISTS, (x,), _app(ast.AND, p, unique))
    z = ast.fresh_name(x.name, avoid | {y})
    p_z = ast.substitute_simultaneous(p, [(x.name, Var(z))])
    inner = Bind(ast.FORALL, (BoundVar(z, x.sort),),
                 _app(ast.IMPLIES, _app(ast.AND, p_y, p_z), _app(ast.EQ, Var(y), Var(z))))
    at_most_one = Bind(ast.FORALL, (BoundVar(y, x.sort),), inner)
    return _app(ast.AND, Bind(ast.EXISTS, (x,), p), at_most_one)


# -- max / argmax ----------------------------------------------------------


def _membership(x: str, cond: Term) -> tuple[Term, list[Term]]:
    """Split a condition into (base set S, remaining conjuncts) where x ∈ S is one conjunct."""
    conjuncts = list(cond.args) if isinstance(cond, Apply) and cond.head == Sym(ast.AND) else [cond]
    for i, c in enumerate(conjuncts):
        if (isinstance(c, Apply) and c.head == Sym(ast.SET_IN) and len(c.args) == 2
                and c.args[0] == Var(x) and x not in ast.free_variables(c.args[1])):
            return c.args[1], conjuncts[:i] + conjuncts[i + 1:]
    raise NotAMaxForm(f"the condition must bound {x} by set membership (set1.in)")


def _domain(v: BoundVar, cond: Term) -> Term:
    base, rest = _membership(v.name, cond)
    if not rest:
        return base
    pred = rest[0] if len(rest) == 1 else _app(ast.AND, *rest)
    return _app(ast.SUCHTHAT, base, Bind(ast.LAMBDA, (v,), pred))


def lower_max(t: Term) -> Term:
    if isinstance(t, Apply) and t.head == Sym(ast.MAX_SF):
        if len(t.args) != 2:
            raise NotAMaxForm("minmax2.max_sf takes a set and a function")
        s, f = t.args
        return _app(ast.MAX, _app(ast.SET_MAP, f, s))
    if isinstance(t, Bind) and t.binder == ast.MAX_BINDER:
        if t.condition is None:
            raise ConditionMissing("binder-form max needs a restricting predicate")
        if len(t.vars) != 1:
            raise NotAMaxForm("binder-form max binds exactly one variable")
        v = t.vars[0]
        lam = Bind(ast.LAMBDA, (v,), t.body)
        return _app(ast.MAX, _app(ast.SET_MAP, lam, _domain(v, t.condition)))
    raise NotAMaxForm("expected minmax2.max or minmax2.max_sf")


def lift_max(t: Term, form: MaxForm) -> Term:
    """Inverse of lower_max: rewrite the max(map(λ, S)) idiom into an extension form."""
    ok = (isinstance(t, Apply) and t.head == Sym(ast.MAX) and len(t.args) == 1
          and isinstance(t.args[0], Apply) and t.args[0].head == Sym(ast.SET_MAP) and len(t.args[0].args) == 2)
    if not ok:
        raise NotAMaxForm("expected minmax1.max(set1.map(f, S))")
    lam, s = t.args[0].args
    if form is MaxForm.SET_FUNCTION:
        return _app(ast.MAX_SF, s, lam)
    if not (isinstance(lam, Bind) and lam.binder == ast.LAMBDA and len(lam.vars) == 1):
        raise NotAMaxForm("binder form needs a one-variable lambda")
    v = lam.vars[0]
    body = lam.body
    if v.name in ast.free_variables(s):
        new = ast.fresh_name(v.name, ast.all_names(t))
        body = ast.substitute_simultaneous(body, [(v.name, Var(new))])
        v = BoundVar(new, v.sort)
    return Bind(ast.MAX_BINDER, (v,), body, _app(ast.SET_IN, Var(v.name), s))


def lower_argmax(t: Term) -> Term:
    if not (isinstance(t, Bind) and t.binder == ast.ARGMAX):
        raise NotArgmaxForm("expected a minmax2.argmax binding")
    if len(t.vars) != 1 or t.condition is None:
        raise NotArgmaxForm("argmax binds one variable under a membership condition")
    v = t.vars[0]
    try:
        s = _domain(v, t.condition)
    except NotAMaxForm as exc:
        raise NotArgmaxForm(str(exc)) from None
    y = ast.fresh_name(v.name, ast.all_names(t))
    f_y = ast.substitute_simultaneous(t.body, [(v.name, Var(y))])
    best = _app(ast.MAX, _app(ast.SET_MAP, Bind(ast.LAMBDA, (BoundVar(y, v.sort),), f_y), s))
    return _app(ast.SUCHTHAT, s, Bind(ast.LAMBDA, (v,), _app(ast.EQ, t.body, best)))


def desugar(t: Term, strat: DesugarStrategy = DesugarStrategy(), keep_argmaxone: bool = False) -> Term:
    """Lower every extension construct in t, innermost first."""

    def step(s: Term) -> Term:
        if isinstance(s, Bind):
            if s.binder == ast.EXISTS_UNIQUE:
                return desugar_exists_unique(s, strat)
            if s.binder == ast.MAX_BINDER:
                return lower_max(s)
            if s.binder == ast.ARGMAX:
                return lower_argmax(s)
            if s.binder == ast.ARGMAXONE and not keep_argmaxone:
                raise ExtensionError("argmaxone has no term-level lowering; build an optimization script")
        if isinstance(s, Apply) and s.head == Sym(ast.MAX_SF):
            return lower_max(s)
        return s

    return ast.map_bottom_up(t, step)


def resugar_max(t: Term, strat: DesugarStrategy = DesugarStrategy()) -> Term:
    """Rewrite every max(map(λ, S)) idiom into the strategy's max form."""

    def step(s: Term) -> Term:
        try:
            return lift_max(s, strat.max_form)
        except NotAMaxForm:
            return s

    return ast.map_bottom_up(t, step)


def extension_symbols(t: Term) -> set[ast.Symbol]:
    return {s for s in ast.symbols(t) if s.origin is ast.Origin.EXTENSION}


# -- argmaxone / optimization scripts ---------------------------------------


def argmaxone_goal(t: Term, default_sort: Sort = ast.REAL) -> tuple[OptimizationGoal, list[Term]]:
    """Split ``argmaxone[x | cond] -> f`` into a maximize goal and its constraints.

    Interval membership becomes a pair of bounds; other conjuncts are kept as is.
    """
    if not (isinstance(t, Bind) and t.binder == ast.ARGMAXONE and len(t.vars) == 1):
        raise NotArgmaxForm("expected a one-variable minmax2.argmaxone binding")
    v = t.vars[0]
    sort = v.sort or default_sort
    constraints: list[Term] = []
    if t.condition is not None:
        cond = t.condition
        conjuncts = list(cond.args) if isinstance(cond, Apply) and cond.head == Sym(ast.AND) else [cond]
        for c in conjuncts:
            if (isinstance(c, Apply) and c.head == Sym(ast.SET_IN) and c.args[0] == Var(v.name)
                    and isinstance(c.args[1], Apply) and c.args[1].head == Sym(ast.INTERVAL_CC)
                    and len(c.args[1].args) == 2):
                lo, hi = c.args[1].args
                constraints += [_app(ast.LEQ, lo, Var(v.name)), _app(ast.LEQ, Var(v.name), hi)]
            else:
                constraints.append(c)
    return OptimizationGoal(Direction.MAXIMIZE, t.body, ((v.name, sort),)), constraints


def _to_smt(t: Term, var_sorts: dict[str, Sort]) -> Term:
    if not any(s.origin is ast.Origin.OPENMATH_CD for s in ast.symbols(t)):
        return t
    from . import translate
    from .sorts import SignatureTable

    return translate.om_to_smt(t, translate.SymbolMap.default(), SignatureTable(var_sorts=dict(var_sorts)))


def lower_argmaxone_to_script(
    goal: OptimizationGoal | Sequence[OptimizationGoal],
    constraints: Sequence[Term] = (),
) -> smtlib.Script:
    """Declarations, asserts, one maximize/minimize per goal, check-sat, get-value."""
    from .sorts import SignatureTable, check_sorts

    goals = [goal] if isinstance(goal, OptimizationGoal) else list(goal)
    if not goals:
        raise UnsortedGoal("no optimization goal given")
    witnesses: dict[str, Sort] = {}
    for g in goals:
        for name, sort in g.witness_vars:
            if witnesses.setdefault(name, sort) != sort:
                raise UnsortedGoal(f"witness {name} declared with two sorts")
    try:
        objectives = [_to_smt(g.objective, witnesses) for g in goals]
        cons = [_to_smt(c, witnesses) for c in constraints]
    except TranslationError as exc:
        raise UnsortedGoal(f"cannot express goal in SMT-LIB: {exc}") from None
    mentioned: set[str] = set()
    for t in objectives + cons:
        mentioned |= ast.free_variables(t)
    for name in witnesses:
        if name not in mentioned:
            raise UnsortedGoal(f"witness {name} occurs in neither the objective nor the constraints")
    table = SignatureTable(var_sorts=dict(witnesses))
    try:
        for obj in objectives:
            s = check_sorts(obj, table)
            if s not in (ast.INT, ast.REAL):
                raise UnsortedGoal(f"objective has sort {s}, expected Int or Real")
        for c in cons:
            s = check_sorts(c, table)
            if s != ast.BOOL:
                raise UnsortedGoal(f"constraint has sort {s}, expected Bool")
    except SortError as exc:
        raise UnsortedGoal(f"goal does not sort-check: {exc}") from None
    cmds: list[smtlib.Command] = [smtlib.DeclareFun(n, (), s) for n, s in witnesses.items()]
    cmds += [smtlib.Assert(c) for c in cons]
    for g, obj in zip(goals, objectives):
        cmds.append(smtlib.Maximize(obj) if g.direction is Direction.MAXIMIZE else smtlib.Minimize(obj))
    cmds.append(smtlib.CheckSat())
    cmds.append(smtlib.GetValue(tuple(Var(n) for n in witnesses)))
    return smtlib.Script(tuple(cmds))
