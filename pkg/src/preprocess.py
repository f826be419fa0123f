"""
Preprocessing pipeline: from a parsed Problem to a rectified, skolemised
negation normal form over interned integer symbols.

    combine               axioms => conjecture, with the # marker
    intern_symbols        names -> integers
    add_equality_axioms
    expand_connectives    =>, <=> removed
    to_nnf                negated, negations on atoms, $true/$false folded
    miniscope             quantifier scopes made minimal (run on the NNF)
    reorder               subformulas sorted by path count
    rectify               every binder gets its own integer variable
    skolemize_consistent

Miniscoping runs after NNF conversion so that it only has to handle the
∧/∨ fragment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from math import prod
from typing import Iterator

from .formula import (
    BOTTOM,
    EQUALITY,
    MARKER,
    TOP,
    And,
    Atom,
    Bottom,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    atoms,
    conj,
    disj,
    free_vars,
)
from .symbols import FUNC, PRED, SymTable
from .terms import App, Term, Var
from .tptp import Problem


@dataclass
class Prepared:
    """Output of the pipeline"""
    formula: Formula
    syms: SymTable
    marker: int | None
    skolem_terms: list = field(default_factory=list)
    pre_skolem: Formula | None = None


# ---------------------------------------------------------------------------
# combining
# ---------------------------------------------------------------------------

def combine(problem: Problem) -> Formula:
    """(A1 ∧ … ∧ An ∧ #) → (C ∧ #), or C alone when there are no axioms"""
    conjecture = problem.conjecture.formula if problem.conjecture else BOTTOM
    if not problem.axioms:
        return conjecture
    marker = Atom(MARKER)
    premise = And(tuple(s.formula for s in problem.axioms)) if len(problem.axioms) > 1 \
        else problem.axioms[0].formula
    return Implies(And((premise, marker)), And((conjecture, marker)))


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

def _intern_term(t: Term, syms: SymTable) -> Term:
    if isinstance(t, Var):
        return t
    return App(syms.func(t.functor, len(t.args)), tuple(_intern_term(a, syms) for a in t.args))


def intern_symbols(f: Formula, syms: SymTable) -> Formula:
    """Replace predicate and function names by interned integers"""
    if isinstance(f, Atom):
        return Atom(syms.pred(f.pred, len(f.args)), tuple(_intern_term(a, syms) for a in f.args))
    if isinstance(f, Not):
        return Not(intern_symbols(f.body, syms))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(intern_symbols(c, syms) for c in f.items))
    if isinstance(f, (Implies, Iff)):
        return type(f)(intern_symbols(f.left, syms), intern_symbols(f.right, syms))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, intern_symbols(f.body, syms))
    return f


# ---------------------------------------------------------------------------
# equality
# ---------------------------------------------------------------------------

def _curried(premises: list[Formula], conclusion: Formula) -> Formula:
    for p in reversed(premises):
        conclusion = Implies(p, conclusion)
    return conclusion


def equality_axioms(f: Formula, syms: SymTable) -> list[Formula]:
    """Equality axioms for the symbols occurring in f, or [] without equality"""
    eq = syms.lookup(PRED, EQUALITY, 2)
    if eq is None or not any(a.pred == eq for a in atoms(f)):
        return []

    def equal(a: Term, b: Term) -> Atom:
        return Atom(eq, (a, b))

    x, y, z = Var("X"), Var("Y"), Var("Z")
    axioms: list[Formula] = [
        Forall(("X",), equal(x, x)),
        Forall(("X", "Y"), Implies(equal(x, y), equal(y, x))),
        Forall(("X", "Y", "Z"), Implies(equal(x, y), Implies(equal(y, z), equal(x, z)))),
    ]

    def pairs(n: int) -> tuple[list[str], list[str], list[Formula]]:
        xs = [f"X{i}" for i in range(1, n + 1)]
        ys = [f"Y{i}" for i in range(1, n + 1)]
        return xs, ys, [equal(Var(a), Var(b)) for a, b in zip(xs, ys)]

    for sym in syms.symbols(FUNC):
        n = syms.arity(sym)
        if n == 0:
            continue
        xs, ys, prem = pairs(n)
        lhs = App(sym, tuple(Var(v) for v in xs))
        rhs = App(sym, tuple(Var(v) for v in ys))
        axioms.append(Forall(tuple(xs + ys), _curried(prem, equal(lhs, rhs))))

    for sym in syms.symbols(PRED):
        n = syms.arity(sym)
        if n == 0 or sym == eq:
            continue
        xs, ys, prem = pairs(n)
        before = Atom(sym, tuple(Var(v) for v in xs))
        after = Atom(sym, tuple(Var(v) for v in ys))
        axioms.append(Forall(tuple(xs + ys), _curried(prem + [before], after)))
    return axioms


def add_equality_axioms(f: Formula, syms: SymTable) -> Formula:
    """Conjoin equality axioms to the axiom part of f"""
    axioms = equality_axioms(f, syms)
    if not axioms:
        return f
    if isinstance(f, Implies):
        left = f.left.items if isinstance(f.left, And) else (f.left,)
        return Implies(And(tuple(axioms) + left), f.right)
    return Implies(And(tuple(axioms)) if len(axioms) > 1 else axioms[0], f)


# ---------------------------------------------------------------------------
# connectives
# ---------------------------------------------------------------------------

def expand_connectives(f: Formula) -> Formula:
    """Replace A→B by ¬A∨B and A↔B by (¬A∨B)∧(A∨¬B)"""
    if isinstance(f, Implies):
        return Or((Not(expand_connectives(f.left)), expand_connectives(f.right)))
    if isinstance(f, Iff):
        a, b = expand_connectives(f.left), expand_connectives(f.right)
        return And((Or((Not(a), b)), Or((a, Not(b)))))
    if isinstance(f, Not):
        return Not(expand_connectives(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(expand_connectives(c) for c in f.items))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, expand_connectives(f.body))
    return f


# ---------------------------------------------------------------------------
# negation normal form
# ---------------------------------------------------------------------------

def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form of f (or of ¬f), folding $true/$false away"""
    if isinstance(f, Not):
        return to_nnf(f.body, not negate)
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Top):
        return BOTTOM if negate else TOP
    if isinstance(f, Bottom):
        return TOP if negate else BOTTOM
    if isinstance(f, (Implies, Iff)):
        return to_nnf(expand_connectives(f), negate)
    if isinstance(f, (Forall, Exists)):
        body = to_nnf(f.body, negate)
        if isinstance(body, (Top, Bottom)):
            return body
        flip = (f.__class__ is Forall) == negate
        return (Exists if flip else Forall)(f.vars, body)

    is_and = isinstance(f, And) != negate
    items = [to_nnf(c, negate) for c in f.items]
    unit, zero = (Top, Bottom) if is_and else (Bottom, Top)
    kept: list[Formula] = []
    for item in items:
        if isinstance(item, zero):
            return item
        if not isinstance(item, unit):
            kept.append(item)
    return conj(*kept) if is_and else disj(*kept)


# ---------------------------------------------------------------------------
# miniscoping
# ---------------------------------------------------------------------------

def _join(node: And | Or, items) -> Formula:
    return conj(*items) if isinstance(node, And) else disj(*items)


def _push(quant: type, var, body: Formula) -> Formula:
    if var not in free_vars(body):
        return body
    if isinstance(body, And) and quant is Forall or isinstance(body, Or) and quant is Exists:
        return _join(body, [_push(quant, var, c) for c in body.items])
    if isinstance(body, (And, Or)):
        inside = [c for c in body.items if var in free_vars(c)]
        if len(inside) < len(body.items):
            scoped = _push(quant, var, inside[0]) if len(inside) == 1 \
                else quant((var,), _join(body, inside))
            return _join(body, _reinsert(body.items, inside, scoped))
    return quant((var,), body)


def _reinsert(items: tuple, inside: list, scoped: Formula) -> list:
    """Keep source order: the scoped part sits where its first member was"""
    out: list = []
    placed = False
    for item in items:
        if any(item is i for i in inside):
            if not placed:
                out.append(scoped)
                placed = True
        else:
            out.append(item)
    return out


def miniscope(f: Formula) -> Formula:
    """Push quantifiers inward on an NNF formula"""
    if isinstance(f, (Forall, Exists)):
        body = miniscope(f.body)
        for var in reversed(f.vars):
            body = _push(type(f), var, body)
        return body
    if isinstance(f, (And, Or)):
        return _join(f, [miniscope(c) for c in f.items])
    return f


# ---------------------------------------------------------------------------
# reordering
# ---------------------------------------------------------------------------

def path_count(f: Formula) -> int:
    """paths(literal)=1, paths(∧)=Σ, paths(∨)=Π; quantifiers are transparent"""
    if isinstance(f, And):
        return sum(path_count(c) for c in f.items)
    if isinstance(f, Or):
        return prod(path_count(c) for c in f.items)
    if isinstance(f, (Forall, Exists)):
        return path_count(f.body)
    return 1


def reorder(f: Formula) -> Formula:
    """Stable ascending sort of ∧/∨ children by path count"""
    if isinstance(f, (And, Or)):
        items = [reorder(c) for c in f.items]
        return type(f)(tuple(sorted(items, key=path_count)))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, reorder(f.body))
    return f


# ---------------------------------------------------------------------------
# rectification
# ---------------------------------------------------------------------------

def _rename(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return Var(env[t.name]) if t.name in env else t
    if not t.args:
        return t
    return App(t.functor, tuple(_rename(a, env) for a in t.args))


def rectify(f: Formula, counter: Iterator[int] | None = None) -> Formula:
    """Give every binder a fresh integer variable; split multi-variable binders"""
    counter = counter if counter is not None else count(1)

    def walk(node: Formula, env: dict) -> Formula:
        if isinstance(node, Atom):
            if not node.args:
                return node
            return Atom(node.pred, tuple(_rename(a, env) for a in node.args))
        if isinstance(node, Not):
            return Not(walk(node.body, env))
        if isinstance(node, (And, Or)):
            return type(node)(tuple(walk(c, env) for c in node.items))
        if isinstance(node, (Forall, Exists)):
            fresh = [next(counter) for _ in node.vars]
            inner = {**env, **dict(zip(node.vars, fresh))}
            body = walk(node.body, inner)
            for v in reversed(fresh):
                body = type(node)((v,), body)
            return body
        if isinstance(node, (Implies, Iff)):
            return type(node)(walk(node.left, env), walk(node.right, env))
        return node

    return walk(f, {})


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def normalize(f: Formula) -> Formula:
    """Steps 5 to 9: expand, negate into NNF, miniscope, reorder, rectify"""
    nnf = to_nnf(expand_connectives(f), negate=True)
    return rectify(reorder(miniscope(nnf)))


def preprocess(
    problem: Problem,
    eq_axioms: bool = True,
    skolem_size_check: bool = True,
) -> Prepared:
    """Run the whole pipeline on a parsed problem"""
    from .skolem import skolemize_consistent

    syms = SymTable()
    combined = intern_symbols(combine(problem), syms)
    if eq_axioms:
        combined = add_equality_axioms(combined, syms)
    nnf = normalize(combined)
    result = skolemize_consistent(nnf, syms, size_check=skolem_size_check)
    return Prepared(
        formula=result.formula,
        syms=syms,
        marker=syms.lookup(PRED, MARKER, 0),
        skolem_terms=result.terms,
        pre_skolem=nnf,
    )
