"""
Formula trees shared by the parser and the preprocessing pipeline.

Nodes are immutable; And/Or are n-ary and kept flat by the constructors in
this module (`conj`, `disj`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .terms import App, Term, Var, rename_term, term_vars, term_size


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str | int
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    vars: tuple[str | int, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    vars: tuple[str | int, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


Formula = Union[Atom, Not, And, Or, Implies, Iff, Forall, Exists, Top, Bottom]

TOP = Top()
BOTTOM = Bottom()
EQUALITY = "="
MARKER = "#"


def conj(*items: Formula) -> Formula:
    flat: list[Formula] = []
    for item in items:
        flat.extend(item.items if isinstance(item, And) else (item,))
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat)) if flat else TOP


def disj(*items: Formula) -> Formula:
    flat: list[Formula] = []
    for item in items:
        flat.extend(item.items if isinstance(item, Or) else (item,))
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat)) if flat else BOTTOM


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or)):
        return f.items
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, (Not, Forall, Exists)):
        return (f.body,)
    return ()


def atoms(f: Formula) -> Iterator[Atom]:
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            yield node
        else:
            stack.extend(reversed(children(node)))


def free_vars(f: Formula) -> set:
    """Free variables of a formula"""
    if isinstance(f, Atom):
        return {v for a in f.args for v in term_vars(a)}
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - set(f.vars)
    out: set = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def free_vars_ordered(f: Formula) -> list:
    """Free variables in order of first occurrence"""
    seen: list = []

    def walk(node: Formula, bound: frozenset) -> None:
        if isinstance(node, Atom):
            for a in node.args:
                for v in term_vars(a):
                    if v not in bound and v not in seen:
                        seen.append(v)
        elif isinstance(node, (Forall, Exists)):
            walk(node.body, bound | set(node.vars))
        else:
            for c in children(node):
                walk(c, bound)

    walk(f, frozenset())
    return seen


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace free variables by terms; binders shadow the mapping"""
    if not mapping:
        return f
    if isinstance(f, Atom):
        if not f.args:
            return f
        return Atom(f.pred, tuple(rename_term(a, mapping) for a in f.args))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k not in f.vars}
        return type(f)(f.vars, substitute(f.body, inner))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute(c, mapping) for c in f.items))
    if isinstance(f, (Implies, Iff)):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    return f


def formula_size(f: Formula) -> int:
    """Symbol-occurrence size, one per connective, binder variable and symbol"""
    if isinstance(f, Atom):
        return 1 + sum(term_size(a) for a in f.args)
    if isinstance(f, (Forall, Exists)):
        return 1 + len(f.vars) + formula_size(f.body)
    if isinstance(f, (Top, Bottom)):
        return 1
    return 1 + sum(formula_size(c) for c in children(f))


def atom_symbols(f: Formula) -> tuple[set, set]:
    """(predicates, functions) as (name, arity) pairs"""
    preds: set = set()
    funcs: set = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, App):
            funcs.add((t.functor, len(t.args)))
            for a in t.args:
                walk_term(a)

    for atom in atoms(f):
        preds.add((atom.pred, len(atom.args)))
        for a in atom.args:
            walk_term(a)
    return preds, funcs


__all__ = [
    "Atom", "Not", "And", "Or", "Implies", "Iff", "Forall", "Exists", "Top", "Bottom",
    "Formula", "TOP", "BOTTOM", "EQUALITY", "MARKER", "Var", "App",
    "conj", "disj", "children", "atoms", "free_vars", "free_vars_ordered",
    "substitute", "formula_size", "atom_symbols",
]
