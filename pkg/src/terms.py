"""
First-order terms and literals.

Variables and function symbols are named by strings straight out of the parser
and by interned integers after preprocessing. A literal carries its polarity in
the sign of its predicate symbol.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str | int

    def __repr__(self) -> str:
        return f"X{self.name}" if isinstance(self.name, int) else str(self.name)


@dataclass(frozen=True, slots=True)
class App:
    functor: str | int
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return str(self.functor)
        return f"{self.functor}({','.join(map(repr, self.args))})"


Term = Union[Var, App]


@dataclass(frozen=True, slots=True)
class Lit:
    pred: int
    args: tuple[Term, ...] = ()

    @property
    def root(self) -> int:
        return abs(self.pred)

    @property
    def positive(self) -> bool:
        return self.pred > 0

    def complement(self) -> "Lit":
        return Lit(-self.pred, self.args)

    def __repr__(self) -> str:
        sign = "" if self.pred > 0 else "~"
        if not self.args:
            return f"{sign}p{abs(self.pred)}"
        return f"{sign}p{abs(self.pred)}({','.join(map(repr, self.args))})"


def term_vars(t: Term) -> Iterator[str | int]:
    """Variables of a term, left to right, with repetitions"""
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            yield node.name
        else:
            stack.extend(reversed(node.args))


def lit_vars(lit: Lit) -> Iterator[str | int]:
    for arg in lit.args:
        yield from term_vars(arg)


def term_size(t: Term) -> int:
    """Number of symbol occurrences (variables count as one)"""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def lit_size(lit: Lit) -> int:
    return 1 + sum(term_size(a) for a in lit.args)


def rename_term(t: Term, mapping: Mapping) -> Term:
    """Replace variables present in mapping by mapping[v] (a Term)"""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return App(t.functor, tuple(rename_term(a, mapping) for a in t.args))


def rename_lit(lit: Lit, mapping: Mapping) -> Lit:
    if not lit.args:
        return lit
    return Lit(lit.pred, tuple(rename_term(a, mapping) for a in lit.args))


def map_functors(t: Term, fn: Callable) -> Term:
    """Rebuild a term with every functor passed through fn"""
    if isinstance(t, Var):
        return t
    return App(fn(t.functor), tuple(map_functors(a, fn) for a in t.args))


def term_symbols(t: Term) -> Iterator[str | int]:
    """Function symbols of a term, with repetitions"""
    if isinstance(t, App):
        yield t.functor
        for a in t.args:
            yield from term_symbols(a)
