"""
Unification with occurs check.

`Subst` keeps every binding of a search in one flat store indexed by variable
id and records bound variables on a trail, so backtracking is an undo to a
trail depth. `PSubst` is a persistent map for code that jumps between
unrelated states.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .exceptions import StaleMarkError
from .terms import App, Lit, Term, Var


@dataclass(frozen=True, slots=True)
class Mark:
    depth: int
    stamp: int


class Subst:
    """Trail-based substitution shared by a whole search"""

    def __init__(self, size: int = 0):
        self.store: list[Term | None] = [None] * size
        self.trail: list[int] = []
        self._stamps: list[int] = []
        self._next_stamp = 0
        self.inferences = 0

    # -- store --------------------------------------------------------------

    def lookup(self, v: int) -> Term | None:
        return self.store[v] if 0 <= v < len(self.store) else None

    def bind(self, v: int, t: Term) -> None:
        if v >= len(self.store):
            self.store.extend([None] * (v + 1 - len(self.store)))
        self.store[v] = t
        self.trail.append(v)
        self._next_stamp += 1
        self._stamps.append(self._next_stamp)

    def deref(self, t: Term) -> Term:
        while isinstance(t, Var):
            bound = self.lookup(t.name)
            if bound is None:
                return t
            t = bound
        return t

    def resolve(self, t: Term) -> Term:
        """Fully dereferenced copy of t"""
        t = self.deref(t)
        if isinstance(t, Var) or not t.args:
            return t
        return App(t.functor, tuple(self.resolve(a) for a in t.args))

    def resolve_lit(self, lit: Lit) -> Lit:
        if not lit.args:
            return lit
        return Lit(lit.pred, tuple(self.resolve(a) for a in lit.args))

    def bindings(self) -> dict[int, Term]:
        return {v: self.store[v] for v in self.trail}

    # -- marks --------------------------------------------------------------

    def mark(self) -> Mark:
        depth = len(self.trail)
        return Mark(depth, self._stamps[-1] if depth else 0)

    def undo_to(self, mark: Mark) -> None:
        depth = mark.depth
        if depth > len(self.trail) or (depth and self._stamps[depth - 1] != mark.stamp):
            raise StaleMarkError(
                "Undo to a mark older than an earlier undo",
                {"mark_depth": depth, "trail_depth": len(self.trail)},
            )
        while len(self.trail) > depth:
            self.store[self.trail.pop()] = None
            self._stamps.pop()

    # -- unification --------------------------------------------------------

    def occurs(self, v: int, t: Term) -> bool:
        t = self.deref(t)
        if isinstance(t, Var):
            return t.name == v
        return any(self.occurs(v, a) for a in t.args)

    def _unify(self, a: Term, b: Term) -> bool:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = self.deref(x), self.deref(y)
            if isinstance(x, Var):
                if isinstance(y, Var) and y.name == x.name:
                    continue
                if self.occurs(x.name, y):
                    return False
                self.bind(x.name, y)
            elif isinstance(y, Var):
                if self.occurs(y.name, x):
                    return False
                self.bind(y.name, x)
            elif x.functor != y.functor or len(x.args) != len(y.args):
                return False
            else:
                stack.extend(zip(x.args, y.args))
        return True

    def unify(self, a: Term, b: Term) -> bool:
        mark = self.mark()
        if self._unify(a, b):
            return True
        self.undo_to(mark)
        return False

    def unify_lits(self, a: Lit, b: Lit, count: bool = True) -> bool:
        """Unify two literals with the same signed predicate; counts successes unless count is off"""
        if a.pred != b.pred or len(a.args) != len(b.args):
            return False
        mark = self.mark()
        for x, y in zip(a.args, b.args):
            if not self._unify(x, y):
                self.undo_to(mark)
                return False
        if count:
            self.inferences += 1
        return True

    def identical_lits(self, a: Lit, b: Lit) -> bool:
        """a and b are equal under the current bindings"""
        return a.pred == b.pred and self.resolve_lit(a) == self.resolve_lit(b)


class PSubst:
    """Persistent substitution; unification returns a new value and leaves self intact"""

    __slots__ = ("_map",)

    def __init__(self, bindings: Mapping[int, Term] | None = None):
        self._map = MappingProxyType(dict(bindings or {}))

    def __len__(self) -> int:
        return len(self._map)

    def items(self):
        return self._map.items()

    def deref(self, t: Term) -> Term:
        while isinstance(t, Var) and t.name in self._map:
            t = self._map[t.name]
        return t

    def resolve(self, t: Term) -> Term:
        t = self.deref(t)
        if isinstance(t, Var) or not t.args:
            return t
        return App(t.functor, tuple(self.resolve(a) for a in t.args))

    def resolve_lit(self, lit: Lit) -> Lit:
        if not lit.args:
            return lit
        return Lit(lit.pred, tuple(self.resolve(a) for a in lit.args))

    def _occurs(self, v: int, t: Term, m: dict) -> bool:
        while isinstance(t, Var) and t.name in m:
            t = m[t.name]
        if isinstance(t, Var):
            return t.name == v
        return any(self._occurs(v, a, m) for a in t.args)

    def unify_terms(self, pairs) -> "PSubst | None":
        m = dict(self._map)
        stack = list(pairs)
        while stack:
            x, y = stack.pop()
            while isinstance(x, Var) and x.name in m:
                x = m[x.name]
            while isinstance(y, Var) and y.name in m:
                y = m[y.name]
            if isinstance(x, Var):
                if isinstance(y, Var) and y.name == x.name:
                    continue
                if self._occurs(x.name, y, m):
                    return None
                m[x.name] = y
            elif isinstance(y, Var):
                if self._occurs(y.name, x, m):
                    return None
                m[y.name] = x
            elif x.functor != y.functor or len(x.args) != len(y.args):
                return None
            else:
                stack.extend(zip(x.args, y.args))
        return PSubst(m)

    def unify_lits(self, a: Lit, b: Lit) -> "PSubst | None":
        if a.pred != b.pred or len(a.args) != len(b.args):
            return None
        return self.unify_terms(zip(a.args, b.args))

    def identical_lits(self, a: Lit, b: Lit) -> bool:
        return a.pred == b.pred and self.resolve_lit(a) == self.resolve_lit(b)
