"""
LK derivations in refutation form.

Every node carries its full conclusion sequent `Γ ⊢` (the succedent is
always empty). Formulas are the shared formula nodes with string symbol
names: a matrix is an `And` of clauses, a clause an `Or` of its elements
under a `Forall` of the variables it owns.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..formula import And, Atom, Forall, Formula, Not, Or
from ..terms import App, Term, Var

AND_L = "and-l"
OR_L = "or-l"
ALL_L = "all-l"
BOT_L = "bot-l"
CONTRACT_L = "contr-l"

RULES = (AND_L, OR_L, ALL_L, BOT_L, CONTRACT_L)

FREE_PREFIX = "_sk_free_"


@dataclass(eq=False)
class LKNode:
    """One rule application; `principal` is the formula the rule acts on.

    and-l    `index` names the selected conjunct
    all-l    `witnesses` instantiate the binder variables in order
    bot-l    `principal` is the atom found both plain and negated
    """
    rule: str
    sequent: tuple[Formula, ...]
    principal: Formula | None = None
    premises: list["LKNode"] = field(default_factory=list)
    index: int | None = None
    witnesses: tuple[Term, ...] = ()

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))


@dataclass
class LKProof:
    root: LKNode
    problem: str | None = None

    def size(self) -> int:
        return sum(1 for _ in self.root.walk())

    def rule_counts(self) -> Counter:
        return Counter(n.rule for n in self.root.walk())

    def nodes(self) -> list[LKNode]:
        return list(self.root.walk())


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return str(t.name)
    if not t.args:
        return str(t.functor)
    return f"{t.functor}({','.join(show_term(a) for a in t.args)})"


def show(f: Formula) -> str:
    """Compact human-readable form, used in reports"""
    if isinstance(f, Atom):
        if not f.args:
            return str(f.pred)
        return f"{f.pred}({','.join(show_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return "~" + show(f.body)
    if isinstance(f, And):
        return "(" + " & ".join(show(c) for c in f.items) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(show(c) for c in f.items) + ")"
    if isinstance(f, Forall):
        return f"![{','.join(map(str, f.vars))}]:{show(f.body)}"
    return repr(f)


def free_constant(n: int) -> App:
    return App(f"{FREE_PREFIX}{n}")
