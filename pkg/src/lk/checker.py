"""
Standalone LK proof checker.

Checks every node of an LK proof against its rule schema by comparing
antecedents as multisets. Shares no code with the translator beyond the
formula node classes: substitution and term handling are local.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any

from ..formula import And, Atom, Forall, Formula, Not, Or
from ..terms import App, Term, Var
from .formulas import ALL_L, AND_L, BOT_L, CONTRACT_L, OR_L, LKNode, LKProof, show


@dataclass
class LKReport:
    ok: bool
    checked: int = 0
    node: int | None = None
    rule: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "node": self.node,
            "rule": self.rule,
            "message": self.message,
        }

    def line(self) -> str:
        if self.ok:
            return f"LK proof ok ({self.checked} nodes)"
        return f"LK violation at node {self.node} ({self.rule}): {self.message}"


class _Violation(Exception):
    pass


def _closed(t: Term, bound: frozenset = frozenset()) -> bool:
    if isinstance(t, Var):
        return t.name in bound
    return all(_closed(a, bound) for a in t.args)


def _inst_term(t: Term, m: dict) -> Term:
    if isinstance(t, Var):
        return m.get(t.name, t)
    if not t.args:
        return t
    return App(t.functor, tuple(_inst_term(a, m) for a in t.args))


def _inst(f: Formula, m: dict) -> Formula:
    if not m:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_inst_term(a, m) for a in f.args))
    if isinstance(f, Not):
        return Not(_inst(f.body, m))
    if isinstance(f, And):
        return And(tuple(_inst(c, m) for c in f.items))
    if isinstance(f, Or):
        return Or(tuple(_inst(c, m) for c in f.items))
    if isinstance(f, Forall):
        return Forall(f.vars, _inst(f.body, {k: v for k, v in m.items() if k not in f.vars}))
    raise _Violation(f"formula outside the LK fragment: {f!r}")


def _fragment(f: Formula, bound: frozenset = frozenset()) -> None:
    """Only ∧, ∨, ∀ and negated atoms; no free variables"""
    if isinstance(f, Atom):
        if not all(_closed(a, bound) for a in f.args):
            raise _Violation(f"free variable in {show(f)}")
    elif isinstance(f, Not):
        if not isinstance(f.body, Atom):
            raise _Violation(f"negation of a non-atom: {show(f)}")
        _fragment(f.body, bound)
    elif isinstance(f, (And, Or)):
        for c in f.items:
            _fragment(c, bound)
    elif isinstance(f, Forall):
        _fragment(f.body, bound | frozenset(f.vars))
    else:
        raise _Violation(f"formula outside the LK fragment: {f!r}")


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise _Violation(message)


def _premises(node: LKNode, n: int) -> None:
    _expect(len(node.premises) == n, f"expected {n} premise(s), found {len(node.premises)}")


def _same(premise: LKNode, expected: Counter) -> None:
    got = Counter(premise.sequent)
    if got != expected:
        extra = got - expected
        missing = expected - got
        detail = []
        if missing:
            detail.append("missing " + ", ".join(show(f) for f in missing))
        if extra:
            detail.append("unexpected " + ", ".join(show(f) for f in extra))
        raise _Violation("premise does not match the rule: " + "; ".join(detail))


def _check_node(node: LKNode) -> None:
    gamma = Counter(node.sequent)
    p = node.principal
    if node.rule == BOT_L:
        _premises(node, 0)
        _expect(isinstance(p, Atom), "bot-l needs an atom")
        _expect(gamma[p] > 0 and gamma[Not(p)] > 0, f"{show(p)} and its negation are not both present")
        return
    _expect(p is not None and gamma[p] > 0, f"principal formula not in the antecedent: {show(p) if p else None}")
    if node.rule == AND_L:
        _expect(isinstance(p, And), "and-l on a non-conjunction")
        _expect(node.index is not None and 0 <= node.index < len(p.items), f"no conjunct {node.index}")
        _premises(node, 1)
        _same(node.premises[0], gamma + Counter([p.items[node.index]]))
    elif node.rule == OR_L:
        _expect(isinstance(p, Or), "or-l on a non-disjunction")
        _premises(node, len(p.items))
        base = gamma - Counter([p])
        for premise, item in zip(node.premises, p.items):
            _same(premise, base + Counter([item]))
    elif node.rule == ALL_L:
        _expect(isinstance(p, Forall), "all-l on a non-quantified formula")
        _expect(len(node.witnesses) == len(p.vars), f"{len(p.vars)} variables but {len(node.witnesses)} witnesses")
        _expect(all(_closed(t) for t in node.witnesses), "witness terms must be closed")
        _premises(node, 1)
        body = _inst(p.body, dict(zip(p.vars, node.witnesses)))
        _same(node.premises[0], gamma - Counter([p]) + Counter([body]))
    elif node.rule == CONTRACT_L:
        _premises(node, 1)
        _same(node.premises[0], gamma + Counter([p]))
    else:
        raise _Violation(f"unknown rule {node.rule!r}")


def check_lk(proof: LKProof, root: tuple[Formula, ...] | None = None) -> LKReport:
    """Check every node; with `root`, the end sequent must be exactly that antecedent"""
    checked = 0
    nodes = proof.nodes()
    if root is not None and Counter(proof.root.sequent) != Counter(root):
        return LKReport(False, 0, 0, proof.root.rule, "end sequent differs from the input")
    for f in proof.root.sequent:
        try:
            _fragment(f)
        except _Violation as exc:
            return LKReport(False, 0, 0, proof.root.rule, str(exc))
    for i, node in enumerate(nodes):
        try:
            _check_node(node)
        except _Violation as exc:
            return LKReport(False, checked, i, node.rule, str(exc))
        checked += 1
    return LKReport(True, checked)
