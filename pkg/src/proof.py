"""
Connection proof trees, their JSON form, and replay validation.

One node type serves both engines:

    start   clause copy; one child per clause element
    red     closes `lit` against path entry `path_index`
    ext     connects `lit` to literal `pos` of a clause copy; one child per
            remaining element (clausal) or β-clause item (nonclausal)
    dec     picks clause `clause` of matrix `matrix`; one child per element
    lemma   closes `lit` with the subproof of an identical earlier literal

Replay re-checks every side condition under the final substitution with its
own unifier and never consults the search code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .exceptions import ProofReplayError
from .matrix import PLAIN, Beta, ClausalMatrix, NCMatrix, NClause, NMatrix, Pruned, beta_clause
from .terms import App, Lit, Term, Var, rename_lit
from .unify import PSubst

START, RED, EXT, DEC, LEMMA = "start", "red", "ext", "dec", "lemma"


@dataclass(eq=False)
class ProofNode:
    rule: str
    lit: Lit | None = None
    clause: int | None = None
    pos: int | None = None
    env: dict[int, int] = field(default_factory=dict)
    path_index: int | None = None
    children: list["ProofNode"] = field(default_factory=list)
    chain: tuple[int, ...] = ()
    matrix: int | None = None
    pruned: bool = False
    origin: tuple | None = None
    source: "ProofNode | None" = None
    order: int = 0

    def walk(self):
        """Pre-order traversal, lemma sources not expanded"""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def shape(self) -> tuple:
        """Rule skeleton, used to compare traces"""
        return (self.rule, self.clause, self.pos, self.path_index, tuple(c.shape() for c in self.children))


@dataclass
class Proof:
    root: ProofNode
    engine: str
    sigma: dict[int, Term] = field(default_factory=dict)
    beta_order: str = PLAIN

    def psubst(self) -> PSubst:
        return PSubst(self.sigma)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def term_to_json(t: Term) -> Any:
    if isinstance(t, Var):
        return {"v": t.name}
    return [t.functor, *(term_to_json(a) for a in t.args)]


def term_from_json(data: Any) -> Term:
    if isinstance(data, dict):
        return Var(data["v"])
    return App(data[0], tuple(term_from_json(a) for a in data[1:]))


def lit_to_json(lit: Lit) -> list:
    return [lit.pred, *(term_to_json(a) for a in lit.args)]


def lit_from_json(data: list) -> Lit:
    return Lit(data[0], tuple(term_from_json(a) for a in data[1:]))


def node_to_dict(node: ProofNode) -> dict:
    out: dict = {"rule": node.rule, "order": node.order}
    if node.lit is not None:
        out["lit"] = lit_to_json(node.lit)
    for name in ("clause", "pos", "path_index", "matrix"):
        if (value := getattr(node, name)) is not None:
            out[name] = value
    if node.env:
        out["env"] = [[k, v] for k, v in node.env.items()]
    if node.chain:
        out["chain"] = list(node.chain)
    if node.pruned:
        out["pruned"] = True
    if node.origin is not None:
        out["origin"] = list(node.origin)
    if node.source is not None:
        out["source"] = node.source.order
    if node.children:
        out["children"] = [node_to_dict(c) for c in node.children]
    return out


def node_from_dict(data: dict) -> ProofNode:
    by_order: dict[int, ProofNode] = {}
    pending: list[tuple[ProofNode, int]] = []

    def build(d: dict) -> ProofNode:
        node = ProofNode(
            rule=d["rule"],
            lit=lit_from_json(d["lit"]) if "lit" in d else None,
            clause=d.get("clause"),
            pos=d.get("pos"),
            env={k: v for k, v in d.get("env", [])},
            path_index=d.get("path_index"),
            chain=tuple(d.get("chain", ())),
            matrix=d.get("matrix"),
            pruned=d.get("pruned", False),
            origin=tuple(d["origin"]) if "origin" in d else None,
            order=d.get("order", 0),
        )
        by_order[node.order] = node
        if "source" in d:
            pending.append((node, d["source"]))
        node.children = [build(c) for c in d.get("children", [])]
        return node

    root = build(data)
    for node, order in pending:
        if order not in by_order:
            raise ProofReplayError(f"Lemma refers to unknown node {order}")
        node.source = by_order[order]
    return root


def proof_to_dict(proof: Proof) -> dict:
    return {
        "engine": proof.engine,
        "beta_order": proof.beta_order,
        "sigma": [[v, term_to_json(t)] for v, t in proof.sigma.items()],
        "tree": node_to_dict(proof.root),
    }


def proof_from_dict(data: dict) -> Proof:
    return Proof(
        root=node_from_dict(data["tree"]),
        engine=data["engine"],
        sigma={v: term_from_json(t) for v, t in data.get("sigma", [])},
        beta_order=data.get("beta_order", PLAIN),
    )


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------

def _copy(lit: Lit, env: dict[int, int]) -> Lit:
    return rename_lit(lit, {v: Var(c) for v, c in env.items()})


class _Replay:
    def __init__(self, proof: Proof):
        self.sigma = proof.psubst()

    def fail(self, node: ProofNode, message: str) -> None:
        raise ProofReplayError(message, {"rule": node.rule, "order": node.order})

    def same(self, a: Lit, b: Lit) -> bool:
        return self.sigma.resolve_lit(a) == self.sigma.resolve_lit(b)

    def closes(self, node: ProofNode, goal: Lit, path: tuple[Lit, ...]) -> bool:
        """Checks shared by both engines; True when the node needs no further work"""
        if node.lit != goal:
            self.fail(node, f"closes {node.lit!r} but the goal is {goal!r}")
        if node.rule == RED:
            if node.path_index is None or not 0 <= node.path_index < len(path):
                self.fail(node, "reduction refers to no path literal")
            if not any(self.same(goal, p.complement()) for p in path):
                self.fail(node, "no complementary literal on the path")
            return True
        if node.rule == LEMMA:
            if node.source is None or node.source.lit is None:
                self.fail(node, "lemma without source")
            if not self.same(goal, node.source.lit):
                self.fail(node, "lemma literal differs from its source")
            return False
        if node.rule != EXT:
            self.fail(node, f"unexpected rule {node.rule} for a literal")
        return False


class ClausalReplay(_Replay):
    def __init__(self, proof: Proof, matrix: ClausalMatrix):
        super().__init__(proof)
        self.matrix = matrix

    def clause(self, node: ProofNode):
        if node.clause is None or not 0 <= node.clause < len(self.matrix.clauses):
            self.fail(node, f"unknown clause {node.clause}")
        clause = self.matrix.clauses[node.clause]
        if set(node.env) != set(clause.vars):
            self.fail(node, "copy does not rename exactly the clause variables")
        return clause

    def run(self, root: ProofNode) -> None:
        if root.rule != START:
            self.fail(root, "proof does not begin with a start step")
        clause = self.clause(root)
        goals = [_copy(l, root.env) for l in clause.lits]
        self.children(root, goals, ())

    def children(self, node: ProofNode, goals: list[Lit], path: tuple[Lit, ...]) -> None:
        if len(node.children) != len(goals):
            self.fail(node, f"{len(goals)} goals but {len(node.children)} subproofs")
        for child, goal in zip(node.children, goals):
            self.literal(child, goal, path)

    def literal(self, node: ProofNode, goal: Lit, path: tuple[Lit, ...]) -> None:
        if self.closes(node, goal, path):
            return
        if node.rule == LEMMA:
            self.literal(node.source, node.source.lit, path)
            return
        clause = self.clause(node)
        if node.pos is None or not 0 <= node.pos < len(clause.lits):
            self.fail(node, f"no literal {node.pos} in clause {node.clause}")
        connected = _copy(clause.lits[node.pos], node.env)
        if not self.same(goal, connected.complement()):
            self.fail(node, "extension literals are not complementary under σ")
        rest = [_copy(l, node.env) for i, l in enumerate(clause.lits) if i != node.pos]
        self.children(node, rest, path + (goal,))


# -- nonclausal ---------------------------------------------------------------

@dataclass
class Item:
    """Goal element of a nonclausal derivation: a literal, a matrix, or a pruned matrix"""
    lit: Lit | None = None
    matrix: NMatrix | None = None
    pruned: Pruned | None = None
    env: dict[int, int] = field(default_factory=dict)


def clause_items(clause: NClause, env: dict[int, int]) -> list[Item]:
    return [
        Item(lit=_copy(e, env)) if isinstance(e, Lit) else Item(matrix=e, env=env)
        for e in clause.elems
    ]


def beta_items(beta: Beta, env: dict[int, int]) -> list[Item]:
    out = []
    for _, e in beta.items:
        if isinstance(e, Lit):
            out.append(Item(lit=_copy(e, env)))
        elif isinstance(e, Pruned):
            out.append(Item(pruned=e, env=env))
        else:
            out.append(Item(matrix=e, env=env))
    return out


class NonclausalReplay(_Replay):
    def __init__(self, proof: Proof, matrix: NCMatrix):
        super().__init__(proof)
        self.matrix = matrix
        self.order = proof.beta_order

    def clause(self, node: ProofNode, cid: int | None) -> NClause:
        if cid not in self.matrix.clauses:
            self.fail(node, f"unknown clause {cid}")
        return self.matrix.clauses[cid]

    def run(self, root: ProofNode) -> None:
        if root.rule != START:
            self.fail(root, "proof does not begin with a start step")
        clause = self.clause(root, root.clause)
        if clause.parent is not self.matrix.root:
            self.fail(root, "start clause is not a top-level clause")
        self.children(root, clause_items(clause, root.env), ())

    def children(self, node: ProofNode, items: list[Item], path: tuple[Lit, ...]) -> None:
        if len(node.children) != len(items):
            self.fail(node, f"{len(items)} goals but {len(node.children)} subproofs")
        for child, item in zip(node.children, items):
            self.item(child, item, path)

    def item(self, node: ProofNode, item: Item, path: tuple[Lit, ...]) -> None:
        if item.lit is not None:
            self.literal(node, item.lit, path)
            return
        if node.rule != DEC:
            self.fail(node, f"matrix goal closed by {node.rule}")
        if item.pruned is not None:
            beta = item.pruned.beta
            if not node.pruned or node.clause != beta.clause.id:
                self.fail(node, "pruned matrix decomposed into the wrong clause")
            self.children(node, beta_items(beta, item.env), path)
            return
        clause = self.clause(node, node.clause)
        if clause.parent is not item.matrix or node.matrix != item.matrix.id:
            self.fail(node, f"clause {node.clause} is not in matrix {item.matrix.id}")
        self.children(node, clause_items(clause, item.env), path)

    def literal(self, node: ProofNode, goal: Lit, path: tuple[Lit, ...]) -> None:
        if self.closes(node, goal, path):
            return
        if node.rule == LEMMA:
            self.literal(node.source, node.source.lit, path)
            return
        chain = [self.clause(node, cid) for cid in node.chain]
        if not chain:
            self.fail(node, "extension without a clause chain")
        for upper, lower in zip(chain, chain[1:]):
            if lower.parent is None or lower.parent.parent is not upper:
                self.fail(node, f"clause {lower.id} is not nested in clause {upper.id}")
        bottom = chain[-1]
        if node.pos is None or not 0 <= node.pos < len(bottom.elems) \
                or not isinstance(bottom.elems[node.pos], Lit):
            self.fail(node, f"no literal {node.pos} in clause {bottom.id}")
        missing = [v for c in chain for v in c.vars if v not in node.env]
        if missing:
            self.fail(node, f"copy leaves variables {missing} unrenamed")
        connected = _copy(bottom.elems[node.pos], node.env)
        if not self.same(goal, connected.complement()):
            self.fail(node, "extension literals are not complementary under σ")
        beta = beta_clause(chain, node.pos, self.order)
        self.children(node, beta_items(beta, node.env), path + (goal,))


def replay(proof: Proof, matrix: ClausalMatrix | NCMatrix) -> None:
    """Raise ProofReplayError unless every step of proof is valid for matrix"""
    if isinstance(matrix, ClausalMatrix):
        ClausalReplay(proof, matrix).run(proof.root)
    else:
        NonclausalReplay(proof, matrix).run(proof.root)
