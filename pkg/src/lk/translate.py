"""
Translation of connection proofs into LK.

`reformulate` brings a proof into the goal-per-element form the translation
works on: lemma steps are replaced by a copy of the subproof they point to.
`to_lk` then builds the derivation top-down, carrying the antecedent along:

    start          and-l picks the clause, all-l instantiates it from σ,
                   or-l opens one branch per element
    reduction      bot-l on the goal and the complementary path literal
    extension      like start, with a bot-l branch for the connected literal;
                   a connection into a nested clause first copies the
                   enclosing matrix (contr-l) and then descends one
                   and-l/all-l/or-l block per level
    decomposition  like start, on the matrix element instead of the input

Variables left unbound by σ become fresh constants `_sk_free_N`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..exceptions import TranslationError, UnsupportedProofError
from ..formula import And, Atom, Forall, Formula, Not, Or
from ..matrix import LIFTED, ClausalMatrix, NCMatrix, NClause, NMatrix
from ..proof import DEC, EXT, LEMMA, RED, START, Proof, ProofNode
from ..terms import App, Lit, Term, Var
from ..unify import PSubst
from .formulas import ALL_L, AND_L, BOT_L, CONTRACT_L, OR_L, LKNode, LKProof, free_constant, show

Branch = Callable[[tuple], LKNode]


@dataclass
class TProof:
    """Connection proof with every goal closed by start, red, ext or dec"""
    root: ProofNode
    engine: str
    sigma: dict = field(default_factory=dict)


def _inline(node: ProofNode) -> ProofNode:
    if node.rule == LEMMA:
        if node.source is None:
            raise TranslationError("lemma step without a source subproof")
        copy = _inline(node.source)
        copy.lit = node.lit
        return copy
    return ProofNode(
        node.rule, lit=node.lit, clause=node.clause, pos=node.pos, env=dict(node.env),
        path_index=node.path_index, children=[_inline(c) for c in node.children],
        chain=node.chain, matrix=node.matrix, pruned=node.pruned, origin=node.origin,
        order=node.order,
    )


def reformulate(proof: Proof) -> TProof:
    if proof.engine == "nonclausal" and proof.beta_order == LIFTED:
        raise UnsupportedProofError(
            "proofs found with the lifted β order cannot be certified",
            {"beta_order": proof.beta_order},
        )
    if proof.root.rule != START:
        raise TranslationError("proof does not begin with a start step")
    return TProof(_inline(proof.root), proof.engine, dict(proof.sigma))


def _drop(ctx: tuple, f: Formula) -> tuple:
    for i in range(len(ctx) - 1, -1, -1):
        if ctx[i] == f:
            return ctx[:i] + ctx[i + 1:]
    raise TranslationError(f"formula not in the antecedent: {show(f)}")


class _Translator:
    def __init__(self, tp: TProof, syms):
        self.tp = tp
        self.sigma = PSubst(tp.sigma)
        self.syms = syms
        self.free: dict = {}

    # -- terms and literals ------------------------------------------------

    def name(self, sym) -> str:
        if self.syms is None or not isinstance(sym, int):
            return str(sym)
        return self.syms.name(sym)

    def value(self, t: Term) -> Term:
        """Ground LK term for a search term under σ"""
        t = self.sigma.resolve(t)
        if isinstance(t, Var):
            if t.name not in self.free:
                self.free[t.name] = free_constant(len(self.free))
            return self.free[t.name]
        return App(self.name(t.functor), tuple(self.value(a) for a in t.args))

    def render(self, t: Term, bound: frozenset, env: dict) -> Term:
        """Template term: bound variables stay named, the others take their σ value"""
        if isinstance(t, Var):
            if t.name in bound:
                return Var(f"X{t.name}")
            return self.value(Var(env.get(t.name, t.name)))
        return App(self.name(t.functor), tuple(self.render(a, bound, env) for a in t.args))

    def lit(self, lit: Lit, bound: frozenset = frozenset(), env: dict | None = None) -> Formula:
        env = env or {}
        atom = Atom(self.name(lit.root), tuple(self.render(a, bound, env) for a in lit.args))
        return atom if lit.positive else Not(atom)

    def witnesses(self, owned: Sequence[int], env: dict) -> tuple[Term, ...]:
        return tuple(self.value(Var(env.get(v, v))) for v in owned)

    # -- rules ---------------------------------------------------------------

    def bot(self, ctx: tuple, goal: Formula) -> LKNode:
        atom = goal.body if isinstance(goal, Not) else goal
        if atom not in ctx or Not(atom) not in ctx:
            raise TranslationError(f"no complementary pair for {show(goal)}", {"antecedent": len(ctx)})
        return LKNode(BOT_L, ctx, atom)

    def contract(self, ctx: tuple, f: Formula, then: Branch) -> LKNode:
        if f not in ctx:
            raise TranslationError(f"cannot contract {show(f)}: not in the antecedent")
        return LKNode(CONTRACT_L, ctx, f, [then(ctx + (f,))])

    def block(self, ctx: tuple, conj: Formula, index: int, body: Or, owned: Sequence[int],
              env: dict, branches: Sequence[Branch]) -> LKNode:
        """and-l on `conj`, all-l with the σ witnesses, or-l into the branches"""
        if not isinstance(conj, And) or not 0 <= index < len(conj.items):
            raise TranslationError(f"no conjunct {index} in {show(conj)}")
        if conj not in ctx:
            raise TranslationError(f"matrix not in the antecedent: {show(conj)}")
        if len(branches) != len(body.items):
            raise TranslationError(f"{len(body.items)} disjuncts but {len(branches)} branches")
        picked = conj.items[index]
        ctx1 = ctx + (picked,)
        split = LKNode(OR_L, (), body)
        if isinstance(picked, Forall):
            ctx2 = _drop(ctx1, picked) + (body,)
            inner = LKNode(ALL_L, ctx1, picked, [split], witnesses=self.witnesses(owned, env))
        else:
            ctx2, inner = ctx1, split
        split.sequent = ctx2
        rest = _drop(ctx2, body)
        split.premises = [branch(rest + (item,)) for branch, item in zip(branches, body.items)]
        return LKNode(AND_L, ctx, conj, [inner], index=index)

    def run(self) -> LKNode:
        raise NotImplementedError


class ClausalTranslator(_Translator):
    def __init__(self, tp: TProof, matrix: ClausalMatrix):
        super().__init__(tp, matrix.syms)
        self.matrix = matrix
        self.top = And(tuple(self.clause_formula(c.index) for c in matrix.clauses))

    def clause_formula(self, index: int) -> Formula:
        clause = self.matrix.clauses[index]
        bound = frozenset(clause.vars)
        body = Or(tuple(self.lit(l, bound) for l in clause.lits))
        return Forall(tuple(f"X{v}" for v in clause.vars), body) if clause.vars else body

    def clause_block(self, ctx: tuple, node: ProofNode, branches: Sequence[Branch]) -> LKNode:
        clause = self.matrix.clauses[node.clause]
        body = Or(tuple(self.lit(l, frozenset(), node.env) for l in clause.lits))
        return self.block(ctx, self.top, node.clause, body, clause.vars, node.env, branches)

    def run(self) -> LKNode:
        root = self.tp.root
        if root.clause is None or not 0 <= root.clause < len(self.matrix.clauses):
            raise TranslationError(f"unknown start clause {root.clause}")
        branches = [self.goal(child) for child in root.children]
        return self.clause_block((self.top,), root, branches)

    def goal(self, node: ProofNode) -> Branch:
        def close(ctx: tuple) -> LKNode:
            if node.rule == RED:
                return self.bot(ctx, ctx[-1])
            if node.rule != EXT:
                raise TranslationError(f"literal closed by {node.rule}")
            clause = self.matrix.clauses[node.clause]
            children = iter(node.children)
            branches = []
            for i in range(len(clause.lits)):
                if i == node.pos:
                    branches.append(lambda c: self.bot(c, c[-1]))
                else:
                    child = next(children, None)
                    if child is None:
                        raise TranslationError("extension with too few subproofs")
                    branches.append(self.goal(child))
            if next(children, None) is not None:
                raise TranslationError("extension with too many subproofs")
            return self.clause_block(ctx, node, branches)
        return close


class NonclausalTranslator(_Translator):
    def __init__(self, tp: TProof, matrix: NCMatrix):
        super().__init__(tp, matrix.syms)
        self.matrix = matrix
        self.top = self.matrix_formula(matrix.root, {})

    # formulas of clause copies: variables owned inside stay bound, the rest come from env

    def elem_formula(self, elem, bound: frozenset, env: dict) -> Formula:
        if isinstance(elem, Lit):
            return self.lit(elem, bound, env)
        return And(tuple(self.clause_formula(c, bound, env) for c in elem.clauses))

    def clause_formula(self, clause: NClause, bound: frozenset, env: dict) -> Formula:
        inner = bound | frozenset(clause.vars)
        body = Or(tuple(self.elem_formula(e, inner, env) for e in clause.elems))
        return Forall(tuple(f"X{v}" for v in clause.vars), body) if clause.vars else body

    def matrix_formula(self, m: NMatrix, env: dict) -> Formula:
        # every variable is owned by a clause of the input matrix
        return self.elem_formula(m, frozenset(), {} if m is self.matrix.root else env)

    def body(self, clause: NClause, env: dict) -> Or:
        return Or(tuple(self.elem_formula(e, frozenset(), env) for e in clause.elems))

    def clause_block(self, ctx, m: NMatrix, clause: NClause, env: dict, branches) -> LKNode:
        return self.block(ctx, self.matrix_formula(m, env), clause.slot, self.body(clause, env),
                          clause.vars, env, branches)

    def run(self) -> LKNode:
        root = self.tp.root
        clause = self.matrix.clauses.get(root.clause)
        if clause is None or clause.parent is not self.matrix.root:
            raise TranslationError(f"start clause {root.clause} is not a top-level clause")
        items = list(enumerate(clause.elems))
        return self.clause_block((self.top,), self.matrix.root, clause, root.env,
                                 self.branches(root, items, root.env))

    def branches(self, node: ProofNode, items, env: dict) -> list[Branch]:
        if len(node.children) != len(items):
            raise TranslationError(f"{len(items)} goals but {len(node.children)} subproofs")
        return [self.item(child, elem, env) for child, (_, elem) in zip(node.children, items)]

    def item(self, node: ProofNode, elem, env: dict) -> Branch:
        if isinstance(elem, Lit):
            return self.literal(node)

        def decompose(ctx: tuple) -> LKNode:
            if node.rule != DEC or node.pruned:
                raise TranslationError(f"matrix goal closed by {node.rule}")
            clause = self.matrix.clauses.get(node.clause)
            if clause is None or clause.parent is not elem:
                raise TranslationError(f"clause {node.clause} is not in matrix {elem.id}")
            return self.clause_block(ctx, elem, clause, env,
                                     self.branches(node, list(enumerate(clause.elems)), env))
        return decompose

    def literal(self, node: ProofNode) -> Branch:
        def close(ctx: tuple) -> LKNode:
            if node.rule == RED:
                return self.bot(ctx, ctx[-1])
            if node.rule != EXT:
                raise TranslationError(f"literal closed by {node.rule}")
            chain = [self.matrix.clauses[cid] for cid in node.chain]
            ladder = self.ladder(chain, node.pos, node.env, 0, node)
            if len(chain) == 1:
                return ladder(ctx)
            outer = self.matrix_formula(chain[0].parent, node.env)
            return self.contract(ctx, outer, ladder)
        return close

    def ladder(self, chain: list[NClause], pos: int, env: dict, level: int, node: ProofNode) -> Branch:
        """One and-l/all-l/or-l block per clause of the chain, bot-l at the bottom"""
        clause = chain[level]
        last = level == len(chain) - 1
        down = None if last else chain[level + 1].parent.slot
        children = iter(node.children)

        def close(ctx: tuple) -> LKNode:
            branches: list[Branch] = []
            for slot, elem in enumerate(clause.elems):
                if last and slot == pos:
                    branches.append(lambda c: self.bot(c, c[-1]))
                    continue
                child = next(children, None)
                if child is None:
                    raise TranslationError("extension with too few subproofs")
                if slot == down:
                    if child.rule != DEC or not child.pruned:
                        raise TranslationError("missing pruned decomposition on the way to the connection")
                    branches.append(self.ladder(chain, pos, env, level + 1, child))
                else:
                    branches.append(self.item(child, elem, env))
            if next(children, None) is not None:
                raise TranslationError("extension with too many subproofs")
            return self.clause_block(ctx, clause.parent, clause, env, branches)
        return close


def to_lk(tp: TProof, matrix: ClausalMatrix | NCMatrix, problem: str | None = None) -> LKProof:
    """LK derivation of `M ⊢` for the matrix formula M"""
    if isinstance(matrix, ClausalMatrix):
        translator: _Translator = ClausalTranslator(tp, matrix)
    else:
        translator = NonclausalTranslator(tp, matrix)
    return LKProof(translator.run(), problem)


def matrix_formula(matrix: ClausalMatrix | NCMatrix, sigma: dict | None = None) -> Formula:
    """The formula an LK proof of `matrix` starts from"""
    tp = TProof(ProofNode(START), "", dict(sigma or {}))
    if isinstance(matrix, ClausalMatrix):
        return ClausalTranslator(tp, matrix).top
    return NonclausalTranslator(tp, matrix).top
