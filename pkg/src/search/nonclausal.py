"""
Nonclausal connection search.

Clause copies are `NInst` objects: a template clause, a variable renaming and
the instance it sits in. Nested clauses of an instance are instances too and
share its renaming. Replacing clause C1 by its copy C2 in the current matrix
is an entry in a persistent overlay keyed by (parent instance, template
clause). Matrices decomposed on the current branch are collected in `mats`;
together with the top level they are where extension clauses are looked for.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterator, Sequence

from ..matrix import (
    LIFTED, PLAIN, Beta, NCEntry, NCIndex, NCMatrix, NClause, NMatrix, Pruned,
    beta_clause, is_extension_clause,
)
from ..proof import DEC, EXT, LEMMA, RED, START, Proof, ProofNode
from ..run_log import RunLogger
from ..terms import Lit, Var, rename_lit
from ..unify import Subst
from .base import Deadline, SearchOptions, SearchResult, SearchStats, deepen
from .clausal import restricted_backtracking


class NInst:
    """Clause instance inside the current matrix"""

    __slots__ = ("template", "env", "parent", "slot", "uid", "_children")

    def __init__(self, template: NClause, env: dict[int, int], parent: "NInst | None", slot: tuple, uid: int):
        self.template = template
        self.env = env
        self.parent = parent
        self.slot = slot
        self.uid = uid
        self._children: dict[tuple[int, int], NInst] = {}

    def up(self):
        return self.parent, self.slot

    def child(self, elem_slot: int, clause_slot: int, uids) -> "NInst":
        key = (elem_slot, clause_slot)
        if key not in self._children:
            template = self.template.elems[elem_slot].clauses[clause_slot]
            self._children[key] = NInst(template, self.env, self, key, next(uids))
        return self._children[key]

    def lit(self, pos: int) -> Lit:
        return rename_lit(self.template.elems[pos], {v: Var(c) for v, c in self.env.items()})

    def __repr__(self) -> str:
        return f"NInst({self.template.id}#{self.uid})"


@dataclass(frozen=True, eq=False)
class MInst:
    template: NMatrix
    owner: NInst


@dataclass(frozen=True)
class NGoal:
    """Element `slot` of the clause instance `holder`"""
    holder: NInst
    slot: int
    elem: object


@dataclass(frozen=True)
class Context:
    path: tuple            # (Lit, holder, slot) from the oldest to the newest
    lim: int
    lemmas: tuple
    mats: tuple
    overlay: dict


def order_beta(chain: Sequence[NClause], pos: int, order: str = PLAIN) -> Beta:
    """β-clause of chain[0] wrt literal `pos` of chain[-1], elements in search order"""
    if order not in (PLAIN, LIFTED):
        raise ValueError(f"Unknown β order: {order}")
    return beta_clause(chain, pos, order)


class NonclausalSearch:
    def __init__(self, matrix: NCMatrix, opts: SearchOptions | None = None, deadline: Deadline | None = None):
        self.matrix = matrix
        self.opts = opts or SearchOptions()
        if self.opts.beta_order not in (PLAIN, LIFTED):
            raise ValueError(f"Unknown β order: {self.opts.beta_order}")
        self.index = NCIndex(matrix)
        self.subst = Subst(matrix.max_var + 1)
        self.stats = SearchStats()
        self.deadline = deadline or Deadline(self.opts.timeout)
        self.next_var = matrix.max_var + 1
        self.uids = count(1)
        self._base: dict[int, NInst] = {}

    # -- instances -----------------------------------------------------------

    def fresh_env(self, template: NClause, env: dict[int, int] | None = None) -> dict[int, int]:
        out = dict(env or {})
        for v in template.subtree_vars:
            out[v] = self.next_var
            self.next_var += 1
        return out

    def base(self, clause: NClause) -> NInst:
        """The top-level clause as it stands in the input matrix"""
        if clause.id not in self._base:
            env = {v: v for v in clause.subtree_vars}
            self._base[clause.id] = NInst(clause, env, None, (None, clause.slot), next(self.uids))
        return self._base[clause.id]

    def candidates(self, entry: NCEntry, mats: tuple, overlay: dict) -> Iterator[tuple[int, NInst]]:
        """(level, clause instance) pairs that may serve as extension clause, outermost level first"""
        chain = entry.chain
        top = chain[0]
        yield 0, overlay.get((None, top.id)) or self.base(top)
        for j in range(1, len(chain)):
            a = chain[j]
            seen = set()
            for m in mats:
                if m.template is not a.parent or m.owner.uid in seen:
                    continue
                seen.add(m.owner.uid)
                owner = m.owner
                yield j, overlay.get((owner.uid, a.id)) or owner.child(a.parent.slot, a.slot, self.uids)

    def items(self, holder: NInst, elems) -> tuple[NGoal, ...]:
        return tuple(NGoal(holder, s, e) for s, e in elems)

    def finish(self, root: ProofNode) -> Proof:
        for i, node in enumerate(root.walk()):
            node.order = i
        return Proof(root, "nonclausal", dict(self.subst.bindings()), self.opts.beta_order)

    # -- goals -------------------------------------------------------------

    def prove_items(self, goals: Sequence[NGoal], ctx: Context, i: int = 0) -> Iterator[list[ProofNode]]:
        if i == len(goals):
            yield []
            return
        goal = goals[i]
        if isinstance(goal.elem, Lit):
            alternatives = self.expand_literal(goal, ctx)
            for node in restricted_backtracking(alternatives, self.opts.cut):
                lemmas = ctx.lemmas + ((node.lit, node),) if self.opts.lemmata else ctx.lemmas
                rest = Context(ctx.path, ctx.lim, lemmas, ctx.mats, ctx.overlay)
                for more in self.prove_items(goals, rest, i + 1):
                    yield [node] + more
            return
        # matrices decomposed inside this element stay out of its siblings' branches
        for node, _ in restricted_backtracking(self.decompose(goal, ctx), self.opts.cut):
            for more in self.prove_items(goals, ctx, i + 1):
                yield [node] + more

    def decompose(self, goal: NGoal, ctx: Context) -> Iterator[tuple[ProofNode, tuple]]:
        """Closed decompositions of a matrix element; a pruned element has a single clause"""
        self.deadline.check()
        holder = goal.holder
        if isinstance(goal.elem, Pruned):
            pruned = goal.elem
            mats = ctx.mats + (MInst(pruned.matrix, holder),)
            inst = holder.child(pruned.matrix.slot, pruned.index, self.uids)
            sub = Context(ctx.path, ctx.lim, ctx.lemmas, mats, ctx.overlay)
            for children in self.prove_items(self.items(inst, pruned.beta.items), sub):
                yield ProofNode(
                    DEC, clause=pruned.beta.clause.id, matrix=pruned.matrix.id,
                    pruned=True, children=children,
                ), mats
            return
        matrix: NMatrix = goal.elem
        mats = ctx.mats + (MInst(matrix, holder),)
        sub = Context(ctx.path, ctx.lim, ctx.lemmas, mats, ctx.overlay)
        for clause in matrix.clauses:
            inst = holder.child(matrix.slot, clause.slot, self.uids)
            for children in self.prove_items(self.items(inst, enumerate(inst.template.elems)), sub):
                yield ProofNode(DEC, clause=clause.id, matrix=matrix.id, children=children), mats

    def expand_literal(self, goal: NGoal, ctx: Context) -> Iterator[ProofNode]:
        self.deadline.check()
        origin = (goal.holder.template.id, goal.slot)
        self.stats.attempts[origin] += 1
        s = self.subst
        lit = goal.holder.lit(goal.slot)
        mark = s.mark()

        if self.opts.lemmata:
            for done, source in ctx.lemmas:
                if s.identical_lits(lit, done):
                    yield ProofNode(LEMMA, lit=lit, origin=origin, source=source)
                    break

        for i, (p, _, _) in enumerate(ctx.path):
            if p.pred == -lit.pred and s.unify_lits(lit, p.complement()):
                yield ProofNode(RED, lit=lit, path_index=i, origin=origin)
                s.undo_to(mark)

        if self.opts.regularity and any(s.identical_lits(lit, p) for p, _, _ in ctx.path):
            return
        occurrences = [(h, pos) for _, h, pos in ctx.path] + [(goal.holder, goal.slot)]
        path = ctx.path + ((lit, goal.holder, goal.slot),)
        for entry in self.index.lookup(lit):
            for j, c1 in self.candidates(entry, ctx.mats, ctx.overlay):
                if not is_extension_clause(c1, occurrences):
                    continue
                template = entry.chain[j]
                env = self.fresh_env(template, c1.env)
                c2 = NInst(template, env, c1.parent, c1.slot, next(self.uids))
                bottom = c2
                for lower in entry.chain[j + 1:]:
                    bottom = bottom.child(lower.parent.slot, lower.slot, self.uids)
                if not s.unify_lits(lit, bottom.lit(entry.pos).complement(), count=False):
                    continue
                if ctx.lim <= 0:
                    self.stats.pruned = True
                    s.undo_to(mark)
                    continue
                s.inferences += 1
                key = (c1.parent.uid if c1.parent is not None else None, template.id)
                sub = Context(path, ctx.lim - 1, ctx.lemmas, ctx.mats, {**ctx.overlay, key: c2})
                beta = entry.beta(j, self.opts.beta_order)
                for children in self.prove_items(self.items(c2, beta.items), sub):
                    yield ProofNode(
                        EXT, lit=lit, chain=tuple(c.id for c in entry.chain[j:]), pos=entry.pos,
                        env=env, children=children, origin=origin,
                    )
                s.undo_to(mark)

    # -- driver --------------------------------------------------------------

    def level(self, lim: int) -> Proof | None:
        self.next_var = self.matrix.max_var + 1
        for clause in self.matrix.start_clauses(self.opts.conj):
            env = self.fresh_env(clause)
            start = NInst(clause, env, None, (None, clause.slot), next(self.uids))
            ctx = Context((), lim, (), (), {(None, clause.id): start})
            mark = self.subst.mark()
            for children in self.prove_items(self.items(start, enumerate(clause.elems)), ctx):
                return self.finish(ProofNode(START, clause=clause.id, env=env, children=children))
            self.subst.undo_to(mark)
        return None

    def run(self, logger: RunLogger | None = None) -> SearchResult:
        return deepen(self.level, self.opts, self.stats, self.deadline,
                      lambda: self.subst.inferences, "nonclausal", logger)


def prove_nonclausal(
    matrix: NCMatrix,
    opts: SearchOptions | None = None,
    logger: RunLogger | None = None,
) -> SearchResult:
    """Iterative-deepening nonclausal search; status Theorem, GaveUp or Timeout"""
    return NonclausalSearch(matrix, opts).run(logger)
