"""
Clausal connection search with iterative deepening.

Two backends walk the same search tree in the same order:

    stream  nested generators; each literal yields its closed subproofs lazily
    cps     success/failure continuations driven by a trampoline

For every literal the alternatives are: a lemma (when enabled), reductions
against the path from its oldest literal to its newest, then extensions in
contrapositive index order. Extensions need lim > 0; a child goal gets lim-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterable, Iterator, Sequence

from ..matrix import ClausalMatrix, Contra, ContraIndex
from ..proof import EXT, LEMMA, RED, START, Proof, ProofNode
from ..run_log import RunLogger
from ..terms import Lit, Var, rename_lit
from ..unify import Subst
from .base import CPS, STREAM, Deadline, SearchOptions, SearchResult, SearchStats, deepen

Goal = tuple[Lit, tuple[int, int]]
Lemmas = tuple[tuple[Lit, ProofNode], ...]

# order_hook(lit, path, entries) -> entries in the order to try them
OrderHook = Callable[[Lit, tuple[Lit, ...], list[Contra]], list[Contra]]

CHECK_EVERY = 256


@dataclass(frozen=True)
class Step:
    """One way to close a literal"""
    rule: str
    path_index: int | None = None
    contra: Contra | None = None
    source: ProofNode | None = None


def restricted_backtracking(seq: Iterable, cut: bool) -> Iterable:
    """With cut only the first closing alternative of a literal is kept"""
    return islice(seq, 1) if cut else seq


class ClausalSearch:
    """State shared by one run over a clausal matrix"""

    def __init__(
        self,
        matrix: ClausalMatrix,
        opts: SearchOptions | None = None,
        order_hook: OrderHook | None = None,
        advisor=None,
        deadline: Deadline | None = None,
    ) -> None:
        self.matrix = matrix
        self.opts = opts or SearchOptions()
        self.index = ContraIndex(matrix)
        self.subst = Subst(matrix.max_var + 1)
        self.stats = SearchStats()
        self.order_hook = order_hook
        self.advisor = advisor
        self.deadline = deadline or Deadline(self.opts.timeout)
        self.next_var = matrix.max_var + 1
        self._ticks = 0

    # -- shared pieces -----------------------------------------------------

    def fresh_copy(self, clause_index: int) -> tuple[dict[int, int], tuple[Lit, ...]]:
        clause = self.matrix.clauses[clause_index]
        env = {}
        for v in clause.vars:
            env[v] = self.next_var
            self.next_var += 1
        mapping = {v: Var(c) for v, c in env.items()}
        return env, tuple(rename_lit(l, mapping) for l in clause.lits)

    def start_goals(self, clause_index: int) -> tuple[dict[int, int], list[Goal]]:
        env, lits = self.fresh_copy(clause_index)
        return env, [(l, (clause_index, i)) for i, l in enumerate(lits)]

    def tick(self) -> None:
        self._ticks += 1
        if self._ticks % CHECK_EVERY == 0:
            self.deadline.check()

    def steps(self, lit: Lit, path: tuple[Lit, ...], lemmas: Lemmas, lim: int) -> list[Step]:
        """Candidate steps for lit in the order they are tried"""
        s = self.subst
        out: list[Step] = []
        if self.opts.lemmata:
            for done, node in lemmas:
                if s.identical_lits(lit, done):
                    out.append(Step(LEMMA, source=node))
                    break
        out.extend(Step(RED, path_index=i) for i, p in enumerate(path) if p.pred == -lit.pred)
        if self.opts.regularity and any(s.identical_lits(lit, p) for p in path):
            entries: list[Contra] = []
        else:
            entries = list(self.index.lookup(lit))
            if self.order_hook is not None:
                entries = self.order_hook(lit, path, entries)
        out.extend(Step(EXT, contra=c) for c in entries)
        if self.advisor is not None:
            out = self.advisor.order(self, lit, path, lim, out)
        return out

    def begin_literal(self, origin: tuple[int, int]) -> None:
        self.deadline.check()
        self.stats.attempts[origin] += 1

    def try_extension(self, lit: Lit, contra: Contra, lim: int):
        """Copy, connect and check the depth limit; None when the step is impossible"""
        env, lits = self.fresh_copy(contra.clause)
        mark = self.subst.mark()
        if not self.subst.unify_lits(lit, lits[contra.pos].complement(), count=False):
            return None
        if lim <= 0:
            self.stats.pruned = True
            self.subst.undo_to(mark)
            return None
        self.subst.inferences += 1
        rest = [(l, (contra.clause, i)) for i, l in enumerate(lits) if i != contra.pos]
        return env, rest

    def finish(self, root: ProofNode) -> Proof:
        for i, node in enumerate(root.walk()):
            node.order = i
        return Proof(root, "clausal", dict(self.subst.bindings()))

    # -- stream backend ----------------------------------------------------

    def expand_literal(
        self, lit: Lit, origin: tuple[int, int], path: tuple[Lit, ...], lim: int, lemmas: Lemmas
    ) -> Iterator[ProofNode]:
        """Closed subproofs of lit, lazily; bindings of each stay in place until it is resumed"""
        self.begin_literal(origin)
        s = self.subst
        mark = s.mark()
        for step in self.steps(lit, path, lemmas, lim):
            if step.rule == LEMMA:
                yield ProofNode(LEMMA, lit=lit, origin=origin, source=step.source)
            elif step.rule == RED:
                if s.unify_lits(lit, path[step.path_index].complement()):
                    yield ProofNode(RED, lit=lit, path_index=step.path_index, origin=origin)
                    s.undo_to(mark)
            else:
                tried = self.try_extension(lit, step.contra, lim)
                if tried is None:
                    continue
                env, rest = tried
                for children in self.prove_goals(rest, path + (lit,), lim - 1, lemmas):
                    yield ProofNode(
                        EXT, lit=lit, clause=step.contra.clause, pos=step.contra.pos,
                        env=env, children=children, origin=origin,
                    )
                s.undo_to(mark)

    def prove_goals(
        self, goals: Sequence[Goal], path: tuple[Lit, ...], lim: int, lemmas: Lemmas, i: int = 0
    ) -> Iterator[list[ProofNode]]:
        if i == len(goals):
            yield []
            return
        lit, origin = goals[i]
        alternatives = restricted_backtracking(
            self.expand_literal(lit, origin, path, lim, lemmas), self.opts.cut
        )
        for node in alternatives:
            more = lemmas + ((lit, node),) if self.opts.lemmata else lemmas
            for rest in self.prove_goals(goals, path, lim, more, i + 1):
                yield [node] + rest

    def level_stream(self, lim: int) -> Proof | None:
        self.next_var = self.matrix.max_var + 1
        for clause in self.matrix.start_clauses(self.opts.conj):
            env, goals = self.start_goals(clause.index)
            mark = self.subst.mark()
            for children in self.prove_goals(goals, (), lim, ()):
                return self.finish(ProofNode(START, clause=clause.index, env=env, children=children))
            self.subst.undo_to(mark)
        return None

    # -- continuation backend ----------------------------------------------

    def literal_k(self, lit, origin, path, lim, lemmas, sk, fk):
        """Work for one literal; returns the next thunk"""
        self.begin_literal(origin)
        s = self.subst
        mark = s.mark()
        steps = self.steps(lit, path, lemmas, lim)
        cut = self.opts.cut

        def attempt(k: int):
            def run():
                s.undo_to(mark)
                if k == len(steps):
                    return fk
                step = steps[k]
                next_fk = attempt(k + 1)
                after = fk if cut else next_fk
                if step.rule == LEMMA:
                    node = ProofNode(LEMMA, lit=lit, origin=origin, source=step.source)
                    return lambda: sk(node, after)
                if step.rule == RED:
                    if not s.unify_lits(lit, path[step.path_index].complement()):
                        return next_fk
                    node = ProofNode(RED, lit=lit, path_index=step.path_index, origin=origin)
                    return lambda: sk(node, after)
                tried = self.try_extension(lit, step.contra, lim)
                if tried is None:
                    return next_fk
                env, rest = tried

                def closed(children, inner_fk):
                    node = ProofNode(
                        EXT, lit=lit, clause=step.contra.clause, pos=step.contra.pos,
                        env=env, children=children, origin=origin,
                    )
                    return lambda: sk(node, fk if cut else inner_fk)

                return lambda: self.goals_k(rest, 0, path + (lit,), lim - 1, lemmas, (), closed, next_fk)
            return run

        return attempt(0)

    def goals_k(self, goals, i, path, lim, lemmas, acc, sk, fk):
        if i == len(goals):
            return lambda: sk(list(acc), fk)
        lit, origin = goals[i]

        def closed(node, fk2):
            more = lemmas + ((lit, node),) if self.opts.lemmata else lemmas
            return lambda: self.goals_k(goals, i + 1, path, lim, more, acc + (node,), sk, fk2)

        return self.literal_k(lit, origin, path, lim, lemmas, closed, fk)

    def level_cps(self, lim: int) -> Proof | None:
        self.next_var = self.matrix.max_var + 1
        found: list[Proof] = []
        for clause in self.matrix.start_clauses(self.opts.conj):
            env, goals = self.start_goals(clause.index)
            mark = self.subst.mark()

            def done(children, fk, clause=clause, env=env):
                found.append(self.finish(ProofNode(START, clause=clause.index, env=env, children=children)))
                return None

            thunk = lambda: self.goals_k(goals, 0, (), lim, (), (), done, lambda: None)
            while thunk is not None:
                self.tick()
                thunk = thunk()
            if found:
                return found[0]
            self.subst.undo_to(mark)
        return None

    # -- driver --------------------------------------------------------------

    def run(self, logger: RunLogger | None = None) -> SearchResult:
        if self.opts.backend not in (STREAM, CPS):
            raise ValueError(f"Unknown backend: {self.opts.backend}")
        level = self.level_stream if self.opts.backend == STREAM else self.level_cps
        return deepen(level, self.opts, self.stats, self.deadline,
                      lambda: self.subst.inferences, "clausal", logger)


def prove_clausal(
    matrix: ClausalMatrix,
    opts: SearchOptions | None = None,
    logger: RunLogger | None = None,
    order_hook: OrderHook | None = None,
    advisor=None,
) -> SearchResult:
    """Iterative-deepening clausal search; status Theorem, GaveUp or Timeout"""
    return ClausalSearch(matrix, opts, order_hook, advisor).run(logger)
