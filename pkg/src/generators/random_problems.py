"""
Random problem generator - seeded clause sets, nested ground formulas and
provable first-order chains for property tests and sweep corpora
"""
from __future__ import annotations

import random
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator

from ..formula import And, Atom, Exists, Forall, Formula, Implies, Not, Or
from ..terms import App, Term, Var
from ..tptp import Problem, Statement

GroundLit = tuple[str, bool]
GroundClause = list[GroundLit]


def lit_formula(lit: GroundLit) -> Formula:
    atom = Atom(lit[0])
    return atom if lit[1] else Not(atom)


def clause_formula(clause: GroundClause) -> Formula:
    if len(clause) == 1:
        return lit_formula(clause[0])
    return Or(tuple(lit_formula(l) for l in clause))


def clause_problem(clauses: list[GroundClause], source: str = "random") -> Problem:
    """Clauses as axioms, no conjecture: provable iff the clause set is unsatisfiable"""
    problem = Problem(source=source)
    for i, clause in enumerate(clauses):
        if clause:
            problem.axioms.append(Statement(f"c{i}", "axiom", clause_formula(clause)))
    return problem


def formula_problem(f: Formula, source: str = "random") -> Problem:
    return Problem(axioms=[Statement("f", "axiom", f)], source=source)


def every_path_connected(clauses: list[GroundClause]) -> bool:
    """Path-enumeration oracle: every path through the matrix holds a complementary pair"""
    for path in product(*clauses):
        seen = set(path)
        if not any((name, not sign) in seen for name, sign in seen):
            return False
    return True


def evaluate(f: Formula, assignment: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.pred]
    if isinstance(f, Not):
        return not evaluate(f.body, assignment)
    if isinstance(f, And):
        return all(evaluate(c, assignment) for c in f.items)
    if isinstance(f, Or):
        return any(evaluate(c, assignment) for c in f.items)
    raise TypeError(f"not a ground NNF formula: {f!r}")


def unsatisfiable(f: Formula, atoms: list[str]) -> bool:
    """Truth-table oracle for ground formulas"""
    return not any(
        evaluate(f, dict(zip(atoms, values)))
        for values in product((False, True), repeat=len(atoms))
    )


def all_ground_matrices(
    atoms: list[str],
    max_clauses: int,
    max_len: int,
    distinct: bool = False,
    tautologies: bool = True,
) -> Iterator[list[GroundClause]]:
    """Every matrix of 1..max_clauses clauses of 1..max_len distinct literals, clauses in order.

    With `distinct` no clause repeats within a matrix; without `tautologies`
    clauses holding both p and ~p are left out of the pool.
    """
    lits = [(a, s) for a in atoms for s in (True, False)]
    clause_pool: list[GroundClause] = []
    for size in range(1, max_len + 1):
        for combo in combinations(range(len(lits)), size):
            clause = [lits[i] for i in combo]
            if tautologies or len({name for name, _ in clause}) == size:
                clause_pool.append(clause)
    pick = combinations if distinct else combinations_with_replacement
    for n in range(1, max_clauses + 1):
        for picks in pick(range(len(clause_pool)), n):
            yield [clause_pool[i] for i in picks]


class ProblemGenerator:
    """Seeded source of random problems"""

    def __init__(self, seed: int | None = None) -> None:
        self._rng = random.Random(seed)

    def ground_clauses(self, n_clauses: int = 4, max_len: int = 3, atoms: int = 3) -> list[GroundClause]:
        names = [f"p{i}" for i in range(atoms)]
        out = []
        for _ in range(n_clauses):
            size = self._rng.randint(1, max_len)
            clause: GroundClause = []
            for _ in range(size):
                lit = (self._rng.choice(names), self._rng.random() < 0.5)
                if lit not in clause:
                    clause.append(lit)
            out.append(clause)
        return out

    def nested_formula(self, depth: int = 3, atoms: int = 3, width: int = 3) -> Formula:
        """Random ground ∧/∨ tree with literals at the leaves"""
        names = [f"p{i}" for i in range(atoms)]

        def build(d: int, conj: bool) -> Formula:
            if d == 0 or self._rng.random() < 0.25:
                return lit_formula((self._rng.choice(names), self._rng.random() < 0.5))
            items = tuple(build(d - 1, not conj) for _ in range(self._rng.randint(2, width)))
            return And(items) if conj else Or(items)

        return build(depth, self._rng.random() < 0.5)

    def chain_problem(self, length: int = 3, distractors: int = 2, source: str | None = None) -> Problem:
        """p0(a) and p_i(X) => p_{i+1}(f_i(X)) entail ?[X]: p_length(X); provable at depth length+1"""
        x = Var("X")
        funcs = [self._rng.choice(["f", "g", "h"]) for _ in range(length)]
        problem = Problem(source=source or f"chain{length}")
        problem.axioms.append(Statement("base", "axiom", Atom("p0", (App("a"),))))
        for i, fn in enumerate(funcs):
            step = Implies(Atom(f"p{i}", (x,)), Atom(f"p{i + 1}", (App(fn, (x,)),)))
            problem.axioms.append(Statement(f"step{i}", "axiom", Forall(("X",), step)))
        for j in range(distractors):
            noise = self._distractor(length, j)
            problem.axioms.append(Statement(f"noise{j}", "axiom", noise))
        self._rng.shuffle(problem.axioms)
        problem.conjecture = Statement("goal", "conjecture", Exists(("X",), Atom(f"p{length}", (x,))))
        return problem

    def _distractor(self, length: int, j: int) -> Formula:
        x = Var("X")
        src = f"q{j}" if self._rng.random() < 0.5 else f"p{self._rng.randint(0, length)}"
        dst = f"q{j + 1}"
        arg: Term = App(self._rng.choice(["f", "g", "k"]), (x,))
        return Forall(("X",), Implies(Atom(src, (x,)), Atom(dst, (arg,))))

    def random_provable(self, source: str | None = None) -> Problem:
        return self.chain_problem(self._rng.randint(1, 4), self._rng.randint(0, 3), source)

    def mini_corpus(self, size: int) -> list[Problem]:
        """Mixed sweep corpus: provable chains and random ground clause sets"""
        out = []
        for i in range(size):
            if i % 2 == 0:
                out.append(self.random_provable(source=f"gen{i:03d}"))
            else:
                out.append(clause_problem(self.ground_clauses(), source=f"gen{i:03d}"))
        return out
