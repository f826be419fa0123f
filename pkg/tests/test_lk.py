"""
Tests for LK translation, the S-expression format and the standalone checker
"""
import copy
import random
import unittest
from collections import Counter
from pathlib import Path

import pytest

from src.exceptions import LKFormatError, UnsupportedProofError
from src.lk import (
    ALL_L,
    BOT_L,
    OR_L,
    certify,
    check_lk,
    dumps,
    load,
    loads,
    matrix_formula,
    reformulate,
    save,
)
from src.lk.formulas import AND_L, FREE_PREFIX, RULES, LKProof, show
from src.formula import And, Atom, Forall, Not
from src.generators.random_problems import ProblemGenerator
from src.matrix import LIFTED, PLAIN
from src.prover import CLAUSAL, NONCLAUSAL, ProverSettings, prove_problem
from src.search import SearchOptions
from src.terms import App, Var
from src.tptp import load_problem, parse_problem

CORPUS = Path(__file__).resolve().parent.parent / "src" / "corpus"

QUICK = [
    "nested_axiom.p", "pel01.p", "pel05.p", "pel09.p", "pel15.p", "pel18.p",
    "syllogism.p", "drinker.p", "transitive.p", "chain5.p", "nested.p",
]


def prove(name_or_problem, engine=CLAUSAL, definitional=False, **search):
    problem = name_or_problem
    if isinstance(problem, str):
        problem = load_problem(CORPUS / problem)
    search.setdefault("timeout", 30.0)
    settings = ProverSettings(engine=engine, definitional=definitional, search=SearchOptions(**search))
    attempt = prove_problem(problem, settings)
    assert attempt.result.proved
    return attempt


def certified(attempt):
    return certify(attempt.result.proof, attempt.matrix)


class TestCertification:
    """Connection proofs become checked LK proofs"""

    @pytest.mark.parametrize("name", QUICK)
    def test_clausal_proofs(self, name):
        lk, report = certified(prove(name))
        assert report.ok, report.line()
        assert report.checked == lk.size()
        assert lk.rule_counts()[BOT_L] >= 1

    @pytest.mark.parametrize("name", ["nested_axiom.p", "pel05.p", "nested.p", "pel09.p"])
    def test_nonclausal_proofs(self, name):
        lk, report = certified(prove(name, engine=NONCLAUSAL, beta_order=PLAIN))
        assert report.ok, report.line()

    @pytest.mark.parametrize("name", ["pel05.p", "pel09.p", "nested_axiom.p"])
    def test_lemma_steps_are_inlined(self, name):
        attempt = prove(name, lemmata=True)
        lk, report = certified(attempt)
        assert report.ok, report.line()

    @pytest.mark.parametrize("name", ["pel05.p", "nested.p", "distribute.p"])
    def test_definitional_matrices(self, name):
        _, report = certified(prove(name, definitional=True))
        assert report.ok, report.line()

    def test_end_sequent_is_the_matrix(self):
        attempt = prove("nested_axiom.p")
        lk, _ = certified(attempt)
        assert lk.root.sequent == (matrix_formula(attempt.matrix),)

    def test_unbound_variables_become_free_constants(self):
        problem = parse_problem("fof(c, conjecture, ? [X] : (p(X) | ~ p(X))).")
        lk, report = certified(prove(problem))
        assert report.ok, report.line()
        witnesses = [t for n in lk.root.walk() if n.rule == ALL_L for t in n.witnesses]
        assert witnesses
        assert all(isinstance(t, App) and t.functor.startswith(FREE_PREFIX) for t in witnesses)

    def test_lifted_order_is_not_certifiable(self):
        attempt = prove("nested.p", engine=NONCLAUSAL, beta_order=LIFTED)
        with pytest.raises(UnsupportedProofError):
            reformulate(attempt.result.proof)


class TestSexpr(unittest.TestCase):
    """Writing and reading LK proofs"""

    def setUp(self):
        self.attempt = prove("nested_axiom.p")
        self.lk, _ = certified(self.attempt)

    def test_text_round_trip(self):
        text = dumps(self.lk)
        again = loads(text)
        self.assertEqual(dumps(again), text)
        self.assertEqual(again.size(), self.lk.size())
        self.assertEqual(again.rule_counts(), self.lk.rule_counts())

    def test_reloaded_proof_still_checks(self):
        again = loads(dumps(self.lk))
        report = check_lk(again, (matrix_formula(self.attempt.matrix),))
        self.assertTrue(report.ok, report.line())

    def test_file_round_trip(self):
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            path = save(self.lk, Path(tmp) / "out" / "proof.lk")
            again = load(path)
        self.assertEqual(dumps(again), dumps(self.lk))

    def test_quoted_names(self):
        lk = LKProof(self.lk.root, problem="two words")
        again = loads(dumps(lk))
        self.assertEqual(again.problem, "two words")

    def test_malformed_input(self):
        with self.assertRaises(LKFormatError):
            loads("(lk-proof (node bot-l (seq)")
        with self.assertRaises(LKFormatError):
            loads("(lk-proof (node magic (seq)))")
        with self.assertRaises(LKFormatError):
            loads("(not-a-proof)")

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load("/nonexistent/proof.lk")


class TestChecker(unittest.TestCase):
    """Tampered proofs are rejected"""

    def setUp(self):
        self.attempt = prove("nested_axiom.p")
        self.matrix = self.attempt.matrix

    def fresh(self):
        lk, report = certified(self.attempt)
        self.assertTrue(report.ok)
        return lk

    def first(self, lk, rule):
        return next(n for n in lk.root.walk() if n.rule == rule)

    def test_dropped_premise(self):
        lk = self.fresh()
        node = self.first(lk, OR_L)
        node.premises.pop()
        report = check_lk(lk)
        self.assertFalse(report.ok)
        self.assertEqual(report.rule, OR_L)

    def test_wrong_complementary_atom(self):
        lk = self.fresh()
        node = self.first(lk, BOT_L)
        node.principal = Atom("no_such_atom")
        report = check_lk(lk)
        self.assertFalse(report.ok)
        self.assertEqual(report.rule, BOT_L)
        self.assertIn("negation", report.message)

    def test_open_witness(self):
        lk = self.fresh()
        node = self.first(lk, ALL_L)
        node.witnesses = tuple(Var("Z") for _ in node.witnesses)
        report = check_lk(lk)
        self.assertFalse(report.ok)
        self.assertIn("closed", report.message)

    def test_changed_end_sequent(self):
        lk = self.fresh()
        report = check_lk(lk, (Atom("q"),))
        self.assertFalse(report.ok)
        self.assertEqual(report.checked, 0)

    def test_report_serialises(self):
        _, report = certified(self.attempt)
        data = report.to_dict()
        self.assertTrue(data["ok"])
        self.assertEqual(data["checked"], report.checked)
        self.assertIn("ok", report.line())


def leaves(f):
    """Signed atoms of a formula, shown as text"""
    if isinstance(f, Atom):
        return {show(f)}
    if isinstance(f, Not):
        return {"~" + show(f.body)}
    if isinstance(f, Forall):
        return leaves(f.body)
    return set().union(*(leaves(c) for c in f.items))


# instances of the nested matrix for X = a and X = s(a)
FIRST = frozenset({"~p(s(s(a)))", "p(s(a))", "~q"})
SECOND = frozenset({"~p(s(s(s(a))))", "p(s(s(a)))", "~q"})


class TestContextGrowth(unittest.TestCase):
    """Nested matrices enter the antecedent as the nonclausal proof descends"""

    def setUp(self):
        attempt = prove("nested_axiom.p", engine=NONCLAUSAL, beta_order=PLAIN)
        self.lk, report = certified(attempt)
        self.assertTrue(report.ok, report.line())
        self.top = matrix_formula(attempt.matrix)

    def matrices(self, node):
        return {f for f in node.sequent if isinstance(f, And)}

    def test_instances_of_the_nested_matrix(self):
        found = {frozenset(leaves(f)) for n in self.lk.root.walk() for f in self.matrices(n)}
        self.assertLessEqual({FIRST, SECOND}, found)

    def test_closing_node_sees_both_instances(self):
        closing = [
            n for n in self.lk.root.walk()
            if n.rule == BOT_L and show(n.principal) == "p(s(s(a)))"
        ]
        self.assertTrue(closing)
        for node in closing:
            self.assertLessEqual({FIRST, SECOND}, {frozenset(leaves(f)) for f in self.matrices(node)})

    def test_matrix_sets_grow_along_every_branch(self):
        self.assertEqual(self.matrices(self.lk.root), {self.top})
        sizes = set()

        def descend(node, above):
            mats = self.matrices(node)
            self.assertLessEqual(above, mats)
            sizes.add(len(mats))
            for premise in node.premises:
                descend(premise, mats)

        descend(self.lk.root, {self.top})
        self.assertLessEqual({1, 2, 3}, sizes)


MUTATIONS = ("drop-premise", "drop-formula", "add-formula", "rule", "witness", "index", "swap", "atom", "same")


def applicable(kind, node):
    if kind == "drop-premise":
        return bool(node.premises)
    if kind == "witness":
        return node.rule == ALL_L and bool(node.witnesses)
    if kind == "index":
        return node.rule == AND_L and len(node.principal.items) > 1
    if kind == "swap":
        return node.rule == OR_L and len(node.premises) > 1
    if kind == "atom":
        return node.rule == BOT_L
    return True


def mutate(lk, rng):
    """Change one node of lk in place; True when the change leaves every sequent and rule intact"""
    nodes = lk.nodes()
    while True:
        kind = rng.choice(MUTATIONS)
        targets = [n for n in nodes if applicable(kind, n)]
        if targets:
            break
    node = rng.choice(targets)
    if kind == "drop-premise":
        node.premises.pop(rng.randrange(len(node.premises)))
    elif kind == "drop-formula":
        i = rng.randrange(len(node.sequent))
        node.sequent = node.sequent[:i] + node.sequent[i + 1:]
    elif kind == "add-formula":
        node.sequent = node.sequent + (Atom("mutant_extra"),)
    elif kind == "rule":
        node.rule = rng.choice([r for r in RULES if r != node.rule])
    elif kind == "witness":
        witnesses = list(node.witnesses)
        witnesses[rng.randrange(len(witnesses))] = Var("MutantOpen")
        node.witnesses = tuple(witnesses)
    elif kind == "index":
        items = node.principal.items
        old = node.index
        node.index = rng.choice([i for i in range(len(items)) if i != old])
        return items[node.index] == items[old]
    elif kind == "swap":
        i, j = rng.sample(range(len(node.premises)), 2)
        node.premises[i], node.premises[j] = node.premises[j], node.premises[i]
        return node.principal.items[i] == node.principal.items[j]
    elif kind == "atom":
        node.principal = Atom("mutant_atom") if rng.random() < 0.5 else Not(node.principal)
    else:
        node.sequent = tuple(node.sequent)
        return True
    return False


class TestMutations:
    """Single-node changes to certified proofs"""

    @pytest.fixture(scope="class")
    def proofs(self):
        out = []
        for name, engine in [("nested_axiom.p", CLAUSAL), ("pel05.p", CLAUSAL), ("syllogism.p", CLAUSAL),
                             ("nested_axiom.p", NONCLAUSAL), ("nested.p", NONCLAUSAL)]:
            lk, report = certified(prove(name, engine=engine, beta_order=PLAIN))
            assert report.ok, report.line()
            out.append(lk)
        return out

    def test_random_mutants_are_rejected(self, proofs):
        changed = kept = 0
        for seed in range(1300):
            rng = random.Random(seed)
            original = proofs[seed % len(proofs)]
            mutant = copy.deepcopy(original)
            identity = mutate(mutant, rng)
            report = check_lk(mutant, original.root.sequent)
            if identity:
                assert report.ok, (seed, report.line())
                kept += 1
            else:
                assert not report.ok, seed
                changed += 1
        assert changed >= 1000
        assert kept > 0


class TestRandomCertification:
    """Proofs of generated problems certify"""

    def test_generated_problems(self):
        gen = ProblemGenerator(seed=2024)
        engines = Counter()
        for i in range(200):
            problem = gen.random_provable(source=f"gen{i:03d}")
            engine = CLAUSAL if i % 2 == 0 else NONCLAUSAL
            attempt = prove(problem, engine=engine)
            lk, report = certified(attempt)
            assert report.ok, (i, report.line())
            assert lk.root.sequent == (matrix_formula(attempt.matrix),)
            engines[engine] += 1
        assert engines == {CLAUSAL: 100, NONCLAUSAL: 100}


if __name__ == "__main__":
    unittest.main()
