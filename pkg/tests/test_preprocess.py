"""
Tests for the preprocessing pipeline and Skolemisation
"""
import unittest
from pathlib import Path

import pytest

from src.formula import BOTTOM, TOP, And, Atom, Exists, Forall, Iff, Implies, Not, Or
from src.preprocess import (
    combine,
    equality_axioms,
    intern_symbols,
    miniscope,
    normalize,
    path_count,
    preprocess,
    rectify,
    reorder,
    to_nnf,
)
from src.skolem import phi_family, skolem_growth, skolem_terms, skolemize_consistent
from src.symbols import FUNC, PRED, SymTable
from src.terms import Var
from src.tptp import load_problem, parse_problem

CORPUS = Path(__file__).resolve().parent.parent / "src" / "corpus"

p, q, r = Atom("p"), Atom("q"), Atom("r")


def px(name="X"):
    return Atom("p", (Var(name),))


def nodes(f):
    yield f
    if isinstance(f, (And, Or)):
        for c in f.items:
            yield from nodes(c)
    elif isinstance(f, (Implies, Iff)):
        yield from nodes(f.left)
        yield from nodes(f.right)
    elif isinstance(f, (Not, Forall, Exists)):
        yield from nodes(f.body)


class TestCombine(unittest.TestCase):
    """Axioms and conjecture into one formula"""

    def test_conjecture_only(self):
        problem = parse_problem("fof(c, conjecture, p | ~ p).")
        self.assertEqual(combine(problem), Or((p, Not(p))))

    def test_axioms_get_the_marker(self):
        problem = parse_problem("fof(a, axiom, p).\nfof(b, axiom, q).\nfof(c, conjecture, r).")
        marker = Atom("#")
        self.assertEqual(combine(problem), Implies(And((And((p, q)), marker)), And((r, marker))))

    def test_missing_conjecture_is_false(self):
        problem = parse_problem("fof(a, axiom, p).")
        self.assertEqual(combine(problem).right, And((BOTTOM, Atom("#"))))


class TestEqualityAxioms(unittest.TestCase):
    """Reflexivity, symmetry, transitivity and congruence"""

    def test_counts_for_function_congruence(self):
        syms = SymTable()
        f = intern_symbols(combine(load_problem(CORPUS / "eq_fun.p")), syms)
        # refl, sym, trans and one congruence axiom for f/1
        self.assertEqual(len(equality_axioms(f, syms)), 4)

    def test_predicate_congruence(self):
        syms = SymTable()
        problem = parse_problem("fof(a, axiom, a = b & s(a, a)).\nfof(c, conjecture, s(b, b)).")
        f = intern_symbols(combine(problem), syms)
        axioms = equality_axioms(f, syms)
        self.assertEqual(len(axioms), 4)
        congruence = axioms[-1]
        self.assertIsInstance(congruence, Forall)
        self.assertEqual(len(congruence.vars), 4)

    def test_no_equality_no_axioms(self):
        syms = SymTable()
        f = intern_symbols(combine(load_problem(CORPUS / "pel01.p")), syms)
        self.assertEqual(equality_axioms(f, syms), [])

    def test_switch_in_pipeline(self):
        problem = load_problem(CORPUS / "eq_sym.p")
        with_axioms = preprocess(problem, eq_axioms=True)
        without = preprocess(problem, eq_axioms=False)
        self.assertGreater(path_count(with_axioms.formula), path_count(without.formula))


class TestNormalForm(unittest.TestCase):
    """NNF, miniscoping, reordering, rectification"""

    def test_negated_implication(self):
        self.assertEqual(to_nnf(Implies(p, q), negate=True), And((p, Not(q))))

    def test_double_negation(self):
        self.assertEqual(to_nnf(Not(Not(p))), p)

    def test_constants_fold(self):
        self.assertEqual(to_nnf(And((TOP, p))), p)
        self.assertEqual(to_nnf(Or((TOP, p))), TOP)
        self.assertEqual(to_nnf(And((BOTTOM, p)), negate=True), TOP)

    def test_quantifier_duality(self):
        self.assertEqual(to_nnf(Forall(("X",), px()), negate=True), Exists(("X",), Not(px())))

    def test_iff_expands_both_ways(self):
        nnf = to_nnf(Iff(p, q))
        self.assertEqual(nnf, And((Or((Not(p), q)), Or((p, Not(q))))))

    def test_miniscope_splits_conjunctions(self):
        self.assertEqual(
            miniscope(Forall(("X",), And((px(), q)))),
            And((Forall(("X",), px()), q)),
        )

    def test_miniscope_narrows_disjunctions(self):
        self.assertEqual(
            miniscope(Forall(("X",), Or((px(), q)))),
            Or((Forall(("X",), px()), q)),
        )

    def test_miniscope_keeps_shared_scope(self):
        both = And((px(), Atom("q", (Var("X"),))))
        self.assertEqual(miniscope(Exists(("X",), both)), Exists(("X",), both))

    def test_path_count(self):
        self.assertEqual(path_count(Or((And((p, q)), r))), 2)
        self.assertEqual(path_count(And((Or((p, q)), Or((p, q, r))))), 2)
        self.assertEqual(path_count(Forall(("X",), px())), 1)

    def test_reorder_is_stable(self):
        f = Or((And((p, q)), r, And((q, r)), p))
        self.assertEqual(reorder(f), Or((r, p, And((p, q)), And((q, r)))))

    def test_rectify_numbers_binders(self):
        f = And((Forall(("X", "Y"), Atom("s", (Var("X"), Var("Y")))), Forall(("X",), px())))
        out = rectify(f)
        self.assertEqual(out, And((
            Forall((1,), Forall((2,), Atom("s", (Var(1), Var(2))))),
            Forall((3,), Atom("p", (Var(3),))),
        )))

    def test_pipeline_output_shape(self):
        for path in sorted(CORPUS.glob("*.p")):
            prepared = preprocess(load_problem(path))
            for node in nodes(prepared.formula):
                assert not isinstance(node, (Implies, Iff, Exists)), path.name
                if isinstance(node, Not):
                    assert isinstance(node.body, Atom), path.name
                if isinstance(node, Forall):
                    assert all(isinstance(v, int) for v in node.vars), path.name

    def test_refutation_without_conjecture_keeps_axioms(self):
        prepared = preprocess(load_problem(CORPUS / "nested_axiom.p"))
        marker = prepared.marker
        self.assertIsNotNone(marker)
        self.assertIsInstance(prepared.formula, And)
        self.assertIn(Atom(marker), prepared.formula.items)

    def test_normalize_negates(self):
        syms = SymTable()
        f = intern_symbols(parse_problem("fof(c, conjecture, p => p).").conjecture.formula, syms)
        n = normalize(f)
        self.assertIsInstance(n, And)
        self.assertEqual(len(n.items), 2)


def skolem_names(text: str) -> list[str]:
    return [t.name for t in preprocess(parse_problem(text)).skolem_terms]


class TestSkolem:
    """Consistent epsilon-Skolemisation"""

    def test_alpha_variants_share_names(self):
        a = skolem_names("fof(a, axiom, ? [X] : p(X)).")
        b = skolem_names("fof(z, axiom, r).\nfof(a, axiom, ? [Y] : p(Y)).")
        assert len(a) == 1
        assert a == b

    def test_different_bodies_differ(self):
        a = skolem_names("fof(a, axiom, ? [X] : p(X)).")
        b = skolem_names("fof(a, axiom, ? [X] : q(X)).")
        assert a != b

    def test_dependency_on_universals(self):
        prepared = preprocess(parse_problem("fof(a, axiom, ! [X] : ? [Y] : r(X, Y))."))
        (term,) = prepared.skolem_terms
        assert len(term.free_vars) == 1
        assert prepared.syms.arity(term.symbol) == 1
        assert prepared.syms.kind(term.symbol) == FUNC
        assert term.name.startswith("esk_")
        assert skolem_names("fof(a, axiom, ! [U] : ? [V] : r(U, V)).") == [term.name]

    def test_terms_listed_outermost_first(self):
        syms = SymTable()
        f = rectify(to_nnf(intern_symbols(
            parse_problem("fof(a, axiom, ? [X] : (p(X) & ? [Y] : s(X, Y))).").axioms[0].formula, syms,
        )))
        terms = skolem_terms(f, syms)
        assert [t.var for t in terms] == [1, 2]

    def test_result_has_no_existentials(self):
        syms = SymTable()
        f = rectify(to_nnf(intern_symbols(phi_family(3), syms)))
        result = skolemize_consistent(f, syms)
        assert not any(isinstance(n, Exists) for n in nodes(result.formula))
        assert result.output_size < result.input_size ** 2
        assert syms.lookup(PRED, "p", 2) is not None

    def test_naive_growth_against_consistent(self):
        rows = [skolem_growth(n) for n in range(1, 13)]
        for before, after in zip(rows, rows[1:]):
            assert after["naive_inside_out"] > 2 * before["naive_inside_out"]
        for row in rows:
            assert row["consistent"] < row["bound"]
            assert row["bound"] == row["delta"] ** 2

    @pytest.mark.parametrize("n", [0, 1, 4])
    def test_phi_family_shape(self, n):
        f = phi_family(n)
        assert isinstance(f, Forall)
        exists = [node for node in nodes(f) if isinstance(node, Exists)]
        assert len(exists) == n


if __name__ == "__main__":
    unittest.main()
