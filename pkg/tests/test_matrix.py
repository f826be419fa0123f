"""
Tests for clausal and nonclausal matrices and β-clauses
"""
import re
import unittest
from pathlib import Path

from src.formula import And, Atom, Not, Or
from src.matrix import (
    DEFINITION_PREFIX,
    DEFINITIONAL,
    LIFTED,
    PLAIN,
    STANDARD,
    ContraIndex,
    NCIndex,
    NMatrix,
    alpha_related,
    beta_clause,
    build_nc_matrix,
    clausify,
    contains,
    contra_key,
    dump_beta,
    format_lit,
    is_extension_clause,
    tidy_clause,
)
from src.preprocess import intern_symbols, preprocess
from src.symbols import SymTable
from src.terms import Lit, Var
from src.tptp import load_problem

CORPUS = Path(__file__).resolve().parent.parent / "src" / "corpus"


def plain_vars(text: str) -> str:
    return re.sub(r"X\d+", "X", text)


def clause_sets(matrix) -> set[frozenset[str]]:
    return {
        frozenset(plain_vars(format_lit(l, matrix.syms)) for l in c.lits)
        for c in matrix.clauses
    }


def nested_axiom():
    return preprocess(load_problem(CORPUS / "nested_axiom.p"))


class TestClausal(unittest.TestCase):
    """Standard and definitional clausification"""

    def test_nested_axiom_clauses(self):
        prepared = nested_axiom()
        matrix = clausify(prepared.formula, STANDARD, prepared.syms, prepared.marker)
        self.assertEqual(clause_sets(matrix), {
            frozenset({"q"}),
            frozenset({"p(a)"}),
            frozenset({"~p(X)", "~p(s(s(X)))"}),
            frozenset({"~p(X)", "p(s(X))", "~q"}),
        })
        self.assertEqual([c.index for c in matrix.clauses], list(range(4)))

    def test_dump_brackets(self):
        prepared = nested_axiom()
        matrix = clausify(prepared.formula, STANDARD, prepared.syms, prepared.marker)
        dump = matrix.dump()
        self.assertTrue(dump.startswith("[[") and dump.endswith("]]"))
        self.assertIn("[q]", dump)
        self.assertIn("[p(a)]", dump)

    def test_clause_variables(self):
        prepared = nested_axiom()
        matrix = clausify(prepared.formula, STANDARD, prepared.syms, prepared.marker)
        for clause in matrix.clauses:
            has_vars = any(l.args and "X" in repr(l) for l in clause.lits)
            if clause.vars:
                self.assertTrue(has_vars)
        self.assertGreater(matrix.max_var, 0)

    def test_conjecture_clauses_flagged(self):
        prepared = preprocess(load_problem(CORPUS / "syllogism.p"))
        matrix = clausify(prepared.formula, STANDARD, prepared.syms, prepared.marker)
        flagged = matrix.start_clauses(conj=True)
        self.assertTrue(flagged)
        self.assertTrue(all(c.from_conjecture for c in flagged))
        self.assertEqual(len(matrix.start_clauses(conj=False)), len(matrix.clauses))
        for clause in matrix.clauses:
            self.assertFalse(any(l.root == prepared.marker for l in clause.lits))

    def test_definitional_introduces_names(self):
        syms = SymTable()
        f = intern_symbols(Or((And((Atom("a"), Atom("b"))), And((Atom("c"), Atom("d"))))), syms)
        standard = clausify(f, STANDARD, syms)
        definitional = clausify(f, DEFINITIONAL, syms)
        self.assertEqual(len(standard.clauses), 4)
        self.assertEqual(len(definitional.clauses), 5)
        names = {syms.name(l.root) for c in definitional.clauses for l in c.lits}
        self.assertEqual(len([n for n in names if n.startswith(DEFINITION_PREFIX)]), 2)

    def test_definition_names_are_consistent(self):
        def names(text_atoms):
            syms = SymTable()
            a, b = text_atoms
            f = intern_symbols(Or((Atom("z"), And((Atom(a), Atom(b))))), syms)
            m = clausify(f, DEFINITIONAL, syms)
            return {syms.name(l.root) for c in m.clauses for l in c.lits if syms.name(l.root).startswith("def_")}

        self.assertEqual(names(("a", "b")), names(("a", "b")))
        self.assertNotEqual(names(("a", "b")), names(("a", "c")))

    def test_biconditional_clauses_are_tidy(self):
        prepared = preprocess(load_problem(CORPUS / "pel12.p"))
        for mode in (STANDARD, DEFINITIONAL):
            matrix = clausify(prepared.formula, mode, prepared.syms, prepared.marker)
            self.assertTrue(matrix.clauses)
            for clause in matrix.clauses:
                self.assertEqual(len(set(clause.lits)), len(clause.lits), clause)
                self.assertFalse(any(l.complement() in clause.lits for l in clause.lits), clause)
            self.assertEqual([c.index for c in matrix.clauses], list(range(len(matrix.clauses))))

    def test_tidy_clause(self):
        p = Lit(1, (Var(1),))
        q = Lit(2)
        self.assertEqual(tidy_clause([q, p, q, p]), [q, p])
        self.assertIsNone(tidy_clause([p, q, p.complement()]))
        self.assertEqual(tidy_clause([p, Lit(-1, (Var(2),))]), [p, Lit(-1, (Var(2),))])

    def test_tautology_dropped(self):
        syms = SymTable()
        f = intern_symbols(And((Or((Atom("a"), Atom("b"), Atom("a"))), Or((Atom("c"), Atom("c"))))), syms)
        self.assertEqual([len(c) for c in clausify(f, STANDARD, syms).clauses], [2, 1])
        taut = intern_symbols(And((Atom("c"), Or((Atom("a"), Atom("b"), Not(Atom("a")))))), syms)
        self.assertEqual([len(c) for c in clausify(taut, STANDARD, syms).clauses], [1])

    def test_bad_mode(self):
        with self.assertRaises(ValueError):
            clausify(Atom(1), "bogus")


class TestContraIndex(unittest.TestCase):
    """Contrapositive lookup"""

    def test_lookup_by_complement(self):
        prepared = nested_axiom()
        matrix = clausify(prepared.formula, STANDARD, prepared.syms, prepared.marker)
        index = ContraIndex(matrix)
        q = prepared.syms.lookup("pred", "q", 0)
        hits = index.lookup(Lit(q))
        self.assertEqual(len(hits), 1)
        self.assertEqual(hits[0].lit, Lit(-q))
        self.assertEqual(len(hits[0].rest), 2)
        self.assertEqual(sum(1 for _ in index), sum(len(c) for c in matrix.clauses))

    def test_contra_key_ignores_variable_numbers(self):
        syms = SymTable()
        p = syms.pred("p", 1)
        a = contra_key((Lit(-p, (Var(3),)), Lit(p, (Var(4),))), 1, syms)
        b = contra_key((Lit(-p, (Var(10),)), Lit(p, (Var(12),))), 1, syms)
        self.assertEqual(a, b)
        self.assertTrue(a.endswith("@1"))


class TestNonclausal(unittest.TestCase):
    """Nested matrices"""

    def test_nested_axiom_structure(self):
        prepared = nested_axiom()
        matrix = build_nc_matrix(prepared.formula, prepared.syms, prepared.marker)
        self.assertEqual(len(matrix.root.clauses), 3)
        nested = [e for c in matrix.root.clauses for e in c.elems if isinstance(e, NMatrix)]
        self.assertEqual(len(nested), 1)
        self.assertEqual(len(nested[0].clauses), 2)
        lits = sorted(plain_vars(format_lit(l, prepared.syms)) for l, _, _ in matrix.literals())
        self.assertEqual(lits, sorted(["q", "p(a)", "~p(X)", "~p(s(s(X)))", "p(s(X))", "~q"]))

    def test_variables_belong_to_binding_clause(self):
        prepared = nested_axiom()
        matrix = build_nc_matrix(prepared.formula, prepared.syms, prepared.marker)
        owner = [c for c in matrix.root.clauses if c.vars]
        self.assertEqual(len(owner), 1)
        self.assertEqual(owner[0].subtree_vars, owner[0].vars)
        self.assertEqual(matrix.max_var, max(owner[0].vars))


class NestedChain:
    """C = [M1 X], X = [[C1 Z]], Z = [[l M2 M3]] with two-clause matrices M1, C1, M2, M3"""

    def __init__(self):
        def pair(name):
            return And((Atom(name + "1"), Atom(name + "2")))

        self.syms = SymTable()
        inner = Or((Atom("l"), pair("m"), pair("n")))
        middle = Or((pair("c"), And((inner,))))
        formula = intern_symbols(Or((pair("k"), And((middle,)))), self.syms)
        self.matrix = build_nc_matrix(formula, self.syms)
        l_sym = self.syms.lookup("pred", "l", 0)
        (self.entry,) = [e for e in NCIndex(self.matrix) if e.lit.pred == l_sym]

    def strings(self):
        m1, c1, m2, m3 = "[[k1] [k2]]", "[[c1] [c2]]", "[[m1] [m2]]", "[[n1] [n2]]"
        e = "[" + m2 + " " + m3 + "]"
        d = "[" + c1 + " [" + e + "]]"
        d_lifted = "[[" + e + "] " + c1 + "]"
        plain = "[" + m1 + " [" + d + "]]"
        lifted = "[[" + d_lifted + "] " + m1 + "]"
        return plain, lifted


class TestBetaClauses(unittest.TestCase):
    """β-clauses under both clause orders"""

    def setUp(self):
        self.nc = NestedChain()

    def test_chain_runs_top_down(self):
        chain = self.nc.entry.chain
        self.assertEqual(len(chain), 3)
        self.assertIs(chain[0], self.nc.matrix.root.clauses[0])
        self.assertEqual(self.nc.entry.pos, 0)

    def test_plain_order(self):
        plain, _ = self.nc.strings()
        self.assertEqual(dump_beta(self.nc.entry.beta(0, PLAIN), self.nc.syms), plain)

    def test_lifted_order(self):
        _, lifted = self.nc.strings()
        self.assertEqual(dump_beta(self.nc.entry.beta(0, LIFTED), self.nc.syms), lifted)

    def test_innermost_level_drops_the_literal(self):
        beta = self.nc.entry.beta(2)
        self.assertEqual(dump_beta(beta, self.nc.syms), "[[[m1] [m2]] [[n1] [n2]]]")
        self.assertIs(beta_clause(self.nc.entry.chain[2:], 0).clause, self.nc.entry.chain[2])

    def test_bad_position(self):
        with self.assertRaises(IndexError):
            beta_clause(self.nc.entry.chain[2:], 1)

    def test_beta_is_cached(self):
        self.assertIs(self.nc.entry.beta(0, PLAIN), self.nc.entry.beta(0, PLAIN))
        self.assertIsNot(self.nc.entry.beta(0, PLAIN), self.nc.entry.beta(0, LIFTED))


class TestClauseRelations(unittest.TestCase):
    """α-relation, containment, e-clauses"""

    def setUp(self):
        self.nc = NestedChain()
        top, middle, inner = self.nc.entry.chain
        self.top, self.middle, self.inner = top, middle, inner
        self.k_first = top.elems[0].clauses[0]
        self.c_first = middle.elems[0].clauses[0]
        self.m_first, self.m_second = inner.elems[1].clauses

    def test_beta_related_clauses(self):
        self.assertFalse(alpha_related(self.c_first, self.inner, 0))
        self.assertFalse(alpha_related(self.k_first, self.inner, 0))

    def test_alpha_related_clauses(self):
        self.assertTrue(alpha_related(self.m_first, self.m_second, 0))

    def test_separate_top_level_clauses(self):
        prepared = nested_axiom()
        matrix = build_nc_matrix(prepared.formula, prepared.syms, prepared.marker)
        a, b = matrix.root.clauses[:2]
        self.assertTrue(alpha_related(a, b, 0))

    def test_containment(self):
        self.assertTrue(contains(self.top, self.inner))
        self.assertTrue(contains(self.inner, self.inner))
        self.assertFalse(contains(self.inner, self.top))

    def test_extension_clause(self):
        self.assertTrue(is_extension_clause(self.top, [(self.inner, 0)]))
        self.assertTrue(is_extension_clause(self.m_first, [(self.m_second, 0)]))
        self.assertFalse(is_extension_clause(self.c_first, [(self.inner, 0)]))


if __name__ == "__main__":
    unittest.main()
