"""
Tests for the trail substitution and the persistent substitution
"""
import random
import unittest

import pytest

from src.exceptions import StaleMarkError
from src.terms import App, Lit, Var
from src.unify import PSubst, Subst

FUNCTORS = [("a", 0), ("b", 0), ("f", 1), ("g", 2)]


def random_term(rng: random.Random, n_vars: int, depth: int = 3):
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.5:
            return Var(rng.randrange(n_vars))
        return App(rng.choice(["a", "b"]))
    name, arity = rng.choice(FUNCTORS)
    return App(name, tuple(random_term(rng, n_vars, depth - 1) for _ in range(arity)))


def robinson(pairs):
    """Textbook unification on fully substituted terms; most general unifier or None"""
    sigma: dict = {}

    def walk(t):
        if isinstance(t, Var):
            return walk(sigma[t.name]) if t.name in sigma else t
        return App(t.functor, tuple(walk(a) for a in t.args))

    def occurs(v, t):
        return t.name == v if isinstance(t, Var) else any(occurs(v, a) for a in t.args)

    work = list(pairs)
    while work:
        x, y = work.pop()
        x, y = walk(x), walk(y)
        if x == y:
            continue
        if isinstance(y, Var) and not isinstance(x, Var):
            x, y = y, x
        if isinstance(x, Var):
            if occurs(x.name, y):
                return None
            sigma[x.name] = y
        elif x.functor != y.functor or len(x.args) != len(y.args):
            return None
        else:
            work.extend(zip(x.args, y.args))
    return walk


def canonical(t, names=None):
    """Term with variables renamed by first occurrence"""
    names = {} if names is None else names
    if isinstance(t, Var):
        return Var(names.setdefault(t.name, len(names)))
    return App(t.functor, tuple(canonical(a, names) for a in t.args))


class TestSubst(unittest.TestCase):
    """Trail-based substitution"""

    def test_bind_and_resolve(self):
        s = Subst(4)
        self.assertTrue(s.unify(App("f", (Var(0),)), App("f", (App("a"),))))
        self.assertEqual(s.resolve(Var(0)), App("a"))
        self.assertEqual(s.bindings(), {0: App("a")})

    def test_occurs_check(self):
        s = Subst(2)
        self.assertFalse(s.unify(Var(0), App("f", (Var(0),))))
        self.assertEqual(s.trail, [])

    def test_failed_unification_leaves_no_bindings(self):
        s = Subst(3)
        a = App("g", (Var(0), App("a")))
        b = App("g", (App("b"), App("b")))
        self.assertFalse(s.unify(a, b))
        self.assertIsNone(s.lookup(0))

    def test_unify_lits_counts_successes(self):
        s = Subst(2)
        p = Lit(3, (Var(0),))
        self.assertTrue(s.unify_lits(p, Lit(3, (App("a"),))))
        self.assertFalse(s.unify_lits(p, Lit(3, (App("b"),))))
        self.assertFalse(s.unify_lits(p, Lit(-3, (App("a"),))))
        self.assertEqual(s.inferences, 1)

    def test_identical_lits(self):
        s = Subst(3)
        s.unify(Var(0), Var(1))
        self.assertTrue(s.identical_lits(Lit(2, (Var(0),)), Lit(2, (Var(1),))))
        self.assertFalse(s.identical_lits(Lit(2, (Var(0),)), Lit(2, (Var(2),))))

    def test_store_grows_on_demand(self):
        s = Subst(1)
        self.assertTrue(s.unify(Var(10), App("a")))
        self.assertEqual(s.resolve(Var(10)), App("a"))

    def test_undo_restores_earlier_state(self):
        s = Subst(3)
        s.unify(Var(0), App("a"))
        mark = s.mark()
        s.unify(Var(1), App("f", (Var(0),)))
        s.undo_to(mark)
        self.assertIsNone(s.lookup(1))
        self.assertEqual(s.resolve(Var(0)), App("a"))

    def test_stale_mark_is_rejected(self):
        s = Subst(3)
        s.unify(Var(0), App("a"))
        base = s.mark()
        s.unify(Var(1), App("b"))
        stale = s.mark()
        s.undo_to(base)
        s.unify(Var(2), App("a"))
        with self.assertRaises(StaleMarkError):
            s.undo_to(stale)


class TestPSubst(unittest.TestCase):
    """Persistent substitution"""

    def test_unify_returns_new_value(self):
        empty = PSubst()
        bound = empty.unify_terms([(Var(0), App("a"))])
        self.assertEqual(len(empty), 0)
        self.assertEqual(bound.resolve(Var(0)), App("a"))

    def test_clash_and_occurs_check(self):
        self.assertIsNone(PSubst().unify_terms([(App("a"), App("b"))]))
        self.assertIsNone(PSubst().unify_terms([(Var(0), App("f", (Var(0),)))]))

    def test_literals(self):
        s = PSubst().unify_lits(Lit(1, (Var(0), Var(1))), Lit(1, (Var(1), App("a"))))
        self.assertEqual(s.resolve_lit(Lit(1, (Var(0),))), Lit(1, (App("a"),)))
        self.assertIsNone(PSubst().unify_lits(Lit(1, (Var(0),)), Lit(-1, (Var(0),))))


class TestAgainstOracles:
    """Random operation sequences checked against independent models"""

    def test_mark_unify_undo_sequences(self):
        rng = random.Random(2024)
        n_vars = 6
        s = Subst(n_vars)
        # snapshots parallel to the marks: (mark, persistent copy at that point)
        stack = [(s.mark(), PSubst())]
        current = PSubst()
        for _ in range(10_000):
            op = rng.random()
            if op < 0.5:
                a, b = random_term(rng, n_vars), random_term(rng, n_vars)
                expected = current.unify_terms([(a, b)])
                assert s.unify(a, b) == (expected is not None)
                if expected is not None:
                    current = expected
            elif op < 0.75:
                stack.append((s.mark(), current))
            elif len(stack) > 1:
                mark, current = stack.pop()
                s.undo_to(mark)
            for v in range(n_vars):
                assert s.resolve(Var(v)) == current.resolve(Var(v))

    def test_most_general_unifier(self):
        rng = random.Random(99)
        agreed = 0
        for _ in range(10_000):
            a, b = random_term(rng, 4), random_term(rng, 4)
            s = Subst(4)
            ok = s.unify(a, b)
            oracle = robinson([(a, b)])
            assert ok == (oracle is not None)
            if ok:
                agreed += 1
                assert s.resolve(a) == s.resolve(b)
                assert canonical(s.resolve(a)) == canonical(oracle(a))
        assert agreed > 50

    @pytest.mark.parametrize("seed", range(5))
    def test_persistent_snapshots_stay_valid(self, seed):
        rng = random.Random(seed)
        history = [PSubst()]
        for _ in range(200):
            a, b = random_term(rng, 5), random_term(rng, 5)
            nxt = history[-1].unify_terms([(a, b)])
            if nxt is not None:
                history.append(nxt)
        sizes = [len(h) for h in history]
        assert sizes == sorted(sizes)
        assert len(history[0]) == 0


if __name__ == "__main__":
    unittest.main()
