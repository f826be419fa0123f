"""
Clausal and nonclausal matrices, contrapositive indexes, β-clauses.

A clausal matrix is a list of clauses of literals. A nonclausal matrix is a
tree: a matrix is a list of clauses, a clause a list of elements, each element
a literal or a nested matrix. Variables are integers; a clause owns the
variables its ∀ binders introduced.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import count, product
from typing import Iterable, Sequence

from .formula import And, Atom, Bottom, Forall, Formula, Not, Or, Top, free_vars_ordered
from .skolem import render
from .symbols import SymTable
from .terms import Lit, Var, lit_vars

STANDARD = "standard"
DEFINITIONAL = "definitional"
DEFINITION_PREFIX = "def_"


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_lit(lit: Lit, syms: SymTable | None = None, names: dict | None = None) -> str:
    body = render(Atom(lit.root, lit.args), syms, names)
    return body if lit.positive else "~" + body


# ---------------------------------------------------------------------------
# clausal matrices
# ---------------------------------------------------------------------------

@dataclass
class Clause:
    index: int
    lits: tuple[Lit, ...]
    vars: tuple[int, ...] = ()
    from_conjecture: bool = False

    def __len__(self) -> int:
        return len(self.lits)


@dataclass
class ClausalMatrix:
    clauses: list[Clause] = field(default_factory=list)
    syms: SymTable | None = None

    def dump(self) -> str:
        return "[" + " ".join(
            "[" + " ".join(format_lit(l, self.syms) for l in c.lits) + "]" for c in self.clauses
        ) + "]"

    def start_clauses(self, conj: bool) -> list[Clause]:
        """Conjecture clauses when conj is set and some exist, else every clause"""
        if conj:
            flagged = [c for c in self.clauses if c.from_conjecture]
            if flagged:
                return flagged
        return list(self.clauses)

    @property
    def max_var(self) -> int:
        return max((v for c in self.clauses for v in c.vars), default=0)


def to_lit(f: Formula) -> Lit:
    if isinstance(f, Not) and isinstance(f.body, Atom):
        return Lit(-f.body.pred, f.body.args)
    if isinstance(f, Atom):
        return Lit(f.pred, f.args)
    raise TypeError(f"not a literal: {f!r}")


def _is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or isinstance(f, Not) and isinstance(f.body, Atom)


def _strip_forall(f: Formula) -> Formula:
    while isinstance(f, Forall):
        f = f.body
    return f


def definition_name(f: Formula, syms: SymTable | None) -> str:
    """Name of the definition atom for f, stable under variable renaming"""
    key = render(f, syms, names={})
    return DEFINITION_PREFIX + hashlib.sha1(key.encode("utf-8")).hexdigest()[:12]


class _Clausifier:
    def __init__(self, syms: SymTable | None, mode: str):
        self.syms = syms
        self.mode = mode
        self.definitions: list[list[Lit]] = []
        self._defined: dict[str, Lit] = {}

    def define(self, f: Formula) -> Lit:
        name = definition_name(f, self.syms)
        args = tuple(Var(v) for v in free_vars_ordered(f))
        if name in self._defined:
            return Lit(self._defined[name].pred, args)
        head = Lit(self.syms.pred(name, len(args)), args)
        self._defined[name] = head
        for clause in self.cnf(f):
            self.definitions.append([head.complement()] + clause)
        return head

    def cnf(self, f: Formula) -> list[list[Lit]]:
        f = _strip_forall(f)
        if isinstance(f, Top):
            return []
        if isinstance(f, Bottom):
            return [[]]
        if _is_literal(f):
            return [[to_lit(f)]]
        if isinstance(f, And):
            return [c for item in f.items for c in self.cnf(item)]
        parts = []
        for item in f.items:
            inner = _strip_forall(item)
            if self.mode == DEFINITIONAL and isinstance(inner, And):
                parts.append([[self.define(item)]])
            else:
                parts.append(self.cnf(item))
        combos = (tidy_clause(l for c in combo for l in c) for combo in product(*parts))
        return [c for c in combos if c is not None]


def tidy_clause(lits: Iterable[Lit]) -> list[Lit] | None:
    """Literals without repeats, first occurrence kept; None for a tautology"""
    out: dict[Lit, None] = {}
    for lit in lits:
        if lit.complement() in out:
            return None
        out.setdefault(lit, None)
    return list(out)


def _clause_vars(lits: Iterable[Lit]) -> tuple[int, ...]:
    seen: dict = {}
    for lit in lits:
        for v in lit_vars(lit):
            seen.setdefault(v, None)
    return tuple(seen)


def clausify(
    f: Formula,
    mode: str = STANDARD,
    syms: SymTable | None = None,
    marker: int | None = None,
) -> ClausalMatrix:
    """CNF of a skolemised NNF formula.

    Clauses with the positive marker are dropped; the negative marker is
    removed and flags its clause as coming from the conjecture.
    """
    if mode not in (STANDARD, DEFINITIONAL):
        raise ValueError(f"unknown clausification mode: {mode}")
    if mode == DEFINITIONAL and syms is None:
        raise ValueError("definitional clausification needs a symbol table")
    worker = _Clausifier(syms, mode)
    raw = worker.cnf(f) + worker.definitions

    clauses: list[Clause] = []
    for lits in raw:
        lits = tidy_clause(lits)
        if lits is None:
            continue
        flagged = False
        if marker is not None:
            if any(l.pred == marker for l in lits):
                continue
            flagged = any(l.pred == -marker for l in lits)
            lits = [l for l in lits if l.pred != -marker]
        clauses.append(Clause(len(clauses), tuple(lits), _clause_vars(lits), flagged))
    return ClausalMatrix(clauses, syms)


@dataclass(frozen=True)
class Contra:
    """Contrapositive: literal `pos` of clause `clause` and the rest of that clause"""
    clause: int
    pos: int
    lit: Lit
    rest: tuple[Lit, ...]


class ContraIndex:
    """Contrapositives keyed by signed predicate"""

    def __init__(self, matrix: ClausalMatrix):
        self.matrix = matrix
        self.table: dict[int, list[Contra]] = {}
        for clause in matrix.clauses:
            for pos, lit in enumerate(clause.lits):
                rest = clause.lits[:pos] + clause.lits[pos + 1:]
                self.table.setdefault(lit.pred, []).append(Contra(clause.index, pos, lit, rest))

    def lookup(self, lit: Lit) -> list[Contra]:
        """Entries whose literal has the same root as lit and opposite sign"""
        return self.table.get(-lit.pred, [])

    def __iter__(self):
        for entries in self.table.values():
            yield from entries


def contra_key(lits: Sequence[Lit], pos: int, syms: SymTable | None) -> str:
    """Problem-independent name of a contrapositive"""
    names: dict = {}
    return "[" + ",".join(format_lit(l, syms, names) for l in lits) + f"]@{pos}"


# ---------------------------------------------------------------------------
# nonclausal matrices
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class NMatrix:
    id: int
    clauses: list["NClause"] = field(default_factory=list)
    parent: "NClause | None" = None
    slot: int = 0

    def __repr__(self) -> str:
        return f"NMatrix({self.id})"


@dataclass(eq=False)
class NClause:
    id: int
    elems: list = field(default_factory=list)
    vars: tuple[int, ...] = ()
    parent: NMatrix | None = None
    slot: int = 0
    from_conjecture: bool = False
    subtree_vars: tuple[int, ...] = ()

    def up(self):
        """(parent clause or None, (element slot in parent, clause slot))"""
        matrix = self.parent
        if matrix is None or matrix.parent is None:
            return None, (None, self.slot)
        return matrix.parent, (matrix.slot, self.slot)

    def __repr__(self) -> str:
        return f"NClause({self.id})"


@dataclass
class NCMatrix:
    root: NMatrix
    clauses: dict[int, NClause] = field(default_factory=dict)
    matrices: dict[int, NMatrix] = field(default_factory=dict)
    syms: SymTable | None = None
    max_var: int = 0

    def dump(self) -> str:
        return dump_matrix(self.root, self.syms)

    def start_clauses(self, conj: bool) -> list[NClause]:
        if conj:
            flagged = [c for c in self.root.clauses if c.from_conjecture]
            if flagged:
                return flagged
        return list(self.root.clauses)

    def literals(self):
        """(literal, clause, position) for every literal, in pre-order"""
        def walk(clause: NClause):
            for pos, elem in enumerate(clause.elems):
                if isinstance(elem, Lit):
                    yield elem, clause, pos
                else:
                    for inner in elem.clauses:
                        yield from walk(inner)
        for clause in self.root.clauses:
            yield from walk(clause)


def dump_matrix(m: NMatrix, syms: SymTable | None = None) -> str:
    return "[" + " ".join(dump_clause(c, syms) for c in m.clauses) + "]"


def dump_clause(c: NClause, syms: SymTable | None = None) -> str:
    return "[" + " ".join(_dump_elem(e, syms) for e in c.elems) + "]"


def _dump_elem(e, syms: SymTable | None) -> str:
    if isinstance(e, Lit):
        return format_lit(e, syms)
    if isinstance(e, NMatrix):
        return dump_matrix(e, syms)
    if isinstance(e, Pruned):
        return "[" + dump_beta(e.beta, syms) + "]"
    raise TypeError(f"not a clause element: {e!r}")


def build_nc_matrix(f: Formula, syms: SymTable | None = None, marker: int | None = None) -> NCMatrix:
    """∨ becomes a clause, ∧ a matrix; ∀ variables belong to the enclosing clause"""
    clause_ids = count(1)
    matrix_ids = count(0)
    out = NCMatrix(root=None, syms=syms)  # type: ignore[arg-type]

    def matrix(node: Formula, parent: NClause | None, slot: int) -> NMatrix:
        m = NMatrix(next(matrix_ids), [], parent, slot)
        out.matrices[m.id] = m
        if isinstance(node, Top):
            items: tuple = ()
        elif isinstance(node, And):
            items = node.items
        else:
            items = (node,)
        for item in items:
            m.clauses.append(clause(item, m, len(m.clauses)))
        return m

    def clause(node: Formula, parent: NMatrix, slot: int) -> NClause:
        c = NClause(next(clause_ids), [], (), parent, slot)
        out.clauses[c.id] = c
        bound: list[int] = []

        def add(n: Formula) -> None:
            while isinstance(n, Forall):
                bound.extend(n.vars)
                n = n.body
            if isinstance(n, Or):
                for item in n.items:
                    add(item)
            elif isinstance(n, And):
                c.elems.append(matrix(n, c, len(c.elems)))
            elif _is_literal(n):
                c.elems.append(to_lit(n))
            elif not isinstance(n, (Bottom, Top)):
                raise TypeError(f"unexpected node in NNF: {type(n).__name__}")

        add(node)
        c.vars = tuple(bound)
        return c

    out.root = matrix(f, None, 0)
    if marker is not None:
        kept = []
        for c in out.root.clauses:
            if any(isinstance(e, Lit) and e.pred == marker for e in c.elems):
                del out.clauses[c.id]
                continue
            if any(isinstance(e, Lit) and e.pred == -marker for e in c.elems):
                c.elems = [e for e in c.elems if not (isinstance(e, Lit) and e.pred == -marker)]
                for slot, e in enumerate(c.elems):
                    if isinstance(e, NMatrix):
                        e.slot = slot
                c.from_conjecture = True
            kept.append(c)
        out.root.clauses = kept
        for slot, c in enumerate(kept):
            c.slot = slot

    def finish(c: NClause) -> tuple[int, ...]:
        below = [v for e in c.elems if isinstance(e, NMatrix) for inner in e.clauses for v in finish(inner)]
        c.subtree_vars = c.vars + tuple(below)
        return c.subtree_vars

    for c in out.root.clauses:
        finish(c)
    out.max_var = max((v for c in out.clauses.values() for v in c.vars), default=0)
    return out


# ---------------------------------------------------------------------------
# clause predicates
# ---------------------------------------------------------------------------

def _lineage(c) -> tuple[list, list]:
    """Clauses from c up to its top-level ancestor, and the slot of each in its parent"""
    nodes, slots = [c], []
    while True:
        parent, slot = c.up()
        slots.append(slot)
        if parent is None:
            return nodes, slots
        nodes.append(parent)
        c = parent


def contains(c, lit_clause) -> bool:
    """c contains every literal of lit_clause and of its descendants"""
    node = lit_clause
    while node is not None:
        if node is c:
            return True
        node = node.up()[0]
    return False


def alpha_related(c, lit_clause, lit_pos: int) -> bool:
    """c lies in a different clause than the literal at lit_pos of lit_clause within some common matrix"""
    c_nodes, c_slots = _lineage(c)
    l_nodes, l_slots = _lineage(lit_clause)
    if any(n is c for n in l_nodes):
        return False
    for i, g in enumerate(l_nodes):
        for j, h in enumerate(c_nodes):
            if g is h:
                c_elem = c_slots[j - 1][0]
                l_elem = lit_pos if i == 0 else l_slots[i - 1][0]
                return c_elem == l_elem
    return True


def is_extension_clause(c, occurrences: Iterable[tuple]) -> bool:
    """c is an e-clause with respect to path literals given as (clause, position) occurrences.

    Either c contains one of them, or c is α-related to all of them and its
    parent clause, if it has one, contains one of them.
    """
    occurrences = list(occurrences)
    if any(contains(c, clause) for clause, _ in occurrences):
        return True
    if not all(alpha_related(c, clause, pos) for clause, pos in occurrences):
        return False
    parent = c.up()[0]
    return parent is None or any(contains(parent, clause) for clause, _ in occurrences)


# ---------------------------------------------------------------------------
# β-clauses and the nonclausal index
# ---------------------------------------------------------------------------

PLAIN = "plain"
LIFTED = "lifted"


@dataclass(frozen=True, eq=False)
class Pruned:
    """Matrix element cut down to the one clause on the way to the connected literal"""
    matrix: NMatrix
    index: int
    beta: "Beta"


@dataclass(frozen=True, eq=False)
class Beta:
    clause: NClause
    items: tuple[tuple[int, object], ...]


def beta_clause(chain: Sequence[NClause], pos: int, order: str = PLAIN) -> Beta:
    """β-clause of chain[0] with respect to literal `pos` of chain[-1].

    chain runs from the clause down to the clause directly holding the literal;
    each step descends into one matrix element.
    """
    head = chain[0]
    if len(chain) == 1:
        if not 0 <= pos < len(head.elems) or not isinstance(head.elems[pos], Lit):
            raise IndexError(f"no literal at position {pos} of clause {head.id}")
        return Beta(head, tuple((s, e) for s, e in enumerate(head.elems) if s != pos))
    nxt = chain[1]
    if nxt.parent is None or nxt.parent.parent is not head:
        raise ValueError(f"clause {nxt.id} is not nested in clause {head.id}")
    mslot = nxt.parent.slot
    inner = Pruned(nxt.parent, nxt.slot, beta_clause(chain[1:], pos, order))
    items = [(s, inner if s == mslot else e) for s, e in enumerate(head.elems)]
    if order == LIFTED:
        items.sort(key=lambda item: item[0] != mslot)
    return Beta(head, tuple(items))


def dump_beta(beta: Beta, syms: SymTable | None = None) -> str:
    return "[" + " ".join(_dump_elem(e, syms) for _, e in beta.items) + "]"


@dataclass(eq=False)
class NCEntry:
    """Literal `pos` of chain[-1]; chain runs from a top-level clause down to it"""
    lit: Lit
    chain: tuple[NClause, ...]
    pos: int
    _betas: dict = field(default_factory=dict, repr=False)

    def beta(self, level: int, order: str = PLAIN) -> Beta:
        """β-clause of chain[level], built once per level and order"""
        key = (level, order)
        if key not in self._betas:
            self._betas[key] = beta_clause(self.chain[level:], self.pos, order)
        return self._betas[key]


class NCIndex:
    def __init__(self, matrix: NCMatrix):
        self.matrix = matrix
        self.table: dict[int, list[NCEntry]] = {}
        for lit, clause, pos in matrix.literals():
            chain = _lineage(clause)[0][::-1]
            self.table.setdefault(lit.pred, []).append(NCEntry(lit, tuple(chain), pos))

    def lookup(self, lit: Lit) -> list[NCEntry]:
        return self.table.get(-lit.pred, [])

    def __iter__(self):
        for entries in self.table.values():
            yield from entries
