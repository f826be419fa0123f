"""
Consistent epsilon-Skolemisation.

Every existential binder ∃x.G is replaced by G[f(ȳ)/x] where f is named after
a normalised epsilon term for x, so α-equivalent binders get the same Skolem
function in any problem. The naive inside-out and outside-in variants are kept
for size comparisons.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .exceptions import SkolemBoundError
from .formula import (
    And,
    Atom,
    Bottom,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Top,
    free_vars,
    free_vars_ordered,
    substitute,
)
from .symbols import SymTable
from .terms import App, Var

SKOLEM_PREFIX = "esk_"


@dataclass
class EpsilonTerm:
    """Normalised epsilon term backing one Skolem function"""
    var: int
    body: Formula
    free_vars: list
    key: str
    name: str
    symbol: int = 0

    def app(self) -> App:
        return App(self.symbol, tuple(Var(v) for v in self.free_vars))


@dataclass
class SkolemResult:
    formula: Formula
    terms: list[EpsilonTerm] = field(default_factory=list)
    input_size: int = 0
    output_size: int = 0


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _sym_name(sym, syms: SymTable | None) -> str:
    if isinstance(sym, int) and syms is not None:
        return syms.name(sym)
    return str(sym)


def _var_name(v, names: dict | None) -> str:
    if names is not None:
        if v not in names:
            names[v] = f"Z{len(names) + 1}"
        return names[v]
    return f"X{v}" if isinstance(v, int) else str(v)


def render(f, syms: SymTable | None = None, names: dict | None = None, hook: dict | None = None) -> str:
    """Compact string form used for sizes and normalisation keys.

    With `names`, variables are renamed positionally in order of appearance.
    With `hook`, applications of the given functors are printed as the
    mapped strings (their epsilon terms).
    """
    if isinstance(f, Var):
        return _var_name(f.name, names)
    if isinstance(f, App):
        if hook and f.functor in hook:
            return hook[f.functor]
        name = _sym_name(f.functor, syms)
        if not f.args:
            return name
        return name + "(" + ",".join(render(a, syms, names, hook) for a in f.args) + ")"
    if isinstance(f, Eps):
        v = _var_name(f.var, names)
        return "@[" + v + "]:(" + render(f.body, syms, names, hook) + ")"
    if isinstance(f, Atom):
        name = _sym_name(f.pred, syms)
        if not f.args:
            return name
        return name + "(" + ",".join(render(a, syms, names, hook) for a in f.args) + ")"
    if isinstance(f, Not):
        return "~" + render(f.body, syms, names, hook)
    if isinstance(f, (And, Or)):
        op = "&" if isinstance(f, And) else "|"
        return "(" + op.join(render(c, syms, names, hook) for c in f.items) + ")"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        v = ",".join(_var_name(x, names) for x in f.vars)
        return q + "[" + v + "]:" + render(f.body, syms, names, hook)
    if isinstance(f, Top):
        return "$true"
    if isinstance(f, Bottom):
        return "$false"
    raise TypeError(f"cannot render {type(f).__name__}")


def rendered_size(f, syms: SymTable | None = None, _memo: dict | None = None) -> int:
    """len(render(f)) computed over shared structure without building the string"""
    memo = _memo if _memo is not None else {}
    key = id(f)
    if key in memo:
        return memo[key][1]

    def size(node) -> int:
        return rendered_size(node, syms, memo)

    if isinstance(f, Var):
        n = len(_var_name(f.name, None))
    elif isinstance(f, (App, Atom)):
        head = f.functor if isinstance(f, App) else f.pred
        n = len(_sym_name(head, syms))
        if f.args:
            n += 2 + len(f.args) - 1 + sum(size(a) for a in f.args)
    elif isinstance(f, Eps):
        n = 6 + len(_var_name(f.var, None)) + size(f.body)
    elif isinstance(f, Not):
        n = 1 + size(f.body)
    elif isinstance(f, (And, Or)):
        n = 2 + len(f.items) - 1 + sum(size(c) for c in f.items)
    elif isinstance(f, (Forall, Exists)):
        n = 4 + len(",".join(_var_name(x, None) for x in f.vars)) + size(f.body)
    elif isinstance(f, Top):
        n = 5
    elif isinstance(f, Bottom):
        n = 6
    else:
        raise TypeError(f"cannot size {type(f).__name__}")
    memo[key] = (f, n)
    return n


# ---------------------------------------------------------------------------
# consistent skolemisation
# ---------------------------------------------------------------------------

def _binders(f: Formula, out: dict | None = None) -> dict:
    """var -> (kind, node) for every binder of a rectified formula, in pre-order"""
    out = {} if out is None else out
    if isinstance(f, (Forall, Exists)):
        for v in f.vars:
            out[v] = (type(f), f)
        _binders(f.body, out)
    elif isinstance(f, (And, Or)):
        for c in f.items:
            _binders(c, out)
    return out


def _strip(f: Formula, drop: set) -> Formula:
    """Remove the binders of the variables in drop"""
    if isinstance(f, (Forall, Exists)):
        body = _strip(f.body, drop)
        kept = tuple(v for v in f.vars if v not in drop)
        return type(f)(kept, body) if kept else body
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_strip(c, drop) for c in f.items))
    return f


class _Analysis:
    """Transitive free-variable sets over the binders of Δ"""

    def __init__(self, delta: Formula, syms: SymTable | None):
        self.syms = syms
        self.binders = _binders(delta)
        self._star: dict = {}
        self._sizes: dict = {}

    def kind(self, v) -> type | None:
        entry = self.binders.get(v)
        return entry[0] if entry else None

    def node(self, v) -> Formula:
        return self.binders[v][1]

    def size(self, v) -> int:
        if v not in self._sizes:
            self._sizes[v] = len(render(self.node(v), self.syms))
        return self._sizes[v]

    def star(self, x) -> tuple[frozenset, frozenset]:
        """(FVar*∀, FVar*∃) of the binder node of x"""
        if x in self._star:
            return self._star[x]
        direct = free_vars(self.node(x))
        universal = {v for v in direct if self.kind(v) is not Exists}
        existential = {v for v in direct if self.kind(v) is Exists}
        for y in list(existential):
            u, e = self.star(y)
            universal |= u
            existential |= e
        result = (frozenset(universal), frozenset(existential))
        self._star[x] = result
        return result

    def epsilon_term(self, x) -> EpsilonTerm:
        universal, existential = self.star(x)
        candidates = existential | {x}
        defining = self.node(max(candidates, key=self.size))
        body = _strip(defining, set(universal) | {x})
        names: dict = {}
        head = "@[" + _var_name(x, names) + "]:"
        key = head + render(body, self.syms, names)
        name = SKOLEM_PREFIX + hashlib.sha1(key.encode("utf-8")).hexdigest()[:12]
        args = [v for v in free_vars_ordered(body) if v != x]
        return EpsilonTerm(var=x, body=body, free_vars=args, key=key, name=name)


def skolem_terms(f: Formula, syms: SymTable | None = None) -> list[EpsilonTerm]:
    """Consistent epsilon terms of every existential binder, outermost first"""
    analysis = _Analysis(f, syms)
    return [
        analysis.epsilon_term(v)
        for v, (kind, _) in analysis.binders.items()
        if kind is Exists
    ]


def skolemize_consistent(f: Formula, syms: SymTable, size_check: bool = True) -> SkolemResult:
    """Replace every ∃x.G by G[f(ȳ)/x] with f named by x's normalised epsilon term.

    Raises SkolemBoundError when size_check is on and the output, measured with
    epsilon terms in place of the Skolem applications, is not below |Δ|².
    """
    analysis = _Analysis(f, syms)
    terms: dict = {}

    def walk(node: Formula) -> Formula:
        if isinstance(node, Exists):
            body = walk(node.body)
            mapping = {}
            for x in node.vars:
                term = analysis.epsilon_term(x)
                term.symbol = syms.func(term.name, len(term.free_vars))
                terms[x] = term
                mapping[x] = term.app()
            return substitute(body, mapping)
        if isinstance(node, Forall):
            return Forall(node.vars, walk(node.body))
        if isinstance(node, (And, Or)):
            return type(node)(tuple(walk(c) for c in node.items))
        return node

    out = walk(f)
    result = SkolemResult(formula=out, terms=list(terms.values()))
    if not terms:
        return result

    result.input_size = len(render(f, syms))
    hook = {
        t.symbol: "@[" + _var_name(t.var, None) + "]:(" + render(t.body, syms) + ")"
        for t in result.terms
    }
    result.output_size = len(render(out, syms, hook=hook))
    if size_check and result.output_size >= result.input_size ** 2:
        raise SkolemBoundError(
            "Skolemised formula exceeds the quadratic size bound",
            {"input_size": result.input_size, "output_size": result.output_size},
        )
    return result


# ---------------------------------------------------------------------------
# naive epsilon skolemisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True, eq=False)
class Eps:
    """Epsilon term εx.body; compared by identity so shared structure stays cheap"""
    var: object
    body: object


def _subst_shared(f, x, t, memo: dict):
    """f[t/x] preserving sharing; memo keyed by node identity"""
    key = id(f)
    if key in memo:
        return memo[key][1]
    if isinstance(f, Var):
        out = t if f.name == x else f
    elif isinstance(f, App):
        out = App(f.functor, tuple(_subst_shared(a, x, t, memo) for a in f.args)) if f.args else f
    elif isinstance(f, Eps):
        out = f if f.var == x else Eps(f.var, _subst_shared(f.body, x, t, memo))
    elif isinstance(f, Atom):
        out = Atom(f.pred, tuple(_subst_shared(a, x, t, memo) for a in f.args)) if f.args else f
    elif isinstance(f, Not):
        out = Not(_subst_shared(f.body, x, t, memo))
    elif isinstance(f, (And, Or)):
        out = type(f)(tuple(_subst_shared(c, x, t, memo) for c in f.items))
    elif isinstance(f, (Forall, Exists)):
        out = f if x in f.vars else type(f)(f.vars, _subst_shared(f.body, x, t, memo))
    else:
        out = f
    memo[key] = (f, out)
    return out


def _naive_step(node: Exists):
    body = node.body
    for x in reversed(node.vars[1:]):
        body = Exists((x,), body)
    x = node.vars[0]
    return _subst_shared(body, x, Eps(x, body), {})


def _inside_out(f):
    if isinstance(f, Exists):
        inner = _inside_out(f.body)
        x = f.vars[-1]
        out = _subst_shared(inner, x, Eps(x, inner), {})
        for y in reversed(f.vars[:-1]):
            out = _subst_shared(out, y, Eps(y, out), {})
        return out
    if isinstance(f, Forall):
        return Forall(f.vars, _inside_out(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_inside_out(c) for c in f.items))
    return f


def _outside_in(f):
    if isinstance(f, Exists):
        return _outside_in(_naive_step(f))
    if isinstance(f, Forall):
        return Forall(f.vars, _outside_in(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_outside_in(c) for c in f.items))
    return f


def naive_epsilon_skolemize(f: Formula, order: str = "inside_out", syms: SymTable | None = None):
    """Naive epsilon-Skolemisation with structure sharing; returns (formula, size)"""
    if order == "inside_out":
        out = _inside_out(f)
    elif order == "outside_in":
        out = _outside_in(f)
    else:
        raise ValueError(f"unknown order: {order}")
    return out, rendered_size(out, syms)


# ---------------------------------------------------------------------------
# the exponential family
# ---------------------------------------------------------------------------

def phi_family(n: int) -> Formula:
    """∀x_n.ϕ_n with ϕ_0 = P(x0,x0) and ϕ_{k+1} = ∃x_k.(P(x_{k+1},x_{k+1}) → ϕ_k)"""
    def pxx(k: int) -> Atom:
        v = Var(f"X{k}")
        return Atom("p", (v, v))

    phi: Formula = pxx(0)
    for k in range(n):
        phi = Exists((f"X{k}",), Implies(pxx(k + 1), phi))
    return Forall((f"X{n}",), phi)


def skolem_growth(n: int) -> dict:
    """Sizes for one member of the family: input, naive inside-out, consistent, bound"""
    from .preprocess import expand_connectives, intern_symbols, rectify, to_nnf

    syms = SymTable()
    delta = rectify(to_nnf(expand_connectives(intern_symbols(phi_family(n), syms))))
    size = len(render(delta, syms))
    _, naive = naive_epsilon_skolemize(delta, "inside_out", syms)
    _, outside = naive_epsilon_skolemize(delta, "outside_in", syms)
    consistent = skolemize_consistent(delta, syms, size_check=False)
    return {
        "n": n,
        "delta": size,
        "naive_inside_out": naive,
        "naive_outside_in": outside,
        "consistent": consistent.output_size or size,
        "bound": size * size,
    }
