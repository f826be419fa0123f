"""
S-expression form of LK proofs.

    (lk-proof (problem "name")
      (node RULE (seq F ...) (principal F) (index I) (witness T ...)
        (premises NODE ...)))

Formulas are `(pred NAME T ...)`, `(not F)`, `(and F ...)`, `(or F ...)`
and `(all (X ...) F)`; terms are `(fn NAME T ...)` and `(var NAME)`.
Optional parts of a node may be left out. `;` starts a comment.
"""
from __future__ import annotations

import re
from pathlib import Path

from pyparsing import (
    Forward,
    Group,
    ParseBaseException,
    QuotedString,
    Regex,
    StringEnd,
    Suppress,
    ZeroOrMore,
    rest_of_line,
)

from ..exceptions import LKFormatError
from ..formula import And, Atom, Forall, Formula, Not, Or
from ..terms import App, Term, Var
from .formulas import RULES, LKNode, LKProof

HEADER = "; copforge LK proof v1"

_BARE = re.compile(r'^[^\s()";]+$')


def _name(name) -> str:
    text = str(name)
    if _BARE.match(text):
        return text
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------

def term_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return f"(var {_name(t.name)})"
    return "(fn " + " ".join([_name(t.functor)] + [term_sexpr(a) for a in t.args]) + ")"


def formula_sexpr(f: Formula) -> str:
    if isinstance(f, Atom):
        return "(pred " + " ".join([_name(f.pred)] + [term_sexpr(a) for a in f.args]) + ")"
    if isinstance(f, Not):
        return f"(not {formula_sexpr(f.body)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([head] + [formula_sexpr(c) for c in f.items]) + ")"
    if isinstance(f, Forall):
        return f"(all ({' '.join(_name(v) for v in f.vars)}) {formula_sexpr(f.body)})"
    raise LKFormatError(f"formula outside the LK fragment: {f!r}")


def node_sexpr(node: LKNode, indent: int = 1) -> str:
    pad = "  " * indent
    parts = [f"(node {node.rule}", f"(seq {' '.join(formula_sexpr(f) for f in node.sequent)})"]
    if node.principal is not None:
        parts.append(f"(principal {formula_sexpr(node.principal)})")
    if node.index is not None:
        parts.append(f"(index {node.index})")
    if node.witnesses:
        parts.append(f"(witness {' '.join(term_sexpr(t) for t in node.witnesses)})")
    head = " ".join(parts)
    if not node.premises:
        return pad + head + ")"
    inner = "\n".join(node_sexpr(p, indent + 2) for p in node.premises)
    return f"{pad}{head}\n{pad}  (premises\n{inner}))"


def dumps(proof: LKProof) -> str:
    problem = f" (problem {_name(proof.problem)})" if proof.problem else ""
    return f"{HEADER}\n(lk-proof{problem}\n{node_sexpr(proof.root)})\n"


def save(proof: LKProof, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(proof), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# reading
# ---------------------------------------------------------------------------

def _grammar():
    lpar, rpar = Suppress("("), Suppress(")")
    atom = QuotedString('"', esc_char="\\") | Regex(r'[^\s()";]+')
    sexp = Forward()
    sexp <<= atom | Group(lpar + ZeroOrMore(sexp) + rpar)
    top = sexp + StringEnd()
    top.ignore(";" + rest_of_line)
    return top


_GRAMMAR = _grammar()


def parse_sexpr(text: str):
    """Nested Python lists of strings"""
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except ParseBaseException as exc:
        raise LKFormatError(f"malformed S-expression: {exc.msg}", {"line": exc.lineno, "column": exc.col})
    value = result[0]
    return value.as_list() if hasattr(value, "as_list") else value


def _head(x, *names: str) -> list:
    if not isinstance(x, list) or not x or x[0] not in names:
        raise LKFormatError(f"expected ({'|'.join(names)} ...), got {x!r:.60}")
    return x


def read_term(x) -> Term:
    x = _head(x, "fn", "var")
    if x[0] == "var":
        if len(x) != 2 or not isinstance(x[1], str):
            raise LKFormatError(f"bad variable: {x!r:.60}")
        return Var(x[1])
    if len(x) < 2 or not isinstance(x[1], str):
        raise LKFormatError(f"bad function term: {x!r:.60}")
    return App(x[1], tuple(read_term(a) for a in x[2:]))


def read_formula(x) -> Formula:
    x = _head(x, "pred", "not", "and", "or", "all")
    tag = x[0]
    if tag == "pred":
        if len(x) < 2 or not isinstance(x[1], str):
            raise LKFormatError(f"bad atom: {x!r:.60}")
        return Atom(x[1], tuple(read_term(a) for a in x[2:]))
    if tag == "not":
        if len(x) != 2:
            raise LKFormatError("negation takes one formula")
        return Not(read_formula(x[1]))
    if tag in ("and", "or"):
        items = tuple(read_formula(c) for c in x[1:])
        return And(items) if tag == "and" else Or(items)
    if len(x) != 3 or not isinstance(x[1], list) or not all(isinstance(v, str) for v in x[1]):
        raise LKFormatError(f"bad quantifier: {x!r:.60}")
    return Forall(tuple(x[1]), read_formula(x[2]))


def read_node(x) -> LKNode:
    x = _head(x, "node")
    if len(x) < 3 or x[1] not in RULES:
        raise LKFormatError(f"unknown rule: {x[1] if len(x) > 1 else None!r}")
    node = LKNode(x[1], tuple(read_formula(f) for f in _head(x[2], "seq")[1:]))
    for part in x[3:]:
        part = _head(part, "principal", "index", "witness", "premises")
        if part[0] == "principal":
            node.principal = read_formula(part[1])
        elif part[0] == "index":
            try:
                node.index = int(part[1])
            except (IndexError, TypeError, ValueError):
                raise LKFormatError(f"bad index: {part!r:.60}")
        elif part[0] == "witness":
            node.witnesses = tuple(read_term(t) for t in part[1:])
        else:
            node.premises = [read_node(p) for p in part[1:]]
    return node


def loads(text: str) -> LKProof:
    x = _head(parse_sexpr(text), "lk-proof")
    problem = None
    rest = x[1:]
    if rest and isinstance(rest[0], list) and rest[0][:1] == ["problem"]:
        problem = rest[0][1] if len(rest[0]) > 1 else None
        rest = rest[1:]
    if len(rest) != 1:
        raise LKFormatError("an LK proof has exactly one root node")
    return LKProof(read_node(rest[0]), problem)


def load(path: str | Path) -> LKProof:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"LK proof not found: {path}")
    return loads(path.read_text(encoding="utf-8"))
