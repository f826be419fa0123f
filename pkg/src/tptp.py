"""
TPTP FOF frontend.

Parses `fof(name, role, formula).` statements and `include('file').`
directives into a Problem of named axioms plus at most one conjecture, and
prints formulas back in the same syntax.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from pyparsing import (
    Forward,
    Group,
    Keyword,
    Literal,
    OneOrMore,
    Optional,
    ParseBaseException,
    ParserElement,
    QuotedString,
    Regex,
    StringEnd,
    Suppress,
    ZeroOrMore,
    lineno,
    one_of,
)

from .exceptions import (
    DuplicateConjectureError,
    IncludeNotFoundError,
    TPTPSyntaxError,
    UnboundVariableError,
)
from .formula import (
    BOTTOM,
    EQUALITY,
    TOP,
    And,
    Atom,
    Bottom,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    free_vars,
)
from .terms import App, Term, Var

ParserElement.enable_packrat()


@dataclass
class Statement:
    """One annotated formula with its source position"""
    name: str
    role: str
    formula: Formula
    line: int = 0
    source: str | None = None


@dataclass
class Problem:
    """Axioms plus an optional conjecture"""
    axioms: list[Statement] = field(default_factory=list)
    conjecture: Statement | None = None
    source: str | None = None

    @property
    def statements(self) -> list[Statement]:
        return self.axioms + ([self.conjecture] if self.conjecture else [])


@dataclass
class _Include:
    path: str
    line: int


# ---------------------------------------------------------------------------
# grammar
# ---------------------------------------------------------------------------

LPAR, RPAR, LBRACK, RBRACK, COMMA, COLON, DOT = map(Suppress, "()[],:.")

lower_word = Regex(r"[a-z][A-Za-z0-9_]*") | QuotedString("'", esc_char="\\")
upper_word = Regex(r"[A-Z][A-Za-z0-9_]*")
number = Regex(r"[0-9]+")

term = Forward()
term_args = Group(LPAR + term + ZeroOrMore(COMMA + term) + RPAR)
functional = (lower_word | number) + Optional(term_args)
functional.set_parse_action(lambda t: App(t[0], tuple(t[1]) if len(t) > 1 else ()))
variable = upper_word.copy().set_parse_action(lambda t: Var(t[0]))
term <<= functional | variable

eq_op = Regex(r"=(?!>)") | Literal("!=")
eq_atom = (term + eq_op + term).set_parse_action(
    lambda t: Atom(EQUALITY, (t[0], t[2])) if t[1] == "=" else Not(Atom(EQUALITY, (t[0], t[2])))
)
plain_atom = (lower_word + Optional(term_args)).set_parse_action(
    lambda t: Atom(t[0], tuple(t[1]) if len(t) > 1 else ())
)
defined_atom = (
    Keyword("$true").set_parse_action(lambda: TOP)
    | Keyword("$false").set_parse_action(lambda: BOTTOM)
)
atomic = eq_atom | defined_atom | plain_atom

fof_formula = Forward()
unitary = Forward()
var_list = Group(LBRACK + upper_word + ZeroOrMore(COMMA + upper_word) + RBRACK)
quantified = (one_of("! ?") + var_list + COLON + unitary).set_parse_action(
    lambda t: (Forall if t[0] == "!" else Exists)(tuple(t[1]), t[2])
)
negation = (Suppress("~") + unitary).set_parse_action(lambda t: Not(t[0]))
unitary <<= quantified | negation | (LPAR + fof_formula + RPAR) | atomic

binop = one_of("<=> <~> => <= ~| ~&")
tail = (
    Group(binop + unitary)
    | Group(OneOrMore(Literal("|") + unitary))
    | Group(OneOrMore(Literal("&") + unitary))
)


def _build(tokens) -> Formula:
    head = tokens[0]
    if len(tokens) == 1:
        return head
    rest = list(tokens[1])
    op = rest[0]
    if op in ("|", "&"):
        items = (head,) + tuple(rest[1::2])
        return Or(items) if op == "|" else And(items)
    right = rest[1]
    return {
        "<=>": lambda: Iff(head, right),
        "<~>": lambda: Not(Iff(head, right)),
        "=>": lambda: Implies(head, right),
        "<=": lambda: Implies(right, head),
        "~|": lambda: Not(Or((head, right))),
        "~&": lambda: Not(And((head, right))),
    }[op]()


fof_formula <<= (unitary + Optional(tail)).set_parse_action(_build)

fof_statement = (
    Keyword("fof") + LPAR + (lower_word | number) + COMMA + lower_word + COMMA
    + fof_formula + RPAR + DOT
)
fof_statement.set_parse_action(
    lambda s, loc, t: Statement(str(t[1]), str(t[2]), t[3], lineno(loc, s))
)
include_statement = (
    Keyword("include") + LPAR + QuotedString("'") + RPAR + DOT
).set_parse_action(lambda s, loc, t: _Include(t[1], lineno(loc, s)))

tptp_file = ZeroOrMore(fof_statement | include_statement) + StringEnd()
tptp_file.ignore(Regex(r"%.*"))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_formula(text: str) -> Formula:
    """Parse a single FOF formula"""
    try:
        return (fof_formula + StringEnd()).parse_string(text)[0]
    except ParseBaseException as e:
        raise TPTPSyntaxError(f"Syntax error: {e.msg}", e.lineno, e.col) from e


def _resolve_include(name: str, base_dir: Path | None, include_dirs: Iterable[str | Path]) -> Path:
    candidates: list[Path] = []
    if base_dir is not None:
        candidates.append(base_dir / name)
    candidates.extend(Path(d) / name for d in include_dirs)
    if env := os.environ.get("COPFORGE_INCLUDE"):
        candidates.extend(Path(d) / name for d in env.split(os.pathsep) if d)
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    raise IncludeNotFoundError(
        f"Cannot resolve include '{name}'",
        {"searched": [str(c) for c in candidates]},
    )


def _statements(
    text: str,
    source: str | None,
    base_dir: Path | None,
    include_dirs: list[str | Path],
    seen: frozenset[Path],
) -> list[Statement]:
    try:
        parsed = tptp_file.parse_string(text, parse_all=True)
    except ParseBaseException as e:
        raise TPTPSyntaxError(
            f"Syntax error{' in ' + source if source else ''}: {e.msg}", e.lineno, e.col
        ) from e

    out: list[Statement] = []
    for item in parsed:
        if isinstance(item, _Include):
            path = _resolve_include(item.path, base_dir, include_dirs).resolve()
            if path in seen:
                continue
            out.extend(_statements(
                path.read_text(encoding="utf-8"), str(path), path.parent, include_dirs, seen | {path}
            ))
            continue
        item.source = source
        unbound = free_vars(item.formula)
        if unbound:
            raise UnboundVariableError(
                f"Unbound variables {sorted(map(str, unbound))} in '{item.name}'",
                {"statement": item.name, "line": item.line, "source": source},
            )
        out.append(item)
    return out


def parse_problem(
    text: str,
    source: str | None = None,
    include_dirs: list[str | Path] | None = None,
    base_dir: Path | None = None,
) -> Problem:
    """Parse TPTP FOF text into a Problem"""
    problem = Problem(source=source)
    for stmt in _statements(text, source, base_dir, list(include_dirs or []), frozenset()):
        if stmt.role == "conjecture":
            if problem.conjecture is not None:
                raise DuplicateConjectureError(
                    f"Second conjecture '{stmt.name}' (first was '{problem.conjecture.name}')",
                    {"line": stmt.line, "source": stmt.source},
                )
            problem.conjecture = stmt
        else:
            problem.axioms.append(stmt)
    return problem


def load_problem(path: str | Path, include_dirs: list[str | Path] | None = None) -> Problem:
    """Read and parse a problem file; includes resolve next to the file first"""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_problem(text, str(path), include_dirs, path.parent)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PLAIN_NAME = re.compile(r"^([a-z][A-Za-z0-9_]*|[0-9]+)$")


def _name(sym) -> str:
    text = str(sym)
    if _PLAIN_NAME.match(text):
        return text
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return str(t.name)
    if not t.args:
        return _name(t.functor)
    return f"{_name(t.functor)}({','.join(format_term(a) for a in t.args)})"


def _unitary(f: Formula) -> str:
    if isinstance(f, Atom) and f.pred == EQUALITY:
        return f"({format_formula(f)})"
    if isinstance(f, (Atom, Not, Forall, Exists, Top, Bottom)):
        return format_formula(f)
    return f"({format_formula(f)})"


def format_formula(f: Formula) -> str:
    """Render a formula in FOF syntax; binary and n-ary nodes are parenthesised by callers"""
    if isinstance(f, Atom):
        if f.pred == EQUALITY and len(f.args) == 2:
            return f"{format_term(f.args[0])} = {format_term(f.args[1])}"
        if not f.args:
            return _name(f.pred)
        return f"{_name(f.pred)}({','.join(format_term(a) for a in f.args)})"
    if isinstance(f, Top):
        return "$true"
    if isinstance(f, Bottom):
        return "$false"
    if isinstance(f, Not):
        return f"~ {_unitary(f.body)}"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        return f"{q} [{','.join(map(str, f.vars))}] : {_unitary(f.body)}"
    if isinstance(f, And):
        return " & ".join(_unitary(c) for c in f.items)
    if isinstance(f, Or):
        return " | ".join(_unitary(c) for c in f.items)
    if isinstance(f, Implies):
        return f"{_unitary(f.left)} => {_unitary(f.right)}"
    if isinstance(f, Iff):
        return f"{_unitary(f.left)} <=> {_unitary(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def format_statement(stmt: Statement) -> str:
    return f"fof({_name(stmt.name)}, {stmt.role}, {_unitary(stmt.formula)})."


def format_problem(problem: Problem) -> str:
    return "\n".join(format_statement(s) for s in problem.statements) + "\n"
