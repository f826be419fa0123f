"""
Naive Bayes ordering of contrapositives.

Features are the symbols on the active path, weighted by their rarity across
the training problems and by how recently they entered the path. Training data
records, per contrapositive, how often it was used and which features were
present when it was. Keys are printed with the consistent symbol names from
preprocessing, so statistics carry over between problems.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from ..exceptions import TrainingDataError
from ..matrix import ClausalMatrix, Contra, contra_key
from ..proof import EXT, Proof, ProofNode
from ..search.base import SearchOptions, SearchResult
from ..search.clausal import ClausalSearch
from ..run_log import RunLogger
from ..symbols import SymTable
from ..terms import Lit, term_symbols
from ..unify import Subst

FORMAT_HEADER = "# copforge training data v1"


@dataclass
class NBParams:
    sigma1: float = 1.0
    sigma2: float = 1.0
    sigma3: float = 0.2
    mu: float = 1e-5

    @classmethod
    def from_config(cls, guidance: dict[str, Any]) -> "NBParams":
        return cls(**{k: float(v) for k, v in guidance.items() if k in cls.__dataclass_fields__})


# ---------------------------------------------------------------------------
# features
# ---------------------------------------------------------------------------

def lit_features(lit: Lit, syms: SymTable | None = None) -> set[str]:
    """Predicate (with polarity) and function symbols of a literal"""
    def name(sym) -> str:
        return syms.name(sym) if syms is not None and isinstance(sym, int) else str(sym)

    out = {("~" if lit.pred < 0 else "") + name(lit.root)}
    for arg in lit.args:
        out.update(name(f) for f in term_symbols(arg))
    return out


def idf(symbol: str, df: Counter, problems: int) -> float:
    return math.log(1 + problems / max(df.get(symbol, 0), 1))


def recency(distance: int) -> float:
    return 1.0 / (1 + distance)


@dataclass
class FeatureVec:
    """Symbol -> weight; absent symbols weigh 0"""
    weights: dict[str, float] = field(default_factory=dict)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.weights

    def __iter__(self):
        return iter(self.weights)

    def get(self, symbol: str) -> float:
        return self.weights.get(symbol, 0.0)

    def symbols(self) -> set[str]:
        return set(self.weights)


def path_features(layers: Sequence[set[str]], df: Counter, problems: int) -> FeatureVec:
    """Features of a path given the symbol set of each literal, oldest first"""
    depth = len(layers)
    latest: dict[str, int] = {}
    for level, symbols in enumerate(layers):
        for s in sorted(symbols):
            latest[s] = level
    return FeatureVec({
        s: idf(s, df, problems) * recency(depth - 1 - level) for s, level in latest.items()
    })


class FeatureTracker:
    """Keeps path features up to date as the search pushes and pops path literals.

    A path literal whose variables got bound or unbound since it was pushed
    is popped and pushed again, together with everything above it.
    """

    def __init__(self, df: Counter, problems: int, syms: SymTable | None = None,
                 subst: Subst | None = None) -> None:
        self.df = df
        self.problems = problems
        self.syms = syms
        self.subst = subst
        self.lits: list[Lit] = []
        self.resolved: list[Lit] = []
        self.layers: list[set[str]] = []
        # symbol -> stack of levels it occurs at
        self._levels: dict[str, list[int]] = {}

    def _resolve(self, lit: Lit) -> Lit:
        return self.subst.resolve_lit(lit) if self.subst is not None else lit

    def _push(self, lit: Lit) -> None:
        resolved = self._resolve(lit)
        symbols = lit_features(resolved, self.syms)
        level = len(self.layers)
        self.lits.append(lit)
        self.resolved.append(resolved)
        self.layers.append(symbols)
        for s in sorted(symbols):
            self._levels.setdefault(s, []).append(level)

    def _pop(self) -> None:
        symbols = self.layers.pop()
        self.lits.pop()
        self.resolved.pop()
        for s in symbols:
            stack = self._levels[s]
            stack.pop()
            if not stack:
                del self._levels[s]

    def _current(self, k: int) -> bool:
        lit = self.lits[k]
        return self.subst is None or not lit.args or self._resolve(lit) == self.resolved[k]

    def sync(self, path: Sequence[Lit]) -> None:
        """Pop entries not shared with path or changed by σ, then push the rest of it"""
        keep = 0
        for mine, theirs in zip(self.lits, path):
            if mine is not theirs or not self._current(keep):
                break
            keep += 1
        while len(self.lits) > keep:
            self._pop()
        for lit in path[keep:]:
            self._push(lit)

    def features(self) -> FeatureVec:
        depth = len(self.layers)
        return FeatureVec({
            s: idf(s, self.df, self.problems) * recency(depth - 1 - levels[-1])
            for s, levels in self._levels.items()
        })


# ---------------------------------------------------------------------------
# training data
# ---------------------------------------------------------------------------

@dataclass
class ContraStats:
    uses: int = 0
    features: Counter = field(default_factory=Counter)


@dataclass
class TrainDB:
    contras: dict[str, ContraStats] = field(default_factory=dict)
    closability: dict[str, list[int]] = field(default_factory=dict)
    df: Counter = field(default_factory=Counter)
    problems: int = 0

    def add_use(self, key: str, features: Iterable[str]) -> None:
        stats = self.contras.setdefault(key, ContraStats())
        stats.uses += 1
        stats.features.update(set(features))

    def add_attempts(self, key: str, closed: int, failed: int) -> None:
        counts = self.closability.setdefault(key, [0, 0])
        counts[0] += closed
        counts[1] += failed

    def counts(self, key: str) -> tuple[int, int]:
        """p(l), n(l)"""
        p, n = self.closability.get(key, (0, 0))
        return p, n

    def uses(self, key: str) -> int:
        stats = self.contras.get(key)
        return stats.uses if stats else 0

    def conditional(self, key: str, feature: str, mu: float) -> float:
        """P(feature | key), μ when the feature never co-occurred"""
        stats = self.contras.get(key)
        if stats is None or not stats.uses or not stats.features.get(feature):
            return mu
        return stats.features[feature] / stats.uses

    def merge(self, other: "TrainDB") -> "TrainDB":
        for key, stats in other.contras.items():
            mine = self.contras.setdefault(key, ContraStats())
            mine.uses += stats.uses
            mine.features.update(stats.features)
        for key, (p, n) in other.closability.items():
            self.add_attempts(key, p, n)
        self.df.update(other.df)
        self.problems += other.problems
        return self

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(FORMAT_HEADER + "\n")
            f.write(f"problems\t{self.problems}\n")
            for symbol, count in sorted(self.df.items()):
                f.write(f"df\t{symbol}\t{count}\n")
            for key, stats in self.contras.items():
                f.write(f"contra\t{key}\t{stats.uses}\n")
                for feature, count in sorted(stats.features.items()):
                    f.write(f"feature\t{key}\t{feature}\t{count}\n")
            for key, (p, n) in self.closability.items():
                f.write(f"close\t{key}\t{p}\t{n}\n")
        return path

    @classmethod
    def load(cls, path: str | Path) -> "TrainDB":
        path = Path(path)
        if not path.exists():
            raise TrainingDataError(f"Training data not found: {path}", {"path": str(path)})
        db = cls()
        with open(path) as f:
            for number, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t")
                try:
                    kind = fields[0]
                    if kind == "problems":
                        db.problems = int(fields[1])
                    elif kind == "df":
                        db.df[fields[1]] = int(fields[2])
                    elif kind == "contra":
                        db.contras.setdefault(fields[1], ContraStats()).uses = int(fields[2])
                    elif kind == "feature":
                        db.contras.setdefault(fields[1], ContraStats()).features[fields[2]] = int(fields[3])
                    elif kind == "close":
                        db.closability[fields[1]] = [int(fields[2]), int(fields[3])]
                    else:
                        raise ValueError(f"unknown record {kind!r}")
                except (IndexError, ValueError) as e:
                    raise TrainingDataError(
                        f"Malformed training data at {path}:{number}: {e}",
                        {"path": str(path), "line": number},
                    ) from e
        return db


def extract_training(
    proof: Proof,
    matrix: ClausalMatrix,
    attempts: Counter | None = None,
) -> TrainDB:
    """Training delta of one clausal proof: contrapositive uses with their path features,
    closability counts from the attempt trace, and symbol document frequencies"""
    db = TrainDB()
    syms = matrix.syms
    sigma = proof.psubst()
    db.problems = 1
    db.df.update({s for c in matrix.clauses for l in c.lits for s in lit_features(l, syms)})

    closed: Counter = Counter()

    def walk(node: ProofNode, path: tuple[set[str], ...]) -> None:
        if node.origin is not None:
            closed[node.origin] += 1
        if node.rule == EXT:
            here = path + (lit_features(sigma.resolve_lit(node.lit), syms),)
            clause = matrix.clauses[node.clause]
            db.add_use(contra_key(clause.lits, node.pos, syms), set().union(*here))
            for child in node.children:
                walk(child, here)
        else:
            for child in node.children:
                walk(child, path)

    walk(proof.root, ())
    for origin, tried in (attempts or Counter()).items():
        clause_index, pos = origin
        p = closed.get(origin, 0)
        key = contra_key(matrix.clauses[clause_index].lits, pos, syms)
        db.add_attempts(key, p, max(tried - p, 0))
    return db


# ---------------------------------------------------------------------------
# scoring and ranking
# ---------------------------------------------------------------------------

def nb_score(key: str, f: FeatureVec, db: TrainDB, params: NBParams | None = None) -> float:
    params = params or NBParams()
    stats = db.contras.get(key)
    if stats is None or stats.uses == 0:
        return params.sigma1 * math.log(params.mu)
    score = params.sigma1 * math.log(stats.uses)
    score += params.sigma2 * sum(
        f.get(s) * math.log(db.conditional(key, s, params.mu)) for s in f
    )
    absent = 0.0
    for s, count in stats.features.items():
        if s in f:
            continue
        p = count / stats.uses
        if p < 1:
            absent += idf(s, db.df, db.problems) * math.log(1 - p)
    return score + params.sigma3 * absent


def ranks(scores: Sequence[float]) -> list[int]:
    """rank(c) = number of candidates scoring at least as high as c"""
    ordered = sorted(scores, reverse=True)
    out = []
    for s in scores:
        lo, hi = 0, len(ordered)
        while lo < hi:
            mid = (lo + hi) // 2
            if ordered[mid] >= s:
                lo = mid + 1
            else:
                hi = mid
        out.append(lo)
    return out


def rank_contrapositives(
    candidates: Sequence,
    f: FeatureVec,
    db: TrainDB,
    params: NBParams | None = None,
    key: Callable[[Any], str] = str,
) -> tuple[list, list[int]]:
    """Candidates sorted by descending score (stable) and each one's rank, in input order"""
    scores = [nb_score(key(c), f, db, params) for c in candidates]
    order = sorted(range(len(candidates)), key=lambda i: -scores[i])
    return [candidates[i] for i in order], ranks(scores)


class NBGuide:
    """Order hook for the clausal search"""

    def __init__(self, matrix: ClausalMatrix, db: TrainDB, params: NBParams | None = None):
        self.matrix = matrix
        self.db = db
        self.params = params or NBParams()
        self.tracker: FeatureTracker | None = None
        self._keys: dict[tuple[int, int], str] = {}

    def bind(self, search: ClausalSearch) -> "NBGuide":
        self.tracker = FeatureTracker(self.db.df, self.db.problems, self.matrix.syms, search.subst)
        return self

    def key(self, contra: Contra) -> str:
        k = (contra.clause, contra.pos)
        if k not in self._keys:
            self._keys[k] = contra_key(self.matrix.clauses[contra.clause].lits, contra.pos, self.matrix.syms)
        return self._keys[k]

    def features(self, lit: Lit, path: tuple[Lit, ...]) -> FeatureVec:
        if self.tracker is None:
            self.tracker = FeatureTracker(self.db.df, self.db.problems, self.matrix.syms)
        self.tracker.sync(path + (lit,))
        return self.tracker.features()

    def __call__(self, lit: Lit, path: tuple[Lit, ...], entries: list[Contra]) -> list[Contra]:
        if not entries:
            return entries
        ordered, _ = rank_contrapositives(entries, self.features(lit, path), self.db, self.params, self.key)
        return ordered

    def rank_of(self, lit: Lit, path: tuple[Lit, ...], entries: list[Contra]) -> dict[tuple[int, int], int]:
        _, r = rank_contrapositives(entries, self.features(lit, path), self.db, self.params, self.key)
        return {(c.clause, c.pos): rank for c, rank in zip(entries, r)}


def prove_guided(
    matrix: ClausalMatrix,
    opts: SearchOptions | None,
    db: TrainDB,
    params: NBParams | None = None,
    logger: RunLogger | None = None,
) -> SearchResult:
    """Clausal search trying extensions in Naive Bayes rank order"""
    guide = NBGuide(matrix, db, params)
    search = ClausalSearch(matrix, opts, order_hook=guide)
    guide.bind(search)
    return search.run(logger)
