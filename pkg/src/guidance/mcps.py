"""
Monte Carlo proof search over clausal derivations.

A node of the search tree is a derivation: its open branches (leaf literal,
path, origin) and a persistent substitution. A step closes the first open
branch by reduction or extension. The Monte Carlo tree holds a subset of
these derivations; there is no backpropagation step, each node keeps the
count and reward sum of its descendants instead.

Used as an advisor the tree is grown from a single branch and its result
reorders the steps the clausal search tries for that branch. With an
unbounded iteration count the whole proof is searched for in the tree.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from ..exceptions import SearchTimeout
from ..matrix import ClausalMatrix, ContraIndex, contra_key
from ..proof import EXT, LEMMA, RED, START, Proof, ProofNode
from ..run_log import RunEventType, RunLevel, RunLogger
from ..search.base import GAVE_UP, THEOREM, TIMEOUT, Deadline, SearchOptions, SearchResult, SearchStats
from ..search.clausal import ClausalSearch, Step
from ..terms import Lit, Var, lit_size, rename_lit
from ..unify import PSubst
from .nb import NBParams, TrainDB, lit_features, path_features, rank_contrapositives

UNIFORM, OPEN_BRANCHES, NB = "uniform", "open", "nb"
RATIO, WEIGHT, CLOSABILITY, RANDOM = "ratio", "weight", "closability", "random"
DEFAULT, MIN_BRANCHES, MIN_DEPTH = "default", "min-branch", "min-depth"


@dataclass
class MCParams:
    cp: float = 1.0
    s_max: int = 50
    iterations: float = math.inf
    prob: str = OPEN_BRANCHES
    reward: str = RATIO
    expand: str = MIN_BRANCHES
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.cp < 0:
            raise ValueError("cp must be non-negative")
        if self.s_max < 1:
            raise ValueError("s_max must be at least 1")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.prob not in (UNIFORM, OPEN_BRANCHES, NB):
            raise ValueError(f"Unknown child probability: {self.prob}")
        if self.reward not in (RATIO, WEIGHT, CLOSABILITY, RANDOM):
            raise ValueError(f"Unknown reward: {self.reward}")
        if self.expand not in (DEFAULT, MIN_BRANCHES, MIN_DEPTH):
            raise ValueError(f"Unknown expansion policy: {self.expand}")

    @classmethod
    def from_config(cls, mcps: dict[str, Any]) -> "MCParams":
        iterations = mcps.get("iterations", math.inf)
        return cls(
            cp=float(mcps.get("cp", 1.0)),
            s_max=int(mcps.get("s_max", 50)),
            iterations=parse_iterations(iterations),
            prob=mcps.get("prob", OPEN_BRANCHES),
            reward=mcps.get("reward", RATIO),
            expand=mcps.get("expand", MIN_BRANCHES),
            seed=int(mcps.get("seed", 0)),
        )


def parse_iterations(value) -> float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    return int(value)


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    lit: Lit
    path: tuple[Lit, ...]
    origin: tuple[int, int]


@dataclass(frozen=True, eq=False)
class MCState:
    open: tuple[Branch, ...]
    closed: int
    sigma: PSubst
    next_var: int
    started: bool = True
    prev: "MCState | None" = None
    # (rule, path_index | (clause, pos), env)
    step: tuple | None = None

    @property
    def is_proof(self) -> bool:
        return self.started and not self.open

    @property
    def total(self) -> int:
        return self.closed + len(self.open)

    def depth_sum(self) -> int:
        return sum(len(b.path) for b in self.open)

    def steps(self) -> list[tuple]:
        out = []
        state = self
        while state.prev is not None:
            out.append(state.step)
            state = state.prev
        return out[::-1]


def norm(x: float) -> float:
    return 1 - 1 / (x + 1)


# ---------------------------------------------------------------------------
# tree
# ---------------------------------------------------------------------------

class MCNode:
    def __init__(self, state: MCState, parent: "MCNode | None" = None, reward: float = 0.0):
        self.state = state
        self.parent = parent
        self.children: list[MCNode] = []
        self.reward = reward
        # strict descendants
        self.visits = 0
        # rewards of this node and its descendants
        self.total = reward
        self.used: set[int] = set()
        self.dead = False
        self._successors: list[MCState] | None = None

    @property
    def mean(self) -> float:
        """Average descendant reward; infinite while the node has no descendants"""
        return self.total / self.visits if self.visits else math.inf

    def add_child(self, child: "MCNode") -> None:
        self.children.append(child)
        node = self
        while node is not None:
            node.visits += 1
            node.total += child.reward
            node = node.parent

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def chain(self) -> list["MCNode"]:
        out, node = [], self
        while node is not None:
            out.append(node)
            node = node.parent
        return out[::-1]


def uct(parent: MCNode, child: MCNode, cp: float) -> float:
    if child.visits == 0:
        return math.inf
    return child.mean + cp * math.sqrt(math.log(parent.visits) / child.visits)


def discrimination(root: MCNode, n_p: MCNode) -> float:
    """Mean reward on the root..n_p chain over the mean reward of the whole tree"""
    nodes = list(root.walk())
    overall = sum(n.reward for n in nodes) / len(nodes)
    if overall == 0:
        return 1.0
    chain = n_p.chain()
    return (sum(n.reward for n in chain) / len(chain)) / overall


def expand_select(sim: Sequence[MCState], policy: str) -> int:
    """Index of the simulation state to add to the tree"""
    if policy == DEFAULT or not sim:
        return 0
    if policy == MIN_BRANCHES:
        norms = [len(s.open) for s in sim]
    else:
        norms = [s.depth_sum() for s in sim]
    return norms.index(min(norms))


class MCTree:
    """Monte Carlo tree over derivations of one clausal matrix"""

    def __init__(
        self,
        matrix: ClausalMatrix,
        root: MCState,
        params: MCParams | None = None,
        db: TrainDB | None = None,
        nb_params: NBParams | None = None,
        conj: bool = False,
        index: ContraIndex | None = None,
        rng: random.Random | None = None,
        deadline: Deadline | None = None,
    ) -> None:
        self.matrix = matrix
        self.params = params or MCParams()
        self.db = db or TrainDB()
        self.nb_params = nb_params or NBParams()
        self.conj = conj
        self.index = index or ContraIndex(matrix)
        self.rng = rng or random.Random(self.params.seed)
        self.deadline = deadline
        self.iterations = 0
        self.sim_steps = 0
        self.inferences = 0
        self.discriminations: list[float] = []
        self._keys: dict[tuple[int, int], str] = {}
        self.root = MCNode(root, None, self.reward(root))

    # -- derivation steps ------------------------------------------------------

    def copy(self, clause_index: int, next_var: int) -> tuple[dict[int, int], tuple[Lit, ...], int]:
        clause = self.matrix.clauses[clause_index]
        env = {v: next_var + i for i, v in enumerate(clause.vars)}
        mapping = {v: Var(c) for v, c in env.items()}
        return env, tuple(rename_lit(l, mapping) for l in clause.lits), next_var + len(env)

    def successors(self, state: MCState) -> list[MCState]:
        if not state.started:
            out = []
            for clause in self.matrix.start_clauses(self.conj):
                env, lits, nv = self.copy(clause.index, state.next_var)
                branches = tuple(Branch(l, (), (clause.index, i)) for i, l in enumerate(lits))
                out.append(MCState(branches, 0, state.sigma, nv, True, state, (START, clause.index, env)))
            return out
        if not state.open:
            return []
        b, rest = state.open[0], state.open[1:]
        out = []
        for i, p in enumerate(b.path):
            if p.pred != -b.lit.pred:
                continue
            sigma = state.sigma.unify_lits(b.lit, p.complement())
            if sigma is not None:
                self.inferences += 1
                out.append(MCState(rest, state.closed + 1, sigma, state.next_var, True, state, (RED, i, None)))
        for contra in self.index.lookup(b.lit):
            env, lits, nv = self.copy(contra.clause, state.next_var)
            sigma = state.sigma.unify_lits(b.lit, lits[contra.pos].complement())
            if sigma is None:
                continue
            self.inferences += 1
            path = b.path + (b.lit,)
            new = tuple(Branch(l, path, (contra.clause, i)) for i, l in enumerate(lits) if i != contra.pos)
            closed = state.closed + (0 if new else 1)
            out.append(MCState(new + rest, closed, sigma, nv, True, state, (EXT, (contra.clause, contra.pos), env)))
        return out

    def node_successors(self, node: MCNode) -> list[MCState]:
        if node._successors is None:
            node._successors = self.successors(node.state)
        return node._successors

    # -- heuristics ------------------------------------------------------------

    def key(self, clause: int, pos: int) -> str:
        if (clause, pos) not in self._keys:
            self._keys[(clause, pos)] = contra_key(self.matrix.clauses[clause].lits, pos, self.matrix.syms)
        return self._keys[(clause, pos)]

    def child_weights(self, state: MCState, children: Sequence[MCState]) -> list[float]:
        model = self.params.prob
        if model == UNIFORM:
            return [1.0] * len(children)
        if model == OPEN_BRANCHES:
            return [1 / (1 + len(c.open)) for c in children]
        ext = [i for i, c in enumerate(children) if c.step[0] == EXT]
        weights = [1.0] * len(children)
        if ext and state.open:
            b = state.open[0]
            layers = [lit_features(state.sigma.resolve_lit(l), self.matrix.syms) for l in b.path + (b.lit,)]
            f = path_features(layers, self.db.df, self.db.problems)
            _, r = rank_contrapositives(
                [children[i].step[1] for i in ext], f, self.db, self.nb_params, key=lambda cp: self.key(*cp)
            )
            for i, rank in zip(ext, r):
                weights[i] = 1 / rank
        return weights

    def child_probability(self, state: MCState, children: Sequence[MCState]) -> list[float]:
        weights = self.child_weights(state, children)
        total = sum(weights)
        return [w / total for w in weights]

    def reward(self, state: MCState) -> float:
        if state.is_proof:
            return 1.0
        model = self.params.reward
        opened = state.open
        if not opened:
            return 0.0
        if model == RATIO:
            return state.closed / state.total
        if model == WEIGHT:
            return sum(
                norm(len(b.path)) / lit_size(state.sigma.resolve_lit(b.lit)) for b in opened
            ) / len(opened)
        if model == CLOSABILITY:
            values = []
            for b in opened:
                p, n = self.db.counts(self.key(*b.origin))
                values.append(1.0 if p + n == 0 else 1 - norm(p + n) * n / (p + n))
            return sum(values) / len(values)
        return self.rng.random()

    # -- iteration ---------------------------------------------------------------

    def select(self) -> MCNode | None:
        """Descend by UCT; stop at a node that can still start a simulation"""
        while not self.root.dead:
            node = self.root
            while True:
                if len(node.used) < len(self.node_successors(node)):
                    return node
                live = [c for c in node.children if not c.dead]
                if not live:
                    node.dead = True
                    break
                node = max(live, key=lambda c: uct(node, c, self.params.cp))
        return None

    def simulate(self, node: MCNode) -> tuple[int, list[MCState]]:
        successors = self.node_successors(node)
        free = [i for i in range(len(successors)) if i not in node.used]
        probs = self.child_probability(node.state, [successors[i] for i in free])
        first = self.rng.choices(free, weights=probs)[0]
        node.used.add(first)
        sim = [successors[first]]
        while len(sim) < self.params.s_max and not sim[-1].is_proof:
            if self.deadline is not None:
                self.deadline.check()
            nxt = self.successors(sim[-1])
            if not nxt:
                break
            probs = self.child_probability(sim[-1], nxt)
            sim.append(self.rng.choices(nxt, weights=probs)[0])
        self.sim_steps += len(sim)
        return first, sim

    def iterate(self) -> MCState | None:
        """One selection, simulation and expansion; returns a proof state if the simulation found one"""
        node = self.select()
        if node is None:
            return None
        self.iterations += 1
        _, sim = self.simulate(node)
        chosen = sim[expand_select(sim, self.params.expand)]
        child = MCNode(chosen, node, self.reward(sim[-1]))
        node.add_child(child)
        if sim[-1].is_proof:
            self.discriminations.append(discrimination(self.root, child))
            return sim[-1]
        return None

    @property
    def exhausted(self) -> bool:
        return self.root.dead


def mcts_iterate(tree: MCTree) -> tuple[MCTree, MCState | None]:
    return tree, tree.iterate()


# ---------------------------------------------------------------------------
# proofs from derivations
# ---------------------------------------------------------------------------

def build_proof(state: MCState, matrix: ClausalMatrix) -> Proof:
    """Proof tree of a closed derivation grown from the start state"""
    steps = state.steps()
    if not steps or steps[0][0] != START:
        raise ValueError("derivation does not begin with a start step")
    _, clause_index, env = steps[0]
    root = ProofNode(START, clause=clause_index, env=env)
    mapping = {v: Var(c) for v, c in env.items()}
    pending = [
        (root, rename_lit(l, mapping), (clause_index, i))
        for i, l in enumerate(matrix.clauses[clause_index].lits)
    ]
    for rule, detail, env in steps[1:]:
        parent, lit, origin = pending.pop(0)
        if rule == RED:
            parent.children.append(ProofNode(RED, lit=lit, path_index=detail, origin=origin))
            continue
        clause_index, pos = detail
        node = ProofNode(EXT, lit=lit, clause=clause_index, pos=pos, env=env, origin=origin)
        parent.children.append(node)
        mapping = {v: Var(c) for v, c in env.items()}
        lits = matrix.clauses[clause_index].lits
        pending = [
            (node, rename_lit(l, mapping), (clause_index, i)) for i, l in enumerate(lits) if i != pos
        ] + pending
    for i, node in enumerate(root.walk()):
        node.order = i
    return Proof(root, "clausal", dict(state.sigma.items()))


# ---------------------------------------------------------------------------
# advisor
# ---------------------------------------------------------------------------

def step_key(step: Step | tuple) -> tuple:
    if isinstance(step, Step):
        if step.rule == RED:
            return (RED, step.path_index)
        if step.rule == EXT:
            return (EXT, (step.contra.clause, step.contra.pos))
        return (LEMMA, id(step.source))
    return (step[0], step[1])


@dataclass
class MCAdvisor:
    matrix: ClausalMatrix
    params: MCParams
    db: TrainDB = field(default_factory=TrainDB)
    nb_params: NBParams = field(default_factory=NBParams)
    logger: RunLogger | None = None

    def __post_init__(self) -> None:
        self.rng = random.Random(self.params.seed)
        self.iterations = 0
        self.sim_steps = 0
        self.inferences = 0
        self.discriminations: list[float] = []

    def order(self, search: ClausalSearch, lit: Lit, path: tuple[Lit, ...], lim: int, steps: list[Step]) -> list[Step]:
        """Steps from simulation proofs, then the root children by average reward, then the rest"""
        if self.params.iterations == 0 or not steps:
            return steps
        root = MCState(
            (Branch(lit, path, (-1, -1)),), 0,
            PSubst(search.subst.bindings()), search.next_var,
        )
        tree = MCTree(self.matrix, root, self.params, self.db, self.nb_params,
                      index=search.index, rng=self.rng, deadline=search.deadline)
        proofs: list[tuple] = []
        while tree.iterations < self.params.iterations and not tree.exhausted:
            found = tree.iterate()
            if found is not None:
                proofs.append(found.steps()[0])
                break
        self.iterations += tree.iterations
        self.sim_steps += tree.sim_steps
        self.inferences += tree.inferences
        self.discriminations.extend(tree.discriminations)
        if self.logger:
            self.logger.log(
                RunEventType.MCTS_ITERATION, f"{tree.iterations} iterations",
                level=RunLevel.DEBUG, details={"sim_steps": tree.sim_steps, "proof": bool(proofs)},
            )

        ranked = sorted(tree.root.children, key=lambda c: -(c.mean if c.visits else c.reward))
        preferred = proofs + [c.state.steps()[0] for c in ranked]
        by_key = {step_key(s): s for s in steps}
        out: list[Step] = [s for s in steps if s.rule == LEMMA]
        seen = {step_key(s) for s in out}
        for p in preferred:
            k = step_key(p)
            if k in by_key and k not in seen:
                out.append(by_key[k])
                seen.add(k)
        out.extend(s for s in steps if step_key(s) not in seen)
        return out

    def record(self, stats: SearchStats) -> None:
        stats.extra["iterations"] = self.iterations
        stats.extra["sim_steps"] = self.sim_steps
        if self.discriminations:
            stats.extra["discrimination"] = round(sum(self.discriminations) / len(self.discriminations), 3)


def prove_with_advisor(
    matrix: ClausalMatrix,
    opts: SearchOptions | None,
    params: MCParams,
    db: TrainDB | None = None,
    nb_params: NBParams | None = None,
    logger: RunLogger | None = None,
) -> SearchResult:
    """Clausal search advised by Monte Carlo trees; unbounded iterations search in the tree alone"""
    opts = opts or SearchOptions()
    db = db or TrainDB()
    if math.isinf(params.iterations):
        return prove_monte_carlo(matrix, opts, params, db, nb_params, logger)
    advisor = MCAdvisor(matrix, params, db, nb_params or NBParams(), logger)
    search = ClausalSearch(matrix, opts, advisor=advisor)
    result = search.run(logger)
    advisor.record(result.stats)
    return result


def prove_monte_carlo(
    matrix: ClausalMatrix,
    opts: SearchOptions,
    params: MCParams,
    db: TrainDB | None = None,
    nb_params: NBParams | None = None,
    logger: RunLogger | None = None,
) -> SearchResult:
    deadline = Deadline(opts.timeout)
    root = MCState((), 0, PSubst(), matrix.max_var + 1, started=False)
    tree = MCTree(matrix, root, params, db, nb_params, conj=opts.conj, deadline=deadline)
    stats = SearchStats()
    status, proof = GAVE_UP, None
    try:
        while not tree.exhausted:
            deadline.check()
            found = tree.iterate()
            if found is not None:
                proof = build_proof(found, matrix)
                status = THEOREM
                break
    except SearchTimeout:
        status = TIMEOUT
        if logger:
            logger.log_timeout(tree.inferences)
    stats.inferences = tree.inferences
    stats.elapsed_seconds = deadline.elapsed()
    stats.pruned = not tree.exhausted
    if proof is not None:
        stats.depth = _proof_depth(proof.root)
        if logger:
            logger.log_proof(stats.depth, stats.inferences, "mcps")
    stats.extra["iterations"] = tree.iterations
    stats.extra["sim_steps"] = tree.sim_steps
    if tree.discriminations:
        stats.extra["discrimination"] = round(tree.discriminations[-1], 3)
    return SearchResult(status, proof, stats, "clausal")


def _proof_depth(node: ProofNode, depth: int = 0) -> int:
    if node.rule == EXT:
        depth += 1
    return max([depth] + [_proof_depth(c, depth) for c in node.children])
