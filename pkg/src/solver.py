"""
Exact search for chi_lt and for the edge-only and vertex-only variants.

exists_ltal_with_colors runs a backtracking search over bijections
V ∪ E -> [1, p+q]. Elements are assigned in a fixed order (per component:
edges in traversal order, then vertices), labels are tried in ascending
order, and a weight is only compared once every label feeding it is
placed. The first witness found is therefore the lexicographically first
one under that order, whatever the thread count.
"""
import itertools
import logging
import threading
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Annotated, Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from src.bounds import known_values, lower_bound
from src.exceptions import InadmissibleGraphError, InvalidParameterError, SolverError
from src.graph_core import ComponentStructure, Graph, component_structures
from src.labeling_core import (
    EdgeOnlyLabeling,
    TotalLabeling,
    VertexOnlyLabeling,
    admissibility_violations,
    verify_ltal,
)

logger = logging.getLogger(__name__)

# Nodes explored between budget and cancellation checks
_CHECK_EVERY = 1024

SolveStatus = Literal["exact", "feasible", "lower_bound_proved", "inconclusive"]
Invariant = Literal["lt", "la", "lea"]
Witness = Annotated[
    Union[TotalLabeling, EdgeOnlyLabeling, VertexOnlyLabeling],
    Field(discriminator="kind"),
]


class SearchBudget(BaseModel):
    """
    Limits for one query.

    The node limit is split evenly among the first-level branches of each
    color target; nodes spent on a settled target reduce the next one.
    """

    node_limit: int = Field(default=50_000_000, gt=0)
    time_limit_seconds: Optional[float] = Field(default=None, gt=0)
    max_colors: Optional[int] = Field(default=None, ge=1)


class SearchStats(BaseModel):
    nodes: int = 0
    prunes: int = 0


class SolveResult(BaseModel):
    status: SolveStatus
    invariant: Invariant = "lt"
    value: Optional[int] = None
    lower: Optional[int] = None
    upper: Optional[int] = None
    witness: Optional[Witness] = None
    certificate: List[str] = Field(default_factory=list)
    stats: SearchStats = Field(default_factory=SearchStats)

    @model_validator(mode="after")
    def check_status(self) -> "SolveResult":
        if self.status in ("exact", "feasible") and self.witness is None:
            raise ValueError(f"{self.status} results must carry a witness")
        if self.status == "exact" and not (self.value == self.lower == self.upper):
            raise ValueError("exact results need value == lower == upper")
        return self

    def to_dict(self) -> Dict[str, object]:
        return self.model_dump(mode="json")


class _BudgetExhausted(Exception):
    pass


class _Cancelled(Exception):
    pass


class _SharedBudget:
    """
    Budget bookkeeping for one query.

    Every first-level branch of a color target gets its own slice of the
    node limit, so whether a branch finishes never depends on how threads
    are scheduled. Only the nodes of branches at or below the deciding
    branch count against later targets; the wall-clock deadline is shared.
    """

    def __init__(self, budget: SearchBudget):
        self.node_limit = budget.node_limit
        self.deadline = (
            time.monotonic() + budget.time_limit_seconds
            if budget.time_limit_seconds is not None
            else None
        )
        self.spent = 0
        self.nodes = 0
        self.prunes = 0
        self.winner: Optional[int] = None
        self._lock = threading.Lock()

    def branch_slice(self, branches: int) -> int:
        return max(1, (self.node_limit - self.spent) // max(branches, 1))

    def charge(self, nodes: int, prunes: int) -> None:
        with self._lock:
            self.nodes += nodes
            self.prunes += prunes

    def out_of_time(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def claim(self, branch: int) -> None:
        with self._lock:
            if self.winner is None or branch < self.winner:
                self.winner = branch

    def cancelled(self, branch: int) -> bool:
        winner = self.winner
        return winner is not None and winner < branch

    def reset_claims(self) -> None:
        self.winner = None

    def stats(self) -> SearchStats:
        return SearchStats(nodes=self.nodes, prunes=self.prunes)


# ----------------------------------------------------------------------
# Element order and symmetry breaking
# ----------------------------------------------------------------------


def _bfs_elements(G: Graph, structure: ComponentStructure) -> Tuple[List[int], List[int]]:
    start = structure.vertices[0]
    nxg = G.nx_graph
    edges = [nxg.edges[u, v]["eid"] for u, v in nx.edge_bfs(nxg, start)]
    vertices = [start] + [v for _, v in nx.bfs_edges(nxg, start)]
    return edges, vertices


def search_order(G: Graph) -> List[int]:
    """Edges then vertices of each component; cycles and paths follow their traversal."""
    order: List[int] = []
    for structure in component_structures(G):
        if structure.kind == "other":
            edges, vertices = _bfs_elements(G, structure)
        else:
            edges, vertices = list(structure.edges), list(structure.vertices)
        order.extend(edges)
        order.extend(vertices)
    return order


def symmetry_constraints(G: Graph) -> Dict[int, List[int]]:
    """
    Map element -> earlier elements whose labels it must exceed.

    Cycles: the first traversal edge holds the smallest edge label and
    f(e_2) < f(e_n). Paths: f(e_1) < f(e_last). Identical cycle or path
    components are ordered by the label of their first edge.
    """
    constraints: Dict[int, List[int]] = defaultdict(list)
    previous_first: Dict[Tuple[str, int], int] = {}
    for structure in component_structures(G):
        edges = structure.edges
        if structure.kind == "cycle":
            for eid in edges[1:]:
                constraints[eid].append(edges[0])
            constraints[edges[-1]].append(edges[1])
        elif structure.kind == "path" and len(edges) >= 2:
            constraints[edges[-1]].append(edges[0])
        else:
            continue
        key = (structure.kind, structure.order)
        if key in previous_first:
            constraints[edges[0]].append(previous_first[key])
        previous_first[key] = edges[0]
    return dict(constraints)


# ----------------------------------------------------------------------
# Backtracking search
# ----------------------------------------------------------------------


class _LabelSearch:
    """
    One first-level branch of the search for a labeling with at most t colors.

    The depth-first walk keeps its own stack of placed levels, so graphs
    with thousands of elements do not hit the interpreter's recursion limit.
    """

    def __init__(
        self,
        G: Graph,
        order: Sequence[int],
        t: int,
        constraints: Dict[int, List[int]],
        shared: _SharedBudget,
        branch: int,
        node_slice: int,
    ):
        self.n = len(order)
        self.t = t
        self.shared = shared
        self.branch = branch
        self.node_slice = node_slice
        self.check_every = min(_CHECK_EVERY, node_slice)
        index = {element: i for i, element in enumerate(order)}

        self.feeds: List[List[int]] = []
        self.differ: List[List[int]] = []
        needed: List[int] = []
        for element in order:
            if G.is_edge(element):
                u, v = G.endpoints(element)
                self.feeds.append([index[u], index[v]])
                self.differ.append([index[e] for e in G.adjacent_edges(element)] + [index[u], index[v]])
                needed.append(2)
            else:
                incident = G.incident_edges(element)
                self.feeds.append([index[e] for e in incident])
                self.differ.append([index[u] for u in G.neighbors(element)] + [index[e] for e in incident])
                needed.append(len(incident))
        self.above = [[index[c] for c in constraints.get(element, ())] for element in order]

        self.labels = [0] * self.n
        self.used = [False] * (self.n + 1)
        self.partial = [0] * self.n
        self.left = needed
        self.weight: List[Optional[int]] = [None] * self.n
        self.counts: Dict[int, int] = {}
        self.explored = 0
        self._nodes = 0
        self._prunes = 0

    def _flush(self, enforce: bool = True) -> None:
        nodes, prunes = self._nodes, self._prunes
        self._nodes = self._prunes = 0
        self.explored += nodes
        self.shared.charge(nodes, prunes)
        if not enforce:
            return
        if self.explored > self.node_slice or self.shared.out_of_time():
            raise _BudgetExhausted()
        if self.shared.cancelled(self.branch):
            raise _Cancelled()

    def _place(self, i: int, label: int) -> Tuple[List[int], bool]:
        completed: List[int] = []
        for j in self.feeds[i]:
            self.partial[j] += label
            self.left[j] -= 1
            if self.left[j] == 0:
                self.weight[j] = self.partial[j]
                completed.append(j)
        for j in completed:
            w = self.weight[j]
            self.counts[w] = self.counts.get(w, 0) + 1
        if len(self.counts) > self.t:
            return completed, False
        for j in completed:
            w = self.weight[j]
            if any(self.weight[x] == w for x in self.differ[j]):
                return completed, False
        return completed, True

    def _unplace(self, i: int, label: int, completed: List[int]) -> None:
        for j in completed:
            w = self.weight[j]
            remaining = self.counts[w] - 1
            if remaining:
                self.counts[w] = remaining
            else:
                del self.counts[w]
            self.weight[j] = None
        for j in self.feeds[i]:
            self.partial[j] -= label
            self.left[j] += 1

    def _next_label(self, i: int, after: int) -> Optional[int]:
        """Smallest free label above ``after`` allowed at level i."""
        if i == 0:
            return self.branch if after < self.branch else None
        floor = max([after] + [self.labels[j] for j in self.above[i]])
        for label in range(floor + 1, self.n + 1):
            if not self.used[label]:
                return label
        return None

    def _walk(self) -> bool:
        placed: List[List[int]] = []
        cursor = [0] * (self.n + 1)
        i = 0
        while i < self.n:
            label = self._next_label(i, cursor[i])
            if label is None:
                if i == 0:
                    return False
                i -= 1
                previous = self.labels[i]
                self.used[previous] = False
                self._unplace(i, previous, placed.pop())
                continue
            cursor[i] = label
            self._nodes += 1
            if self._nodes >= self.check_every:
                self._flush()
            completed, ok = self._place(i, label)
            if not ok:
                self._prunes += 1
                self._unplace(i, label, completed)
                continue
            self.labels[i] = label
            self.used[label] = True
            placed.append(completed)
            i += 1
            cursor[i] = 0
        return True

    def run(self) -> Tuple[str, Optional[List[int]]]:
        try:
            if self.shared.cancelled(self.branch):
                return "cancelled", None
            found = self._walk()
        except _BudgetExhausted:
            return "inconclusive", None
        except _Cancelled:
            return "cancelled", None
        self._flush(enforce=False)
        if found:
            self.shared.claim(self.branch)
            return "witness", list(self.labels)
        return "refuted", None


def _require_admissible(G: Graph) -> None:
    problems = admissibility_violations(G)
    if problems:
        raise InadmissibleGraphError(f"Graph is not labelable: {problems[0].detail}")


def _witness_from_labels(G: Graph, order: Sequence[int], labels: Sequence[int]) -> TotalLabeling:
    vertex_labels: Dict[int, int] = {}
    edge_labels: Dict[int, int] = {}
    for element, label in zip(order, labels):
        if G.is_edge(element):
            edge_labels[element] = label
        else:
            vertex_labels[element] = label
    return TotalLabeling(vertex_labels=vertex_labels, edge_labels=edge_labels)


def _search(G: Graph, t: int, shared: _SharedBudget, threads: int) -> Tuple[str, Optional[TotalLabeling]]:
    order = search_order(G)
    constraints = symmetry_constraints(G)
    branches = range(1, len(order) + 1)
    node_slice = shared.branch_slice(len(branches))
    shared.reset_claims()

    def run_branch(label: int) -> Tuple[str, Optional[List[int]], int]:
        search = _LabelSearch(G, order, t, constraints, shared, label, node_slice)
        status, labels = search.run()
        return status, labels, search.explored

    outcomes: List[Tuple[str, Optional[List[int]], int]] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_branch, branches))
    else:
        for label in branches:
            outcome = run_branch(label)
            outcomes.append(outcome)
            if outcome[0] != "refuted":
                break

    # Lowest branch decides; cancelled branches only ever sit above a witness.
    for status, labels, explored in outcomes:
        shared.spent += explored
        if status == "witness":
            return "witness", _witness_from_labels(G, order, labels)
        if status == "inconclusive":
            return "inconclusive", None
    return "refuted", None


def _checked_witness(G: Graph, witness: TotalLabeling, t: int) -> int:
    report = verify_ltal(G, witness, provenance="solver")
    if not report.valid or report.color_count is None or report.color_count > t:
        raise SolverError(
            f"Search returned a labeling that fails verification at t={t}",
            witness=witness.to_dict(),
        )
    return report.color_count


def _exists(G: Graph, t: int, shared: _SharedBudget, threads: int) -> SolveResult:
    status, witness = _search(G, t, shared, threads)
    stats = shared.stats()
    if status == "witness":
        count = _checked_witness(G, witness, t)
        logger.debug(f"t={t}: witness with {count} colors after {stats.nodes} nodes")
        return SolveResult(status="feasible", value=count, upper=count, witness=witness, stats=stats)
    if status == "inconclusive":
        logger.info(f"t={t}: budget exhausted after {stats.nodes} nodes")
        return SolveResult(status="inconclusive", stats=stats)
    logger.debug(f"t={t}: refuted after {stats.nodes} nodes")
    return SolveResult(
        status="lower_bound_proved",
        value=t + 1,
        lower=t + 1,
        certificate=[f"search: no labeling with at most {t} colors"],
        stats=stats,
    )


def exists_ltal_with_colors(
    G: Graph,
    t: int,
    budget: Optional[SearchBudget] = None,
    threads: int = 1,
) -> SolveResult:
    """Decide whether G has a local total antimagic labeling with at most t colors."""
    _require_admissible(G)
    if t < 1:
        raise InvalidParameterError(f"Color bound must be positive, got {t}")
    if threads < 1:
        raise InvalidParameterError(f"Thread count must be positive, got {threads}")
    return _exists(G, t, _SharedBudget(budget or SearchBudget()), threads)


def solve_chi_lt(
    G: Graph,
    budget: Optional[SearchBudget] = None,
    threads: int = 1,
    use_bounds: bool = True,
) -> SolveResult:
    """
    chi_lt(G) by trying t = lower bound, lower bound + 1, ... until a witness appears.

    With ``use_bounds=False`` the search starts at t = 1 and every step of
    the lower end is proved by search alone.
    """
    _require_admissible(G)
    if threads < 1:
        raise InvalidParameterError(f"Thread count must be positive, got {threads}")
    budget = budget or SearchBudget()
    shared = _SharedBudget(budget)

    certificate: List[str] = []
    start = 1
    if use_bounds:
        report = lower_bound(G)
        start = report.lower
        certificate.extend(f"{j.rule}: chi_lt >= {j.bound}" for j in report.justifications)

    total = G.order + G.size
    cap = min(budget.max_colors or total, total)
    known = known_values(G)

    for t in range(start, cap + 1):
        logger.info(f"Searching for a labeling with at most {t} colors")
        outcome = _exists(G, t, shared, threads)
        if outcome.status == "feasible":
            if outcome.value != t:
                raise SolverError(
                    f"Witness uses {outcome.value} colors but the lower end was {t}",
                    witness=outcome.witness.to_dict(),
                )
            return SolveResult(
                status="exact",
                value=t,
                lower=t,
                upper=t,
                witness=outcome.witness,
                certificate=certificate,
                stats=shared.stats(),
            )
        if outcome.status == "inconclusive":
            return SolveResult(
                status="inconclusive",
                lower=t,
                upper=known.upper if known is not None else None,
                certificate=certificate,
                stats=shared.stats(),
            )
        certificate.extend(outcome.certificate)

    value = max(start, cap + 1)
    return SolveResult(
        status="lower_bound_proved",
        value=value,
        lower=value,
        certificate=certificate,
        stats=shared.stats(),
    )


# ----------------------------------------------------------------------
# Edge-only and vertex-only labelings (tiny instances)
# ----------------------------------------------------------------------


def _minimum_over_permutations(
    size: int,
    evaluate: Callable[[Tuple[int, ...]], Optional[int]],
    budget: SearchBudget,
) -> Tuple[str, Optional[int], Optional[Tuple[int, ...]], int]:
    deadline = time.monotonic() + budget.time_limit_seconds if budget.time_limit_seconds else None
    best: Optional[int] = None
    best_perm: Optional[Tuple[int, ...]] = None
    nodes = 0
    for perm in itertools.permutations(range(1, size + 1)):
        nodes += 1
        if nodes > budget.node_limit or (
            deadline is not None and nodes % _CHECK_EVERY == 0 and time.monotonic() > deadline
        ):
            return "inconclusive", best, best_perm, nodes
        colors = evaluate(perm)
        if colors is not None and (best is None or colors < best):
            best, best_perm = colors, perm
    return "complete", best, best_perm, nodes


def _single_kind_result(
    invariant: Invariant,
    outcome: Tuple[str, Optional[int], Optional[Tuple[int, ...]], int],
    witness: Optional[BaseModel],
    ceiling: int,
) -> SolveResult:
    status, best, _, nodes = outcome
    stats = SearchStats(nodes=nodes)
    if status == "inconclusive":
        return SolveResult(status="inconclusive", invariant=invariant, upper=best, stats=stats)
    if best is None:
        return SolveResult(
            status="lower_bound_proved",
            invariant=invariant,
            value=ceiling + 1,
            lower=ceiling + 1,
            certificate=["search: no valid labeling exists"],
            stats=stats,
        )
    return SolveResult(
        status="exact",
        invariant=invariant,
        value=best,
        lower=best,
        upper=best,
        witness=witness,
        certificate=["search: exhaustive enumeration"],
        stats=stats,
    )


def solve_chi_la(G: Graph, budget: Optional[SearchBudget] = None) -> SolveResult:
    """Minimum colors over edge bijections E -> [1, q] that separate adjacent vertex sums."""
    _require_admissible(G)
    edge_ids = G.edge_ids
    position = {eid: i for i, eid in enumerate(edge_ids)}
    incident = [[position[e] for e in G.incident_edges(v)] for v in G.vertices]
    vertex_index = {v: i for i, v in enumerate(G.vertices)}
    pairs = [(vertex_index[u], vertex_index[v]) for _, u, v in G.edges]

    def evaluate(perm: Tuple[int, ...]) -> Optional[int]:
        sums = [sum(perm[i] for i in edges) for edges in incident]
        if any(sums[a] == sums[b] for a, b in pairs):
            return None
        return len(set(sums))

    outcome = _minimum_over_permutations(len(edge_ids), evaluate, budget or SearchBudget())
    perm = outcome[2]
    witness = EdgeOnlyLabeling(edge_labels=dict(zip(edge_ids, perm))) if perm else None
    return _single_kind_result("la", outcome, witness, G.order)


def solve_chi_lea(G: Graph, budget: Optional[SearchBudget] = None) -> SolveResult:
    """Minimum colors over vertex bijections V -> [1, p] that separate adjacent edge sums."""
    _require_admissible(G)
    vertices = G.vertices
    vertex_index = {v: i for i, v in enumerate(vertices)}
    ends = [(vertex_index[u], vertex_index[v]) for _, u, v in G.edges]
    edge_index = {eid: i for i, eid in enumerate(G.edge_ids)}
    pairs = [
        (edge_index[eid], edge_index[other])
        for eid in G.edge_ids
        for other in G.adjacent_edges(eid)
        if edge_index[eid] < edge_index[other]
    ]

    def evaluate(perm: Tuple[int, ...]) -> Optional[int]:
        sums = [perm[a] + perm[b] for a, b in ends]
        if any(sums[x] == sums[y] for x, y in pairs):
            return None
        return len(set(sums))

    outcome = _minimum_over_permutations(len(vertices), evaluate, budget or SearchBudget())
    perm = outcome[2]
    witness = VertexOnlyLabeling(vertex_labels=dict(zip(vertices, perm))) if perm else None
    return _single_kind_result("lea", outcome, witness, G.size)
