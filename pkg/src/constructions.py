"""
Closed-form labelings for the cycle and path families, and pendant extensions.

Every generator is a direct transcription of an index formula. Nothing is
assumed valid: each result carries the verifier's report next to the color
count the formula predicts, and a mismatch is logged and recorded rather
than corrected.
"""
import logging
from typing import Callable, Dict, List, Literal, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, Field

from src.exceptions import (
    ExtensionSpecError,
    InvalidParameterError,
    NotCoveredError,
    UnknownVertexError,
)
from src.graph_core import (
    Graph,
    attach_pendants,
    build_cycle,
    build_path,
    disjoint_union,
    parse_role_tag,
    role_tag,
)
from src.labeling_core import (
    TotalLabeling,
    VerificationReport,
    WeightProfile,
    verify_ltal,
    weight_profile,
)

logger = logging.getLogger(__name__)

ExtensionVariant = Literal["none", "odd-width-swap", "unit-width-swap", "block-rotation"]


class ExtensionConditions(BaseModel):
    """
    Hypotheses of the two pendant-extension results, checked on the base
    labeling, and the bounds they give for G_v(k,s).

    ``max-degree`` needs a base using Δ+1 colors with v of maximum degree;
    ``pendant-count`` needs a base using d+1 colors for its d pendant
    edges. ``weights`` is the weight set the block labeling produces, so
    its size is always an attained color count when the labeling verifies.
    """

    rule: Literal["max-degree", "pendant-count", "none"]
    base_colors: Optional[int] = None
    blocks: List[Tuple[int, int]]
    vertex_weight: int
    extended_vertex_weight: int
    isolated_weight: Optional[int] = None
    degree_checks: Dict[str, bool] = Field(default_factory=dict)
    pendant_checks: Dict[str, bool] = Field(default_factory=dict)
    lower: int
    upper: Optional[int] = None
    exact: Optional[int] = None
    weights: List[int] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @property
    def weight_count(self) -> int:
        return len(self.weights)


class ConstructionResult(BaseModel):
    """A generated labeling with its predicted and verified color counts."""

    name: str
    parameters: Dict[str, int] = Field(default_factory=dict)
    graph: Graph
    labeling: TotalLabeling
    predicted_colors: int = Field(ge=1)
    predicted_weight_set: Optional[List[int]] = None
    predicted_lower: Optional[int] = None
    provenance: str
    report: VerificationReport
    variant: ExtensionVariant = "none"
    conditions: Optional[ExtensionConditions] = None
    notes: List[str] = Field(default_factory=list)

    @property
    def color_count(self) -> Optional[int]:
        return self.report.color_count

    @property
    def distinct_weights(self) -> Optional[List[int]]:
        return self.report.distinct_weights

    @property
    def matches_prediction(self) -> bool:
        if self.color_count != self.predicted_colors:
            return False
        return self.predicted_weight_set is None or self.predicted_weight_set == self.distinct_weights

    def profile(self) -> WeightProfile:
        return weight_profile(self.graph, self.labeling)

    def summary(self) -> Dict[str, object]:
        """Report bundle written next to the graph and labeling files."""
        return {
            "name": self.name,
            "parameters": self.parameters,
            "provenance": self.provenance,
            "predicted_colors": self.predicted_colors,
            "predicted_weight_set": self.predicted_weight_set,
            "predicted_lower": self.predicted_lower,
            "color_count": self.color_count,
            "matches_prediction": self.matches_prediction,
            "variant": self.variant,
            "conditions": self.conditions.model_dump(mode="json") if self.conditions else None,
            "notes": self.notes,
            "report": self.report.model_dump(mode="json"),
        }


class ExtensionSpec(BaseModel):
    """Attach s blocks of k pendant edges to ``vertex``; k must equal the base label of the vertex."""

    vertex: int
    k: int = Field(ge=1)
    s: int = Field(ge=1)


class ExtensionPrediction(BaseModel):
    """
    Case check for one role of a P3 family.

    ``stated_colors`` is the closed-form value the case asserts; ``lower``
    is the pendant/degree counting bound and ``upper`` the number of
    weights the block labeling attains, so ``tight`` means the two meet.
    ``upper`` is withheld when the base labeling does not verify.
    """

    family: str
    role_class: str
    k: int
    s: int
    isolated_weight: int
    in_blocks: bool
    block: Optional[int] = None
    constraints: Dict[str, bool] = Field(default_factory=dict)
    case_holds: bool
    neighbors_distinct: bool
    base_valid: bool
    stated_colors: int
    lower: int
    upper: Optional[int] = None
    tight: bool
    notes: List[str] = Field(default_factory=list)


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidParameterError(message)


def _assign_block(
    roles: Dict[str, int],
    index: int,
    vertex_labels: Sequence[int],
    edge_labels: Sequence[int],
    vertex_name: str = "u",
    edge_name: str = "e",
) -> None:
    for position, label in enumerate(vertex_labels, start=1):
        roles[role_tag(vertex_name, index, position)] = label
    for position, label in enumerate(edge_labels, start=1):
        roles[role_tag(edge_name, index, position)] = label


def _labeling_from_roles(graph: Graph, roles: Dict[str, int]) -> TotalLabeling:
    vertex_labels: Dict[int, int] = {}
    edge_labels: Dict[int, int] = {}
    for tag, label in roles.items():
        element = graph.element_by_tag(tag)
        if graph.is_vertex(element):
            vertex_labels[element] = label
        else:
            edge_labels[element] = label
    return TotalLabeling(vertex_labels=vertex_labels, edge_labels=edge_labels)


def _package(
    name: str,
    parameters: Dict[str, int],
    graph: Graph,
    labeling: TotalLabeling,
    predicted_colors: int,
    provenance: str,
    predicted_weight_set: Optional[Set[int]] = None,
    predicted_lower: Optional[int] = None,
    variant: ExtensionVariant = "none",
    notes: Optional[List[str]] = None,
    conditions: Optional[ExtensionConditions] = None,
) -> ConstructionResult:
    report = verify_ltal(graph, labeling, provenance=provenance)
    result = ConstructionResult(
        name=name,
        parameters=parameters,
        graph=graph,
        labeling=labeling,
        predicted_colors=predicted_colors,
        predicted_weight_set=sorted(predicted_weight_set) if predicted_weight_set is not None else None,
        predicted_lower=predicted_lower,
        provenance=provenance,
        report=report,
        variant=variant,
        conditions=conditions,
        notes=list(notes or []),
    )
    if not report.valid:
        logger.warning(f"{name}{parameters}: labeling has {len(report.violations)} violations")
    if not result.matches_prediction:
        result.notes.append(
            f"color count {result.color_count} differs from predicted {predicted_colors}"
        )
        logger.warning(f"{name}{parameters}: got {result.color_count} colors, predicted {predicted_colors}")
    else:
        logger.info(f"{name}{parameters}: {result.color_count} colors, valid={report.valid}")
    return result


def _build(graph: Graph, roles: Dict[str, int], name: str, parameters: Dict[str, int], **kwargs) -> ConstructionResult:
    return _package(name, parameters, graph, _labeling_from_roles(graph, roles), **kwargs)


# ----------------------------------------------------------------------
# 2-regular families
# ----------------------------------------------------------------------


def label_mC6(m: int) -> ConstructionResult:
    """Three colors {12m, 12m+1, 12m+2} on m disjoint hexagons."""
    _require(m >= 1, f"m must be at least 1, got {m}")
    graph = disjoint_union([build_cycle(6)] * m, reindex=True)
    roles: Dict[str, int] = {}
    for i in range(1, m + 1):
        _assign_block(
            roles,
            i,
            (3 * i - 2, 12 * m + 3 - 3 * i, 3 * i - 1, 12 * m + 1 - 3 * i, 3 * i, 12 * m + 2 - 3 * i),
            (6 * m - 1 + 3 * i, 6 * m + 1 - 3 * i, 6 * m + 3 * i, 6 * m + 2 - 3 * i, 6 * m - 2 + 3 * i, 6 * m + 3 - 3 * i),
        )
    return _build(
        graph, roles, "mC6", {"m": m},
        predicted_colors=3,
        provenance="mC6-three-coloring",
        predicted_weight_set={12 * m, 12 * m + 1, 12 * m + 2},
    )


def label_mC6_P6(m: int) -> ConstructionResult:
    """Three colors {12m+10, 12m+11, 12m+12} on mC6 + P6 (m = 0 is P6 alone)."""
    _require(m >= 0, f"m must be non-negative, got {m}")
    parts = [build_cycle(6)] * m + [build_path(6, "v", "h")]
    graph = disjoint_union(parts, reindex=True)
    roles: Dict[str, int] = {}
    for i in range(1, m + 1):
        _assign_block(
            roles,
            i,
            (3 * i, 12 * m + 11 - 3 * i, 3 * i + 1, 12 * m + 9 - 3 * i, 3 * i + 2, 12 * m + 10 - 3 * i),
            (6 * m + 7 + 3 * i, 6 * m + 3 - 3 * i, 6 * m + 8 + 3 * i, 6 * m + 4 - 3 * i, 6 * m + 6 + 3 * i, 6 * m + 5 - 3 * i),
        )
    _assign_block(
        roles,
        1,
        (6 * m + 7, 6 * m + 3, 6 * m + 8, 6 * m + 4, 6 * m + 6, 6 * m + 5),
        (12 * m + 11, 1, 12 * m + 9, 2, 12 * m + 10),
        vertex_name="v",
        edge_name="h",
    )
    return _build(
        graph, roles, "mC6_P6", {"m": m},
        predicted_colors=3,
        provenance="mC6-P6-three-coloring",
        predicted_weight_set={12 * m + 10, 12 * m + 11, 12 * m + 12},
    )


# Consecutive labels u_1, e_1, u_2, e_2, ... around the cycle.
_SMALL_CYCLES: Dict[str, Tuple[Tuple[int, ...], Set[int]]] = {
    "C3": ((1, 3, 5, 4, 6, 2), {5, 6, 7, 11}),
    "C5": ((1, 2, 7, 8, 5, 6, 3, 4, 9, 10), {8, 10, 12, 14}),
    "C8": ((1, 10, 16, 5, 2, 11, 13, 6, 3, 12, 14, 7, 4, 9, 15, 8), {15, 16, 17, 18, 19}),
}


def label_small_cycles(which: str) -> ConstructionResult:
    if which not in _SMALL_CYCLES:
        raise InvalidParameterError(f"Unknown small cycle {which!r}; expected one of {sorted(_SMALL_CYCLES)}")
    sequence, weights = _SMALL_CYCLES[which]
    n = len(sequence) // 2
    graph = build_cycle(n)
    roles: Dict[str, int] = {}
    for j in range(n):
        roles[role_tag("u", j + 1)] = sequence[2 * j]
        roles[role_tag("e", j + 1)] = sequence[2 * j + 1]
    return _build(
        graph, roles, which, {},
        predicted_colors=len(weights),
        provenance="small-cycle-labeling",
        predicted_weight_set=weights,
    )


def label_mC4(m: int) -> ConstructionResult:
    """Four colors {6m+1, 7m+1, 9m+1, 10m+1} on m disjoint squares."""
    _require(m >= 1, f"m must be at least 1, got {m}")
    graph = disjoint_union([build_cycle(4)] * m, reindex=True)
    roles: Dict[str, int] = {}
    for i in range(1, m + 1):
        _assign_block(
            roles,
            i,
            (i, 7 * m + 1 - i, 3 * m + i, 6 * m + 1 - i),
            (m + i, 5 * m + 1 - i, 2 * m + i, 8 * m + 1 - i),
        )
    return _build(
        graph, roles, "mC4", {"m": m},
        predicted_colors=4,
        provenance="mC4-four-coloring",
        predicted_weight_set={6 * m + 1, 7 * m + 1, 9 * m + 1, 10 * m + 1},
    )


# ----------------------------------------------------------------------
# Hexagons with P3 and P6 components
# ----------------------------------------------------------------------


def label_mC6_nP3(m: int, n: int) -> ConstructionResult:
    """
    mC6 + nP3. A single P3 gives 4 colors; n >= 2 gives 2n+1 colors with
    pendant weights [3n+12m+1, 5n+12m] and midpoint weight 8n+24m+1.
    """
    _require(m >= 1 and n >= 1, f"m and n must be at least 1, got m={m}, n={n}")
    parts = [build_cycle(6)] * m + [build_path(3, "v", "h")] * n
    graph = disjoint_union(parts, reindex=True)
    roles: Dict[str, int] = {}

    if n == 1:
        for i in range(1, m + 1):
            _assign_block(
                roles,
                i,
                (3 * i, 12 * m + 5 - 3 * i, 3 * i + 1, 12 * m + 3 - 3 * i, 3 * i + 2, 12 * m + 4 - 3 * i),
                (6 * m + 1 + 3 * i, 6 * m + 3 - 3 * i, 6 * m + 2 + 3 * i, 6 * m + 4 - 3 * i, 6 * m + 3 * i, 6 * m + 5 - 3 * i),
            )
        _assign_block(roles, 1, (1, 12 * m + 3, 2), (12 * m + 5, 12 * m + 4), "v", "h")
        return _build(
            graph, roles, "mC6_nP3", {"m": m, "n": n},
            predicted_colors=4,
            provenance="mC6-nP3-scheme",
            predicted_weight_set={12 * m + 4, 12 * m + 5, 12 * m + 6, 24 * m + 9},
        )

    for i in range(1, m + 1):
        _assign_block(
            roles,
            i,
            (
                2 * n + 3 * i - 2, 2 * n + 12 * m + 3 - 3 * i,
                2 * n + 3 * i - 1, 2 * n + 12 * m + 1 - 3 * i,
                2 * n + 3 * i, 2 * n + 12 * m + 2 - 3 * i,
            ),
            (
                2 * n + 6 * m - 1 + 3 * i, 2 * n + 6 * m + 1 - 3 * i,
                2 * n + 6 * m + 3 * i, 2 * n + 6 * m + 2 - 3 * i,
                2 * n + 6 * m - 2 + 3 * i, 2 * n + 6 * m + 3 - 3 * i,
            ),
        )
    for j in range(1, n + 1):
        _assign_block(
            roles,
            j,
            (j, 3 * n + 12 * m + 1 - j, n + j),
            (5 * n + 12 * m + 1 - j, 3 * n + 12 * m + j),
            "v",
            "h",
        )
    weights = set(range(3 * n + 12 * m + 1, 5 * n + 12 * m + 1)) | {8 * n + 24 * m + 1}
    return _build(
        graph, roles, "mC6_nP3", {"m": m, "n": n},
        predicted_colors=2 * n + 1,
        provenance="mC6-nP3-scheme",
        predicted_weight_set=weights,
    )


def _mC6_nP6_roles(m: int, n: int, shift: int = 0) -> Dict[str, int]:
    roles: Dict[str, int] = {}
    for i in range(1, m + 1):
        _assign_block(
            roles,
            i,
            (
                2 * n + 3 * i - 2, 8 * n + 12 * m - 3 * i + 3,
                2 * n + 3 * i - 1, 8 * n + 12 * m - 3 * i + 1,
                2 * n + 3 * i, 8 * n + 12 * m - 3 * i + 2,
            ),
            (
                8 * n + 6 * m + 3 * i - 1, 2 * n + 6 * m - 3 * i + 1,
                8 * n + 6 * m + 3 * i, 2 * n + 6 * m - 3 * i + 2,
                8 * n + 6 * m + 3 * i - 2, 2 * n + 6 * m - 3 * i + 3,
            ),
        )
    for t in range(1, n + 1):
        _assign_block(
            roles,
            t,
            (
                8 * n + 6 * m - 3 * t + 2, 2 * n + 6 * m + 3 * t - 2,
                8 * n + 6 * m - 3 * t + 3, 2 * n + 6 * m + 3 * t - 1,
                8 * n + 6 * m - 3 * t + 1, 2 * n + 6 * m + 3 * t,
            ),
            (
                11 * n + 12 * m + 1 - t, t,
                9 * n + 12 * m + 1 - t, n + t,
                10 * n + 12 * m + 1 - t,
            ),
            "y",
            "z",
        )
    return {tag: label + shift for tag, label in roles.items()}


def _mC6_nP6_interior(m: int, n: int) -> Set[int]:
    return {9 * n + 12 * m + 1, 10 * n + 12 * m, 10 * n + 12 * m + 1, 10 * n + 12 * m + 2, 11 * n + 12 * m + 1}


def label_mC6_nP6(m: int, n: int) -> ConstructionResult:
    """2n+1 colors on mC6 + nP6; the weights form [9n+12m+1, 11n+12m+1]."""
    _require(m >= 1 and n >= 1, f"m and n must be at least 1, got m={m}, n={n}")
    parts = [build_cycle(6)] * m + [build_path(6, "y", "z")] * n
    graph = disjoint_union(parts, reindex=True)
    pendant = set(range(9 * n + 12 * m + 1, 11 * n + 12 * m + 1))
    return _build(
        graph, _mC6_nP6_roles(m, n), "mC6_nP6", {"m": m, "n": n},
        predicted_colors=2 * n + 1,
        provenance="mC6-nP6-scheme",
        predicted_weight_set=pendant | _mC6_nP6_interior(m, n),
    )


def mixed_family_weights(m: int, n: int, a: int) -> Set[int]:
    """Weight set the mC6 + nP6 + aP3 scheme produces."""
    shift = 2 * a
    pendant = set(range(9 * n + 12 * m + shift + 1, 11 * n + 12 * m + shift + 1))
    pendant |= set(range(11 * n + 12 * m + 3 * a + 1, 11 * n + 12 * m + 5 * a + 1))
    interior = {w + 2 * shift for w in _mC6_nP6_interior(m, n)}
    return pendant | interior | {22 * n + 24 * m + 8 * a + 1}


def case_upper_bound(n: int, a: int) -> int:
    """Smallest applicable upper bound on colors for mC6 + nP6 + aP3."""
    base = 2 * n + 2 * a + 1
    if n >= 2 * a + 2 or a >= 2 * n:
        return base
    bounds = []
    if n == 2 * a + 1 or n + 1 <= a <= 2 * n - 1:
        bounds.append(base + 1)
    if n == 2 * a or a == n:
        bounds.append(base + 2)
    if a + 1 <= n <= 2 * a - 1 or a == n - 1:
        bounds.append(base + 3)
    if n <= a or a <= n - 2:
        bounds.append(base + 4)
    return min(bounds) if bounds else base + 4


def label_mC6_nP6_aP3(m: int, n: int, a: int) -> ConstructionResult:
    """
    mC6 + nP6 + aP3: the mC6 + nP6 labels shifted by 2a, with the P3
    parts taking the a smallest and 3a largest labels.
    """
    _require(m >= 1 and n >= 1 and a >= 1, f"m, n, a must be at least 1, got m={m}, n={n}, a={a}")
    notes: List[str] = []
    if a == 1:
        notes.append("a=1 lies below the stated range a >= 2")
        logger.warning("mC6_nP6_aP3 called with a=1, below the stated range a >= 2")
    if n >= 2 * a:
        t = n + 1 - 2 * a
        notes.append(
            f"known incident conflict: y_{{{t},1}} and z_{{{t},1}} share weight {10 * n + 12 * m + 4 * a}"
        )

    parts = (
        [build_cycle(6)] * m
        + [build_path(6, "y", "z")] * n
        + [build_path(3, "v", "h")] * a
    )
    graph = disjoint_union(parts, reindex=True)
    roles = _mC6_nP6_roles(m, n, shift=2 * a)
    total = 12 * m + 11 * n
    for r in range(1, a + 1):
        _assign_block(
            roles,
            r,
            (r, total + 3 * a + 1 - r, a + r),
            (total + 5 * a + 1 - r, total + 3 * a + r),
            "v",
            "h",
        )

    weights = mixed_family_weights(m, n, a)
    result = _build(
        graph, roles, "mC6_nP6_aP3", {"m": m, "n": n, "a": a},
        predicted_colors=len(weights),
        provenance="mC6-nP6-aP3-scheme",
        predicted_weight_set=weights,
        notes=notes,
    )
    if len(weights) > case_upper_bound(n, a):
        logger.warning(f"mC6_nP6_aP3(m={m}, n={n}, a={a}) exceeds its case bound")
    return result


# ----------------------------------------------------------------------
# Pendant extension
# ----------------------------------------------------------------------


def _pendant_labels(total: int, k: int, s: int) -> Tuple[Dict[Tuple[int, int], int], Dict[Tuple[int, int], int]]:
    vertex_labels = {
        (j, i): total + 2 * (j - 1) * k + i for j in range(1, s + 1) for i in range(1, k + 1)
    }
    edge_labels = {
        (j, i): total + 2 * j * k + 1 - i for j in range(1, s + 1) for i in range(1, k + 1)
    }
    return vertex_labels, edge_labels


def _pendant_names(G: Graph) -> Tuple[str, str]:
    """Tag names for a new round of pendants: x/xe, then xx/xxe on an already extended graph."""
    families = {parse_role_tag(tag)[0] for tag in G.tags.values()}
    name = "x"
    while name in families or f"{name}e" in families:
        name += "x"
    return name, f"{name}e"


def _extended_labeling(
    base: ConstructionResult,
    extended: Graph,
    vertex_labels: Dict[Tuple[int, int], int],
    edge_labels: Dict[Tuple[int, int], int],
    names: Tuple[str, str] = ("x", "xe"),
) -> TotalLabeling:
    labeling_v = dict(base.labeling.vertex_labels)
    labeling_e = dict(base.labeling.edge_labels)
    for (j, i), label in vertex_labels.items():
        labeling_v[extended.element_by_tag(role_tag(names[0], j, i))] = label
    for (j, i), label in edge_labels.items():
        labeling_e[extended.element_by_tag(role_tag(names[1], j, i))] = label
    return TotalLabeling(vertex_labels=labeling_v, edge_labels=labeling_e)


def _touches_new_elements(report: VerificationReport, base_graph: Graph) -> bool:
    known = set(base_graph.elements)
    return any(
        any(element not in known for element in violation.elements)
        for violation in report.violations
    )


def _in_blocks(weight: int, blocks: Sequence[Tuple[int, int]]) -> bool:
    return any(lo <= weight <= hi for lo, hi in blocks)


def extension_conditions(
    G: Graph,
    f: TotalLabeling,
    v: int,
    k: int,
    s: int,
    base_colors: Optional[int] = None,
) -> ExtensionConditions:
    """
    Check the extension hypotheses for attaching s blocks of k pendant
    edges to v, and derive the bounds they give.

    ``base_colors`` is the color count of a verified base labeling; pass
    None when the base does not verify and neither rule can apply.
    """
    total = G.order + G.size
    blocks = [(total + (2 * j - 1) * k + 1, total + 2 * j * k) for j in range(1, s + 1)]
    profile = weight_profile(G, f)
    vertex_weight = profile.vertex_weights[v]
    extended_weight = vertex_weight + sum(sum(range(lo, hi + 1)) for lo, hi in blocks)

    pendants = set(G.pendant_vertices())
    others = {element: w for element, w in profile.as_mapping().items() if element != v}
    unique = vertex_weight not in set(others.values())
    neighbors_distinct = all(profile.vertex_weights[x] != extended_weight for x in G.neighbors(v))
    absorbed = unique or any(
        _in_blocks(w, blocks) for element, w in others.items() if element not in pendants
    )

    pendant_labels = {f.edge_labels[e] for e in G.pendant_edges()}
    loose = set(profile.as_mapping().values()) - pendant_labels
    isolated = next(iter(loose)) if len(loose) == 1 else None

    weights = set(others.values()) | {extended_weight}
    for lo, hi in blocks:
        weights |= set(range(lo, hi + 1))

    delta = max((G.degree(x) for x in G.vertices), default=0)
    d = len(G.pendant_edges())
    degree_v = G.degree(v)
    extended_pendants = d - (1 if v in pendants else 0) + k * s
    counting = max(max(delta, degree_v + k * s) + 1, extended_pendants + 1)

    degree_checks = {
        "base_at_degree_bound": base_colors is not None and base_colors == delta + 1,
        "vertex_has_max_degree": degree_v == delta,
        "neighbors_distinct": neighbors_distinct,
        "weight_absorbed": absorbed,
    }
    pendant_checks = {
        "base_at_pendant_bound": base_colors is not None and base_colors == d + 1 and d >= delta >= 2,
        "neighbors_distinct": neighbors_distinct,
        "vertex_weight_unique": unique,
        "isolated_weight_in_blocks": isolated is not None and _in_blocks(isolated, blocks),
        "vertex_weight_in_blocks": _in_blocks(vertex_weight, blocks),
    }

    notes: List[str] = []
    upper: Optional[int] = None
    exact: Optional[int] = None
    if degree_checks["base_at_degree_bound"] and degree_checks["vertex_has_max_degree"] and neighbors_distinct:
        rule = "max-degree"
        lower = delta + k * s + 1
        exact = lower if absorbed else None
        upper = lower if absorbed else lower + 1
    elif pendant_checks["base_at_pendant_bound"] and neighbors_distinct:
        rule = "pendant-count"
        if v in pendants:
            # Only the range is claimed; the block labeling itself reaches the top end.
            lower = k * s + d
            upper = lower + 1
        else:
            lower = k * s + d + 1
            if not unique:
                notes.append("absorbed-weight clause read as: the isolated weight or w(v) lies in a pendant block")
            if unique or pendant_checks["isolated_weight_in_blocks"] or pendant_checks["vertex_weight_in_blocks"]:
                exact = upper = lower
    else:
        rule = "none"
        lower = counting

    return ExtensionConditions(
        rule=rule,
        base_colors=base_colors,
        blocks=blocks,
        vertex_weight=vertex_weight,
        extended_vertex_weight=extended_weight,
        isolated_weight=isolated,
        degree_checks=degree_checks,
        pendant_checks=pendant_checks,
        lower=max(lower, counting),
        upper=upper,
        exact=exact,
        weights=sorted(weights),
        notes=notes,
    )


def extend_pendants(
    base: ConstructionResult,
    spec: ExtensionSpec,
    provenance: str = "pendant-extension",
) -> ConstructionResult:
    """
    Label G_v(k,s) from a labeling of G that gives v the label k.

    Pendant x_{j,i} gets p+q+2(j-1)k+i and its edge gets p+q+2jk+1-i, so
    block j contributes the weights [p+q+(2j-1)k+1, p+q+2jk]. Odd k >= 3
    swaps the two middle edge labels of each block. For k = 1 the pendant
    and its edge would tie; if the stated swap leaves such a tie, the base
    edge labels are rotated one block forward instead.

    The predicted count is the value ``extension_conditions`` pins down
    when a rule applies with its absorbing condition, and otherwise the
    size of the block weight set.
    """
    G, f = base.graph, base.labeling
    v, k, s = spec.vertex, spec.k, spec.s
    if not G.is_vertex(v):
        raise UnknownVertexError(f"Vertex {v} not in graph")
    if k * s < 2:
        raise ExtensionSpecError(f"Need ks >= 2, got k={k}, s={s}")
    if f.vertex_labels.get(v) != k:
        raise ExtensionSpecError(f"Block width k={k} must equal the label of vertex {v} ({f.vertex_labels.get(v)})")

    total = G.order + G.size
    names = _pendant_names(G)
    extended = attach_pendants(G, v, k, s, *names)
    vertex_labels, edge_labels = _pendant_labels(total, k, s)

    variant: ExtensionVariant = "none"
    swapped = dict(edge_labels)
    if k >= 3 and k % 2 == 1:
        lo, hi = (k - 1) // 2, (k + 1) // 2
        for j in range(1, s + 1):
            swapped[(j, lo)], swapped[(j, hi)] = edge_labels[(j, hi)], edge_labels[(j, lo)]
        variant = "odd-width-swap"
    elif k == 1 and s >= 3 and s % 2 == 1:
        lo, hi = (s - 1) // 2, (s + 1) // 2
        swapped[(lo, 1)], swapped[(hi, 1)] = edge_labels[(hi, 1)], edge_labels[(lo, 1)]
        variant = "unit-width-swap"

    labeling = _extended_labeling(base, extended, vertex_labels, swapped, names)
    notes = list(base.notes)
    if k == 1:
        report = verify_ltal(extended, labeling)
        if _touches_new_elements(report, G):
            rotated = {(j, 1): edge_labels[(j % s + 1, 1)] for j in range(1, s + 1)}
            labeling = _extended_labeling(base, extended, vertex_labels, rotated, names)
            variant = "block-rotation"
            logger.info(f"Unit-width extension at vertex {v}: rotated pendant edge labels")
            if _touches_new_elements(verify_ltal(extended, labeling), G):
                notes.append("construction-unverified: rotation left a pendant conflict")

    conditions = extension_conditions(G, f, v, k, s, base.color_count if base.report.valid else None)
    logger.info(
        f"Extension at vertex {v}: rule {conditions.rule}, bounds [{conditions.lower}, {conditions.upper}]"
    )
    notes.extend(conditions.notes)
    predicted = conditions.exact if conditions.exact is not None else conditions.weight_count

    parameters = dict(base.parameters)
    parameters.update({"vertex": v, "k": k, "s": s})
    return _package(
        f"{base.name}+pendants",
        parameters,
        extended,
        labeling,
        predicted_colors=predicted,
        provenance=provenance,
        predicted_weight_set=set(conditions.weights),
        predicted_lower=conditions.lower,
        variant=variant,
        notes=notes,
        conditions=conditions,
    )


def extend_at_role(
    base: ConstructionResult,
    role: str,
    s: int,
    k: Optional[int] = None,
    provenance: str = "pendant-extension",
) -> ConstructionResult:
    """Extend ``base`` at the vertex tagged ``role``; k defaults to that vertex's label."""
    v = base.graph.element_by_tag(role)
    if not base.graph.is_vertex(v):
        raise ExtensionSpecError(f"Role {role!r} names an edge, not a vertex")
    width = base.labeling.vertex_labels[v] if k is None else k
    return extend_pendants(base, ExtensionSpec(vertex=v, k=width, s=s), provenance=provenance)


def label_mC6_pendants(m: int, s: int) -> ConstructionResult:
    """s >= 2 pendant edges on the hexagon vertex labeled 1; s+3 colors."""
    _require(s >= 2, f"s must be at least 2, got {s}")
    return extend_at_role(label_mC6(m), role_tag("u", 1, 1), s=s, provenance="mC6-pendant-extension")


def label_mC4_pendants(m: int, s: int) -> ConstructionResult:
    """
    Odd m, s >= (m+1)/2 pendant edges on u_{1,1}: s+4 colors, one above
    the lower bound s+3.
    """
    _require(m >= 1 and m % 2 == 1, f"m must be odd and positive, got {m}")
    _require(2 * s >= m + 1, f"s must be at least (m+1)/2, got m={m}, s={s}")
    return extend_at_role(label_mC4(m), role_tag("u", 1, 1), s=s, provenance="mC4-pendant-extension")


# ----------------------------------------------------------------------
# Extension predictions for the P3 families
# ----------------------------------------------------------------------

ExtensionFamily = Literal["mC6_nP3", "mC6_nP6_aP3"]

# (m, n, a, index) -> the label the base construction gives the role
_Width = Callable[[int, int, int, int], int]
# (m, n, a, index, block) -> named side conditions of the case
_Constraints = Callable[[int, int, int, int, Optional[int]], Dict[str, bool]]


def _free(m: int, n: int, a: int, index: int, block: Optional[int]) -> Dict[str, bool]:
    return {}


def _by_block(*rows: Callable[[int, int, int, int], Dict[str, bool]]) -> _Constraints:
    """Side conditions chosen by the first pendant block that absorbs the isolated weight."""

    def constraints(m: int, n: int, a: int, t: int, block: Optional[int]) -> Dict[str, bool]:
        if block is None or block > len(rows):
            return {f"absorbed within {len(rows)} blocks": False}
        return rows[block - 1](m, n, a, t)

    return constraints


_NP3_CASES: Dict[Tuple[str, int], Tuple[_Width, _Constraints]] = {
    ("v", 1): (
        lambda m, n, a, j: j,
        lambda m, n, a, j, block: {"n odd": n % 2 == 1} if j == 1 else {},
    ),
    ("v", 2): (lambda m, n, a, j: 3 * n + 12 * m + 1 - j, _free),
    ("v", 3): (lambda m, n, a, j: n + j, _free),
    ("u", 1): (lambda m, n, a, i: 2 * n + 3 * i - 2, _free),
    ("u", 3): (lambda m, n, a, i: 2 * n + 3 * i - 1, _free),
    ("u", 5): (lambda m, n, a, i: 2 * n + 3 * i, _free),
    ("u", 2): (lambda m, n, a, i: 2 * n + 12 * m + 3 - 3 * i, _free),
    ("u", 4): (lambda m, n, a, i: 2 * n + 12 * m + 1 - 3 * i, _free),
    ("u", 6): (lambda m, n, a, i: 2 * n + 12 * m + 2 - 3 * i, _free),
}

_MIXED_CASES: Dict[Tuple[str, int], Tuple[_Width, _Constraints]] = {
    ("y", 1): (
        lambda m, n, a, t: 8 * n + 6 * m - 3 * t + 2 * a + 2,
        lambda m, n, a, t, block: {"6t <= 5n+3": 6 * t <= 5 * n + 3},
    ),
    ("y", 6): (
        lambda m, n, a, t: 2 * n + 6 * m + 3 * t + 2 * a,
        _by_block(
            lambda m, n, a, t: {"a >= 2n": a >= 2 * n},
            lambda m, n, a, t: {
                "12t >= 3n-12m-5a+1": 12 * t >= 3 * n - 12 * m - 5 * a + 1,
                "9t <= 5n-6m-3a+1": 9 * t <= 5 * n - 6 * m - 3 * a + 1,
            },
            lambda m, n, a, t: {"15t <= n-18m-7a+1": 15 * t <= n - 18 * m - 7 * a + 1},
        ),
    ),
    ("v", 1): (lambda m, n, a, r: r, _free),
    ("v", 3): (lambda m, n, a, r: a + r, _free),
    ("u", 1): (lambda m, n, a, i: 2 * n + 2 * a + 3 * i - 2, _free),
    ("u", 3): (lambda m, n, a, i: 2 * n + 2 * a + 3 * i - 1, _free),
    ("u", 5): (lambda m, n, a, i: 2 * n + 2 * a + 3 * i, _free),
    ("u", 2): (lambda m, n, a, i: 8 * n + 12 * m + 2 * a - 3 * i + 3, _free),
    ("u", 4): (lambda m, n, a, i: 8 * n + 12 * m + 2 * a - 3 * i + 1, _free),
    ("u", 6): (lambda m, n, a, i: 8 * n + 12 * m + 2 * a - 3 * i + 2, _free),
    ("y", 3): (
        lambda m, n, a, t: 8 * n + 6 * m + 2 * a - 3 * t + 3,
        lambda m, n, a, t, block: {
            "6t <= 5n+a+5": 6 * t <= 5 * n + a + 5,
            **({"n >= a+5": n >= a + 5} if a <= 2 else {"n >= 2a+2": n >= 2 * a + 2}),
        },
    ),
    ("y", 5): (
        lambda m, n, a, t: 8 * n + 6 * m + 2 * a - 3 * t + 1,
        lambda m, n, a, t, block: {
            "6t <= 5n+a+1": 6 * t <= 5 * n + a + 1,
            "n >= 2a+2": n >= 2 * a + 2,
        },
    ),
    ("y", 2): (
        lambda m, n, a, t: 2 * n + 6 * m + 2 * a + 3 * t - 2,
        _by_block(
            lambda m, n, a, t: {"a >= n+5": a >= n + 5} if a <= 4 else {"a >= 2n": a >= 2 * n},
            lambda m, n, a, t: {
                "12t >= 3n-12m-5a+9": 12 * t >= 3 * n - 12 * m - 5 * a + 9,
                "9t <= 5n-6m-3a+7": 9 * t <= 5 * n - 6 * m - 3 * a + 7,
            },
            lambda m, n, a, t: {"15t <= n-18m-7a+13": 15 * t <= n - 18 * m - 7 * a + 13},
        ),
    ),
    ("y", 4): (
        lambda m, n, a, t: 2 * n + 6 * m + 2 * a + 3 * t - 1,
        _by_block(
            lambda m, n, a, t: {"a >= n+3": a >= n + 3} if a <= 2 else {"a >= 2n": a >= 2 * n},
            lambda m, n, a, t: {
                "12t >= 3n-12m-5a+5": 12 * t >= 3 * n - 12 * m - 5 * a + 5,
                "9t <= 5n-6m-3a+4": 9 * t <= 5 * n - 6 * m - 3 * a + 4,
            },
            lambda m, n, a, t: {"15t <= n-18m-7a+6": 15 * t <= n - 18 * m - 7 * a + 6},
        ),
    ),
    ("v", 2): (lambda m, n, a, r: 12 * m + 11 * n + 3 * a + 1 - r, _free),
}


_COMPONENT_LETTERS = {"u": "i", "v": "j", "y": "t"}


def _role_class(role: str) -> str:
    """``u_{2,3}`` -> ``u_{i,3}``: the role with its component index left free."""
    name, indices = parse_role_tag(role)
    if len(indices) != 2:
        return role
    return f"{name}_{{{_COMPONENT_LETTERS.get(name, 'i')},{indices[1]}}}"


def predict_extension_conditions(
    family: ExtensionFamily,
    role: str,
    s: int,
    m: int,
    n: int,
    a: int = 0,
    k: Optional[int] = None,
) -> ExtensionPrediction:
    """
    Check the case conditions for G_v(k,s) on a P3 family and bound chi_lt.

    A case holds when the isolated midpoint weight lies in one of the new
    pendant blocks [B+(2j-1)k+1, B+2jk] (B the base order plus size) and
    the case's own side conditions on t, n and a hold. The bounds come
    from the extension hypotheses evaluated on the base labeling; a base
    that fails verification never yields an upper bound.
    """
    if s < 1:
        raise NotCoveredError(f"s must be positive, got {s}")
    if family == "mC6_nP3":
        if m < 1 or n < 2:
            raise NotCoveredError(f"mC6_nP3 extension needs m >= 1 and n >= 2, got m={m}, n={n}")
        base = label_mC6_nP3(m, n)
        cases = _NP3_CASES
        isolated = 8 * n + 24 * m + 1
        base_colors = 2 * n + 1
    elif family == "mC6_nP6_aP3":
        if m < 1 or n < 1 or a < 2 or not (n >= 2 * a + 2 or a >= 2 * n):
            raise NotCoveredError(
                f"mC6_nP6_aP3 extension needs a >= 2 and n >= 2a+2 or a >= 2n, got m={m}, n={n}, a={a}"
            )
        base = label_mC6_nP6_aP3(m, n, a)
        cases = _MIXED_CASES
        isolated = 22 * n + 24 * m + 8 * a + 1
        base_colors = 2 * n + 2 * a + 1
    else:
        raise NotCoveredError(f"Unknown extension family {family!r}")

    try:
        element = base.graph.element_by_tag(role)
    except UnknownVertexError:
        raise NotCoveredError(f"Role {role!r} does not occur in {family}(m={m}, n={n}, a={a})") from None
    if not base.graph.is_vertex(element):
        raise NotCoveredError(f"Role {role!r} names an edge")
    name, (index, position) = parse_role_tag(role)
    if (name, position) not in cases:
        raise NotCoveredError(f"No case of {family} covers role {role!r}")
    width_of, constraints_of = cases[(name, position)]

    width = width_of(m, n, a, index)
    label = base.labeling.vertex_labels[element]
    if width != label:
        raise ExtensionSpecError(f"Case width {width} for {role!r} disagrees with its label {label}")
    if k is not None and k != width:
        raise ExtensionSpecError(f"Role {role!r} carries label {width}, not k={k}")
    if width * s < 2:
        raise NotCoveredError(f"Need ks >= 2, got k={width}, s={s}")

    total = base.graph.order + base.graph.size
    block = next(
        (
            j for j in range(1, s + 1)
            if total + (2 * j - 1) * width + 1 <= isolated <= total + 2 * j * width
        ),
        None,
    )
    constraints = constraints_of(m, n, a, index, block)
    case_holds = block is not None and all(constraints.values())

    conditions = extension_conditions(
        base.graph, base.labeling, element, width, s, base.color_count if base.report.valid else None
    )
    neighbors_distinct = conditions.pendant_checks["neighbors_distinct"]
    notes = list(conditions.notes)
    upper: Optional[int] = None
    if not base.report.valid:
        notes.append("base labeling fails verification; no upper bound is claimed")
    elif neighbors_distinct:
        upper = conditions.exact if conditions.exact is not None else conditions.weight_count
    stated = base_colors + width * s
    if case_holds and upper is not None and upper != stated:
        notes.append(f"block labeling attains {upper} colors where the case states {stated}")

    prediction = ExtensionPrediction(
        family=family,
        role_class=_role_class(role),
        k=width,
        s=s,
        isolated_weight=isolated,
        in_blocks=block is not None,
        block=block,
        constraints=constraints,
        case_holds=case_holds,
        neighbors_distinct=neighbors_distinct,
        base_valid=base.report.valid,
        stated_colors=stated,
        lower=conditions.lower,
        upper=upper,
        tight=upper is not None and upper == conditions.lower,
        notes=notes,
    )
    logger.debug(f"{family} extension at {role}: case_holds={case_holds}, bounds [{prediction.lower}, {upper}]")
    return prediction


# ----------------------------------------------------------------------
# Registry
# ----------------------------------------------------------------------

CONSTRUCTIONS: Dict[str, Tuple[Callable[..., ConstructionResult], Tuple[str, ...]]] = {
    "mC6": (label_mC6, ("m",)),
    "mC6_P6": (label_mC6_P6, ("m",)),
    "C3": (lambda: label_small_cycles("C3"), ()),
    "C5": (lambda: label_small_cycles("C5"), ()),
    "C8": (lambda: label_small_cycles("C8"), ()),
    "mC4": (label_mC4, ("m",)),
    "mC6_nP3": (label_mC6_nP3, ("m", "n")),
    "mC6_nP6": (label_mC6_nP6, ("m", "n")),
    "mC6_nP6_aP3": (label_mC6_nP6_aP3, ("m", "n", "a")),
    "mC6_pendants": (label_mC6_pendants, ("m", "s")),
    "mC4_pendants": (label_mC4_pendants, ("m", "s")),
}


def run_construction(name: str, **parameters: int) -> ConstructionResult:
    """Look up a generator by name and call it with the parameters it declares."""
    if name not in CONSTRUCTIONS:
        raise InvalidParameterError(f"Unknown construction {name!r}; expected one of {sorted(CONSTRUCTIONS)}")
    generator, names = CONSTRUCTIONS[name]
    missing = [p for p in names if parameters.get(p) is None]
    if missing:
        raise InvalidParameterError(f"Construction {name} needs parameters {missing}")
    return generator(**{p: parameters[p] for p in names})
