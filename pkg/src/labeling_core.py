"""
Total labelings, induced weights and the three-condition verifier.

A total labeling f maps V ∪ E bijectively onto [1, p+q]. The weight of a
vertex is the sum of its incident edge labels and the weight of an edge is
the sum of its endpoint labels; neither includes the element's own label.
f is local total antimagic when adjacent vertices, adjacent edges and
incident vertex/edge pairs all receive different weights.
"""
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from src.exceptions import CompositionPreconditionError, NotBijectionError
from src.graph_core import Graph, component_structures

logger = logging.getLogger(__name__)


class TotalLabeling(BaseModel):
    """Labels for every vertex and edge of a graph."""

    kind: Literal["total"] = "total"
    vertex_labels: Dict[int, int]
    edge_labels: Dict[int, int]

    def label_of(self, element: int) -> int:
        if element in self.vertex_labels:
            return self.vertex_labels[element]
        return self.edge_labels[element]

    def as_mapping(self) -> Dict[int, int]:
        merged = dict(self.vertex_labels)
        merged.update(self.edge_labels)
        return merged

    def to_dict(self) -> Dict[str, Any]:
        """Interchange form; the ``kind`` discriminator is not written to files."""
        return self.model_dump(mode="json", exclude={"kind"})


class EdgeOnlyLabeling(BaseModel):
    """Bijection E -> [1, q]; vertices are colored by incident edge sums."""

    kind: Literal["edge"] = "edge"
    edge_labels: Dict[int, int]


class VertexOnlyLabeling(BaseModel):
    """Bijection V -> [1, p]; edges are colored by endpoint sums."""

    kind: Literal["vertex"] = "vertex"
    vertex_labels: Dict[int, int]


class WeightProfile(BaseModel):
    vertex_weights: Dict[int, int]
    edge_weights: Dict[int, int]
    distinct_weights: List[int]
    color_count: int = Field(ge=0)

    def weight_of(self, element: int) -> int:
        if element in self.vertex_weights:
            return self.vertex_weights[element]
        return self.edge_weights[element]

    def as_mapping(self) -> Dict[int, int]:
        merged = dict(self.vertex_weights)
        merged.update(self.edge_weights)
        return merged

    def multiset(self) -> Counter:
        return Counter(self.as_mapping().values())


ViolationKind = Literal[
    "adjacent_vertices",
    "adjacent_edges",
    "incident_vertex_edge",
    "not_bijection",
    "inadmissible_graph",
]


class Violation(BaseModel):
    kind: ViolationKind
    elements: Tuple[int, ...] = ()
    detail: str = ""


class VerificationReport(BaseModel):
    """Outcome of verify_ltal; ``valid`` holds exactly when there are no violations."""

    valid: bool
    violations: List[Violation] = Field(default_factory=list)
    color_count: Optional[int] = None
    distinct_weights: Optional[List[int]] = None
    provenance: Optional[str] = None

    @model_validator(mode="after")
    def check_consistency(self) -> "VerificationReport":
        if self.valid != (not self.violations):
            raise ValueError("valid must be true exactly when no violations are recorded")
        return self

    def kinds(self) -> List[str]:
        return [violation.kind for violation in self.violations]


class AntimagicCheck(BaseModel):
    """Result of a local antimagic or local edge antimagic check."""

    valid: bool
    color_count: int
    weights: Dict[int, int]


# ----------------------------------------------------------------------
# Admissibility and bijectivity
# ----------------------------------------------------------------------


def admissibility_violations(G: Graph) -> List[Violation]:
    """Isolated vertices and K2 components admit no local total antimagic labeling."""
    violations: List[Violation] = []
    for v in G.vertices:
        if G.degree(v) == 0:
            violations.append(
                Violation(kind="inadmissible_graph", elements=(v,), detail="isolated vertex")
            )
    for structure in component_structures(G):
        if structure.kind == "path" and structure.order == 2:
            violations.append(
                Violation(
                    kind="inadmissible_graph",
                    elements=structure.vertices + structure.edges,
                    detail="K2 component",
                )
            )
    return violations


def is_admissible(G: Graph) -> bool:
    return not admissibility_violations(G)


def _bijection_problem(keys: Mapping[int, int], expected_keys: set, top: int) -> Optional[str]:
    if set(keys) != expected_keys:
        missing = sorted(expected_keys - set(keys))
        extra = sorted(set(keys) - expected_keys)
        return f"label keys do not match the graph (missing {missing}, unexpected {extra})"
    values = sorted(keys.values())
    if values != list(range(1, top + 1)):
        return f"labels are not a permutation of [1, {top}]"
    return None


def bijection_violation(G: Graph, f: TotalLabeling) -> Optional[Violation]:
    if set(f.vertex_labels) != set(G.vertices) or set(f.edge_labels) != set(G.edge_ids):
        return Violation(kind="not_bijection", detail="label keys do not match the vertex and edge sets")
    detail = _bijection_problem(f.as_mapping(), set(G.elements), G.order + G.size)
    if detail:
        return Violation(kind="not_bijection", detail=detail)
    return None


# ----------------------------------------------------------------------
# Weights and verification
# ----------------------------------------------------------------------


def _weights(G: Graph, f: TotalLabeling) -> Tuple[Dict[int, int], Dict[int, int]]:
    vertex_weights = {
        v: sum(f.edge_labels[eid] for eid in G.incident_edges(v)) for v in G.vertices
    }
    edge_weights = {
        eid: f.vertex_labels[u] + f.vertex_labels[v] for eid, u, v in G.edges
    }
    return vertex_weights, edge_weights


def weight_profile(G: Graph, f: TotalLabeling) -> WeightProfile:
    violation = bijection_violation(G, f)
    if violation is not None:
        raise NotBijectionError(violation.detail)
    vertex_weights, edge_weights = _weights(G, f)
    distinct = sorted(set(vertex_weights.values()) | set(edge_weights.values()))
    return WeightProfile(
        vertex_weights=vertex_weights,
        edge_weights=edge_weights,
        distinct_weights=distinct,
        color_count=len(distinct),
    )


def verify_ltal(G: Graph, f: TotalLabeling, provenance: Optional[str] = None) -> VerificationReport:
    """
    Check f against the three local conditions.

    Every failure is reported as a violation entry; nothing is raised.
    Conditions are only evaluated when f is a bijection.
    """
    violations = admissibility_violations(G)

    bijection = bijection_violation(G, f)
    if bijection is not None:
        violations.append(bijection)
        return VerificationReport(valid=False, violations=violations, provenance=provenance)

    vertex_weights, edge_weights = _weights(G, f)

    for eid, u, v in G.edges:
        if vertex_weights[u] == vertex_weights[v]:
            violations.append(
                Violation(
                    kind="adjacent_vertices",
                    elements=(u, v),
                    detail=f"both weigh {vertex_weights[u]}",
                )
            )

    for v in G.vertices:
        incident = G.incident_edges(v)
        for a in range(len(incident)):
            for b in range(a + 1, len(incident)):
                e1, e2 = incident[a], incident[b]
                if edge_weights[e1] == edge_weights[e2]:
                    violations.append(
                        Violation(
                            kind="adjacent_edges",
                            elements=(e1, e2),
                            detail=f"both weigh {edge_weights[e1]}",
                        )
                    )

    for eid, u, v in G.edges:
        for end in (u, v):
            if vertex_weights[end] == edge_weights[eid]:
                violations.append(
                    Violation(
                        kind="incident_vertex_edge",
                        elements=(end, eid),
                        detail=f"both weigh {edge_weights[eid]}",
                    )
                )

    distinct = sorted(set(vertex_weights.values()) | set(edge_weights.values()))
    if violations:
        logger.debug(f"Labeling failed verification with {len(violations)} violations")
    return VerificationReport(
        valid=not violations,
        violations=violations,
        color_count=len(distinct),
        distinct_weights=distinct,
        provenance=provenance,
    )


# ----------------------------------------------------------------------
# Local antimagic and local edge antimagic labelings
# ----------------------------------------------------------------------


def verify_local_antimagic(G: Graph, f: EdgeOnlyLabeling) -> AntimagicCheck:
    problem = _bijection_problem(f.edge_labels, set(G.edge_ids), G.size)
    if problem:
        raise NotBijectionError(f"edge labeling: {problem}")
    sums = {v: sum(f.edge_labels[eid] for eid in G.incident_edges(v)) for v in G.vertices}
    valid = all(sums[u] != sums[v] for _, u, v in G.edges)
    return AntimagicCheck(valid=valid, color_count=len(set(sums.values())), weights=sums)


def verify_local_edge_antimagic(G: Graph, g: VertexOnlyLabeling) -> AntimagicCheck:
    problem = _bijection_problem(g.vertex_labels, set(G.vertices), G.order)
    if problem:
        raise NotBijectionError(f"vertex labeling: {problem}")
    sums = {eid: g.vertex_labels[u] + g.vertex_labels[v] for eid, u, v in G.edges}
    valid = all(
        sums[eid] != sums[other] for eid in G.edge_ids for other in G.adjacent_edges(eid)
    )
    return AntimagicCheck(valid=valid, color_count=len(set(sums.values())), weights=sums)


def compose_total(G: Graph, f: EdgeOnlyLabeling, h: VertexOnlyLabeling) -> TotalLabeling:
    """
    Combine a local antimagic f and a local edge antimagic h into g.

    g(v) = h(v) and g(e) = f(e) + p. When G has pendant vertices, f must
    keep the non-pendant edges on the smallest labels and the graph must
    have enough non-pendant edges to separate the two weight ranges.
    """
    if not verify_local_antimagic(G, f).valid:
        raise CompositionPreconditionError("local-antimagic", "f does not separate adjacent vertex sums")
    if not verify_local_edge_antimagic(G, h).valid:
        raise CompositionPreconditionError("local-edge-antimagic", "h does not separate adjacent edge sums")

    p = G.order
    min_degree = min((G.degree(v) for v in G.vertices), default=0)
    if min_degree == 0 or not is_admissible(G):
        raise CompositionPreconditionError("admissible", "graph has an isolated vertex or a K2 component")
    if min_degree == 1:
        pendant_count = len(G.pendant_vertices())
        pendant_edges = set(G.pendant_edges())
        non_pendant_vertices = p - pendant_count
        non_pendant_edges = G.size - len(pendant_edges)
        if non_pendant_edges <= non_pendant_vertices + pendant_count - 2:
            raise CompositionPreconditionError(
                "pendant-count",
                f"need e_p > v_p + k - 2, got e_p={non_pendant_edges}, v_p={non_pendant_vertices}, k={pendant_count}",
            )
        stray = [
            eid for eid in G.edge_ids
            if eid not in pendant_edges and f.edge_labels[eid] > non_pendant_edges
        ]
        if stray:
            raise CompositionPreconditionError(
                "non-pendant-labels",
                f"non-pendant edges {stray} carry labels above {non_pendant_edges}",
            )

    composed = TotalLabeling(
        vertex_labels=dict(h.vertex_labels),
        edge_labels={eid: label + p for eid, label in f.edge_labels.items()},
    )
    logger.debug(f"Composed total labeling on {p} vertices and {G.size} edges")
    return composed


# ----------------------------------------------------------------------
# Interchange
# ----------------------------------------------------------------------


def labeling_to_json(f: TotalLabeling) -> str:
    return json.dumps(f.to_dict(), indent=2, sort_keys=True)


def labeling_from_dict(data: Mapping[str, Any]) -> TotalLabeling:
    from utils.schema_loader import SchemaLoader

    SchemaLoader().validate("labeling", data)
    return TotalLabeling.model_validate(data)


def load_labeling(path: Path) -> TotalLabeling:
    """Read and validate a labeling JSON file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return labeling_from_dict(data)


def save_labeling(f: TotalLabeling, path: Path) -> Path:
    path = Path(path)
    path.write_text(labeling_to_json(f) + "\n", encoding="utf-8")
    return path
