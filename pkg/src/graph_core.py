"""
Graph representation and family builders.

Vertices and edges live in one integer id space, so a labeling can address
any element by id. Builders attach role tags (``u_3``, ``u_{1,3}``,
``h_{2,1}``) naming each element the way the closed-form labelings index
them, and ``disjoint_union`` extends those tags with a component index.
"""
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from src.exceptions import InvalidParameterError, UnknownVertexError

logger = logging.getLogger(__name__)

EdgeTriple = Tuple[int, int, int]

_TAG_RE = re.compile(r"^(?P<name>[A-Za-z]+)(?:_(?:(?P<single>\d+)|\{(?P<multi>\d+(?:,\d+)*)\}))?$")


def role_tag(name: str, *indices: int) -> str:
    """Format a role tag: ``u`` / ``u_3`` / ``u_{1,3}``."""
    if not indices:
        return name
    if len(indices) == 1:
        return f"{name}_{indices[0]}"
    return f"{name}_{{{','.join(str(i) for i in indices)}}}"


def parse_role_tag(tag: str) -> Tuple[str, Tuple[int, ...]]:
    """Split a role tag into its name and index tuple."""
    match = _TAG_RE.match(tag)
    if not match:
        raise InvalidParameterError(f"Malformed role tag: {tag!r}")
    if match.group("single") is not None:
        return match.group("name"), (int(match.group("single")),)
    if match.group("multi") is not None:
        return match.group("name"), tuple(int(i) for i in match.group("multi").split(","))
    return match.group("name"), ()


class Graph(BaseModel):
    """
    Simple undirected graph with stable element ids and optional role tags.

    Instances are frozen; every structural query is answered from indexes
    built once at construction time, so a graph can be shared across threads.
    """

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[int, ...] = ()
    edges: Tuple[EdgeTriple, ...] = ()
    tags: Dict[int, str] = Field(default_factory=dict)

    _nx: Any = PrivateAttr(default=None)
    _endpoints: Dict[int, Tuple[int, int]] = PrivateAttr(default_factory=dict)
    _incident: Dict[int, Tuple[int, ...]] = PrivateAttr(default_factory=dict)
    _by_tag: Dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def check_structure(self) -> "Graph":
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        edge_ids = [eid for eid, _, _ in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise ValueError("duplicate edge ids")
        if vertex_set & set(edge_ids):
            raise ValueError("vertex and edge ids must be disjoint")

        seen_pairs = set()
        for eid, u, v in self.edges:
            if u not in vertex_set or v not in vertex_set:
                raise ValueError(f"edge {eid} has an endpoint outside the vertex set")
            if u == v:
                raise ValueError(f"edge {eid} is a self-loop")
            pair = frozenset((u, v))
            if pair in seen_pairs:
                raise ValueError(f"edge {eid} duplicates an existing edge")
            seen_pairs.add(pair)

        elements = vertex_set | set(edge_ids)
        unknown = [element for element in self.tags if element not in elements]
        if unknown:
            raise ValueError(f"tags reference unknown elements: {sorted(unknown)}")
        if len(set(self.tags.values())) != len(self.tags):
            raise ValueError("role tags must be unique")
        return self

    def model_post_init(self, __context: Any) -> None:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        incident: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for eid, u, v in self.edges:
            graph.add_edge(u, v, eid=eid)
            self._endpoints[eid] = (u, v)
            incident.setdefault(u, []).append(eid)
            incident.setdefault(v, []).append(eid)
        self._nx = graph
        self._incident = {v: tuple(eids) for v, eids in incident.items()}
        self._by_tag = {tag: element for element, tag in self.tags.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self.tags == other.tags
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges, tuple(sorted(self.tags.items()))))

    # ------------------------------------------------------------------
    # Structural queries
    # ------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(eid for eid, _, _ in self.edges)

    @property
    def elements(self) -> Tuple[int, ...]:
        return self.vertices + self.edge_ids

    @property
    def nx_graph(self) -> nx.Graph:
        """Underlying networkx graph; edges carry their id as the ``eid`` attribute."""
        return self._nx

    def is_vertex(self, element: int) -> bool:
        return element in self._incident

    def is_edge(self, element: int) -> bool:
        return element in self._endpoints

    def endpoints(self, eid: int) -> Tuple[int, int]:
        try:
            return self._endpoints[eid]
        except KeyError:
            raise UnknownVertexError(f"Edge {eid} not in graph") from None

    def incident_edges(self, v: int) -> Tuple[int, ...]:
        try:
            return self._incident[v]
        except KeyError:
            raise UnknownVertexError(f"Vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.incident_edges(v))

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(self.other_end(eid, v) for eid in self.incident_edges(v))

    def other_end(self, eid: int, v: int) -> int:
        u, w = self.endpoints(eid)
        return w if u == v else u

    def adjacent_edges(self, eid: int) -> Tuple[int, ...]:
        """Edges sharing an endpoint with ``eid``, in incidence order."""
        u, v = self.endpoints(eid)
        return tuple(e for e in self._incident[u] + self._incident[v] if e != eid)

    def tag(self, element: int) -> Optional[str]:
        return self.tags.get(element)

    def element_by_tag(self, role: str) -> int:
        try:
            return self._by_tag[role]
        except KeyError:
            raise UnknownVertexError(f"No element tagged {role!r}") from None

    def pendant_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in self.vertices if self.degree(v) == 1)

    def pendant_edges(self) -> Tuple[int, ...]:
        return tuple(
            eid for eid, u, v in self.edges if self.degree(u) == 1 or self.degree(v) == 1
        )

    def max_id(self) -> int:
        return max(self.elements, default=-1)

    def min_id(self) -> int:
        return min(self.elements, default=0)

    def components(self) -> List[Tuple[int, ...]]:
        """Connected components as vertex tuples, ordered by first appearance."""
        position = {v: i for i, v in enumerate(self.vertices)}
        comps = [sorted(comp, key=position.__getitem__) for comp in nx.connected_components(self._nx)]
        comps.sort(key=lambda comp: position[comp[0]])
        return [tuple(comp) for comp in comps]


# ----------------------------------------------------------------------
# Builders
# ----------------------------------------------------------------------


def build_path(n: int, vertex_name: str = "u", edge_name: str = "e") -> Graph:
    """Path u_1 ... u_n with e_i = u_i u_{i+1}."""
    if n < 2:
        raise InvalidParameterError(f"Path order must be at least 2, got {n}")
    vertices = tuple(range(n))
    edges = tuple((n + i, i, i + 1) for i in range(n - 1))
    tags = {i: role_tag(vertex_name, i + 1) for i in range(n)}
    tags.update({n + i: role_tag(edge_name, i + 1) for i in range(n - 1)})
    return Graph(vertices=vertices, edges=edges, tags=tags)


def build_cycle(n: int, vertex_name: str = "u", edge_name: str = "e") -> Graph:
    """Cycle u_1 ... u_n with e_j = u_j u_{j+1} and e_n = u_n u_1."""
    if n < 3:
        raise InvalidParameterError(f"Cycle order must be at least 3, got {n}")
    vertices = tuple(range(n))
    edges = tuple((n + j, j, (j + 1) % n) for j in range(n))
    tags = {j: role_tag(vertex_name, j + 1) for j in range(n)}
    tags.update({n + j: role_tag(edge_name, j + 1) for j in range(n)})
    return Graph(vertices=vertices, edges=edges, tags=tags)


def shift_ids(G: Graph, offset: int) -> Graph:
    """Copy of G with every element id increased by ``offset``."""
    return Graph(
        vertices=tuple(v + offset for v in G.vertices),
        edges=tuple((eid + offset, u + offset, v + offset) for eid, u, v in G.edges),
        tags={element + offset: tag for element, tag in G.tags.items()},
    )


def _tag_family(G: Graph) -> frozenset:
    return frozenset(parse_role_tag(tag)[0] for tag in G.tags.values())


def _index_tag(tag: str, index: int) -> str:
    name, indices = parse_role_tag(tag)
    return role_tag(name, index, *indices)


def disjoint_union(parts: Sequence[Graph], reindex: Optional[bool] = None) -> Graph:
    """
    Disjoint union of ``parts`` with ids renumbered past each previous part.

    With ``reindex`` (the default whenever more than one part is given) every
    role tag gains a leading component index, counted separately for each
    tag family: cycles tagged u/e and paths tagged v/h are numbered 1, 2, ...
    independently of each other.
    """
    if not parts:
        raise InvalidParameterError("disjoint_union needs at least one part")
    if reindex is None:
        reindex = len(parts) > 1
    if len(parts) == 1 and not reindex:
        return parts[0]

    vertices: List[int] = []
    edges: List[EdgeTriple] = []
    tags: Dict[int, str] = {}
    family_counts: Dict[frozenset, int] = {}
    offset = 0
    for part in parts:
        # Parts may use negative ids; each is moved to start at the running offset.
        shifted = shift_ids(part, offset - part.min_id())
        offset += part.max_id() - part.min_id() + 1
        vertices.extend(shifted.vertices)
        edges.extend(shifted.edges)
        if reindex and shifted.tags:
            family = _tag_family(part)
            family_counts[family] = family_counts.get(family, 0) + 1
            index = family_counts[family]
            tags.update({element: _index_tag(tag, index) for element, tag in shifted.tags.items()})
        else:
            tags.update(shifted.tags)
    return Graph(vertices=tuple(vertices), edges=tuple(edges), tags=tags)


def attach_pendants(
    G: Graph,
    v: int,
    k: int,
    s: int,
    vertex_name: str = "x",
    edge_name: str = "xe",
) -> Graph:
    """G_v(k,s): ks new pendant vertices x_{j,i} joined to v by edges xe_{j,i}."""
    if not G.is_vertex(v):
        raise UnknownVertexError(f"Vertex {v} not in graph")
    if k < 1 or s < 1:
        raise InvalidParameterError(f"Block width and count must be positive, got k={k}, s={s}")

    existing = _tag_family(G) if G.tags else frozenset()
    if vertex_name in existing or edge_name in existing:
        raise InvalidParameterError(
            f"Graph already carries {vertex_name!r}/{edge_name!r} tags; choose other names"
        )

    next_id = G.max_id() + 1
    vertices = list(G.vertices)
    edges = list(G.edges)
    tags = dict(G.tags)
    for j in range(1, s + 1):
        for i in range(1, k + 1):
            x, eid = next_id, next_id + 1
            next_id += 2
            vertices.append(x)
            edges.append((eid, v, x))
            tags[x] = role_tag(vertex_name, j, i)
            tags[eid] = role_tag(edge_name, j, i)
    logger.debug(f"Attached {k * s} pendant edges to vertex {v}")
    return Graph(vertices=tuple(vertices), edges=tuple(edges), tags=tags)


def build_fan(n: int) -> Graph:
    """f_n: n triangles c a_i b_i sharing the hub c."""
    if n < 2:
        raise InvalidParameterError(f"Fan needs at least 2 triangles, got {n}")
    hub = 0
    vertices = [hub]
    tags: Dict[int, str] = {hub: "c"}
    for i in range(1, n + 1):
        a, b = 2 * i - 1, 2 * i
        vertices.extend((a, b))
        tags[a] = role_tag("a", i)
        tags[b] = role_tag("b", i)
    next_id = 2 * n + 1
    edges: List[EdgeTriple] = []
    for i in range(1, n + 1):
        a, b = 2 * i - 1, 2 * i
        for name, u, w in (("ca", hub, a), ("cb", hub, b), ("ab", a, b)):
            edges.append((next_id, u, w))
            tags[next_id] = role_tag(name, i)
            next_id += 1
    return Graph(vertices=tuple(vertices), edges=tuple(edges), tags=tags)


def build_fan_pendant(n: int, k: int) -> Graph:
    """f_n(k): the fan with exactly k pendant edges on every degree-2 vertex."""
    if k < 1 or k > 2 * n - 3:
        raise InvalidParameterError(f"Fan pendant count must satisfy 1 <= k <= 2n-3, got n={n}, k={k}")
    fan = build_fan(n)
    vertices = list(fan.vertices)
    edges = list(fan.edges)
    tags = dict(fan.tags)
    next_id = fan.max_id() + 1
    for i in range(1, n + 1):
        for side in ("a", "b"):
            anchor = fan.element_by_tag(role_tag(side, i))
            for r in range(1, k + 1):
                x, eid = next_id, next_id + 1
                next_id += 2
                vertices.append(x)
                edges.append((eid, anchor, x))
                tags[x] = role_tag(f"x{side}", i, r)
                tags[eid] = role_tag(f"p{side}", i, r)
    return Graph(vertices=tuple(vertices), edges=tuple(edges), tags=tags)


# ----------------------------------------------------------------------
# Component classification
# ----------------------------------------------------------------------

ComponentKind = Literal["cycle", "path", "other"]


class ComponentStructure(BaseModel):
    """One connected component with its traversal order."""

    kind: ComponentKind
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.vertices)


class ComponentCount(BaseModel):
    kind: ComponentKind
    order: int = Field(ge=1)
    multiplicity: int = Field(ge=1)


class ComponentSummary(BaseModel):
    """Component kinds with multiplicities, sorted by kind then order."""

    entries: List[ComponentCount] = Field(default_factory=list)

    def count(self, kind: ComponentKind, order: Optional[int] = None) -> int:
        return sum(
            entry.multiplicity
            for entry in self.entries
            if entry.kind == kind and (order is None or entry.order == order)
        )

    @property
    def total(self) -> int:
        return sum(entry.multiplicity for entry in self.entries)

    def as_dict(self) -> Dict[Tuple[str, int], int]:
        return {(entry.kind, entry.order): entry.multiplicity for entry in self.entries}


def _walk(G: Graph, start: int, first_edge: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    vertices = [start]
    edges: List[int] = []
    current, eid = start, first_edge
    while True:
        edges.append(eid)
        nxt = G.other_end(eid, current)
        if nxt == start:
            break
        vertices.append(nxt)
        remaining = [e for e in G.incident_edges(nxt) if e != eid]
        if not remaining:
            break
        current, eid = nxt, remaining[0]
    return tuple(vertices), tuple(edges)


def component_structures(G: Graph) -> List[ComponentStructure]:
    """Classify each component; cycles and paths come with a traversal order."""
    edge_position = {eid: i for i, eid in enumerate(G.edge_ids)}
    structures: List[ComponentStructure] = []
    for comp in G.components():
        degrees = [G.degree(v) for v in comp]
        comp_edges = sorted(
            {eid for v in comp for eid in G.incident_edges(v)}, key=edge_position.__getitem__
        )
        if len(comp) >= 3 and all(d == 2 for d in degrees):
            start = comp[0]
            first = min(G.incident_edges(start), key=edge_position.__getitem__)
            verts, edges = _walk(G, start, first)
            structures.append(ComponentStructure(kind="cycle", vertices=verts, edges=edges))
        elif len(comp) >= 2 and degrees.count(1) == 2 and all(d in (1, 2) for d in degrees):
            start = next(v for v in comp if G.degree(v) == 1)
            verts, edges = _walk(G, start, G.incident_edges(start)[0])
            structures.append(ComponentStructure(kind="path", vertices=verts, edges=edges))
        else:
            structures.append(ComponentStructure(kind="other", vertices=comp, edges=tuple(comp_edges)))
    return structures


_KIND_RANK = {"cycle": 0, "path": 1, "other": 2}


def classify_components(G: Graph) -> ComponentSummary:
    counts: Dict[Tuple[str, int], int] = {}
    for structure in component_structures(G):
        key = (structure.kind, structure.order)
        counts[key] = counts.get(key, 0) + 1
    entries = [
        ComponentCount(kind=kind, order=order, multiplicity=mult)
        for (kind, order), mult in sorted(counts.items(), key=lambda kv: (_KIND_RANK[kv[0][0]], kv[0][1]))
    ]
    return ComponentSummary(entries=entries)


class DegreeStats(BaseModel):
    max_degree: int
    min_degree: int
    pendant_edge_count: int


def degree_stats(G: Graph) -> DegreeStats:
    degrees = [G.degree(v) for v in G.vertices]
    return DegreeStats(
        max_degree=max(degrees, default=0),
        min_degree=min(degrees, default=0),
        pendant_edge_count=len(G.pendant_edges()),
    )


# ----------------------------------------------------------------------
# Interchange
# ----------------------------------------------------------------------


def graph_to_dict(G: Graph) -> Dict[str, Any]:
    return G.model_dump(mode="json")


def graph_to_json(G: Graph) -> str:
    return json.dumps(graph_to_dict(G), indent=2, sort_keys=True)


def graph_from_dict(data: Mapping[str, Any]) -> Graph:
    from utils.schema_loader import SchemaLoader

    SchemaLoader().validate("graph", data)
    return Graph.model_validate(data)


def load_graph(path: Path) -> Graph:
    """Read and validate a graph JSON file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return graph_from_dict(data)


def save_graph(G: Graph, path: Path) -> Path:
    path = Path(path)
    path.write_text(graph_to_json(G) + "\n", encoding="utf-8")
    return path


def _describe(tag: Optional[str], element: int, labels: Optional[Mapping[int, int]], weights: Optional[Mapping[int, int]]) -> str:
    parts = [tag if tag is not None else str(element)]
    if labels is not None and element in labels:
        parts.append(f"f={labels[element]}")
    if weights is not None and element in weights:
        parts.append(f"w={weights[element]}")
    return " ".join(parts)


def to_dot(
    G: Graph,
    labels: Optional[Mapping[int, int]] = None,
    weights: Optional[Mapping[int, int]] = None,
) -> str:
    """DOT source with role tag, label and weight on every node and edge."""
    drawing = nx.Graph()
    for v in G.vertices:
        drawing.add_node(v, label=_describe(G.tag(v), v, labels, weights))
    for eid, u, v in G.edges:
        drawing.add_edge(u, v, label=_describe(G.tag(eid), eid, labels, weights))
    return nx.drawing.nx_pydot.to_pydot(drawing).to_string()


def write_dot(G: Graph, path: Path, labels: Optional[Mapping[int, int]] = None, weights: Optional[Mapping[int, int]] = None) -> Path:
    path = Path(path)
    if path.suffix != ".dot":
        path = path.with_suffix(".dot")
    path.write_text(to_dot(G, labels, weights), encoding="utf-8")
    return path
