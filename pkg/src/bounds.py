"""
Bounds on chi_lt and the table of settled families.

Lower bounds come from degree and pendant counting plus the small path
and cycle results; upper bounds are only reported where a verified
labeling exists (see ``known_values``).
"""
import logging
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from src.constructions import case_upper_bound
from src.exceptions import InadmissibleGraphError
from src.graph_core import Graph, classify_components, degree_stats
from src.labeling_core import admissibility_violations

logger = logging.getLogger(__name__)


class Justification(BaseModel):
    rule: str
    bound: int
    side: Literal["lower", "upper"] = "lower"


class KnownValue(BaseModel):
    """Settled value (lower == upper) or interval for a recognised family."""

    rule: str
    lower: int
    upper: Optional[int] = None
    parameters: Dict[str, int] = Field(default_factory=dict)

    @property
    def exact(self) -> Optional[int]:
        return self.lower if self.upper == self.lower else None


class BoundReport(BaseModel):
    lower: int
    upper: Optional[int] = None
    justifications: List[Justification] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_order(self) -> "BoundReport":
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        return self

    @property
    def exact(self) -> Optional[int]:
        return self.lower if self.upper == self.lower else None

    def to_dict(self) -> Dict[str, object]:
        data = self.model_dump(mode="json")
        data["exact"] = self.exact
        return data


def _require_admissible(G: Graph) -> None:
    problems = admissibility_violations(G)
    if problems:
        raise InadmissibleGraphError(f"Graph is not labelable: {problems[0].detail}")


def _path_needs_four(order: int) -> bool:
    return order == 4 or (order >= 5 and order % 2 == 1) or (order >= 8 and order % 2 == 0)


def classify_chi3(G: Graph) -> bool:
    """True exactly for mC6 (m >= 1) and mC6 + P6 (m >= 0)."""
    summary = classify_components(G).as_dict()
    cycles = summary.pop(("cycle", 6), 0)
    paths = summary.pop(("path", 6), 0)
    if summary:
        return False
    return (paths == 0 and cycles >= 1) or paths == 1


def thm_D_lower(G: Graph) -> Optional[int]:
    """
    k+2 for a graph with a unique hub of degree Δ >= 3 and k >= Δ pendant edges.

    The hub must not touch a pendant vertex, every other degree is at most
    m < Δ, and Δ(Δ+1) > max{m(2(p+q)-m+1), 4(p+q)-2}.
    """
    if not G.vertices:
        return None
    degrees = {v: G.degree(v) for v in G.vertices}
    delta = max(degrees.values())
    hubs = [v for v, d in degrees.items() if d == delta]
    if len(hubs) != 1 or delta < 3:
        return None
    hub = hubs[0]
    if any(degrees[u] == 1 for u in G.neighbors(hub)):
        return None
    others = max((d for v, d in degrees.items() if v != hub), default=0)
    pendant_edges = len(G.pendant_edges())
    if pendant_edges < delta:
        return None
    total = G.order + G.size
    if delta * (delta + 1) <= max(others * (2 * total - others + 1), 4 * total - 2):
        return None
    return pendant_edges + 2


def lower_bound(G: Graph) -> BoundReport:
    _require_admissible(G)
    stats = degree_stats(G)
    justifications = [Justification(rule="max-degree-plus-one", bound=stats.max_degree + 1)]

    pendants = len(G.pendant_vertices())
    if pendants:
        justifications.append(Justification(rule="pendants-plus-one", bound=pendants + 1))

    summary = classify_components(G)
    if any(e.kind == "path" and _path_needs_four(e.order) for e in summary.entries):
        justifications.append(Justification(rule="path-component-four", bound=4))
    if any(e.kind == "cycle" and e.order != 6 for e in summary.entries):
        justifications.append(Justification(rule="cycle-component-four", bound=4))
    # A lone P3 takes three colors even though it is neither mC6 nor mC6 + P6.
    if not classify_chi3(G) and summary.as_dict() != {("path", 3): 1}:
        justifications.append(Justification(rule="three-color-characterization", bound=4))

    hub_bound = thm_D_lower(G)
    if hub_bound is not None:
        justifications.append(Justification(rule="unique-hub-pendant-bound", bound=hub_bound))

    return BoundReport(lower=max(j.bound for j in justifications), justifications=justifications)


def known_values(G: Graph) -> Optional[KnownValue]:
    """Look up G among the families whose chi_lt is settled or bracketed."""
    counts = classify_components(G).as_dict()
    if any(kind == "other" for kind, _ in counts):
        return None

    def only(*keys) -> bool:
        return set(counts) == set(keys)

    if len(counts) == 1:
        (kind, order), mult = next(iter(counts.items()))
        if kind == "path" and mult == 1:
            if order in (3, 6):
                return KnownValue(rule="path-three", lower=3, upper=3, parameters={"n": order})
            if order == 4 or (order >= 5 and order % 2 == 1):
                return KnownValue(rule="path-four", lower=4, upper=4, parameters={"n": order})
            if order >= 8:
                return KnownValue(rule="even-path-interval", lower=4, upper=5, parameters={"n": order})
            return None
        if kind == "cycle":
            if order == 6:
                return KnownValue(rule="mC6", lower=3, upper=3, parameters={"m": mult})
            if order == 4:
                return KnownValue(rule="mC4", lower=4, upper=4, parameters={"m": mult})
            if mult == 1 and order in (3, 5):
                return KnownValue(rule=f"C{order}", lower=4, upper=4)
            if mult == 1 and order == 8:
                return KnownValue(rule="C8", lower=4, upper=5)
            return None
        if kind == "path" and order == 3:
            return KnownValue(rule="nP3", lower=2 * mult + 1, upper=2 * mult + 1, parameters={"n": mult})
        if kind == "path" and order == 6 and mult >= 2:
            return KnownValue(rule="mP6", lower=2 * mult + 1, upper=2 * mult + 1, parameters={"m": mult})
        return None

    m = counts.get(("cycle", 6), 0)
    n6 = counts.get(("path", 6), 0)
    n3 = counts.get(("path", 3), 0)

    if only(("cycle", 6), ("path", 6)) and n6 == 1:
        return KnownValue(rule="mC6+P6", lower=3, upper=3, parameters={"m": m})
    if only(("cycle", 6), ("path", 3)):
        value = 4 if n3 == 1 else 2 * n3 + 1
        return KnownValue(rule="mC6+nP3", lower=value, upper=value, parameters={"m": m, "n": n3})
    if only(("cycle", 6), ("path", 6)):
        return KnownValue(rule="mC6+nP6", lower=2 * n6 + 1, upper=2 * n6 + 1, parameters={"m": m, "n": n6})
    if only(("path", 6), ("path", 3)) and n3 >= 2:
        value = 2 * n6 + 2 * n3 + 1
        return KnownValue(rule="mP6+nP3", lower=value, upper=value, parameters={"m": n6, "n": n3})
    if only(("cycle", 6), ("path", 6), ("path", 3)):
        params = {"m": m, "n": n6, "a": n3}
        lower = 2 * n6 + 2 * n3 + 1
        if n3 >= 2 * n6:
            return KnownValue(rule="mC6+nP6+aP3", lower=lower, upper=lower, parameters=params)
        if n6 < 2 * n3:
            # The case bounds are only stated for a >= 2.
            upper = case_upper_bound(n6, n3) if n3 >= 2 else None
            return KnownValue(rule="mC6+nP6+aP3", lower=lower, upper=upper, parameters=params)
    return None


def bound_report(G: Graph) -> BoundReport:
    """lower_bound merged with the known-value table."""
    report = lower_bound(G)
    known = known_values(G)
    if known is None:
        return report
    justifications = list(report.justifications)
    lower = report.lower
    if known.lower > lower:
        justifications.append(Justification(rule=known.rule, bound=known.lower))
        lower = known.lower
    if known.upper is not None:
        justifications.append(Justification(rule=known.rule, bound=known.upper, side="upper"))
    logger.debug(f"Known family {known.rule} with parameters {known.parameters}")
    return BoundReport(lower=lower, upper=known.upper, justifications=justifications)
