"""
chi-lt CLI - build graphs, generate and verify labelings, bound and solve chi_lt

JSON results go to stdout with sorted keys; progress and summaries go to
stderr through rich.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

import jsonschema
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from src.bounds import bound_report, classify_chi3
from src.constructions import (
    CONSTRUCTIONS,
    ConstructionResult,
    extend_at_role,
    predict_extension_conditions,
    run_construction,
)
from src.env_manager import EnvManager, SolverSettings
from src.exceptions import (
    CompositionPreconditionError,
    ExtensionSpecError,
    InadmissibleGraphError,
    InvalidParameterError,
    NotBijectionError,
    NotCoveredError,
    SolverError,
    UnknownVertexError,
)
from src.graph_core import (
    build_cycle,
    build_fan,
    build_fan_pendant,
    build_path,
    classify_components,
    load_graph,
    save_graph,
    write_dot,
)
from src.labeling_core import load_labeling, save_labeling, verify_ltal, weight_profile
from src.solver import SearchBudget, solve_chi_la, solve_chi_lea, solve_chi_lt

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

USAGE_ERRORS = (
    FileNotFoundError,
    json.JSONDecodeError,
    jsonschema.ValidationError,
    ValidationError,
    InvalidParameterError,
    ExtensionSpecError,
    NotCoveredError,
    UnknownVertexError,
)
CHECK_FAILURES = (InadmissibleGraphError, NotBijectionError, CompositionPreconditionError, SolverError)

BUILD_FAMILIES = ("path", "cycle", "fan", "fan_pendant")
PREDICTED_FAMILIES = ("mC6_nP3", "mC6_nP6_aP3")


class ChiLtCLI:
    def __init__(
        self,
        out: Optional[TextIO] = None,
        console: Optional[Console] = None,
        settings: Optional[SolverSettings] = None,
    ):
        self.out = out or sys.stdout
        self.console = console or Console(stderr=True)
        self.settings = settings or SolverSettings()

    def emit(self, data: Any) -> None:
        self.out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")

    # ------------------------------------------------------------------
    # Graphs
    # ------------------------------------------------------------------

    def build(self, family: str, n: int, k: Optional[int] = None, out: Optional[Path] = None) -> int:
        """Build a named family and write or print its graph JSON"""
        if family == "path":
            graph = build_path(n)
        elif family == "cycle":
            graph = build_cycle(n)
        elif family == "fan":
            graph = build_fan(n)
        else:
            if k is None:
                raise InvalidParameterError("fan_pendant needs --k")
            graph = build_fan_pendant(n, k)

        if out is not None:
            save_graph(graph, out)
            self.console.print(f"📄 Wrote {family} graph ({graph.order} vertices, {graph.size} edges) to {out}")
        else:
            self.emit(graph.model_dump(mode="json"))
        return EXIT_OK

    def classify(self, kind: str, graph_path: Path) -> int:
        graph = load_graph(graph_path)
        if kind == "components":
            summary = classify_components(graph)
            self.emit(summary.model_dump(mode="json"))
            return EXIT_OK
        result = classify_chi3(graph)
        self.emit({"chi3": result})
        self.console.print("✅ chi_lt = 3" if result else "❌ chi_lt is not 3")
        return EXIT_OK if result else EXIT_FAILED

    # ------------------------------------------------------------------
    # Constructions
    # ------------------------------------------------------------------

    def _write_artifacts(self, result: ConstructionResult, out_dir: Path, stem: str) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        save_graph(result.graph, out_dir / f"{stem}-graph.json")
        save_labeling(result.labeling, out_dir / f"{stem}-labeling.json")
        report_path = out_dir / f"{stem}-report.json"
        report_path.write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self.console.print(f"📁 Wrote {stem} graph, labeling and report to {out_dir}")

    def _write_dot(self, result: ConstructionResult, dot: Path) -> None:
        profile = result.profile()
        path = write_dot(result.graph, dot, result.labeling.as_mapping(), profile.as_mapping())
        self.console.print(f"🖼  Wrote DOT to {path}")

    def _report(self, result: ConstructionResult) -> int:
        if result.report.valid:
            self.console.print(
                f"✅ {result.name}: {result.color_count} colors {result.distinct_weights} ({result.provenance})"
            )
        else:
            self.console.print(f"❌ {result.name}: {len(result.report.violations)} violations")
        for note in result.notes:
            self.console.print(f"⚠️  {note}")
        return EXIT_OK if result.report.valid else EXIT_FAILED

    def construct(
        self,
        name: str,
        parameters: Dict[str, int],
        out_dir: Optional[Path] = None,
        dot: Optional[Path] = None,
    ) -> int:
        """Generate a closed-form labeling and verify it"""
        result = run_construction(name, **parameters)
        if out_dir is not None:
            self._write_artifacts(result, out_dir, name)
        if dot is not None:
            self._write_dot(result, dot)
        self.emit(result.summary())
        return self._report(result)

    def extend(
        self,
        name: str,
        parameters: Dict[str, int],
        role: str,
        s: int,
        k: Optional[int] = None,
        out_dir: Optional[Path] = None,
    ) -> int:
        """Attach s blocks of pendant edges to a tagged vertex of a construction"""
        base = run_construction(name, **parameters)
        result = extend_at_role(base, role, s, k)
        summary = result.summary()
        if name in PREDICTED_FAMILIES:
            try:
                prediction = predict_extension_conditions(
                    name, role, s, parameters.get("m", 0), parameters.get("n", 0), parameters.get("a", 0), k
                )
                summary["prediction"] = prediction.model_dump(mode="json")
            except NotCoveredError as e:
                logger.info(f"No prediction for {name} at {role}: {e}")
        if out_dir is not None:
            self._write_artifacts(result, out_dir, f"{name}-extended")
        self.emit(summary)
        return self._report(result)

    # ------------------------------------------------------------------
    # Labelings
    # ------------------------------------------------------------------

    def verify(self, graph_path: Path, labeling_path: Path) -> int:
        graph = load_graph(graph_path)
        labeling = load_labeling(labeling_path)
        report = verify_ltal(graph, labeling)
        self.emit(report.model_dump(mode="json"))
        if report.valid:
            self.console.print(f"✅ Valid: {report.color_count} colors")
            return EXIT_OK
        self.console.print(f"❌ Invalid: {', '.join(sorted(set(report.kinds())))}")
        return EXIT_FAILED

    def weights(self, graph_path: Path, labeling_path: Path, dot: Optional[Path] = None) -> int:
        graph = load_graph(graph_path)
        labeling = load_labeling(labeling_path)
        profile = weight_profile(graph, labeling)
        if dot is not None:
            write_dot(graph, dot, labeling.as_mapping(), profile.as_mapping())
        self.emit(profile.model_dump(mode="json"))
        return EXIT_OK

    # ------------------------------------------------------------------
    # Bounds and search
    # ------------------------------------------------------------------

    def bounds(self, graph_path: Path) -> int:
        report = bound_report(load_graph(graph_path))
        self.emit(report.to_dict())
        table = Table(title="chi_lt bounds")
        table.add_column("Rule")
        table.add_column("Side")
        table.add_column("Bound", justify="right")
        for justification in report.justifications:
            table.add_row(justification.rule, justification.side, str(justification.bound))
        self.console.print(table)
        return EXIT_OK

    def solve(
        self,
        graph_path: Path,
        invariant: str = "lt",
        max_colors: Optional[int] = None,
        budget_nodes: Optional[int] = None,
        budget_secs: Optional[float] = None,
        threads: Optional[int] = None,
        use_bounds: bool = True,
    ) -> int:
        graph = load_graph(graph_path)
        budget = SearchBudget(
            node_limit=budget_nodes or self.settings.budget_nodes,
            time_limit_seconds=budget_secs or self.settings.budget_seconds,
            max_colors=max_colors,
        )
        if invariant == "la":
            result = solve_chi_la(graph, budget)
        elif invariant == "lea":
            result = solve_chi_lea(graph, budget)
        else:
            result = solve_chi_lt(graph, budget, threads or self.settings.threads, use_bounds)
        self.emit(result.to_dict())

        if result.status == "exact":
            self.console.print(f"✅ chi_{invariant} = {result.value} ({result.stats.nodes} nodes)")
            return EXIT_OK
        if result.status == "inconclusive":
            self.console.print(f"⏳ Budget exhausted; chi_{invariant} >= {result.lower}")
            return EXIT_INCONCLUSIVE
        self.console.print(f"❌ No labeling below {result.value} colors")
        return EXIT_FAILED

    def show_config(self, project_path: Optional[Path] = None) -> int:
        """Display which env files are loaded and the effective solver settings"""
        manager = EnvManager(project_path)
        for desc, path, exists in manager.config_info():
            mark = "✓" if exists else "✗"
            self.console.print(f"{mark} {desc:20} {path}")
        self.console.print("Loading order: Global → Defaults → Local → Main")
        self.emit(vars(self.settings))
        return EXIT_OK


def _construction_parameters(args: argparse.Namespace, names: Sequence[str] = ("m", "n", "a")) -> Dict[str, int]:
    return {name: getattr(args, name) for name in names if getattr(args, name) is not None}


def _add_family_parameters(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("name", choices=sorted(CONSTRUCTIONS), help="Construction name")
    parser.add_argument("--m", type=int, help="Number of hexagon (or square) components")
    parser.add_argument("--n", type=int, help="Second family parameter")
    parser.add_argument("--a", type=int, help="Number of P3 components in the mixed family")
    parser.add_argument("--s", type=int, help="Pendant block count")
    parser.add_argument("--out-dir", type=Path, help="Directory for graph, labeling and report files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chi-lt",
        description="chi-lt - local total antimagic labelings and the chromatic number chi_lt",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    build_p = subparsers.add_parser("build", help="Build a graph family")
    build_p.add_argument("family", choices=BUILD_FAMILIES)
    build_p.add_argument("--n", type=int, required=True, help="Order (path, cycle) or triangle count (fan)")
    build_p.add_argument("--k", type=int, help="Pendant edges per fan vertex")
    build_p.add_argument("--out", type=Path, help="Write the graph JSON here instead of stdout")

    construct_p = subparsers.add_parser("construct", help="Generate a closed-form labeling")
    _add_family_parameters(construct_p)
    construct_p.add_argument("--dot", type=Path, help="Also write a DOT rendering")

    verify_p = subparsers.add_parser("verify", help="Check a labeling against the three local conditions")
    verify_p.add_argument("graph", type=Path)
    verify_p.add_argument("labeling", type=Path)

    weights_p = subparsers.add_parser("weights", help="Print induced weights")
    weights_p.add_argument("graph", type=Path)
    weights_p.add_argument("labeling", type=Path)
    weights_p.add_argument("--dot", type=Path, help="Also write a DOT rendering")

    bounds_p = subparsers.add_parser("bounds", help="Lower and known upper bounds")
    bounds_p.add_argument("graph", type=Path)

    classify_p = subparsers.add_parser("classify", help="Component or three-color classification")
    classify_p.add_argument("kind", choices=["chi3", "components"])
    classify_p.add_argument("--graph", type=Path, required=True)

    solve_p = subparsers.add_parser("solve", help="Exact search")
    solve_p.add_argument("graph", type=Path)
    solve_p.add_argument("--invariant", choices=["lt", "la", "lea"], default="lt")
    solve_p.add_argument("--max-colors", type=int, help="Stop after this many colors")
    solve_p.add_argument("--budget-nodes", type=int, help="Search node limit")
    solve_p.add_argument("--budget-secs", type=float, help="Wall-clock limit in seconds")
    solve_p.add_argument("--threads", type=int, help="Worker threads for first-level branches")
    solve_p.add_argument("--no-bounds", action="store_true", help="Start the search at one color")

    extend_p = subparsers.add_parser("extend", help="Pendant extension of a construction")
    _add_family_parameters(extend_p)
    extend_p.add_argument("--vertex", required=True, help="Role tag of the vertex, e.g. u_{1,1}")
    extend_p.add_argument("--k", type=int, help="Block width; defaults to the vertex label")
    extend_p.add_argument("--base-s", type=int, help="Pendant count of a pendant base construction; defaults to --s")

    subparsers.add_parser("config", help="Show configuration files and solver settings")
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = SolverSettings.from_env()
    except InvalidParameterError as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging("DEBUG" if args.verbose else settings.log_level)

    cli = ChiLtCLI(settings=settings)

    try:
        if args.command == "build":
            return cli.build(args.family, args.n, args.k, args.out)
        elif args.command == "construct":
            return cli.construct(args.name, _construction_parameters(args, ("m", "n", "a", "s")), args.out_dir, args.dot)
        elif args.command == "verify":
            return cli.verify(args.graph, args.labeling)
        elif args.command == "weights":
            return cli.weights(args.graph, args.labeling, args.dot)
        elif args.command == "bounds":
            return cli.bounds(args.graph)
        elif args.command == "classify":
            return cli.classify(args.kind, args.graph)
        elif args.command == "solve":
            return cli.solve(
                args.graph,
                args.invariant,
                args.max_colors,
                args.budget_nodes,
                args.budget_secs,
                args.threads,
                not args.no_bounds,
            )
        elif args.command == "extend":
            if args.s is None:
                raise InvalidParameterError("extend needs --s")
            parameters = _construction_parameters(args)
            if "s" in CONSTRUCTIONS[args.name][1]:
                parameters["s"] = args.base_s if args.base_s is not None else args.s
            return cli.extend(args.name, parameters, args.vertex, args.s, args.k, args.out_dir)
        elif args.command == "config":
            return cli.show_config()
        else:
            parser.print_help()
            return EXIT_USAGE
    except USAGE_ERRORS as e:
        cli.console.print(f"❌ {type(e).__name__}: {e}")
        return EXIT_USAGE
    except CHECK_FAILURES as e:
        cli.console.print(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
