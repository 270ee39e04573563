"""
Test suite for the chi-lt command line.

Commands are driven through main() so parsing, dispatch and exit codes are
exercised together; JSON output is read back from stdout.
"""

import json

import pytest

from src.cli import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main
from src.graph_core import build_cycle, build_path, disjoint_union, load_graph, save_graph
from src.labeling_core import TotalLabeling, save_labeling


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Run from an empty project directory with no chi-lt settings in the environment"""
    for key in ("CHI_LT_BUDGET_NODES", "CHI_LT_BUDGET_SECONDS", "CHI_LT_THREADS", "LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestConstructCommand:
    """construct and extend"""

    # HAPPY PATH TESTS

    def test_construct_when_mC6_m2_then_three_weights_and_exit_0(self, isolated_env, capsys):
        """Summary JSON lists the verified weights"""
        # Act
        code, summary = _run(capsys, "construct", "mC6", "--m", "2")

        # Assert
        assert code == EXIT_OK
        assert summary["report"]["distinct_weights"] == [24, 25, 26]
        assert summary["matches_prediction"] is True

    def test_construct_when_out_dir_given_then_files_verify(self, isolated_env, capsys):
        """Written graph and labeling pass the verify command"""
        # Arrange
        out_dir = isolated_env / "out"

        # Act
        construct_code, _ = _run(capsys, "construct", "mC6_P6", "--m", "1", "--out-dir", str(out_dir))
        verify_code, report = _run(
            capsys, "verify", str(out_dir / "mC6_P6-graph.json"), str(out_dir / "mC6_P6-labeling.json")
        )

        # Assert
        assert construct_code == EXIT_OK
        assert (out_dir / "mC6_P6-report.json").exists()
        assert verify_code == EXIT_OK
        assert report["distinct_weights"] == [22, 23, 24]

    def test_construct_when_dot_requested_then_file_written(self, isolated_env, capsys):
        """DOT rendering carries tags, labels and weights"""
        # Arrange
        dot = isolated_env / "c3.dot"

        # Act
        code, _ = _run(capsys, "construct", "C3", "--dot", str(dot))

        # Assert
        assert code == EXIT_OK
        assert "u_1 f=1 w=5" in dot.read_text()

    def test_extend_when_2C6_2P3_at_v12_then_prediction_included(self, isolated_env, capsys):
        """The tight prediction matches the verified count"""
        # Act
        code, summary = _run(
            capsys, "extend", "mC6_nP3", "--m", "2", "--n", "2", "--vertex", "v_{1,2}", "--s", "2"
        )

        # Assert
        assert code == EXIT_OK
        assert summary["color_count"] == 65
        assert summary["prediction"]["tight"] is True
        assert summary["prediction"]["upper"] == 65

    def test_extend_when_base_takes_s_then_pendant_base_built(self, isolated_env, capsys):
        """mC6_pendants gets its own s, and the second round of pendants lands on u_{1,4}"""
        # Act
        code, summary = _run(
            capsys, "extend", "mC6_pendants", "--m", "1", "--s", "2", "--vertex", "u_{1,4}"
        )

        # Assert
        assert code == EXIT_OK
        assert summary["parameters"]["k"] == 10
        assert summary["color_count"] == 26
        assert summary["conditions"]["rule"] == "none"

    def test_extend_when_base_s_given_then_used_for_the_base(self, isolated_env, capsys):
        """--base-s sizes the base; --s sizes the new blocks"""
        # Act
        code, summary = _run(
            capsys, "extend", "mC6_pendants", "--m", "1", "--base-s", "3", "--s", "1", "--vertex", "u_{1,4}"
        )

        # Assert
        assert code != EXIT_USAGE
        assert summary["name"] == "mC6+pendants+pendants"
        assert summary["parameters"]["s"] == 1

    # EDGE CASE TESTS

    def test_construct_when_known_conflict_then_exit_1(self, isolated_env, capsys):
        """(1, 4, 1) fails verification and says so"""
        # Act
        code, summary = _run(capsys, "construct", "mC6_nP6_aP3", "--m", "1", "--n", "4", "--a", "1")

        # Assert
        assert code == EXIT_FAILED
        assert summary["report"]["valid"] is False
        assert summary["notes"]

    # ERROR HANDLING TESTS

    def test_construct_when_parameter_missing_then_usage_error(self, isolated_env, capsys):
        """mC6 needs --m"""
        code, _ = _run(capsys, "construct", "mC6")
        assert code == EXIT_USAGE

    def test_extend_when_s_missing_then_usage_error(self, isolated_env, capsys):
        """extend needs --s"""
        code, _ = _run(capsys, "extend", "mC6", "--m", "1", "--vertex", "u_{1,1}")
        assert code == EXIT_USAGE

    def test_extend_when_role_unknown_then_usage_error(self, isolated_env, capsys):
        """Role tags must exist in the base graph"""
        code, _ = _run(capsys, "extend", "mC6", "--m", "1", "--vertex", "u_{7,1}", "--s", "2")
        assert code == EXIT_USAGE


class TestVerifyCommand:
    """verify and weights"""

    @pytest.fixture
    def hexagons(self, isolated_env, capsys):
        out_dir = isolated_env / "hex"
        main(["construct", "mC6", "--m", "2", "--out-dir", str(out_dir)])
        capsys.readouterr()
        return out_dir / "mC6-graph.json", out_dir / "mC6-labeling.json"

    # HAPPY PATH TESTS

    def test_weights_when_valid_files_then_profile_printed(self, hexagons, capsys):
        """Weights JSON carries both weight maps and the color count"""
        # Arrange
        graph_path, labeling_path = hexagons

        # Act
        code, profile = _run(capsys, "weights", str(graph_path), str(labeling_path))

        # Assert
        assert code == EXIT_OK
        assert profile["color_count"] == 3
        assert len(profile["vertex_weights"]) == 12

    # EDGE CASE TESTS

    def test_verify_when_two_edge_labels_swapped_then_exit_1(self, hexagons, capsys):
        """Swapping f(e_{1,1}) and f(e_{1,3}) ties u_{1,2} with e_{1,1}"""
        # Arrange
        graph_path, labeling_path = hexagons
        graph = load_graph(graph_path)
        document = json.loads(labeling_path.read_text())
        first = str(graph.element_by_tag("e_{1,1}"))
        third = str(graph.element_by_tag("e_{1,3}"))
        edges = document["edge_labels"]
        edges[first], edges[third] = edges[third], edges[first]
        labeling_path.write_text(json.dumps(document))

        # Act
        code, report = _run(capsys, "verify", str(graph_path), str(labeling_path))

        # Assert
        assert code == EXIT_FAILED
        assert report["valid"] is False
        assert "incident_vertex_edge" in {v["kind"] for v in report["violations"]}

    # ERROR HANDLING TESTS

    def test_weights_when_labels_not_bijective_then_exit_1(self, isolated_env, capsys):
        """A repeated label is a check failure, not a usage error"""
        # Arrange
        graph_path = save_graph(build_cycle(3), isolated_env / "c3.json")
        labeling_path = save_labeling(
            TotalLabeling(vertex_labels={0: 1, 1: 1, 2: 6}, edge_labels={3: 3, 4: 4, 5: 2}),
            isolated_env / "bad.json",
        )

        # Act
        code, _ = _run(capsys, "weights", str(graph_path), str(labeling_path))

        # Assert
        assert code == EXIT_FAILED

    def test_verify_when_graph_file_is_not_json_then_usage_error(self, isolated_env, capsys):
        """Malformed input exits 2"""
        # Arrange
        broken = isolated_env / "broken.json"
        broken.write_text("{not json")

        # Act
        code, _ = _run(capsys, "verify", str(broken), str(broken))

        # Assert
        assert code == EXIT_USAGE

    def test_verify_when_graph_missing_edges_then_usage_error(self, isolated_env, capsys):
        """Schema violations exit 2"""
        # Arrange
        graph_path = isolated_env / "nodes.json"
        graph_path.write_text(json.dumps({"vertices": [0, 1]}))

        # Act
        code, _ = _run(capsys, "verify", str(graph_path), str(graph_path))

        # Assert
        assert code == EXIT_USAGE


class TestGraphCommands:
    """build, classify and bounds"""

    # HAPPY PATH TESTS

    def test_build_when_out_given_then_graph_file_written(self, isolated_env, capsys):
        """build path --n 4 --out writes P4"""
        # Arrange
        out = isolated_env / "p4.json"

        # Act
        code, _ = _run(capsys, "build", "path", "--n", "4", "--out", str(out))

        # Assert
        assert code == EXIT_OK
        assert load_graph(out) == build_path(4)

    def test_build_when_fan_pendant_printed_then_order_57(self, isolated_env, capsys):
        """Graph JSON goes to stdout without --out"""
        code, graph = _run(capsys, "build", "fan_pendant", "--n", "14", "--k", "1")
        assert code == EXIT_OK
        assert len(graph["vertices"]) == 57

    def test_classify_when_C6_plus_P6_then_chi3_true(self, isolated_env, capsys):
        """C6 + P6 is one of the three-color graphs"""
        # Arrange
        graph_path = save_graph(
            disjoint_union([build_cycle(6), build_path(6, "v", "h")]), isolated_env / "c6p6.json"
        )

        # Act
        code, result = _run(capsys, "classify", "chi3", "--graph", str(graph_path))

        # Assert
        assert code == EXIT_OK
        assert result == {"chi3": True}

    def test_classify_when_C6_plus_P3_then_exit_1(self, isolated_env, capsys):
        """C6 + P3 needs four colors"""
        # Arrange
        graph_path = save_graph(
            disjoint_union([build_cycle(6), build_path(3, "v", "h")]), isolated_env / "c6p3.json"
        )

        # Act
        code, result = _run(capsys, "classify", "chi3", "--graph", str(graph_path))

        # Assert
        assert code == EXIT_FAILED
        assert result == {"chi3": False}

    def test_bounds_when_p7_then_exact_four(self, isolated_env, capsys):
        """Lower and upper bound agree for P7"""
        # Arrange
        graph_path = save_graph(build_path(7), isolated_env / "p7.json")

        # Act
        code, report = _run(capsys, "bounds", str(graph_path))

        # Assert
        assert code == EXIT_OK
        assert (report["lower"], report["upper"], report["exact"]) == (4, 4, 4)

    # ERROR HANDLING TESTS

    def test_bounds_when_k2_then_exit_1(self, isolated_env, capsys):
        """Inadmissible graphs are check failures"""
        graph_path = save_graph(build_path(2), isolated_env / "k2.json")
        code, _ = _run(capsys, "bounds", str(graph_path))
        assert code == EXIT_FAILED

    def test_build_when_fan_pendant_without_k_then_usage_error(self, isolated_env, capsys):
        """fan_pendant needs --k"""
        code, _ = _run(capsys, "build", "fan_pendant", "--n", "3")
        assert code == EXIT_USAGE


class TestSolveCommand:
    """solve"""

    # HAPPY PATH TESTS

    def test_solve_when_p3_then_exact_three(self, isolated_env, capsys):
        """chi_lt(P3) = 3"""
        # Arrange
        graph_path = save_graph(build_path(3), isolated_env / "p3.json")

        # Act
        code, result = _run(capsys, "solve", str(graph_path))

        # Assert
        assert code == EXIT_OK
        assert result["status"] == "exact"
        assert result["value"] == 3
        assert result["witness"]["kind"] == "total"

    def test_solve_when_invariant_la_then_edge_only_witness(self, isolated_env, capsys):
        """chi_la(C3) = 3"""
        # Arrange
        graph_path = save_graph(build_cycle(3), isolated_env / "c3.json")

        # Act
        code, result = _run(capsys, "solve", str(graph_path), "--invariant", "la")

        # Assert
        assert code == EXIT_OK
        assert result["value"] == 3
        assert result["witness"]["kind"] == "edge"

    # EDGE CASE TESTS

    def test_solve_when_budget_exhausted_then_exit_3(self, isolated_env, capsys):
        """A one-node budget cannot settle P8"""
        # Arrange
        graph_path = save_graph(build_path(8), isolated_env / "p8.json")

        # Act
        code, result = _run(capsys, "solve", str(graph_path), "--budget-nodes", "1", "--no-bounds")

        # Assert
        assert code == EXIT_INCONCLUSIVE
        assert result["status"] == "inconclusive"

    def test_solve_when_max_colors_too_small_then_exit_1(self, isolated_env, capsys):
        """Stopping below the answer proves only a lower bound"""
        # Arrange
        graph_path = save_graph(build_path(3), isolated_env / "p3.json")

        # Act
        code, result = _run(capsys, "solve", str(graph_path), "--max-colors", "2", "--no-bounds")

        # Assert
        assert code == EXIT_FAILED
        assert result["status"] == "lower_bound_proved"


class TestConfiguration:
    """config command and settings errors"""

    def test_config_when_env_file_sets_threads_then_reported(self, isolated_env, capsys):
        """Project .env values reach the solver settings"""
        # Arrange
        (isolated_env / ".env").write_text("CHI_LT_THREADS=4\n")

        # Act
        code, settings = _run(capsys, "config")

        # Assert
        assert code == EXIT_OK
        assert settings["threads"] == 4

    def test_main_when_setting_invalid_then_usage_error(self, isolated_env, capsys, monkeypatch):
        """A malformed setting stops before any command runs"""
        # Arrange
        monkeypatch.setenv("CHI_LT_THREADS", "many")

        # Act
        code, _ = _run(capsys, "config")

        # Assert
        assert code == EXIT_USAGE

    def test_main_when_no_command_then_usage(self, isolated_env, capsys):
        """Bare invocation prints help"""
        code = main([])
        capsys.readouterr()
        assert code == EXIT_USAGE
