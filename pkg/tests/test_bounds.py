"""
Test suite for chi_lt lower bounds, the three-color characterization and
the table of settled families.
"""

import pytest
from hypothesis import assume, given, settings, strategies as st
from pydantic import ValidationError

from src.bounds import (
    BoundReport,
    bound_report,
    classify_chi3,
    known_values,
    lower_bound,
    thm_D_lower,
)
from src.constructions import case_upper_bound, label_mC6_nP3, label_mC6_nP6_aP3
from src.exceptions import InadmissibleGraphError
from src.graph_core import (
    Graph,
    build_cycle,
    build_fan,
    build_fan_pendant,
    build_path,
    disjoint_union,
)


def _union(*parts):
    return disjoint_union(list(parts))


class TestLowerBound:
    """Degree, pendant and small-component bounds"""

    # HAPPY PATH TESTS

    def test_lower_bound_when_2C6_then_three(self):
        """Only Δ+1 applies to two hexagons"""
        # Act
        report = lower_bound(_union(build_cycle(6), build_cycle(6)))

        # Assert
        assert report.lower == 3
        assert [j.rule for j in report.justifications] == ["max-degree-plus-one"]

    def test_lower_bound_when_2C6_2P3_then_pendants_give_five(self):
        """Four pendant vertices force five colors"""
        # Arrange
        graph = label_mC6_nP3(2, 2).graph

        # Act
        report = lower_bound(graph)

        # Assert
        assert report.lower == 5
        assert any(j.rule == "pendants-plus-one" and j.bound == 5 for j in report.justifications)

    def test_lower_bound_when_C4_plus_C6_then_four(self):
        """A cycle other than C6 forces four"""
        # Act
        report = lower_bound(_union(build_cycle(4), build_cycle(6)))

        # Assert
        assert report.lower == 4
        rules = {j.rule for j in report.justifications}
        assert {"cycle-component-four", "three-color-characterization"} <= rules

    @pytest.mark.parametrize("n", [4, 5, 7, 8, 10])
    def test_lower_bound_when_path_needs_four_then_rule_applies(self, n):
        """P4, odd paths from P5 and even paths from P8 need four colors"""
        # Act
        report = lower_bound(build_path(n))

        # Assert
        assert report.lower == 4
        assert any(j.rule == "path-component-four" for j in report.justifications)

    def test_lower_bound_when_fan_pendant_then_hub_bound(self):
        """f_14(1) satisfies the unique-hub inequality"""
        # Act
        report = lower_bound(build_fan_pendant(14, 1))

        # Assert
        assert report.lower == 30
        assert report.justifications[-1].rule == "unique-hub-pendant-bound"

    # EDGE CASE TESTS

    def test_lower_bound_when_p3_then_three(self):
        """P3: Δ+1 = 3 and pendants+1 = 3"""
        assert lower_bound(build_path(3)).lower == 3

    def test_lower_bound_when_p3_then_three_color_rule_skipped(self):
        """A lone P3 is three-colorable although classify_chi3 rejects it"""
        # Act
        report = lower_bound(build_path(3))

        # Assert
        assert "three-color-characterization" not in {j.rule for j in report.justifications}
        assert not classify_chi3(build_path(3))

    def test_lower_bound_when_two_p3_then_three_color_rule_applies(self):
        """Only the single P3 is exempt"""
        report = lower_bound(disjoint_union([build_path(3)] * 2))
        assert "three-color-characterization" in {j.rule for j in report.justifications}

    # ERROR HANDLING TESTS

    def test_lower_bound_when_k2_component_then_inadmissible(self):
        """K2 admits no labeling at all"""
        with pytest.raises(InadmissibleGraphError):
            lower_bound(_union(build_cycle(6), build_path(2)))

    def test_lower_bound_when_isolated_vertex_then_inadmissible(self):
        """Isolated vertices admit no labeling"""
        graph = Graph(vertices=(0, 1, 2, 3), edges=((4, 0, 1), (5, 1, 2)))
        with pytest.raises(InadmissibleGraphError):
            lower_bound(graph)


class TestChi3:
    """The graphs with chi_lt = 3"""

    @pytest.mark.parametrize(
        "parts,expected",
        [
            ([build_cycle(6)] * 3, True),
            ([build_path(6)], True),
            ([build_cycle(6), build_cycle(6), build_path(6, "v", "h")], True),
            ([build_cycle(6), build_path(3, "v", "h")], False),
            ([build_path(6), build_path(6)], False),
            ([build_cycle(6), build_path(6, "v", "h"), build_path(6, "v", "h")], False),
            ([build_cycle(5)], False),
        ],
    )
    def test_classify_chi3_when_union_given_then_only_hexagons_and_one_p6(self, parts, expected):
        """mC6 (m >= 1) and mC6 + P6 (m >= 0) only"""
        assert classify_chi3(disjoint_union(parts)) is expected


class TestUniqueHubBound:
    """k+2 lower bound for a unique hub with many pendants"""

    # HAPPY PATH TESTS

    def test_thm_D_lower_when_f14_1_then_30(self):
        """2nk + 2 = 30"""
        assert thm_D_lower(build_fan_pendant(14, 1)) == 30

    # EDGE CASE TESTS

    def test_thm_D_lower_when_f13_1_then_inequality_fails(self):
        """Δ(Δ+1) = 702 is not strictly above 702"""
        assert thm_D_lower(build_fan_pendant(13, 1)) is None

    def test_thm_D_lower_when_f2_1_then_none(self):
        """The small fan fails the inequality"""
        assert thm_D_lower(build_fan_pendant(2, 1)) is None

    def test_thm_D_lower_when_no_pendants_then_none(self):
        """A bare fan has no pendant edges"""
        assert thm_D_lower(build_fan(5)) is None

    def test_thm_D_lower_when_2C6_then_none(self):
        """Δ = 2 is below 3"""
        assert thm_D_lower(_union(build_cycle(6), build_cycle(6))) is None

    # PROPERTY-BASED TESTS

    @given(st.integers(min_value=2, max_value=30), st.integers(min_value=1, max_value=5))
    @settings(max_examples=60, deadline=None)
    def test_thm_D_lower_when_fan_pendant_then_matches_closed_inequality(self, n, k):
        """Applies exactly when 2n(2n+1) - 2n(k+2)(4k+5) + (k+2)(k-1) > 0"""
        assume(k <= 2 * n - 3)
        bound = thm_D_lower(build_fan_pendant(n, k))
        applies = 2 * n * (2 * n + 1) - 2 * n * (k + 2) * (4 * k + 5) + (k + 2) * (k - 1) > 0
        assert (bound is not None) == applies
        if applies:
            assert bound == 2 * n * k + 2


class TestKnownValues:
    """Settled families and intervals"""

    # HAPPY PATH TESTS

    @pytest.mark.parametrize("n,expected", [(3, 3), (4, 4), (6, 3), (7, 4), (9, 4)])
    def test_known_values_when_single_path_then_exact(self, n, expected):
        """P3 and P6 take three colors; P4 and odd paths take four"""
        assert known_values(build_path(n)).exact == expected

    def test_known_values_when_even_path_from_8_then_interval_4_5(self):
        """Even paths from P8 on are bracketed"""
        # Act
        known = known_values(build_path(10))

        # Assert
        assert (known.lower, known.upper, known.exact) == (4, 5, None)

    @pytest.mark.parametrize(
        "parts,expected",
        [
            ([build_cycle(4)] * 3, 4),
            ([build_cycle(6)] * 2, 3),
            ([build_cycle(3)], 4),
            ([build_cycle(5)], 4),
            ([build_path(3)] * 4, 9),
            ([build_path(6)] * 3, 7),
        ],
    )
    def test_known_values_when_single_family_then_exact(self, parts, expected):
        """mC4, mC6, C3, C5, nP3 and mP6"""
        assert known_values(disjoint_union(parts)).exact == expected

    def test_known_values_when_2C6_2P3_then_five(self):
        """2n+1 for n >= 2"""
        assert known_values(label_mC6_nP3(2, 2).graph).exact == 5

    def test_known_values_when_single_p3_with_hexagons_then_four(self):
        """One P3 next to hexagons needs four colors"""
        assert known_values(label_mC6_nP3(3, 1).graph).exact == 4

    def test_known_values_when_p6_and_p3_mix_then_2m_plus_2n_plus_1(self):
        """mP6 + nP3 for n >= 2"""
        graph = disjoint_union([build_path(6)] * 2 + [build_path(3, "v", "h")] * 2)
        assert known_values(graph).exact == 9

    def test_known_values_when_mixed_family_a_at_least_2n_then_exact(self):
        """(1, 1, 3) is settled at 9"""
        assert known_values(label_mC6_nP6_aP3(1, 1, 3).graph).exact == 9

    def test_known_values_when_mixed_family_in_middle_range_then_case_interval(self):
        """(1, 3, 2) is bracketed by 2n+2a+1 and the case bound"""
        # Act
        known = known_values(label_mC6_nP6_aP3(1, 3, 2).graph)

        # Assert
        assert (known.lower, known.upper) == (11, case_upper_bound(3, 2))

    # EDGE CASE TESTS

    def test_known_values_when_mixed_family_n_at_least_2a_then_none(self):
        """The generated labeling for n >= 2a is flawed, so nothing is claimed"""
        assert known_values(label_mC6_nP6_aP3(1, 4, 1).graph) is None

    def test_known_values_when_mixed_family_a_is_1_then_lower_only(self):
        """The case bounds start at a = 2, so (1, 1, 1) is only bounded below"""
        # Act
        known = known_values(label_mC6_nP6_aP3(1, 1, 1).graph)

        # Assert
        assert (known.lower, known.upper, known.exact) == (5, None, None)

    def test_known_values_when_c8_then_interval(self):
        """C8 is bracketed by 4 and 5"""
        known = known_values(build_cycle(8))
        assert (known.lower, known.upper) == (4, 5)

    def test_known_values_when_other_component_then_none(self):
        """Fans are outside the table"""
        assert known_values(build_fan_pendant(3, 1)) is None


class TestBoundReport:
    """Merged lower bound and known value"""

    # HAPPY PATH TESTS

    def test_bound_report_when_p7_then_exact_four(self):
        """Lower and upper agree"""
        # Act
        report = bound_report(build_path(7))

        # Assert
        assert (report.lower, report.upper, report.exact) == (4, 4, 4)
        assert report.to_dict()["exact"] == 4
        assert any(j.side == "upper" for j in report.justifications)

    def test_bound_report_when_nP3_then_known_value_raises_lower(self):
        """3P3 needs 7 colors, above the pendant bound"""
        # Act
        report = bound_report(disjoint_union([build_path(3)] * 3))

        # Assert
        assert report.lower == 7
        assert report.exact == 7

    def test_bound_report_when_p3_then_exact_three(self):
        """Lower and upper agree at three for a lone P3"""
        # Act
        report = bound_report(build_path(3))

        # Assert
        assert (report.lower, report.upper, report.exact) == (3, 3, 3)

    def test_bound_report_when_fan_then_no_upper(self):
        """Unknown families only report a lower bound"""
        # Act
        report = bound_report(build_fan_pendant(14, 1))

        # Assert
        assert report.upper is None
        assert report.exact is None

    # ERROR HANDLING TESTS

    def test_bound_report_when_lower_above_upper_then_validation_error(self):
        """Reports are internally consistent"""
        with pytest.raises(ValidationError):
            BoundReport(lower=5, upper=4)

    # PROPERTY-BASED TESTS

    @given(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=5))
    @settings(max_examples=15, deadline=None)
    def test_lower_bound_when_settled_family_then_never_above_known_value(self, m, n):
        """The counting bounds never contradict the table"""
        graph = label_mC6_nP3(m, n).graph
        assert lower_bound(graph).lower <= known_values(graph).lower
