from __future__ import annotations

import pytest

from spmdiag.pipeline import run_analysis
from spmdiag.report import (
    build_report,
    format_attribute_sets,
    render_analysis,
    render_core_report,
)
from spmdiag.roughset import build_matrix, extract_core
from spmdiag.model import ProcessProfile, RegionNode, RegionTree, TraceSet

import reference
import test_ccr

GEO_REPORT = """\
Performance similarity
there are 5 kinds of processes
kind 0: 0
kind 1: 1 2
kind 2: 3
kind 3: 4 6
kind 4: 5 7
dissimilarity severity: 1.145574
CCCR: region 11
CCR tree:
region 14 (1-CCR) ---> region 11 (2-CCR & CCCR)
core attributes: {instruction_count}
"""

BALANCED_REPORT = """\
Performance similarity
there are 1 kinds of processes
kind 0: 0 1 2 3 4 5 6 7
dissimilarity severity: 0.000000
no external performance problem
"""

TABLE1_CORE_REPORT = """\
discernibility matrix:
   0      1         2
1  0
2  a1     a1,a4
3  a2,a3  a2,a3,a4  0
core: {a1, a2} or {a1, a3}
singleton core: {a1}
"""


def test_geo_report_text(geo_trace):
    assert render_analysis(run_analysis(geo_trace)) == GEO_REPORT


def test_balanced_report_text(balanced_trace):
    assert render_analysis(run_analysis(balanced_trace)) == BALANCED_REPORT


def test_report_is_deterministic(geo_trace):
    assert render_analysis(run_analysis(geo_trace)) == render_analysis(run_analysis(geo_trace))


def test_core_report_text(table1):
    matrix = build_matrix(table1)
    assert render_core_report(matrix, extract_core(matrix)) == TABLE1_CORE_REPORT


def test_core_report_flags_inconsistent_pairs():
    from spmdiag.roughset import DecisionTable

    table = DecisionTable(
        attributes=("a1",),
        entities=("0", "1"),
        rows=(("x",), ("x",)),
        decisions=("yes", "no"),
    )
    matrix = build_matrix(table)
    text = render_core_report(matrix, extract_core(matrix))
    assert "warning: inconsistent entry pair(s): (0,1)" in text
    assert "core: {}" in text


def test_format_attribute_sets():
    assert format_attribute_sets((frozenset({"b", "a"}),)) == "{a, b}"
    assert format_attribute_sets((frozenset({"x"}), frozenset({"y", "z"}))) == "{x} or {y, z}"
    assert format_attribute_sets((frozenset(),)) == "{}"


def test_combined_window_report_without_accessory_metrics():
    trace = reference.flat_trace(test_ccr.COMBINED_MATRIX)
    report = render_analysis(run_analysis(trace))
    assert "CCCR: region 2" in report
    assert "regions 1+2 (1-CCR)" in report
    assert "regions 2+3 (1-CCR)" in report
    assert "warning: no accessory metrics at the CCCR; decision table skipped" in report
    assert "core attributes" not in report


def test_disjoint_window_report_names_every_group():
    trace = reference.flat_trace(test_ccr.DISJOINT_MATRIX)
    report = render_analysis(run_analysis(trace))
    assert "CCCR:" not in report
    assert "regions 1+2 (1-CCR)" in report
    assert "regions 3+4 (1-CCR)" in report
    assert "warning: combined level-1 groups are disjoint; no single CCCR" in report


def test_internally_cancelling_imbalance_warns_about_missing_ccrs():
    # the two children are imbalanced in opposite directions, so the
    # top-level view is perfectly balanced and the search finds nothing
    tree = RegionTree(
        [
            RegionNode(1, "phase", None, 1),
            RegionNode(2, "left", 1, 2),
            RegionNode(3, "right", 1, 2),
        ]
    )
    own = {1: [1.0, 1.0], 2: [0.0, 9.0], 3: [9.0, 0.0]}
    profiles = tuple(
        ProcessProfile(
            rank=r,
            samples={
                (1, "cpu_time"): own[1][r] + own[2][r] + own[3][r],
                (2, "cpu_time"): own[2][r],
                (3, "cpu_time"): own[3][r],
            },
        )
        for r in range(2)
    )
    trace = TraceSet(tree=tree, profiles=profiles)
    result = run_analysis(trace)
    assert result.kinds.class_count == 2
    assert not result.ccr.problem
    report = build_report(result)
    assert report.problem
    assert "warning: no critical code regions located" in report.render()
    assert "no external performance problem" not in report.render()


def test_kind_lines_list_members_in_rank_order(geo_trace):
    report = build_report(run_analysis(geo_trace))
    assert report.kind_lines == (
        "kind 0: 0",
        "kind 1: 1 2",
        "kind 2: 3",
        "kind 3: 4 6",
        "kind 4: 5 7",
    )
