from __future__ import annotations

import random

import pytest

from spmdiag.errors import ParseError, ValidationError
from spmdiag.roughset import (
    INCONSISTENT,
    ZERO,
    CoreResult,
    DecisionTable,
    DiscernibilityMatrix,
    brute_force_reducts,
    build_matrix,
    extract_core,
)

import reference

WEATHER_MATRIX = """\
   0      1         2
1  0
2  a1     a1,a4
3  a2,a3  a2,a3,a4  0
"""


def test_weather_matrix_cells(table1):
    matrix = build_matrix(table1)
    assert matrix.cell(0, 1) is ZERO
    assert matrix.cell(0, 2) == frozenset({"a1"})
    assert matrix.cell(0, 3) == frozenset({"a2", "a3"})
    assert matrix.cell(1, 2) == frozenset({"a1", "a4"})
    assert matrix.cell(1, 3) == frozenset({"a2", "a3", "a4"})
    assert matrix.cell(2, 3) is ZERO
    # symmetric lookup, no diagonal
    assert matrix.cell(2, 0) == frozenset({"a1"})
    with pytest.raises(ValidationError):
        matrix.cell(1, 1)


def test_weather_matrix_render(table1):
    assert build_matrix(table1).render() == WEATHER_MATRIX


def test_weather_core_extraction(table1):
    cores = extract_core(build_matrix(table1))
    assert cores.cores == (frozenset({"a1", "a2"}), frozenset({"a1", "a3"}))
    assert cores.singleton_core == frozenset({"a1"})
    assert cores.cnf == (
        frozenset({"a1"}),
        frozenset({"a2", "a3"}),
        frozenset({"a2", "a3", "a4"}),
    )
    assert cores.reducts == (frozenset({"a1", "a2"}), frozenset({"a1", "a3"}))
    assert cores.frequency == (("a1", 2), ("a2", 2), ("a3", 2), ("a4", 2))
    assert cores.inconsistent_pairs == ()


def test_metric_table_core_is_the_decision_like_column(table2):
    cores = extract_core(build_matrix(table2))
    assert cores.cores == (frozenset({"a5"}),)
    assert cores.singleton_core == frozenset({"a5"})
    assert cores.reducts == (frozenset({"a5"}),)


def test_brute_force_agrees_on_the_fixture_tables(table1, table2):
    assert brute_force_reducts(table1) == (
        frozenset({"a1", "a2"}),
        frozenset({"a1", "a3"}),
    )
    assert brute_force_reducts(table2) == (frozenset({"a5"}),)


def test_brute_force_rejects_wide_tables():
    attrs = tuple(f"a{i}" for i in range(17))
    table = DecisionTable(
        attributes=attrs,
        entities=("0", "1"),
        rows=(tuple("0" for _ in attrs), tuple("1" for _ in attrs)),
        decisions=("0", "1"),
    )
    with pytest.raises(ValidationError, match="16 attributes"):
        brute_force_reducts(table)


def test_inconsistent_pair_is_marked():
    table = DecisionTable(
        attributes=("a1",),
        entities=("0", "1"),
        rows=(("x",), ("x",)),
        decisions=("yes", "no"),
    )
    matrix = build_matrix(table)
    assert matrix.cell(0, 1) is INCONSISTENT
    assert matrix.inconsistent_pairs() == [("0", "1")]
    assert "-1" in matrix.render()
    cores = extract_core(matrix)
    # nothing separates the pair, so the reduction is empty
    assert cores.cores == (frozenset(),)
    assert cores.inconsistent_pairs == (("0", "1"),)


def test_uniform_decisions_reduce_to_nothing():
    table = DecisionTable(
        attributes=("a1", "a2"),
        entities=("0", "1"),
        rows=(("0", "1"), ("1", "0")),
        decisions=("same", "same"),
    )
    cores = extract_core(build_matrix(table))
    assert cores.cores == (frozenset(),)
    assert cores.reducts == (frozenset(),)
    assert cores.cnf == ()


def test_single_entity_matrix_is_empty():
    table = DecisionTable(attributes=("a1",), entities=("0",), rows=(("1",),), decisions=("0",))
    matrix = build_matrix(table)
    assert matrix.cells == ((),)
    assert matrix.render() == "(empty matrix)\n"
    assert extract_core(matrix).cores == (frozenset(),)


def test_render_orders_attributes_by_table_order():
    table = DecisionTable(
        attributes=("b", "a"),
        entities=("0", "1"),
        rows=(("0", "0"), ("1", "1")),
        decisions=("0", "1"),
    )
    render = build_matrix(table).render()
    assert "b,a" in render  # table order, not alphabetical


def test_tsv_round_trip(table2):
    text = table2.to_tsv()
    again = DecisionTable.from_tsv(text)
    assert again == table2
    assert text.splitlines()[0] == "a1\ta2\ta3\ta4\ta5\tdecision"


def test_tsv_entities_are_row_positions():
    table = DecisionTable(
        attributes=("a1",),
        entities=("east", "west"),
        rows=(("0",), ("1",)),
        decisions=("0", "1"),
    )
    again = DecisionTable.from_tsv(table.to_tsv())
    assert again.entities == ("0", "1")
    assert again.rows == table.rows and again.decisions == table.decisions


def test_tsv_skips_comments_and_blanks(table1):
    text = "# weather observations\n\n" + table1.to_tsv() + "\n"
    assert DecisionTable.from_tsv(text) == table1


def test_tsv_parse_errors():
    with pytest.raises(ParseError, match="header and at least one row"):
        DecisionTable.from_tsv("a1\tdecision\n")
    with pytest.raises(ParseError, match="end with 'decision'"):
        DecisionTable.from_tsv("a1\toutcome\n0\t1\n")
    with pytest.raises(ParseError, match="fields"):
        DecisionTable.from_tsv("a1\tdecision\n0\n")


def test_table_validation():
    with pytest.raises(ValidationError, match="at least one condition attribute"):
        DecisionTable(attributes=(), entities=("0",), rows=((),), decisions=("0",))
    with pytest.raises(ValidationError, match="unique"):
        DecisionTable(attributes=("a", "a"), entities=("0",), rows=(("0", "0"),), decisions=("0",))
    with pytest.raises(ValidationError, match="align"):
        DecisionTable(attributes=("a",), entities=("0",), rows=(), decisions=("0",))
    with pytest.raises(ValidationError, match="has 1 values for 2"):
        DecisionTable(attributes=("a", "b"), entities=("0",), rows=(("0",),), decisions=("0",))


def test_core_selection_prefers_frequent_attributes():
    # reducts are {b} and {a,c}; only the smallest survives the selection
    table = DecisionTable(
        attributes=("a", "b", "c"),
        entities=("0", "1", "2", "3"),
        rows=(
            ("0", "0", "0"),
            ("1", "1", "0"),
            ("0", "0", "0"),
            ("0", "1", "1"),
        ),
        decisions=("n", "y", "n", "y"),
    )
    matrix = build_matrix(table)
    result = extract_core(matrix)
    freq = dict(result.frequency)
    assert freq["b"] > freq["a"]
    assert result.cores == (frozenset({"b"}),)
    assert frozenset({"b"}) in result.reducts


def test_random_tables_match_exhaustive_search():
    rng = random.Random(77)
    for _ in range(120):
        table = reference.random_table(rng)
        result = extract_core(build_matrix(table))
        assert result.reducts == brute_force_reducts(table)
        cells = reference.discerning_cells(table)
        minima = reference.brute_min_hitting_sets(cells, table.attributes)
        smallest = min(len(m) for m in minima)
        assert all(len(core) == smallest for core in result.cores)
        assert all(core in minima for core in result.cores)


def test_entity_order_does_not_change_the_reduction():
    rng = random.Random(13)
    table = reference.random_table(rng)
    while len(table) < 3:
        table = reference.random_table(rng)
    perm = list(range(len(table)))
    rng.shuffle(perm)
    shuffled = DecisionTable(
        attributes=table.attributes,
        entities=tuple(str(i) for i in range(len(table))),
        rows=tuple(table.rows[i] for i in perm),
        decisions=tuple(table.decisions[i] for i in perm),
    )
    assert extract_core(build_matrix(shuffled)).cores == extract_core(build_matrix(table)).cores
