"""Rough set attribute reduction over small decision tables.

A decision table maps entities (here: process ranks) to discrete condition
attribute values plus one decision value. The discernibility matrix compares
every entity pair: pairs with equal decisions are ZERO cells, pairs that
disagree on the decision but on no condition attribute are INCONSISTENT, and
every other pair yields the set of attributes telling the two apart.

Reduction turns the matrix into a monotone CNF (one clause per informative
cell), expands it to DNF with absorption, and keeps the minimal conjuncts:
the reducts. Among the smallest reducts, the ones whose attributes appear in
the most cells win; all co-optimal winners are reported. Tables up to 16
condition attributes can also be reduced by exhaustive subset enumeration,
which exists as an independent check.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import ParseError, ValidationError

ZERO = None


class _Inconsistent:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INCONSISTENT"


INCONSISTENT = _Inconsistent()

Cell = frozenset | None | _Inconsistent


@dataclass(frozen=True)
class DecisionTable:
    """Entities with discrete condition attribute values and one decision value.

    The text form is tab-delimited: a header of the attribute names plus the
    literal column ``decision``, then one row of values per entity. Entity
    ids are the row positions, so they never appear in the file.
    """

    attributes: tuple[str, ...]
    entities: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    decisions: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.attributes:
            raise ValidationError("decision table needs at least one condition attribute")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValidationError("attribute names must be unique")
        if len(self.entities) != len(set(self.entities)):
            raise ValidationError("entity ids must be unique")
        if len(self.rows) != len(self.entities) or len(self.decisions) != len(self.entities):
            raise ValidationError("rows and decisions must align with entities")
        for entity, row in zip(self.entities, self.rows):
            if len(row) != len(self.attributes):
                raise ValidationError(f"entity {entity!r} has {len(row)} values for {len(self.attributes)} attributes")

    def __len__(self) -> int:
        return len(self.entities)

    def value(self, entity_index: int, attribute: str) -> str:
        return self.rows[entity_index][self.attributes.index(attribute)]

    def to_tsv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, delimiter="\t", lineterminator="\n")
        writer.writerow(self.attributes + ("decision",))
        for row, decision in zip(self.rows, self.decisions):
            writer.writerow(row + (decision,))
        return out.getvalue()

    @classmethod
    def from_tsv(cls, text: str) -> "DecisionTable":
        lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        if len(lines) < 2:
            raise ParseError("decision table needs a header and at least one row")
        reader = csv.reader(io.StringIO("\n".join(lines)), delimiter="\t")
        header = [cell.strip() for cell in next(reader)]
        if len(header) < 2 or header[-1] != "decision":
            raise ParseError("header must list the condition attributes and end with 'decision'")
        attributes = tuple(header[:-1])
        rows: list[tuple[str, ...]] = []
        decisions: list[str] = []
        for raw in reader:
            row = [cell.strip() for cell in raw]
            if len(row) != len(header):
                raise ParseError(f"row has {len(row)} fields, expected {len(header)}: {raw!r}")
            rows.append(tuple(row[:-1]))
            decisions.append(row[-1])
        entities = tuple(str(i) for i in range(len(rows)))
        return cls(attributes, entities, tuple(rows), tuple(decisions))


@dataclass(frozen=True)
class DiscernibilityMatrix:
    """Upper-triangle cells for every entity pair, indexed cell(i, j) with i != j."""

    attributes: tuple[str, ...]
    entities: tuple[str, ...]
    cells: tuple[tuple[object, ...], ...]

    def cell(self, i: int, j: int) -> object:
        if i == j:
            raise ValidationError("no cell for an entity against itself")
        if i > j:
            i, j = j, i
        return self.cells[i][j - i - 1]

    def attribute_cells(self) -> list[frozenset[str]]:
        return [c for row in self.cells for c in row if isinstance(c, frozenset)]

    def inconsistent_pairs(self) -> list[tuple[str, str]]:
        pairs = []
        for i, row in enumerate(self.cells):
            for offset, cell in enumerate(row):
                if cell is INCONSISTENT:
                    pairs.append((self.entities[i], self.entities[i + 1 + offset]))
        return pairs

    def render(self) -> str:
        """Triangular text layout: row j against every earlier column i."""
        if len(self.entities) < 2:
            return "(empty matrix)\n"

        def show(cell: object) -> str:
            if cell is ZERO:
                return "0"
            if cell is INCONSISTENT:
                return "-1"
            order = {a: k for k, a in enumerate(self.attributes)}
            return ",".join(sorted(cell, key=order.__getitem__))

        names = self.entities
        widths = [len(str(name)) for name in names[:-1]]
        grid: list[list[str]] = []
        for j in range(1, len(names)):
            row = [show(self.cell(i, j)) for i in range(j)]
            grid.append(row)
            for i, text in enumerate(row):
                widths[i] = max(widths[i], len(text))
        head_width = max(len(str(n)) for n in names)
        lines = [
            " " * head_width
            + "  "
            + "  ".join(str(names[i]).ljust(widths[i]) for i in range(len(names) - 1))
        ]
        for j, row in enumerate(grid, start=1):
            cells = "  ".join(text.ljust(widths[i]) for i, text in enumerate(row))
            lines.append(f"{str(names[j]).ljust(head_width)}  {cells}".rstrip())
        return "\n".join(lines) + "\n"


def build_matrix(table: DecisionTable) -> DiscernibilityMatrix:
    n = len(table)
    cells: list[tuple[object, ...]] = []
    for i in range(n):
        row: list[object] = []
        for j in range(i + 1, n):
            if table.decisions[i] == table.decisions[j]:
                row.append(ZERO)
                continue
            differing = frozenset(
                attr
                for attr, left, right in zip(table.attributes, table.rows[i], table.rows[j])
                if left != right
            )
            row.append(differing if differing else INCONSISTENT)
        cells.append(tuple(row))
    return DiscernibilityMatrix(table.attributes, table.entities, tuple(cells))


@dataclass(frozen=True)
class CoreResult:
    """Reduction outcome.

    ``singleton_core`` holds the attributes forced by singleton cells;
    ``cnf`` is the clause set actually expanded; ``reducts`` the minimal
    attribute sets separating all decisions; ``cores`` the selected reducts
    (smallest, then most frequent across cells, all ties kept).
    ``frequency`` gives per-attribute cell counts so the selection can be
    audited.
    """

    cores: tuple[frozenset[str], ...]
    singleton_core: frozenset[str]
    cnf: tuple[frozenset[str], ...]
    reducts: tuple[frozenset[str], ...]
    frequency: tuple[tuple[str, int], ...]
    inconsistent_pairs: tuple[tuple[str, str], ...]


def _sorted_sets(sets: Sequence[frozenset[str]]) -> tuple[frozenset[str], ...]:
    return tuple(sorted(sets, key=lambda s: (len(s), tuple(sorted(s)))))


def _minimal(sets: set[frozenset[str]]) -> set[frozenset[str]]:
    return {s for s in sets if not any(other < s for other in sets)}


def extract_core(matrix: DiscernibilityMatrix) -> CoreResult:
    """Reduce the matrix to its co-optimal attribute sets.

    Singleton cells name indispensable attributes; cells touching one of
    those are already satisfied and drop out. What remains is expanded
    CNF to DNF with absorption after every clause.
    """
    attr_cells = matrix.attribute_cells()
    singleton_core = frozenset(a for cell in attr_cells if len(cell) == 1 for a in cell)
    clauses = {frozenset((a,)) for a in singleton_core}
    clauses |= {cell for cell in attr_cells if not (cell & singleton_core)}
    cnf = _sorted_sets(tuple(clauses))

    implicants: set[frozenset[str]] = {frozenset()}
    for clause in cnf:
        implicants = _minimal({imp | {a} for imp in implicants for a in clause})
    reducts = _sorted_sets(tuple(implicants))

    frequency = {a: sum(1 for cell in attr_cells if a in cell) for a in matrix.attributes}
    smallest = min(len(r) for r in reducts)
    candidates = [r for r in reducts if len(r) == smallest]
    best = max(sum(frequency[a] for a in r) for r in candidates)
    cores = tuple(r for r in candidates if sum(frequency[a] for a in r) == best)

    return CoreResult(
        cores=cores,
        singleton_core=singleton_core,
        cnf=cnf,
        reducts=reducts,
        frequency=tuple((a, frequency[a]) for a in matrix.attributes),
        inconsistent_pairs=tuple(matrix.inconsistent_pairs()),
    )


def brute_force_reducts(table: DecisionTable) -> tuple[frozenset[str], ...]:
    """All minimal attribute subsets hitting every informative cell.

    Exhaustive over the power set, so limited to small attribute counts;
    meant as an independent check of :func:`extract_core`.
    """
    if len(table.attributes) > 16:
        raise ValidationError("brute force reduction is limited to 16 attributes")
    cells = set(build_matrix(table).attribute_cells())
    found: list[frozenset[str]] = []
    for size in range(0, len(table.attributes) + 1):
        for combo in combinations(table.attributes, size):
            subset = frozenset(combo)
            if any(known <= subset for known in found):
                continue
            if all(cell & subset for cell in cells):
                found.append(subset)
    return _sorted_sets(found)
