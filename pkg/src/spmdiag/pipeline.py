"""End-to-end analysis driver shared by the CLI and the HTTP service.

One call runs the whole diagnosis: cluster the full performance vectors into
process kinds, compute the dissimilarity severity, search for critical code
regions, and when an innermost critical region exists, build the decision
table over its accessory metrics and reduce it to core attributes.

The result serializes to a JSON-friendly dict and back without loss, so a
saved machine-readable result reconstructs the partition, severity, CCR
chains, and cores exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

from .ccr import CcrNode, CcrTree, find_cccr
from .clustering import (
    DEFAULT_THRESHOLD,
    OpticsParams,
    Partition,
    ReachabilityResult,
    Threshold,
    extract_partition,
    optics_order,
)
from .decision import default_attribute_specs, build_decision_table
from .errors import ParseError
from .ingest import TIME_SEMANTICS
from .model import TraceSet, build_vectors
from .roughset import CoreResult, DecisionTable, build_matrix, extract_core
from .similarity import SeverityReport, severity

_UNSET = object()


@dataclass(frozen=True)
class AnalysisConfig:
    """Clustering parameters plus the ingestion time-semantics override."""

    min_pts: int = 2
    eps: float | None = None
    extraction_threshold: Threshold = DEFAULT_THRESHOLD
    time_semantics: str | None = None

    def __post_init__(self) -> None:
        if self.time_semantics is not None and self.time_semantics not in TIME_SEMANTICS:
            raise ParseError(f"time semantics must be one of {TIME_SEMANTICS}, got {self.time_semantics!r}")
        self.to_params()

    def to_params(self) -> OpticsParams:
        return OpticsParams(
            min_pts=self.min_pts,
            eps=self.eps,
            extraction_threshold=self.extraction_threshold,
        )

    def override(self, min_pts=_UNSET, eps=_UNSET, extraction_threshold=_UNSET, time_semantics=_UNSET) -> "AnalysisConfig":
        """Copy with the given fields replaced; unset arguments keep their value."""
        updates = {}
        if min_pts is not _UNSET:
            updates["min_pts"] = min_pts
        if eps is not _UNSET:
            updates["eps"] = eps
        if extraction_threshold is not _UNSET:
            updates["extraction_threshold"] = extraction_threshold
        if time_semantics is not _UNSET:
            updates["time_semantics"] = time_semantics
        return replace(self, **updates) if updates else self

    def to_dict(self) -> dict:
        return {
            "min_pts": self.min_pts,
            "eps": self.eps,
            "extraction_threshold": str(self.extraction_threshold),
            "time_semantics": self.time_semantics,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "AnalysisConfig":
        known = {"min_pts", "eps", "extraction_threshold", "time_semantics"}
        unknown = set(doc) - known
        if unknown:
            raise ParseError(f"unknown config key(s): {sorted(unknown)}")
        out = cls()
        if "min_pts" in doc:
            out = out.override(min_pts=int(doc["min_pts"]))
        if "eps" in doc:
            eps = doc["eps"]
            if isinstance(eps, str):
                eps = None if eps.strip().lower() in ("unbounded", "none", "") else float(eps)
            out = out.override(eps=eps)
        if "extraction_threshold" in doc:
            out = out.override(extraction_threshold=Threshold.parse(doc["extraction_threshold"]))
        if "time_semantics" in doc:
            out = out.override(time_semantics=doc["time_semantics"] or None)
        return out

    @classmethod
    def from_key_values(cls, text: str) -> "AnalysisConfig":
        """Parse a ``key = value`` config file (# comments and blank lines ignored)."""
        doc: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, sep, value = stripped.partition("=")
            if not sep:
                raise ParseError(f"config line {lineno} is not 'key = value': {line!r}")
            doc[key.strip()] = value.strip()
        return cls.from_dict(doc)


@dataclass(frozen=True)
class AnalysisResult:
    """Everything the report and the structured output need."""

    run_label: str
    config: AnalysisConfig
    kinds: Partition
    ordering: ReachabilityResult
    severity: SeverityReport
    ccr: CcrTree
    table: DecisionTable | None
    cores: CoreResult | None

    def to_dict(self) -> dict:
        return {
            "run_label": self.run_label,
            "config": self.config.to_dict(),
            "kinds": _partition_to_dict(self.kinds),
            "ordering": {
                "order": list(self.ordering.order),
                "reachability": [None if math.isinf(r) else r for r in self.ordering.reachability],
                "core_distance": [None if math.isinf(c) else c for c in self.ordering.core_distance],
            },
            "severity": {
                "value": self.severity.severity,
                "max_pair": list(self.severity.max_pair),
                "min_len_rank": self.severity.min_len_rank,
            },
            "ccr": {
                "problem": self.ccr.problem,
                "combined": self.ccr.combined,
                "disjoint": self.ccr.disjoint,
                "cccr": list(self.ccr.cccr),
                "baseline": _partition_to_dict(self.ccr.baseline_partition),
                "roots": [_node_to_dict(node) for node in self.ccr.roots],
            },
            "decision_table": None
            if self.table is None
            else {
                "attributes": list(self.table.attributes),
                "entities": list(self.table.entities),
                "rows": [list(row) for row in self.table.rows],
                "decisions": list(self.table.decisions),
            },
            "cores": None
            if self.cores is None
            else {
                "cores": [sorted(c) for c in self.cores.cores],
                "singleton_core": sorted(self.cores.singleton_core),
                "cnf": [sorted(c) for c in self.cores.cnf],
                "reducts": [sorted(r) for r in self.cores.reducts],
                "frequency": [[attr, count] for attr, count in self.cores.frequency],
                "inconsistent_pairs": [list(pair) for pair in self.cores.inconsistent_pairs],
            },
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "AnalysisResult":
        try:
            ordering = ReachabilityResult(
                order=tuple(doc["ordering"]["order"]),
                reachability=tuple(math.inf if r is None else r for r in doc["ordering"]["reachability"]),
                core_distance=tuple(math.inf if c is None else c for c in doc["ordering"]["core_distance"]),
            )
            sev = doc["severity"]
            ccr_doc = doc["ccr"]
            ccr = CcrTree(
                baseline_partition=_partition_from_dict(ccr_doc["baseline"]),
                roots=tuple(_node_from_dict(n) for n in ccr_doc["roots"]),
                problem=ccr_doc["problem"],
                combined=ccr_doc["combined"],
                cccr=tuple(ccr_doc["cccr"]),
                disjoint=ccr_doc["disjoint"],
            )
            table_doc = doc["decision_table"]
            table = (
                None
                if table_doc is None
                else DecisionTable(
                    attributes=tuple(table_doc["attributes"]),
                    entities=tuple(table_doc["entities"]),
                    rows=tuple(tuple(row) for row in table_doc["rows"]),
                    decisions=tuple(table_doc["decisions"]),
                )
            )
            cores_doc = doc["cores"]
            cores = (
                None
                if cores_doc is None
                else CoreResult(
                    cores=tuple(frozenset(c) for c in cores_doc["cores"]),
                    singleton_core=frozenset(cores_doc["singleton_core"]),
                    cnf=tuple(frozenset(c) for c in cores_doc["cnf"]),
                    reducts=tuple(frozenset(r) for r in cores_doc["reducts"]),
                    frequency=tuple((attr, count) for attr, count in cores_doc["frequency"]),
                    inconsistent_pairs=tuple(tuple(pair) for pair in cores_doc["inconsistent_pairs"]),
                )
            )
            return cls(
                run_label=doc["run_label"],
                config=AnalysisConfig.from_dict(doc["config"]),
                kinds=_partition_from_dict(doc["kinds"]),
                ordering=ordering,
                severity=SeverityReport(
                    severity=sev["value"],
                    max_pair=tuple(sev["max_pair"]),
                    min_len_rank=sev["min_len_rank"],
                ),
                ccr=ccr,
                table=table,
                cores=cores,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed analysis result document: {exc}") from exc


def _partition_to_dict(partition: Partition) -> dict:
    return {
        "classes": [sorted(c) for c in partition.classes],
        "noise": sorted(partition.noise),
    }


def _partition_from_dict(doc: Mapping) -> Partition:
    return Partition.from_groups(doc["classes"], doc["noise"])


def _node_to_dict(node: CcrNode) -> dict:
    return {
        "regions": list(node.regions),
        "level": node.level,
        "ancestors": list(node.ancestors),
        "partition": _partition_to_dict(node.partition),
        "is_cccr": node.is_cccr,
        "children": [_node_to_dict(child) for child in node.children],
    }


def _node_from_dict(doc: Mapping) -> CcrNode:
    return CcrNode(
        regions=tuple(doc["regions"]),
        level=doc["level"],
        ancestors=tuple(doc["ancestors"]),
        partition=_partition_from_dict(doc["partition"]),
        is_cccr=doc["is_cccr"],
        children=tuple(_node_from_dict(child) for child in doc["children"]),
    )


def run_analysis(trace: TraceSet, config: AnalysisConfig | None = None) -> AnalysisResult:
    """Cluster, measure severity, search critical regions, reduce attributes."""
    config = config or AnalysisConfig()
    params = config.to_params()
    vectors = build_vectors(trace)
    ordering = optics_order([v.readings() for v in vectors], params)
    kinds = extract_partition(ordering, params)
    report = severity(vectors)
    ccr = find_cccr(trace, params)
    table = None
    cores = None
    if ccr.cccr:
        specs = default_attribute_specs(trace, ccr.cccr, params)
        if specs:
            table = build_decision_table(trace, ccr.cccr, kinds, specs)
            cores = extract_core(build_matrix(table))
    return AnalysisResult(
        run_label=trace.run_label,
        config=config,
        kinds=kinds,
        ordering=ordering,
        severity=report,
        ccr=ccr,
        table=table,
        cores=cores,
    )
