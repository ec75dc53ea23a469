"""Decision table construction from accessory metrics at the critical region.

Each process rank becomes one table entry. Condition attributes are the
accessory metrics sampled inside the innermost critical region(s): the raw
per-rank values of one metric are clustered in one dimension and the rank's
canonical class index becomes its discrete attribute value. The decision
value is the rank's class in the process partition, so the table relates
resource behavior inside the critical region to the observed process kinds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .clustering import OpticsParams, Partition, cluster
from .errors import ValidationError
from .model import CPU_TIME, TraceSet, accessory_metric_order
from .roughset import DecisionTable


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute column: a metric at a critical region, with its 1-D clustering params."""

    metric: str
    region: int
    params: OpticsParams = OpticsParams()


def attribute_name(spec: AttributeSpec, single_region: bool) -> str:
    return spec.metric if single_region else f"{spec.metric}@{spec.region}"


def default_attribute_specs(
    trace: TraceSet,
    cccr_regions: Sequence[int],
    params: OpticsParams = OpticsParams(),
) -> list[AttributeSpec]:
    """Every non-time metric sampled for all ranks at each critical region."""
    specs: list[AttributeSpec] = []
    for region in cccr_regions:
        metrics = {
            metric
            for profile in trace.profiles
            for (region_id, metric) in profile.samples
            if region_id == region and metric != CPU_TIME
        }
        covered = [
            metric
            for metric in sorted(metrics, key=accessory_metric_order)
            if all(profile.has(region, metric) for profile in trace.profiles)
        ]
        specs.extend(AttributeSpec(metric=metric, region=region, params=params) for metric in covered)
    return specs


def build_decision_table(
    trace: TraceSet,
    cccr_regions: Sequence[int],
    process_partition: Partition,
    specs: Sequence[AttributeSpec],
) -> DecisionTable:
    """Assemble the table; see the module docstring for the value semantics.

    Attribute class labels share the partition canonicalization (classes
    numbered by ascending minimum rank), so rebuilding the table from the
    same trace is deterministic.
    """
    ranks = trace.ranks
    if len(process_partition) != len(ranks):
        raise ValidationError(
            f"partition covers {len(process_partition)} ranks, trace has {len(ranks)}"
        )
    if not specs:
        raise ValidationError("no attribute specs: nothing to put in the decision table")
    single = len(set(cccr_regions)) == 1
    columns: list[tuple[str, ...]] = []
    names: list[str] = []
    for spec in specs:
        values = [[trace.profile(rank).value(spec.region, spec.metric)] for rank in ranks]
        part = cluster(values, spec.params)
        columns.append(tuple(str(part.label_of(rank)) for rank in ranks))
        names.append(attribute_name(spec, single))
    rows = tuple(tuple(column[i] for column in columns) for i in range(len(ranks)))
    decisions = tuple(str(process_partition.label_of(rank)) for rank in ranks)
    return DecisionTable(
        attributes=tuple(names),
        entities=tuple(str(rank) for rank in ranks),
        rows=rows,
        decisions=decisions,
    )
