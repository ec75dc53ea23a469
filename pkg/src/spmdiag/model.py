"""Core domain model: region trees, per-process metric samples, performance vectors.

Everything here is immutable after construction and safe to share between
threads. Construction validates the structural invariants; downstream modules
assume they hold.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import ValidationError

# Well-known metric kinds. ``cpu_time`` is mandatory for every (rank, region)
# pair; the rest are accessory metrics used for micro-level cause analysis.
CPU_TIME = "cpu_time"
L1_MISS_RATE = "l1_miss_rate"
L2_MISS_RATE = "l2_miss_rate"
DISK_IO_QUANTITY = "disk_io_quantity"
NETWORK_IO_QUANTITY = "network_io_quantity"
INSTRUCTION_COUNT = "instruction_count"

#: Accessory metrics in canonical presentation order. Custom metric names are
#: allowed anywhere a metric kind is accepted and sort after these.
STANDARD_ACCESSORY_METRICS = (
    L1_MISS_RATE,
    L2_MISS_RATE,
    DISK_IO_QUANTITY,
    NETWORK_IO_QUANTITY,
    INSTRUCTION_COUNT,
)

METRIC_UNITS = {
    CPU_TIME: "seconds",
    L1_MISS_RATE: "fraction",
    L2_MISS_RATE: "fraction",
    DISK_IO_QUANTITY: "bytes",
    NETWORK_IO_QUANTITY: "bytes",
    INSTRUCTION_COUNT: "count",
}

_METRIC_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")


def validate_metric_kind(name: str) -> str:
    """Check that ``name`` is a usable metric kind and return it.

    Metric kinds are lowercase identifiers; anything matching the pattern is
    accepted so traces can carry custom metrics next to the well-known ones.
    """
    if not isinstance(name, str) or not _METRIC_NAME_RE.match(name):
        raise ValidationError(f"invalid metric kind {name!r}")
    return name


def accessory_metric_order(name: str) -> tuple[int, str]:
    """Sort key putting standard accessory metrics first, customs after."""
    try:
        return (STANDARD_ACCESSORY_METRICS.index(name), name)
    except ValueError:
        return (len(STANDARD_ACCESSORY_METRICS), name)


@dataclass(frozen=True)
class RegionNode:
    """One instrumented code region. ``parent`` is None for top-level regions."""

    id: int
    label: str
    parent: int | None
    depth: int


class RegionTree:
    """The nested hierarchy of instrumented code regions of one program.

    Region declaration order is significant: siblings keep it, and it fixes
    the global depth-first pre-order used to align vector dimensions across
    processes.
    """

    def __init__(self, regions: list[RegionNode] | tuple[RegionNode, ...]):
        regions = tuple(regions)
        by_id: dict[int, RegionNode] = {}
        for node in regions:
            if not isinstance(node.id, int) or node.id < 1:
                raise ValidationError(f"region id must be an integer >= 1, got {node.id!r}")
            if node.id in by_id:
                raise ValidationError(f"duplicate region id {node.id}")
            by_id[node.id] = node
        children: dict[int | None, list[int]] = {None: []}
        for node in regions:
            children.setdefault(node.id, [])
        for node in regions:
            if node.parent is None:
                if node.depth != 1:
                    raise ValidationError(
                        f"region {node.id} has no parent but depth {node.depth}, expected 1"
                    )
            else:
                parent = by_id.get(node.parent)
                if parent is None:
                    raise ValidationError(
                        f"region {node.id} references unknown parent {node.parent}"
                    )
                if node.depth != parent.depth + 1:
                    raise ValidationError(
                        f"region {node.id} has depth {node.depth}, expected "
                        f"{parent.depth + 1} (child of region {parent.id})"
                    )
            children[node.parent].append(node.id)
        self._regions = regions
        self._by_id = by_id
        self._children = children
        self._preorder = tuple(self._walk(children[None]))

    def _walk(self, ids: list[int]) -> list[int]:
        out: list[int] = []
        for rid in ids:
            out.append(rid)
            out.extend(self._walk(self._children[rid]))
        return out

    @property
    def regions(self) -> tuple[RegionNode, ...]:
        return self._regions

    def __len__(self) -> int:
        return len(self._regions)

    def __contains__(self, region_id: int) -> bool:
        return region_id in self._by_id

    def node(self, region_id: int) -> RegionNode:
        try:
            return self._by_id[region_id]
        except KeyError:
            raise ValidationError(f"unknown region id {region_id}") from None

    def depth(self, region_id: int) -> int:
        return self.node(region_id).depth

    def roots(self) -> tuple[int, ...]:
        """Top-level region ids in declaration order."""
        return tuple(self._children[None])

    def children(self, region_id: int) -> tuple[int, ...]:
        """Direct children of a region in declaration order."""
        self.node(region_id)
        return tuple(self._children[region_id])

    def preorder(self) -> tuple[int, ...]:
        """All region ids in depth-first pre-order (the global vector order)."""
        return self._preorder

    def subtree(self, region_id: int) -> tuple[int, ...]:
        """Region plus all its descendants, in pre-order."""
        self.node(region_id)
        return tuple(self._walk([region_id]))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RegionTree) and self._regions == other._regions

    def __repr__(self) -> str:
        return f"RegionTree({len(self._regions)} regions)"


def _check_value(value: float, context: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValidationError(f"{context}: metric values must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class ProcessProfile:
    """Metric samples of one process, keyed by (region id, metric kind)."""

    rank: int
    samples: dict[tuple[int, str], float]

    def __post_init__(self) -> None:
        if not isinstance(self.rank, int) or self.rank < 0:
            raise ValidationError(f"rank must be an integer >= 0, got {self.rank!r}")
        cleaned: dict[tuple[int, str], float] = {}
        for (region_id, metric), value in self.samples.items():
            validate_metric_kind(metric)
            cleaned[(int(region_id), metric)] = _check_value(
                value, f"rank {self.rank}, region {region_id}, metric {metric}"
            )
        object.__setattr__(self, "samples", cleaned)

    def value(self, region_id: int, metric: str) -> float:
        try:
            return self.samples[(region_id, metric)]
        except KeyError:
            raise ValidationError(
                f"rank {self.rank} has no sample for metric {metric} in region {region_id}"
            ) from None

    def has(self, region_id: int, metric: str) -> bool:
        return (region_id, metric) in self.samples


@dataclass(frozen=True)
class TraceSet:
    """One program run: the region tree plus one profile per process rank.

    Profiles are stored sorted by rank. Ranks must be contiguous from 0 and
    every profile must carry a cpu_time sample for every region of the tree;
    cpu_time values are always inclusive of nested regions.
    """

    tree: RegionTree
    profiles: tuple[ProcessProfile, ...]
    run_label: str = ""
    timestamp: str | None = None

    def __post_init__(self) -> None:
        profiles = tuple(sorted(self.profiles, key=lambda p: p.rank))
        ranks = [p.rank for p in profiles]
        seen: set[int] = set()
        for rank in ranks:
            if rank in seen:
                raise ValidationError(f"duplicate rank {rank}")
            seen.add(rank)
        if ranks != list(range(len(ranks))):
            raise ValidationError(
                f"ranks must be contiguous from 0, got {sorted(seen)}"
            )
        for profile in profiles:
            for (region_id, _metric) in profile.samples:
                if region_id not in self.tree:
                    raise ValidationError(
                        f"rank {profile.rank} has samples for unknown region {region_id}"
                    )
            for region_id in self.tree.preorder():
                if not profile.has(region_id, CPU_TIME):
                    raise ValidationError(
                        f"rank {profile.rank} is missing cpu_time for region {region_id}"
                    )
        object.__setattr__(self, "profiles", profiles)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(p.rank for p in self.profiles)

    def profile(self, rank: int) -> ProcessProfile:
        if 0 <= rank < len(self.profiles):
            return self.profiles[rank]
        raise ValidationError(f"unknown rank {rank}")


@dataclass(frozen=True)
class PerformanceVector:
    """Per-process CPU times, one component per region in the global order.

    Masked components read as exactly 0 in every distance or length
    computation; the underlying values are retained so masks can be layered
    and inspected.
    """

    rank: int
    components: tuple[tuple[int, float], ...]
    mask: frozenset[int] = field(default_factory=frozenset)

    @property
    def region_order(self) -> tuple[int, ...]:
        return tuple(region_id for region_id, _ in self.components)

    def readings(self) -> tuple[float, ...]:
        """Component values with masked regions forced to 0."""
        return tuple(
            0.0 if region_id in self.mask else value
            for region_id, value in self.components
        )

    def length(self) -> float:
        """Euclidean norm of the masked readings."""
        return math.hypot(*self.readings()) if self.components else 0.0

    def with_mask(self, regions: set[int] | frozenset[int]) -> "PerformanceVector":
        """Copy of this vector with ``regions`` added to the mask."""
        known = set(self.region_order)
        unknown = set(regions) - known
        if unknown:
            raise ValidationError(
                f"cannot mask unknown region(s) {sorted(unknown)} in vector for rank {self.rank}"
            )
        return PerformanceVector(self.rank, self.components, self.mask | frozenset(regions))


def build_vectors(trace: TraceSet) -> list[PerformanceVector]:
    """One performance vector per rank, ordered by rank, no masks applied.

    Component t is the (inclusive) cpu_time of region t, in the tree's
    depth-first pre-order so dimensions align across all processes.
    """
    order = trace.tree.preorder()
    vectors = []
    for profile in trace.profiles:
        components = tuple(
            (region_id, profile.value(region_id, CPU_TIME)) for region_id in order
        )
        vectors.append(PerformanceVector(profile.rank, components))
    return vectors


def mask_vector(vector: PerformanceVector, regions: set[int] | frozenset[int]) -> PerformanceVector:
    """Return a copy of ``vector`` with ``regions`` masked to 0 (union with existing mask)."""
    return vector.with_mask(regions)
