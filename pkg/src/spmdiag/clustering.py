"""OPTICS density clustering and threshold-based partition extraction.

The clustering operates on plain real vectors (performance vectors, or 1-D
attribute values during decision-table construction). Points are identified
by their index in the input list; for process vectors that index is the rank.

Conventions, fixed so results are reproducible:

* the neighborhood of a point includes the point itself, so with
  ``min_pts = 2`` the core distance is the distance to the nearest other
  point;
* expansion starts from the lowest unprocessed index, and ties in the seed
  queue are broken toward the lower index;
* a relative extraction threshold is resolved against the maximum finite
  reachability of the ordering being cut.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

UNBOUNDED = None


@dataclass(frozen=True)
class Threshold:
    """Reachability cut for partition extraction.

    ``relative`` thresholds are a fraction of the maximum finite reachability
    in the ordering; ``absolute`` thresholds are used as-is.
    """

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in ("relative", "absolute"):
            raise ValidationError(f"threshold kind must be relative or absolute, got {self.kind!r}")
        if not (self.value > 0.0):
            raise ValidationError(f"threshold value must be > 0, got {self.value!r}")

    def resolve(self, max_finite_reachability: float) -> float:
        if self.kind == "absolute":
            return self.value
        return self.value * max_finite_reachability

    @classmethod
    def parse(cls, text: str | float) -> "Threshold":
        """Parse ``rel:0.25``, ``abs:1.5``, or a bare number (taken as relative)."""
        if isinstance(text, (int, float)):
            return cls("relative", float(text))
        raw = text.strip()
        if raw.startswith("rel:"):
            return cls("relative", float(raw[4:]))
        if raw.startswith("abs:"):
            return cls("absolute", float(raw[4:]))
        return cls("relative", float(raw))

    def __str__(self) -> str:
        return f"{'rel' if self.kind == 'relative' else 'abs'}:{self.value:g}"


DEFAULT_THRESHOLD = Threshold("relative", 0.25)


@dataclass(frozen=True)
class OpticsParams:
    """Parameters for ordering and extraction. Defaults suit small SPMD rank counts."""

    min_pts: int = 2
    eps: float | None = UNBOUNDED
    extraction_threshold: Threshold = DEFAULT_THRESHOLD

    def __post_init__(self) -> None:
        if self.min_pts < 2:
            raise ValidationError(f"min_pts must be >= 2, got {self.min_pts}")
        if self.eps is not None and not (self.eps > 0.0):
            raise ValidationError(f"eps must be > 0 or unbounded, got {self.eps!r}")


@dataclass(frozen=True)
class ReachabilityResult:
    """OPTICS output: an ordering of point indices with reachability per position.

    ``reachability[i]`` belongs to ``order[i]``; the first position of every
    expansion sweep is infinite. ``core_distance`` is indexed by point index,
    not by position.
    """

    order: tuple[int, ...]
    reachability: tuple[float, ...]
    core_distance: tuple[float, ...]

    def max_finite_reachability(self) -> float:
        finite = [r for r in self.reachability if math.isfinite(r)]
        return max(finite) if finite else 0.0

    def to_delimited(self) -> str:
        """Reachability plot as tab-delimited text (position, point, reachability)."""
        lines = ["position\tpoint\treachability"]
        for pos, (idx, reach) in enumerate(zip(self.order, self.reachability)):
            lines.append(f"{pos}\t{idx}\t{'inf' if math.isinf(reach) else repr(reach)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Partition:
    """A disjoint grouping of point indices (ranks) into classes.

    Classes are canonical: sorted by their minimum member, so two partitions
    are equal as values exactly when they are equal as sets of sets. Noise
    points (not density-reachable at the cut) form singleton classes and are
    listed in ``noise``.
    """

    classes: tuple[frozenset[int], ...]
    labels: tuple[int, ...] = field(compare=False)
    noise: frozenset[int] = field(compare=False)

    @classmethod
    def from_groups(cls, groups: Sequence[Sequence[int]], noise: Sequence[int] = ()) -> "Partition":
        sets = [frozenset(g) for g in groups]
        if any(not g for g in sets):
            raise ValidationError("partition classes must be nonempty")
        canonical = tuple(sorted(sets, key=min))
        size = sum(len(g) for g in canonical)
        covered: set[int] = set()
        for group in canonical:
            covered |= group
        if len(covered) != size or covered != set(range(size)):
            raise ValidationError("partition classes must be disjoint and cover 0..n-1")
        labels = [0] * size
        for index, group in enumerate(canonical):
            for member in group:
                labels[member] = index
        return cls(classes=canonical, labels=tuple(labels), noise=frozenset(noise))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def label_of(self, rank: int) -> int:
        return self.labels[rank]


def optics_order(points: Sequence[Sequence[float]], params: OpticsParams) -> ReachabilityResult:
    """Standard OPTICS ordering over ``points``.

    Expansion repeatedly pops the seed with the smallest reachability
    (ties toward the lower index). The core distance of a point is the
    distance to its min_pts-th nearest neighbor within eps, counting the
    point itself; infinity when the eps-neighborhood is too small.
    """
    if len(points) == 0:
        raise ValidationError("cannot cluster an empty point set")
    data = np.asarray(points, dtype=float)
    if data.ndim == 1:
        data = data[:, np.newaxis]
    if data.ndim != 2:
        raise ValidationError("points must be a list of equal-length real vectors")
    n = data.shape[0]
    diff = data[:, np.newaxis, :] - data[np.newaxis, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))

    eps = math.inf if params.eps is None else params.eps
    core = np.full(n, math.inf)
    for p in range(n):
        neighbors = np.sort(dist[p][dist[p] <= eps])
        if len(neighbors) >= params.min_pts:
            core[p] = neighbors[params.min_pts - 1]

    processed = [False] * n
    reach = [math.inf] * n
    order: list[int] = []
    ordered_reach: list[float] = []

    def expand_from(p: int, seeds: list[tuple[float, int]]) -> None:
        if not math.isfinite(core[p]):
            return
        for o in range(n):
            if processed[o] or dist[p][o] > eps:
                continue
            new_reach = max(core[p], dist[p][o])
            if new_reach < reach[o]:
                reach[o] = new_reach
                heapq.heappush(seeds, (new_reach, o))

    for start in range(n):
        if processed[start]:
            continue
        processed[start] = True
        order.append(start)
        ordered_reach.append(math.inf)
        seeds: list[tuple[float, int]] = []
        expand_from(start, seeds)
        while seeds:
            popped_reach, q = heapq.heappop(seeds)
            if processed[q] or popped_reach != reach[q]:
                continue  # stale entry from a later improvement
            processed[q] = True
            order.append(q)
            ordered_reach.append(reach[q])
            expand_from(q, seeds)

    return ReachabilityResult(
        order=tuple(order),
        reachability=tuple(float(r) for r in ordered_reach),
        core_distance=tuple(core.tolist()),
    )


def extract_partition(result: ReachabilityResult, params: OpticsParams) -> Partition:
    """Cut the reachability plot at the extraction threshold.

    Maximal runs of consecutive ordered points whose reachability is at or
    below the cut form one class together with the point that opened the run;
    points joined to no run become singleton classes flagged as noise.
    """
    cut = params.extraction_threshold.resolve(result.max_finite_reachability())
    groups: list[list[int]] = []
    current: list[int] = []
    for idx, reach in zip(result.order, result.reachability):
        if current and reach <= cut:
            current.append(idx)
        else:
            if current:
                groups.append(current)
            current = [idx]
    if current:
        groups.append(current)
    noise = [g[0] for g in groups if len(g) == 1]
    return Partition.from_groups(groups, noise)


def cluster(points: Sequence[Sequence[float]], params: OpticsParams) -> Partition:
    """Order then extract: the full clustering pipeline over raw points."""
    return extract_partition(optics_order(points, params), params)
