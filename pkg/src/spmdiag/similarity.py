"""Distance and dissimilarity-severity metrics over performance vectors.

Severity is the maximum pairwise Euclidean distance divided by the minimum
vector norm. All pairs are compared exhaustively, which is O(p^2 * n) in the
process count p and region count n; fine for the target scale of at most a
few thousand processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateVectorError, ValidationError
from .model import PerformanceVector


@dataclass(frozen=True)
class SeverityReport:
    """Program-level dissimilarity severity and the extremes that produced it."""

    severity: float
    max_pair: tuple[int, int]
    min_len_rank: int


def distance(a: PerformanceVector, b: PerformanceVector) -> float:
    """Euclidean distance between the masked readings of two vectors."""
    if a.region_order != b.region_order:
        raise ValidationError(
            f"vectors for ranks {a.rank} and {b.rank} have different dimensions or region order"
        )
    return math.dist(a.readings(), b.readings())


def severity(vectors: list[PerformanceVector]) -> SeverityReport:
    """Dissimilarity severity: max pairwise distance over min vector length.

    Raises DegenerateVectorError if any vector has zero length under its
    current mask; the ratio is undefined there and a process with zero CPU
    time everywhere indicates a broken trace.
    """
    if len(vectors) < 2:
        raise ValidationError(f"severity needs at least 2 vectors, got {len(vectors)}")
    min_len = math.inf
    min_len_rank = vectors[0].rank
    for v in vectors:
        length = v.length()
        if length == 0.0:
            raise DegenerateVectorError(
                f"vector for rank {v.rank} has zero length; severity is undefined"
            )
        if length < min_len:
            min_len = length
            min_len_rank = v.rank
    max_dist = -1.0
    max_pair = (vectors[0].rank, vectors[1].rank)
    for i, a in enumerate(vectors):
        for b in vectors[i + 1:]:
            d = distance(a, b)
            if d > max_dist:
                max_dist = d
                max_pair = (a.rank, b.rank)
    return SeverityReport(severity=max_dist / min_len, max_pair=max_pair, min_len_rank=min_len_rank)
