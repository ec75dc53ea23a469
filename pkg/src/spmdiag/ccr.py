"""Critical code region search over masked performance vectors.

The search locates which code regions are responsible for processes falling
into different behavior classes. It works on a baseline where only top-level
regions are visible (every deeper region masked to 0), then:

1. masks each active top-level region alone; a changed partition marks the
   region as a level-1 CCR;
2. if no single region changes the partition, masks contiguous windows of
   n siblings, growing n until some window is productive; the windows'
   intersection (when nonempty) is the combined critical region and the
   search stops there;
3. for each level-1 CCR, walks down the region tree. A child is the next
   CCR on the chain when hiding the whole chain but exposing that child
   reproduces the baseline partition exactly, i.e. the child alone accounts
   for the classes. A chain node with no such child is the innermost
   critical region (CCCR).

Partitions compare as canonical sets of sets, so label numbering never
matters. All re-clusterings inside one search use the same parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .clustering import OpticsParams, Partition, cluster
from .model import PerformanceVector, RegionTree, TraceSet, build_vectors


@dataclass(frozen=True)
class CcrNode:
    """One critical region (or combined sibling window) in the CCR chain tree.

    ``level`` counts from 1 at the top; ``ancestors`` is the region chain
    from the level-1 CCR down to this node's parent. ``partition`` is the
    partition observed in the test that qualified this node: the changed
    partition for level 1, the reproduced baseline for deeper levels.
    """

    regions: tuple[int, ...]
    level: int
    ancestors: tuple[int, ...]
    partition: Partition
    is_cccr: bool
    children: tuple["CcrNode", ...] = ()


@dataclass(frozen=True)
class CcrTree:
    """Outcome of the full search.

    ``problem`` is False when the baseline already has a single class, in
    which case everything else is empty. ``cccr`` lists the innermost
    critical region(s); it is empty when combined windows were disjoint
    (``disjoint`` is then set and every window is still reported).
    """

    baseline_partition: Partition
    roots: tuple[CcrNode, ...]
    problem: bool
    combined: bool
    cccr: tuple[int, ...]
    disjoint: bool

    def chains(self) -> list[list[CcrNode]]:
        """Every root-to-leaf chain, for rendering."""
        out: list[list[CcrNode]] = []

        def walk(node: CcrNode, prefix: list[CcrNode]) -> None:
            path = prefix + [node]
            if not node.children:
                out.append(path)
                return
            for child in node.children:
                walk(child, path)

        for root in self.roots:
            walk(root, [])
        return out


def _deep_regions(tree: RegionTree) -> frozenset[int]:
    return frozenset(r for r in tree.preorder() if tree.depth(r) > 1)


def _partition_under(vectors: list[PerformanceVector], mask: frozenset[int], params: OpticsParams) -> Partition:
    return cluster([v.with_mask(mask).readings() for v in vectors], params)


def _is_active(vectors: list[PerformanceVector], region: int) -> bool:
    """A region takes part in the search only if some process spent time in it."""
    for vector in vectors:
        for region_id, value in vector.components:
            if region_id == region and value > 0.0:
                return True
    return False


def baseline_partition(trace: TraceSet, params: OpticsParams) -> Partition:
    """Partition of the processes with only top-level regions visible."""
    vectors = build_vectors(trace)
    return _partition_under(vectors, _deep_regions(trace.tree), params)


def find_level1_ccrs(trace: TraceSet, params: OpticsParams) -> list[CcrNode]:
    """Top-level regions whose masking changes the baseline partition."""
    vectors = build_vectors(trace)
    deep = _deep_regions(trace.tree)
    baseline = _partition_under(vectors, deep, params)
    found: list[CcrNode] = []
    for region in trace.tree.roots():
        if not _is_active(vectors, region):
            continue
        changed = _partition_under(vectors, deep | {region}, params)
        if changed != baseline:
            found.append(
                CcrNode(regions=(region,), level=1, ancestors=(), partition=changed, is_cccr=False)
            )
    return found


def combine_and_search(trace: TraceSet, params: OpticsParams) -> tuple[list[CcrNode], tuple[int, ...]]:
    """Contiguous sibling windows whose joint masking changes the partition.

    Window width n grows from 2; the first width with any productive window
    wins and all productive windows of that width become combined level-1
    groups. The second return value is their intersection, the combined
    critical region; it is empty when the groups are disjoint. Masking every
    top-level region collapses all vectors, so some width always produces.
    """
    vectors = build_vectors(trace)
    deep = _deep_regions(trace.tree)
    baseline = _partition_under(vectors, deep, params)
    roots = trace.tree.roots()
    for width in range(2, len(roots) + 1):
        productive: list[tuple[tuple[int, ...], Partition]] = []
        for start in range(0, len(roots) - width + 1):
            window = roots[start : start + width]
            changed = _partition_under(vectors, deep | set(window), params)
            if changed != baseline:
                productive.append((window, changed))
        if not productive:
            continue
        shared = frozenset(productive[0][0])
        for window, _ in productive[1:]:
            shared &= frozenset(window)
        cccr = tuple(sorted(shared))
        groups = [
            CcrNode(
                regions=window,
                level=1,
                ancestors=(),
                partition=changed,
                is_cccr=bool(shared) and frozenset(window) == shared,
            )
            for window, changed in productive
        ]
        return groups, cccr
    return [], ()


def descend(trace: TraceSet, params: OpticsParams, node: CcrNode) -> list[CcrNode]:
    """Next-level CCRs below a single-region chain node.

    Each active child is tested with the chain hidden and the child exposed:
    every region deeper than the top level is masked except the child itself,
    and the chain's own regions are masked too. Reproducing the baseline
    partition exactly means the child carries the dissimilarity, so the chain
    continues through it.
    """
    vectors = build_vectors(trace)
    deep = _deep_regions(trace.tree)
    baseline = _partition_under(vectors, deep, params)
    chain = node.ancestors + node.regions
    found: list[CcrNode] = []
    for region in node.regions:
        for child in trace.tree.children(region):
            if not _is_active(vectors, child):
                continue
            mask = (deep | set(chain)) - {child}
            part = _partition_under(vectors, frozenset(mask), params)
            if part == baseline:
                found.append(
                    CcrNode(
                        regions=(child,),
                        level=node.level + 1,
                        ancestors=chain,
                        partition=part,
                        is_cccr=False,
                    )
                )
    return found


def find_cccr(trace: TraceSet, params: OpticsParams) -> CcrTree:
    """Run the whole search; see the module docstring for the step order."""
    baseline = baseline_partition(trace, params)
    if baseline.class_count <= 1:
        return CcrTree(
            baseline_partition=baseline,
            roots=(),
            problem=False,
            combined=False,
            cccr=(),
            disjoint=False,
        )

    def expand(node: CcrNode) -> CcrNode:
        children = tuple(expand(child) for child in descend(trace, params, node))
        return replace(node, children=children, is_cccr=not children)

    level1 = find_level1_ccrs(trace, params)
    if level1:
        roots = tuple(expand(node) for node in level1)
        cccr: list[int] = []

        def collect(node: CcrNode) -> None:
            if node.is_cccr:
                cccr.extend(node.regions)
            for child in node.children:
                collect(child)

        for root in roots:
            collect(root)
        return CcrTree(
            baseline_partition=baseline,
            roots=roots,
            problem=True,
            combined=False,
            cccr=tuple(cccr),
            disjoint=False,
        )

    groups, shared = combine_and_search(trace, params)
    return CcrTree(
        baseline_partition=baseline,
        roots=tuple(groups),
        problem=True,
        combined=True,
        cccr=shared,
        disjoint=bool(groups) and not shared,
    )
