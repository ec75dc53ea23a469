from __future__ import annotations

import random

import pytest

from spmdiag.clustering import OpticsParams
from spmdiag.ccr import (
    baseline_partition,
    combine_and_search,
    descend,
    find_cccr,
    find_level1_ccrs,
)

import reference

PARAMS = OpticsParams()

# no single masking changes the 3-class baseline, but windows (1,2) and
# (2,3) both do; their intersection names region 2
COMBINED_MATRIX = [[0.0, 0.0, 6.0], [6.0, 3.0, 6.0], [6.0, 9.0, 0.0], [6.0, 9.0, 0.0]]

# productive windows (1,2) and (3,4) share no region
DISJOINT_MATRIX = [
    [0.0, 1.0, 9.0, 4.0],
    [6.0, 9.0, 3.0, 0.0],
    [1.0, 0.0, 1.0, 9.0],
    [6.0, 2.0, 2.0, 3.0],
    [4.0, 0.0, 4.0, 1.0],
]


def test_baseline_masks_nested_regions(geo_trace):
    part = baseline_partition(geo_trace, PARAMS)
    assert part.classes == (
        frozenset({0}),
        frozenset({1, 2}),
        frozenset({3}),
        frozenset({4, 6}),
        frozenset({5, 7}),
    )


def test_balanced_trace_has_single_baseline_class(balanced_trace):
    assert baseline_partition(balanced_trace, PARAMS).class_count == 1


def test_level1_search_singles_out_the_heavy_phase(geo_trace):
    nodes = find_level1_ccrs(geo_trace, PARAMS)
    assert [n.regions for n in nodes] == [(14,)]
    assert nodes[0].level == 1
    assert nodes[0].ancestors == ()
    assert not nodes[0].is_cccr


def test_descend_follows_the_imbalanced_child(geo_trace):
    level1 = find_level1_ccrs(geo_trace, PARAMS)[0]
    below = descend(geo_trace, PARAMS, level1)
    assert [n.regions for n in below] == [(11,)]
    assert below[0].ancestors == (14,)
    assert below[0].level == 2
    assert below[0].partition == baseline_partition(geo_trace, PARAMS)
    # region 11 has no children, so the chain ends there
    assert descend(geo_trace, PARAMS, below[0]) == []


def test_find_cccr_full_chain(geo_trace):
    tree = find_cccr(geo_trace, PARAMS)
    assert tree.problem and not tree.combined and not tree.disjoint
    assert tree.cccr == (11,)
    chains = tree.chains()
    assert len(chains) == 1
    assert [node.regions for node in chains[0]] == [(14,), (11,)]
    assert not chains[0][0].is_cccr
    assert chains[0][1].is_cccr


def test_find_cccr_balanced_is_empty(balanced_trace):
    tree = find_cccr(balanced_trace, PARAMS)
    assert not tree.problem
    assert tree.roots == ()
    assert tree.cccr == ()
    assert tree.baseline_partition.class_count == 1


def test_combined_windows_intersect_to_one_region():
    trace = reference.flat_trace(COMBINED_MATRIX)
    assert find_level1_ccrs(trace, PARAMS) == []
    groups, cccr = combine_and_search(trace, PARAMS)
    assert [g.regions for g in groups] == [(1, 2), (2, 3)]
    assert cccr == (2,)
    assert all(not g.is_cccr for g in groups)
    tree = find_cccr(trace, PARAMS)
    assert tree.combined and not tree.disjoint
    assert tree.cccr == (2,)
    assert [n.regions for n in tree.roots] == [(1, 2), (2, 3)]


def test_single_productive_window_is_the_cccr():
    # identical imbalanced columns: neither alone is productive, both
    # together collapse the classes, so the window is its own intersection
    trace = reference.flat_trace([[0.0, 0.0], [6.0, 6.0], [6.0, 6.0]])
    tree = find_cccr(trace, PARAMS)
    assert tree.combined
    assert [n.regions for n in tree.roots] == [(1, 2)]
    assert tree.roots[0].is_cccr
    assert tree.cccr == (1, 2)


def test_disjoint_windows_are_reported_without_a_cccr():
    trace = reference.flat_trace(DISJOINT_MATRIX)
    tree = find_cccr(trace, PARAMS)
    assert tree.combined and tree.disjoint
    assert [n.regions for n in tree.roots] == [(1, 2), (3, 4)]
    assert tree.cccr == ()


def test_idle_regions_never_qualify():
    # region 1 has zero time everywhere; only the imbalanced one is found
    trace = reference.flat_trace([[0.0, 1.0], [0.0, 9.0]])
    nodes = find_level1_ccrs(trace, PARAMS)
    assert [n.regions for n in nodes] == [(2,)]


def test_descend_stops_at_an_inactive_child():
    text_own = {
        # region 2 carries the imbalance itself; its child 3 is idle
        (1, "r1"): [1.0, 1.0],
        (2, "r2"): [0.0, 9.0],
        (3, "r3"): [0.0, 0.0],
    }
    from spmdiag.model import ProcessProfile, RegionNode, RegionTree, TraceSet

    tree = RegionTree(
        [RegionNode(1, "r1", None, 1), RegionNode(2, "r2", None, 1), RegionNode(3, "r3", 2, 2)]
    )
    profiles = []
    for rank in range(2):
        samples = {
            (1, "cpu_time"): text_own[(1, "r1")][rank],
            (2, "cpu_time"): text_own[(2, "r2")][rank] + text_own[(3, "r3")][rank],
            (3, "cpu_time"): text_own[(3, "r3")][rank],
        }
        profiles.append(ProcessProfile(rank=rank, samples=samples))
    trace = TraceSet(tree=tree, profiles=tuple(profiles))
    result = find_cccr(trace, PARAMS)
    assert result.cccr == (2,)
    assert result.chains()[0][-1].regions == (2,)


def test_two_children_split_the_chain():
    from spmdiag.model import ProcessProfile, RegionNode, RegionTree, TraceSet

    # both children of the critical phase carry the same imbalance, so the
    # chain forks and both leaves are innermost critical regions
    tree = RegionTree(
        [
            RegionNode(1, "phase", None, 1),
            RegionNode(3, "left", 1, 2),
            RegionNode(4, "right", 1, 2),
            RegionNode(2, "other", None, 1),
        ]
    )
    own = {1: [0.0, 0.0], 3: [0.0, 4.5], 4: [0.0, 4.5], 2: [1.0, 1.0]}
    profiles = []
    for rank in range(2):
        samples = {
            (1, "cpu_time"): own[1][rank] + own[3][rank] + own[4][rank],
            (3, "cpu_time"): own[3][rank],
            (4, "cpu_time"): own[4][rank],
            (2, "cpu_time"): own[2][rank],
        }
        profiles.append(ProcessProfile(rank=rank, samples=samples))
    trace = TraceSet(tree=tree, profiles=tuple(profiles))
    result = find_cccr(trace, PARAMS)
    assert result.cccr == (3, 4)
    assert [[n.regions for n in chain] for chain in result.chains()] == [
        [(1,), (3,)],
        [(1,), (4,)],
    ]


def test_search_matches_step_enumeration_on_random_traces():
    rng = random.Random(1234)
    for _ in range(40):
        trace = reference.random_trace(rng)
        tree = find_cccr(trace, PARAMS)
        brute = reference.brute_ccr(trace, PARAMS)
        assert tree.problem == brute.problem
        assert tree.combined == brute.combined
        if brute.combined:
            assert tuple(n.regions for n in tree.roots) == brute.windows
        else:
            assert tuple(n.regions[0] for n in tree.roots) == brute.level1
            assert (
                tuple(tuple(n.regions[0] for n in chain) for chain in tree.chains())
                == brute.chains
            )
        assert tree.cccr == brute.cccr
