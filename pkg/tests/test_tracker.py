import inspect

import pytest

import helpers
from commtrack import simnet
from commtrack.graphs import Partition
from commtrack.louvain import modularity
from commtrack.simnet import CommunityRef, SimilarityNetwork
from commtrack.tracker import DynamicCommunity, track, track_partitions


def net_of(parts, metric="overlap"):
    return simnet.build(parts, metric=metric)


class TestTrack:
    def test_edgeless_network_gives_singletons(self):
        net = net_of([Partition.of(1, [{1}, {2}, {3}])])
        result = track(net)
        assert len(result) == 3
        assert all(len(d.refs) == 1 for d in result)

    def test_two_linked_vertices_merge(self):
        # a single positive-weight edge always pays off: by exhaustive check
        # of both clusterings, merged beats split for any weight
        parts = [Partition.of(1, [{1, 2}]), Partition.of(2, [{2, 3}])]
        net = net_of(parts)
        assert len(net.edges) == 1
        merged_q = helpers.eq2_modularity(net.graph, [{0, 1}])
        split_q = helpers.eq2_modularity(net.graph, [{0}, {1}])
        assert merged_q > split_q
        result = track(net)
        assert len(result) == 1
        assert result[0].refs == (CommunityRef(1, 0, 2), CommunityRef(2, 0, 2))

    def test_identical_partitions_pair_up(self, rng):
        communities = [{1, 2, 3}, {4, 5}, {6, 7, 8, 9}]
        parts = [Partition.of(1, communities), Partition.of(2, communities)]
        result = track_partitions(parts)
        assert len(result) == 3
        assert all(len(d.refs) == 2 for d in result)
        for d in result:
            assert d.refs[0].community == d.refs[1].community

    def test_output_partitions_all_refs(self, rng):
        for _ in range(10):
            parts = helpers.random_partition_series(rng, 4, pool=30, max_comms=6)
            net = net_of(parts)
            result = track(net, seed=7)
            seen = [r for d in result for r in d.refs]
            assert sorted(seen) == sorted(net.refs)
            assert all(d.refs for d in result)

    def test_modularity_not_below_singletons(self, rng):
        for _ in range(10):
            parts = helpers.random_partition_series(rng, 4, pool=30, max_comms=6)
            net = net_of(parts)
            if net.graph.total_weight == 0.0:
                continue
            result = track(net, seed=3)
            ref_index = {(r.snapshot, r.community): i for i, r in enumerate(net.refs)}
            clusters = [
                {ref_index[(r.snapshot, r.community)] for r in d.refs} for d in result
            ]
            singles = [{i} for i in range(len(net.refs))]
            assert modularity(net.graph, clusters) >= modularity(net.graph, singles) - 1e-12

    def test_determinism(self, rng):
        parts = helpers.random_partition_series(rng, 4, pool=30, max_comms=6)
        net = net_of(parts)
        assert track(net, seed=11) == track(net, seed=11)

    def test_clusters_respect_connected_components(self, rng):
        for _ in range(10):
            parts = helpers.random_partition_series(rng, 4, pool=30, max_comms=6)
            net = net_of(parts)
            comp = {i: i for i in range(len(net.refs))}

            def find(x):
                while comp[x] != x:
                    comp[x] = comp[comp[x]]
                    x = comp[x]
                return x

            for a, b, _ in net.edges:
                comp[max(find(a), find(b))] = min(find(a), find(b))
            ref_comp = {
                (net.refs[i].snapshot, net.refs[i].community): find(i)
                for i in range(len(net.refs))
            }
            for d in track(net, seed=5):
                roots = {ref_comp[(r.snapshot, r.community)] for r in d.refs}
                assert len(roots) == 1

    def test_no_threshold_parameter_in_api(self):
        # the public tracking operations take data and a seed, nothing else
        assert set(inspect.signature(track).parameters) == {"net", "seed"}
        assert set(inspect.signature(track_partitions).parameters) == {
            "partitions",
            "metric",
            "seed",
        }

    def test_quality_floor_versus_all_clusterings(self, rng):
        # achieved modularity must not be beaten by more than 5% of all
        # possible clusterings of the similarity network
        for n_snapshots, pool in ((3, 12), (2, 10), (4, 14)):
            parts = helpers.random_partition_series(rng, n_snapshots, pool, 3)
            net = net_of(parts)
            if net.graph.total_weight == 0.0 or len(net.refs) > 10:
                continue
            result = track(net, seed=1)
            ref_index = {(r.snapshot, r.community): i for i, r in enumerate(net.refs)}
            clusters = [
                {ref_index[(r.snapshot, r.community)] for r in d.refs} for d in result
            ]
            achieved = modularity(net.graph, clusters)
            frac = helpers.clustering_quality_fraction(net.graph, achieved)
            assert frac >= 0.95


class TestTrackerInterface:
    def test_single_snapshot_gives_singletons(self):
        parts = [Partition.of(1, [{1, 2}, {3}, {4, 5, 6}])]
        result = track_partitions(parts)
        assert len(result) == 3
        assert all(len(d.refs) == 1 for d in result)

    def test_empty_input_gives_empty_output(self):
        assert track_partitions([]) == []

    def test_renumbering_by_first_snapshot_then_size(self):
        parts = [
            Partition.of(1, [{1, 2, 3}]),
            Partition.of(2, [{1, 2, 3}, {50, 51}]),
            Partition.of(3, [{50, 51}]),
        ]
        result = track_partitions(parts)
        assert [d.id for d in result] == [0, 1]
        assert result[0].span == (1, 2)
        assert result[1].span == (2, 3)


class TestDynamicCommunity:
    def test_accessors(self):
        d = DynamicCommunity(
            3,
            (CommunityRef(1, 0, 2), CommunityRef(3, 1, 2)),
            (frozenset({1, 2}), frozenset({2, 5})),
        )
        assert d.span == (1, 3)
        assert d.node_union() == {1, 2, 5}
        assert d.snapshots() == (1, 3)
        assert d.members_of(CommunityRef(3, 1, 2)) == {2, 5}
        assert d.timeline == d.refs
