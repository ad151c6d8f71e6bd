"""Threshold-free dynamic-community identification.

Clusters the similarity network with repeated local modularity sweeps only
(no aggregation passes: full hierarchical coarsening would glue weakly
related communities together). Every vertex ends up in exactly one cluster;
each cluster, read in time order, is one dynamic community. The public
operations take no similarity threshold of any kind.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import simnet
from .graphs import Partition, SnapshotSeries
from .louvain import MoveState, local_sweeps
from .simnet import CommunityRef, SimilarityNetwork


@dataclass(frozen=True)
class DynamicCommunity:
    """One evolving community: its static communities in time order.

    ``refs`` is the timeline, sorted by (snapshot, community index);
    ``member_sets`` is aligned with it.
    """

    id: int
    refs: tuple[CommunityRef, ...]
    member_sets: tuple[frozenset[int], ...]

    @property
    def span(self) -> tuple[int, int]:
        return self.refs[0].snapshot, self.refs[-1].snapshot

    @property
    def timeline(self) -> tuple[CommunityRef, ...]:
        return self.refs

    def node_union(self) -> frozenset[int]:
        out: set[int] = set()
        for members in self.member_sets:
            out |= members
        return frozenset(out)

    def members_of(self, ref: CommunityRef) -> frozenset[int]:
        return self.member_sets[self.refs.index(ref)]

    def snapshots(self) -> tuple[int, ...]:
        return tuple(sorted({r.snapshot for r in self.refs}))


def track(net: SimilarityNetwork, seed: int = 0) -> list[DynamicCommunity]:
    """Cluster the similarity network into dynamic communities.

    Sweeps repeat until no single-vertex move increases modularity; isolated
    vertices stay as singleton dynamic communities. Output clusters are
    renumbered by earliest snapshot, then by size descending, so ids are
    stable and comparable across runs. Deterministic per (network, seed).
    """
    n = len(net.refs)
    if n == 0:
        return []
    if net.graph.total_weight == 0.0:
        clusters = [[v] for v in range(n)]
    else:
        rng = random.Random(seed)
        order = list(range(n))
        rng.shuffle(order)
        state = local_sweeps(net.graph, order)
        clusters = state.communities()
    return clusters_to_dyncomms(net.refs, net.member_sets, clusters)


def clusters_to_dyncomms(
    refs: Sequence[CommunityRef],
    member_sets: Sequence[frozenset[int]],
    clusters: Sequence[Sequence[int]],
) -> list[DynamicCommunity]:
    """Turn vertex-index clusters into renumbered DynamicCommunity objects."""
    keyed = []
    for vs in clusters:
        ordered = sorted(vs, key=lambda v: refs[v])
        timeline = tuple(refs[v] for v in ordered)
        members = tuple(member_sets[v] for v in ordered)
        keyed.append((timeline[0].snapshot, -len(timeline), timeline, members))
    keyed.sort()
    return [
        DynamicCommunity(i, timeline, members)
        for i, (_, _, timeline, members) in enumerate(keyed)
    ]


def track_partitions(
    partitions: Sequence[Partition], metric: str = "overlap", seed: int = 0
) -> list[DynamicCommunity]:
    """Common tracker interface: per-snapshot partitions in, dynamic communities out.

    Builds the similarity network and clusters it. Every static community of
    the input appears in exactly one returned dynamic community.
    """
    if not partitions:
        return []
    return track(simnet.build(partitions, metric=metric), seed=seed)


def save_dynamic_tsv(dyncomms: Sequence[DynamicCommunity], path: str | Path) -> None:
    """One row per constituent: ``dyncomm snapshot community``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# dyncomm\tsnapshot\tcommunity\n")
        for d in dyncomms:
            for ref in d.refs:
                fh.write(f"{d.id}\t{ref.snapshot}\t{ref.community}\n")


def save_dynamic_json(
    dyncomms: Sequence[DynamicCommunity],
    path: str | Path,
    series: SnapshotSeries | None = None,
) -> None:
    """JSON document with per-community timelines and node unions.

    Node ids are written as external labels when a series is supplied,
    otherwise as the internal integers.
    """

    def name(x: int):
        return series.node_label(x) if series is not None else x

    doc = {
        "dynamic_communities": [
            {
                "id": d.id,
                "span": list(d.span),
                "timeline": [
                    {"snapshot": r.snapshot, "community": r.community, "size": r.size}
                    for r in d.refs
                ],
                "node_union": sorted((name(x) for x in d.node_union()), key=str),
            }
            for d in dyncomms
        ]
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
