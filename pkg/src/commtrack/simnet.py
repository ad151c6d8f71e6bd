"""Community similarity network over the static communities of a series.

Vertices are the communities of every snapshot partition; weighted edges
join communities from distinct snapshots whose member similarity is
positive. Snapshot distance is irrelevant: a community at snapshot 1 links
directly to one at snapshot 3 if they share members, which is what lets
intermittent communities reconnect.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .graphs import Graph, Partition


@dataclass(frozen=True, order=True)
class CommunityRef:
    """Address of one static community: (snapshot, community index), plus size."""

    snapshot: int
    community: int
    size: int


def overlap_coefficient(a: frozenset | set, b: frozenset | set) -> float:
    """|a & b| / min(|a|, |b|); both sets must be nonempty."""
    if not a or not b:
        raise ValueError("overlap coefficient requires nonempty sets")
    return len(a & b) / min(len(a), len(b))


def jaccard(a: frozenset | set, b: frozenset | set) -> float:
    """|a & b| / |a | b|; undefined when both sets are empty."""
    union = len(a | b)
    if union == 0:
        raise ValueError("jaccard undefined for two empty sets")
    return len(a & b) / union


METRICS: dict[str, Callable[[frozenset, frozenset], float]] = {
    "overlap": overlap_coefficient,
    "jaccard": jaccard,
}


class SimilarityNetwork:
    """Immutable weighted network whose vertices are static communities.

    Vertices exist for every community, including ones with zero similarity
    to all others (the tracker turns those into singleton dynamic
    communities). No edge ever joins two communities of the same snapshot,
    and every weight lies in (0, 1] for the bundled metrics.
    """

    __slots__ = ("refs", "member_sets", "edges", "graph", "_index")

    def __init__(
        self,
        refs: tuple[CommunityRef, ...],
        member_sets: tuple[frozenset[int], ...],
        edges: tuple[tuple[int, int, float], ...],
    ):
        self.refs = refs
        self.member_sets = member_sets
        self.edges = edges
        self.graph = Graph(range(len(refs)), edges)
        self._index = {(r.snapshot, r.community): i for i, r in enumerate(refs)}

    def __len__(self) -> int:
        return len(self.refs)

    def vertex(self, snapshot: int, community: int) -> int:
        return self._index[(snapshot, community)]

    def members(self, ref: CommunityRef) -> frozenset[int]:
        return self.member_sets[self._index[(ref.snapshot, ref.community)]]


def community_refs(
    partitions: Sequence[Partition],
) -> tuple[list[CommunityRef], list[frozenset[int]]]:
    """Flatten partitions into aligned (refs, member sets) vertex lists."""
    refs: list[CommunityRef] = []
    members: list[frozenset[int]] = []
    for p in partitions:
        for ci, c in enumerate(p.communities):
            refs.append(CommunityRef(p.snapshot, ci, len(c)))
            members.append(c)
    return refs, members


def build(partitions: Sequence[Partition], metric: str = "overlap") -> SimilarityNetwork:
    """Compare every community with all communities of subsequent snapshots.

    An edge is added exactly when the chosen metric is positive, weighted by
    the metric value. All community pairs across distinct snapshots are
    examined (O(c^2) pairs in the total community count c); pairs within one
    snapshot are never compared.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown similarity metric {metric!r}")
    sim = METRICS[metric]
    refs, members = community_refs(partitions)
    by_snapshot: dict[int, list[int]] = {}
    for i, r in enumerate(refs):
        by_snapshot.setdefault(r.snapshot, []).append(i)
    snapshots = sorted(by_snapshot)
    edges: list[tuple[int, int, float]] = []
    for si in range(len(snapshots)):
        for sj in range(si + 1, len(snapshots)):
            for a in by_snapshot[snapshots[si]]:
                ma = members[a]
                for b in by_snapshot[snapshots[sj]]:
                    w = sim(ma, members[b])
                    if w > 0.0:
                        edges.append((a, b, w))
    return SimilarityNetwork(tuple(refs), tuple(members), tuple(edges))


def save_similarity_edges(net: SimilarityNetwork, path: str | Path) -> None:
    """Debug dump of the network as ``i.ci j.cj weight`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, w in sorted(net.edges):
            ra, rb = net.refs[a], net.refs[b]
            fh.write(
                f"{ra.snapshot}.{ra.community}\t{rb.snapshot}.{rb.community}\t{w!r}\n"
            )
