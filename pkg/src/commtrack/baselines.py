"""Threshold-based community trackers used for head-to-head comparison.

Five established matching strategies behind the same interface as the core
tracker (partitions in, a partition of all static communities into dynamic
communities out):

- greene: sequential front matching with Jaccard similarity and a
  many-to-many mapping; a dynamic community unmatched for ``d`` consecutive
  snapshots is closed.
- takaffoli: links any cross-snapshot pair whose intersection over the
  larger size reaches ``k``; dynamic communities are the connected
  components of accepted links.
- ged: consecutive-snapshot inclusion both ways, weighting shared members
  by their importance (weighted degree) inside the community subgraph;
  thresholds ``k`` and ``j``.
- tajeuna: compares sparse membership-transition vectors with a
  harmonic-style sum; links pairs whose similarity exceeds ``k``.
- icem: member-to-community index; links pairs whose directional
  similarities both exceed ``k`` (``v`` flags the very-similar ones).

For the component-based methods the original event pipelines are not
reproduced; component closure over accepted links is the minimal structure
yielding comparable membership partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .graphs import Partition, SnapshotSeries
from .simnet import CommunityRef, community_refs, jaccard
from .tracker import DynamicCommunity, clusters_to_dyncomms, track_partitions

METHODS = ("greene", "takaffoli", "ged", "tajeuna", "icem")


@dataclass(frozen=True)
class BaselineConfig:
    method: str
    k: float = 0.1
    j: float = 0.1
    v: float = 0.5
    d: float = math.inf
    node_importance: str = "degree"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown baseline method {self.method!r}")
        for name in ("k", "j", "v"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"threshold {name}={val} outside [0, 1]")
        if not (self.d >= 1):
            raise ValueError(f"dissolution window d={self.d} must be >= 1 (or inf)")
        if self.node_importance != "degree":
            raise ValueError(f"unsupported node importance {self.node_importance!r}")


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self, n: int) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(n):
            out.setdefault(self.find(x), []).append(x)
        return [out[r] for r in sorted(out)]


def _component_dyncomms(refs, members, links) -> list[DynamicCommunity]:
    dsu = _DisjointSet(len(refs))
    for a, b in links:
        dsu.union(a, b)
    return clusters_to_dyncomms(refs, members, dsu.groups(len(refs)))


def greene_track(partitions: Sequence[Partition], cfg: BaselineConfig) -> list[DynamicCommunity]:
    """Front matching: each community joins every open dynamic community whose
    front it matches with Jaccard > k; unmatched communities start new ones.

    Matching is many-to-many internally; the returned partition resolves a
    multiply-matched community to its earliest-created dynamic community so
    the common one-community-one-place contract holds.
    """
    refs, members = community_refs(partitions)
    by_snapshot: dict[int, list[int]] = {}
    for i, r in enumerate(refs):
        by_snapshot.setdefault(r.snapshot, []).append(i)
    snapshots = sorted(by_snapshot)
    if not snapshots:
        return []

    fronts: list[int] = []          # per dynamic community: vertex of its front
    front_snapshot: list[int] = []
    assigned: dict[int, list[int]] = {}

    def open_new(v: int) -> None:
        assigned[v] = [len(fronts)]
        fronts.append(v)
        front_snapshot.append(refs[v].snapshot)

    for v in by_snapshot[snapshots[0]]:
        open_new(v)
    for t in snapshots[1:]:
        matches: dict[int, list[int]] = {}
        for v in by_snapshot[t]:
            mv = members[v]
            hits = [
                dyn
                for dyn in range(len(fronts))
                if front_snapshot[dyn] < t
                and t - front_snapshot[dyn] <= cfg.d
                and jaccard(mv, members[fronts[dyn]]) > cfg.k
            ]
            matches[v] = hits
        for v in by_snapshot[t]:
            hits = matches[v]
            if not hits:
                open_new(v)
                continue
            assigned[v] = hits
            for dyn in hits:
                fronts[dyn] = v
                front_snapshot[dyn] = t

    groups: dict[int, list[int]] = {}
    for v in range(len(refs)):
        groups.setdefault(min(assigned[v]), []).append(v)
    return clusters_to_dyncomms(refs, members, [groups[d] for d in sorted(groups)])


def takaffoli_track(partitions: Sequence[Partition], cfg: BaselineConfig) -> list[DynamicCommunity]:
    """Links pairs from any two snapshots with |a & b| / max(|a|, |b|) >= k."""
    refs, members = community_refs(partitions)
    links = []
    for a in range(len(refs)):
        for b in range(a + 1, len(refs)):
            if refs[a].snapshot == refs[b].snapshot:
                continue
            sim = len(members[a] & members[b]) / max(refs[a].size, refs[b].size)
            if sim >= cfg.k:
                links.append((a, b))
    return _component_dyncomms(refs, members, links)


def _internal_degrees(community: frozenset[int], graph) -> dict[int, float]:
    """Weighted degree of each member inside the community-induced subgraph."""
    out = {}
    for x in community:
        out[x] = sum(
            w for y, w in graph.neighbors(x).items() if y != x and y in community
        )
    return out


def ged_track(
    partitions: Sequence[Partition], graphs: SnapshotSeries, cfg: BaselineConfig
) -> list[DynamicCommunity]:
    """Consecutive-snapshot inclusion: links (a, b) when I(a,b) >= k and I(b,a) >= j.

    I(a, b) scales the membership ratio |a & b| / |a| by the share of a's
    internal importance carried by the shared members. Importance is the
    weighted degree within the community subgraph; communities with no
    internal edges fall back to the plain membership ratio. Only adjacent
    snapshots are compared, so this method cannot bridge a gap.
    """
    refs, members = community_refs(partitions)
    by_snapshot: dict[int, list[int]] = {}
    for i, r in enumerate(refs):
        by_snapshot.setdefault(r.snapshot, []).append(i)

    def inclusion(i_from: int, i_to: int, importance: dict[int, float]) -> float:
        shared = members[i_from] & members[i_to]
        if not shared:
            return 0.0
        ratio = len(shared) / refs[i_from].size
        total = sum(importance[x] for x in members[i_from])
        if total == 0.0:
            return ratio
        return ratio * sum(importance[x] for x in shared) / total

    links = []
    snapshots = sorted(by_snapshot)
    for t_prev, t_next in zip(snapshots, snapshots[1:]):
        if t_next != t_prev + 1:
            continue
        for a in by_snapshot[t_prev]:
            ni_a = _internal_degrees(members[a], graphs.snapshot(t_prev))
            for b in by_snapshot[t_next]:
                if not members[a] & members[b]:
                    continue
                if inclusion(a, b, ni_a) < cfg.k:
                    continue
                ni_b = _internal_degrees(members[b], graphs.snapshot(t_next))
                if inclusion(b, a, ni_b) >= cfg.j:
                    links.append((a, b))
    return _component_dyncomms(refs, members, links)


def tajeuna_vectors(partitions: Sequence[Partition]) -> list[dict[int, float]]:
    """Sparse transition vector per community: share of its members found in
    each community of the other snapshots (same-snapshot entries stay zero)."""
    refs, members = community_refs(partitions)
    vectors: list[dict[int, float]] = []
    for a in range(len(refs)):
        vec = {}
        for x in range(len(refs)):
            if refs[x].snapshot == refs[a].snapshot:
                continue
            shared = len(members[a] & members[x])
            if shared:
                vec[x] = shared / refs[a].size
        vectors.append(vec)
    return vectors


def tajeuna_similarity(va: dict[int, float], vb: dict[int, float]) -> float:
    """Harmonic-style agreement between two transition vectors; zero
    components contribute nothing."""
    if len(vb) < len(va):
        va, vb = vb, va
    return sum(
        2.0 * p * vb[x] / (p + vb[x]) for x, p in va.items() if x in vb
    )


def tajeuna_track(partitions: Sequence[Partition], cfg: BaselineConfig) -> list[DynamicCommunity]:
    """Links cross-snapshot pairs whose transition-vector similarity exceeds k.

    The threshold is an explicit parameter here; the automatic selection
    used elsewhere (fitting the crossing point of two Gamma curves) is out
    of scope.
    """
    refs, members = community_refs(partitions)
    vectors = tajeuna_vectors(partitions)
    links = []
    for a in range(len(refs)):
        for b in range(a + 1, len(refs)):
            if refs[a].snapshot == refs[b].snapshot:
                continue
            if tajeuna_similarity(vectors[a], vectors[b]) > cfg.k:
                links.append((a, b))
    return _component_dyncomms(refs, members, links)


def icem_links(
    partitions: Sequence[Partition], cfg: BaselineConfig
) -> list[tuple[int, int, bool]]:
    """Accepted (earlier, later, very_similar) links via the member index.

    Each member id maps to the communities containing it; from the second
    snapshot on, every community accumulates intersection counts against all
    earlier communities sharing a member. A pair links when both directional
    similarities |a & b| / |a| and |a & b| / |b| exceed k; the boolean marks
    |a & b| / |a| > v (annotation only, it does not affect linking).
    """
    refs, members = community_refs(partitions)
    by_snapshot: dict[int, list[int]] = {}
    for i, r in enumerate(refs):
        by_snapshot.setdefault(r.snapshot, []).append(i)
    index: dict[int, list[int]] = {}
    links = []
    for t in sorted(by_snapshot):
        for b in by_snapshot[t]:
            counts: dict[int, int] = {}
            for x in members[b]:
                for a in index.get(x, ()):
                    counts[a] = counts.get(a, 0) + 1
            for a in sorted(counts):
                inter = counts[a]
                if inter / refs[a].size > cfg.k and inter / refs[b].size > cfg.k:
                    links.append((a, b, inter / refs[a].size > cfg.v))
        # index gains the whole snapshot at once: same-snapshot pairs never compare
        for b in by_snapshot[t]:
            for x in members[b]:
                index.setdefault(x, []).append(b)
    return links


def icem_track(partitions: Sequence[Partition], cfg: BaselineConfig) -> list[DynamicCommunity]:
    refs, members = community_refs(partitions)
    links = [(a, b) for a, b, _ in icem_links(partitions, cfg)]
    return _component_dyncomms(refs, members, links)


def get_tracker(
    method: str,
    cfg: BaselineConfig | None = None,
    series: SnapshotSeries | None = None,
    metric: str = "overlap",
    seed: int = 0,
) -> Callable[[Sequence[Partition]], list[DynamicCommunity]]:
    """Tracker registry for the CLI and the evaluation harness.

    ``method`` is ``modularity`` for the core tracker or one of METHODS.
    GED additionally needs the snapshot series for node importance.
    """
    if method == "modularity":
        return lambda parts: track_partitions(parts, metric=metric, seed=seed)
    if cfg is None:
        cfg = BaselineConfig(method=method)
    elif cfg.method != method:
        cfg = replace(cfg, method=method)
    if method == "greene":
        return lambda parts: greene_track(parts, cfg)
    if method == "takaffoli":
        return lambda parts: takaffoli_track(parts, cfg)
    if method == "ged":
        if series is None:
            raise ValueError("ged requires the snapshot series")
        return lambda parts: ged_track(parts, series, cfg)
    if method == "tajeuna":
        return lambda parts: tajeuna_track(parts, cfg)
    if method == "icem":
        return lambda parts: icem_track(parts, cfg)
    raise ValueError(f"unknown tracker method {method!r}")
