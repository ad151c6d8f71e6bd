"""Weighted undirected graphs, snapshot series, partitions, and TSV I/O.

Node ids are external string labels at the file boundary and dense integer
indices everywhere else; a :class:`SnapshotSeries` owns the label mapping
shared by all of its snapshots. Graphs and series are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

log = logging.getLogger(__name__)


class FormatError(ValueError):
    """Malformed input data; the message carries the file line when known."""


class Graph:
    """Immutable weighted undirected graph over integer node ids.

    Edge weights must be finite and nonnegative; zero-weight edges are
    dropped (an absent edge and a weight-0 edge are the same thing) and
    duplicate edges aggregate by weight summation. Self-loops are rejected
    unless ``allow_self_loops`` is set; an allowed self-loop's stored weight
    counts once toward the node's weighted degree, which is the convention
    used by aggregated graphs whose diagonal carries twice the collapsed
    internal weight.
    """

    __slots__ = ("_adj", "_degree", "_total_weight")

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Iterable[tuple[int, int, float]] = (),
        allow_self_loops: bool = False,
    ):
        adj: dict[int, dict[int, float]] = {int(x): {} for x in sorted(nodes)}
        for u, v, w in edges:
            w = float(w)
            if not math.isfinite(w) or w < 0.0:
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w!r}")
            if u == v and not allow_self_loops:
                raise ValueError(f"self-loop on node {u} is not allowed")
            if u not in adj or v not in adj:
                missing = u if u not in adj else v
                raise ValueError(f"edge ({u}, {v}) references unknown node {missing}")
            if w == 0.0:
                continue
            adj[u][v] = adj[u].get(v, 0.0) + w
            if u != v:
                adj[v][u] = adj[v].get(u, 0.0) + w
        self._adj = adj
        self._degree = {x: sum(nbrs.values()) for x, nbrs in adj.items()}
        self._total_weight = 0.5 * sum(self._degree.values())

    def nodes(self) -> Iterator[int]:
        return iter(self._adj)

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return sum(1 for _ in self.edges())

    def has_node(self, x: int) -> bool:
        return x in self._adj

    __contains__ = has_node

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, x: int) -> Mapping[int, float]:
        """Neighbor -> edge weight mapping for ``x`` (treat as read-only)."""
        try:
            return self._adj[x]
        except KeyError:
            raise KeyError(f"unknown node {x}") from None

    def edge_weight(self, u: int, v: int, default: float = 0.0) -> float:
        return self._adj.get(u, {}).get(v, default)

    def weighted_degree(self, x: int) -> float:
        """Sum of incident edge weights (a self-loop counts its stored weight once)."""
        try:
            return self._degree[x]
        except KeyError:
            raise KeyError(f"unknown node {x}") from None

    @property
    def total_weight(self) -> float:
        """Sum of edge weights m; equal to half the total weighted degree."""
        return self._total_weight

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield each undirected edge once as (u, v, w) with u <= v."""
        for u, nbrs in self._adj.items():
            for v, w in nbrs.items():
                if u <= v:
                    yield u, v, w


def weighted_degree(g: Graph, x: int) -> float:
    """Weighted degree of node ``x`` in ``g``; raises KeyError for unknown nodes."""
    return g.weighted_degree(x)


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty node-id sets detected at one snapshot.

    Communities may cover only a subset of the snapshot's nodes. Overlap and
    empty communities are rejected at construction.
    """

    snapshot: int
    communities: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for c in self.communities:
            if not c:
                raise ValueError(f"empty community at snapshot {self.snapshot}")
            if seen & c:
                raise ValueError(
                    f"overlapping communities at snapshot {self.snapshot}: "
                    f"nodes {sorted(seen & c)} appear twice"
                )
            seen |= c

    @classmethod
    def of(cls, snapshot: int, communities: Iterable[Iterable[int]]) -> "Partition":
        return cls(snapshot, tuple(frozenset(c) for c in communities))

    def membership(self) -> dict[int, int]:
        """Node id -> community index."""
        return {x: ci for ci, c in enumerate(self.communities) for x in c}

    def covered_nodes(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.communities:
            out |= c
        return frozenset(out)

    def validate_against(self, g: Graph) -> None:
        missing = sorted(x for x in self.covered_nodes() if x not in g)
        if missing:
            raise ValueError(
                f"partition at snapshot {self.snapshot} references nodes "
                f"absent from the graph: {missing}"
            )


class SnapshotSeries:
    """Ordered snapshot graphs (1-indexed) over a shared node-label space."""

    def __init__(
        self,
        labels: Sequence[str],
        snapshots: Sequence[Graph],
        snapshot_labels: Sequence[str] | None = None,
    ):
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate node labels in series")
        if snapshot_labels is not None and len(snapshot_labels) != len(snapshots):
            raise ValueError("snapshot_labels length must match snapshots")
        self._labels = tuple(labels)
        self._label_index = {lab: i for i, lab in enumerate(self._labels)}
        self._snapshots = tuple(snapshots)
        self.snapshot_labels = tuple(snapshot_labels) if snapshot_labels else None

    def __len__(self) -> int:
        return len(self._snapshots)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def node_count(self) -> int:
        return len(self._labels)

    def node_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def node_label(self, index: int) -> str:
        return self._labels[index]

    def snapshot(self, t: int) -> Graph:
        """Graph at snapshot ``t`` (1-based, contiguous)."""
        if not 1 <= t <= len(self._snapshots):
            raise IndexError(f"snapshot index {t} outside 1..{len(self._snapshots)}")
        return self._snapshots[t - 1]

    def graphs(self) -> tuple[Graph, ...]:
        return self._snapshots


def load_snapshots(path: str | Path, fmt: str = "edge-list-tsv") -> SnapshotSeries:
    """Parse a snapshot edge list: ``snapshot u v [weight]``, '#' comments.

    Snapshot indices must be the contiguous range 1..n; a gap is an error
    rather than silently compacted. Missing weights default to 1.0 and
    duplicate edges aggregate by weight summation (a warning reports how
    many were folded).
    """
    if fmt != "edge-list-tsv":
        raise ValueError(f"unsupported snapshot format: {fmt}")
    path = Path(path)
    per_snapshot: dict[int, dict[tuple[str, str], float]] = {}
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (3, 4):
                raise FormatError(
                    f"{path}:{lineno}: expected 'snapshot u v [weight]', got {line!r}"
                )
            try:
                t = int(parts[0])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad snapshot index {parts[0]!r}") from None
            if t <= 0:
                raise FormatError(f"{path}:{lineno}: snapshot index must be positive, got {t}")
            u, v = parts[1], parts[2]
            if u == v:
                raise FormatError(f"{path}:{lineno}: self-loop on {u!r} rejected")
            if len(parts) == 4:
                try:
                    w = float(parts[3])
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: bad weight {parts[3]!r}") from None
                if not math.isfinite(w) or w < 0.0:
                    raise FormatError(f"{path}:{lineno}: weight must be finite and >= 0, got {w}")
            else:
                w = 1.0
            key = (u, v) if u < v else (v, u)
            edges = per_snapshot.setdefault(t, {})
            if key in edges:
                duplicates += 1
                edges[key] += w
            else:
                edges[key] = w
    if not per_snapshot:
        raise FormatError(f"{path}: empty snapshot file")
    n = max(per_snapshot)
    missing = [t for t in range(1, n + 1) if t not in per_snapshot]
    if missing:
        raise FormatError(f"{path}: missing snapshot indices {missing}; 1..{n} must be contiguous")
    if duplicates:
        log.warning("%s: %d duplicate edges aggregated by weight summation", path, duplicates)

    all_labels = sorted({lab for edges in per_snapshot.values() for pair in edges for lab in pair})
    index = {lab: i for i, lab in enumerate(all_labels)}
    graphs = []
    for t in range(1, n + 1):
        edges = per_snapshot[t]
        nodes = {index[lab] for pair in edges for lab in pair}
        graphs.append(Graph(nodes, ((index[a], index[b], w) for (a, b), w in edges.items())))
    return SnapshotSeries(all_labels, graphs)


def save_snapshots(series: SnapshotSeries, path: str | Path) -> None:
    rows = []
    for t in range(1, len(series) + 1):
        g = series.snapshot(t)
        for u, v, w in g.edges():
            lu, lv = sorted((series.node_label(u), series.node_label(v)))
            rows.append((t, lu, lv, w))
    rows.sort()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# snapshot\tu\tv\tweight\n")
        for t, lu, lv, w in rows:
            fh.write(f"{t}\t{lu}\t{lv}\t{w!r}\n")


def load_partitions(
    path: str | Path, series: SnapshotSeries, fmt: str = "membership-tsv"
) -> list[Partition]:
    """Parse a membership file: ``snapshot community node``, one row per member.

    Returns one Partition per series snapshot (empty when the file has no
    rows for it). Community ids need not be dense; community order follows
    first appearance in the file. Nodes must exist in the corresponding
    snapshot graph and may not appear in two communities of one snapshot.
    """
    if fmt != "membership-tsv":
        raise ValueError(f"unsupported partition format: {fmt}")
    path = Path(path)
    per_snapshot: dict[int, dict[str, list[int]]] = {}
    assigned: dict[int, dict[int, str]] = {}
    missing: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise FormatError(
                    f"{path}:{lineno}: expected 'snapshot community node', got {line!r}"
                )
            try:
                t = int(parts[0])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad snapshot index {parts[0]!r}") from None
            if not 1 <= t <= len(series):
                raise FormatError(
                    f"{path}:{lineno}: snapshot {t} outside series range 1..{len(series)}"
                )
            comm, label = parts[1], parts[2]
            try:
                node = series.node_index(label)
            except KeyError:
                missing.append(label)
                continue
            if node not in series.snapshot(t):
                missing.append(label)
                continue
            prior = assigned.setdefault(t, {})
            if node in prior:
                if prior[node] != comm:
                    raise FormatError(
                        f"{path}:{lineno}: node {label!r} assigned to communities "
                        f"{prior[node]!r} and {comm!r} at snapshot {t}; "
                        "overlapping partitions are unsupported"
                    )
                continue
            prior[node] = comm
            per_snapshot.setdefault(t, {}).setdefault(comm, []).append(node)
    if missing:
        raise FormatError(
            f"{path}: nodes absent from their snapshot graph: {sorted(set(missing))}"
        )
    out = []
    for t in range(1, len(series) + 1):
        comms = per_snapshot.get(t, {})
        out.append(Partition(t, tuple(frozenset(members) for members in comms.values())))
    return out


def save_partitions(
    partitions: Sequence[Partition], series: SnapshotSeries, path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# snapshot\tcommunity\tnode\n")
        for p in partitions:
            for ci, members in enumerate(p.communities):
                for label in sorted(series.node_label(x) for x in members):
                    fh.write(f"{p.snapshot}\t{ci}\t{label}\n")
