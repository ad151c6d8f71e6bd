"""Synthetic dynamic networks with planted communities and evolution events.

Snapshot 1 plants power-law community sizes and degrees, wiring each node so
that roughly a (1 - mu) share of its edges stays inside its community. Every
later snapshot first reassigns a ``churn`` fraction of nodes to random other
communities, then applies the regime's event schedule, then rewires all
edges against the new memberships:

- birthdeath: ``event_count`` communities dissolve (members scattered over
  the survivors) and as many fresh communities assemble from nodes drawn
  off the survivors;
- expandcontract: ``event_count`` communities resize by about 25%, pulling
  nodes from or pushing nodes to the others;
- mergesplit: ``event_count`` communities split in two (proportion drawn
  from [0.3, 0.7]) and ``event_count`` disjoint pairs merge;
- intermittent: a ``hidden_fraction`` share of communities disappears for
  one snapshot (nodes absent from graph and partition) and returns next
  snapshot with its membership as evolved by churn.

The ground truth records the per-snapshot partitions, a dynamic-community
label per static community (connected components of the planted evolution
links, matching what a tracker is asked to recover), and the planted events
themselves. Same config and seed give byte-identical output.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .events import EventRecord, save_events_jsonl
from .graphs import (
    Graph,
    Partition,
    SnapshotSeries,
    load_partitions,
    load_snapshots,
    save_partitions,
    save_snapshots,
)
from .simnet import CommunityRef

REGIMES = ("birthdeath", "expandcontract", "mergesplit", "intermittent")

_MIN_COMMUNITY_FLOOR = 3  # communities never shrink below this during events


@dataclass(frozen=True)
class BenchConfig:
    nodes: int
    snapshots: int
    avg_degree: float = 20.0
    max_degree: int = 40
    mu: float = 0.2
    churn: float = 0.2
    regime: str = "birthdeath"
    event_count: int = 4
    seed: int = 0
    degree_exponent: float = 2.0
    community_size_exponent: float = 1.0
    min_community: int = 24
    max_community: int = 72
    hidden_fraction: float = 0.10

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.snapshots < 1:
            raise ValueError("need at least one snapshot")
        if not (self.avg_degree <= self.max_degree < self.nodes):
            raise ValueError(
                f"infeasible degrees: need avg_degree <= max_degree < nodes, "
                f"got {self.avg_degree} / {self.max_degree} / {self.nodes}"
            )
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mixing mu={self.mu} outside [0, 1)")
        if not 0.0 <= self.churn < 1.0:
            raise ValueError(f"churn={self.churn} outside [0, 1)")
        if not 0.0 <= self.hidden_fraction < 1.0:
            raise ValueError(f"hidden_fraction={self.hidden_fraction} outside [0, 1)")
        if self.event_count < 0:
            raise ValueError("event_count must be nonnegative")
        if self.min_community < _MIN_COMMUNITY_FLOOR:
            raise ValueError(f"min_community must be >= {_MIN_COMMUNITY_FLOOR}")
        if self.max_community < 2 * self.min_community:
            raise ValueError(
                "max_community must be at least twice min_community "
                "(size sequences could not always close otherwise)"
            )
        if self.nodes < 2 * self.min_community:
            raise ValueError(
                f"infeasible: {self.nodes} nodes cannot host two communities "
                f"of at least {self.min_community} members"
            )


@dataclass
class GroundTruth:
    """Planted structure: partitions, dynamic labels, events.

    ``dynamic_labels`` maps (snapshot, community index) to the planted
    dynamic community: one label per evolving lineage, where a merge
    continues the absorbing lineage (the absorbed one ends) and a split's
    second child starts a new lineage. ``component_labels`` instead groups
    lineages connected by merge/split links into one label; that grouping
    is what makes planted merge and split events recoverable by the event
    predicates, which quantify within a single dynamic community.
    ``affected`` lists the instances touched by an event at their snapshot,
    for churn accounting.
    """

    partitions: list[Partition]
    dynamic_labels: dict[tuple[int, int], int]
    events: list[EventRecord]
    component_labels: dict[tuple[int, int], int] = field(default_factory=dict)
    affected: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def dyncomm_count(self, t: int) -> int:
        return len({lab for (s, _), lab in self.dynamic_labels.items() if s == t})

    def total_dyncomms(self) -> int:
        return len(set(self.dynamic_labels.values()))

    def component_groups(self) -> dict[int, list[tuple[int, int]]]:
        groups: dict[int, list[tuple[int, int]]] = {}
        for inst in sorted(self.component_labels):
            groups.setdefault(self.component_labels[inst], []).append(inst)
        return groups


def _distribution(lo: int, hi: int, exponent: float) -> tuple[list[int], list[float]]:
    vals = list(range(lo, hi + 1))
    weights = [v ** -exponent for v in vals]
    return vals, weights


def _dist_mean(vals: Sequence[int], weights: Sequence[float]) -> float:
    return sum(v * w for v, w in zip(vals, weights)) / sum(weights)


def _degree_distribution(cfg: BenchConfig) -> tuple[list[int], list[float]]:
    """Power-law degree support with the minimum chosen to hit avg_degree."""
    best = None
    for k_min in range(1, cfg.max_degree + 1):
        vals, weights = _distribution(k_min, cfg.max_degree, cfg.degree_exponent)
        err = abs(_dist_mean(vals, weights) - cfg.avg_degree)
        if best is None or err < best[0]:
            best = (err, vals, weights)
    err, vals, weights = best
    if err > 0.1 * cfg.avg_degree:
        raise ValueError(
            f"infeasible: no power-law minimum degree reaches mean {cfg.avg_degree} "
            f"under max_degree={cfg.max_degree} and exponent {cfg.degree_exponent}"
        )
    return vals, weights


def _draw_sizes(cfg: BenchConfig, rng: random.Random) -> list[int]:
    vals, weights = _distribution(
        cfg.min_community, cfg.max_community, cfg.community_size_exponent
    )
    sizes: list[int] = []
    remaining = cfg.nodes
    while remaining:
        s = min(rng.choices(vals, weights)[0], remaining)
        rem = remaining - s
        if rem != 0 and rem < cfg.min_community:
            # close the sequence without leaving an undersized tail
            s = remaining if remaining <= cfg.max_community else remaining - cfg.min_community
        sizes.append(s)
        remaining -= s
    if len(sizes) < 2:
        raise ValueError("infeasible: config yields fewer than 2 communities")
    return sizes


class _Line:
    """One evolving planted community (its current members and identity)."""

    __slots__ = ("line_id", "members", "hidden")

    def __init__(self, line_id: int, members: set[int]):
        self.line_id = line_id
        self.members = members
        self.hidden = False


class _Generator:
    def __init__(self, cfg: BenchConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.lines: list[_Line] = []
        self.next_line_id = 0
        # line_id -> (ref, member frozenset) of the latest visible instance
        self.last_seen: dict[int, tuple[CommunityRef, frozenset[int]]] = {}
        self.evo_links: list[tuple[tuple[int, int], tuple[int, int]]] = []
        self.pending_extra_links: list[tuple[tuple[int, int], _Line]] = []
        self.pending_events: list[tuple] = []
        self.events: list[tuple] = []  # (kind, subject placeholder, related refs)
        self.affected: set[tuple[int, int]] = set()
        self.partitions: list[Partition] = []
        self.graphs: list[Graph] = []
        self.instances: list[tuple[int, int]] = []
        self.instance_line: dict[tuple[int, int], int] = {}
        self.size_vals, self.size_weights = _distribution(
            cfg.min_community, cfg.max_community, cfg.community_size_exponent
        )

    # -- setup ---------------------------------------------------------

    def _new_line(self, members: set[int]) -> _Line:
        line = _Line(self.next_line_id, members)
        self.next_line_id += 1
        self.lines.append(line)
        return line

    def _seed_snapshot_one(self) -> None:
        sizes = _draw_sizes(self.cfg, self.rng)
        nodes = list(range(self.cfg.nodes))
        self.rng.shuffle(nodes)
        pos = 0
        for s in sizes:
            self._new_line(set(nodes[pos : pos + s]))
            pos += s

    def visible(self) -> list[_Line]:
        return [ln for ln in self.lines if not ln.hidden]

    # -- churn ---------------------------------------------------------

    def _churn_step(self) -> None:
        vis = self.visible()
        if len(vis) < 2 or self.cfg.churn == 0.0:
            return
        owner: dict[int, int] = {}
        for idx, ln in enumerate(vis):
            for x in ln.members:
                owner[x] = idx
        present = sorted(owner)
        movers = self.rng.sample(present, round(self.cfg.churn * len(present)))
        for x in movers:
            src = owner[x]
            if len(vis[src].members) <= _MIN_COMMUNITY_FLOOR:
                continue
            dst = self.rng.randrange(len(vis) - 1)
            if dst >= src:
                dst += 1
            vis[src].members.discard(x)
            vis[dst].members.add(x)

    # -- event plumbing --------------------------------------------------

    def _pull_nodes(self, count: int, donors: list[_Line]) -> set[int]:
        """Draw ``count`` nodes off the donor communities, never draining one."""
        pulled: set[int] = set()
        attempts = 0
        while len(pulled) < count and attempts < 50 * count:
            attempts += 1
            donor = donors[self.rng.randrange(len(donors))]
            if len(donor.members) <= _MIN_COMMUNITY_FLOOR:
                continue
            x = self.rng.choice(sorted(donor.members))
            donor.members.discard(x)
            pulled.add(x)
        return pulled

    def _scatter_nodes(self, nodes: set[int], receivers: list[_Line]) -> None:
        for x in sorted(nodes):
            receivers[self.rng.randrange(len(receivers))].members.add(x)

    @staticmethod
    def _ensure_overlap(members: set[int], prev: frozenset[int], other: set[int]) -> None:
        """Guarantee a planted child still shares a member with its predecessor."""
        if members & prev:
            return
        for x in sorted(other & prev):
            other.discard(x)
            members.add(x)
            return

    # -- regimes ---------------------------------------------------------

    def _apply_birthdeath(self, t: int) -> None:
        vis = self.visible()
        e = self.cfg.event_count
        if len(vis) < e + 2:
            raise ValueError(
                f"infeasible: regime birthdeath needs more than {e} communities, "
                f"have {len(vis)} at snapshot {t}"
            )
        victims = [vis[i] for i in sorted(self.rng.sample(range(len(vis)), e))]
        survivors = [ln for ln in vis if ln not in victims]
        for ln in victims:
            ref, _ = self.last_seen[ln.line_id]
            self.events.append(("death", ref, ref, ()))
            self.affected.add((ref.snapshot, ref.community))
            self._scatter_nodes(ln.members, survivors)
            self.lines.remove(ln)
        for _ in range(e):
            size = self.rng.choices(self.size_vals, self.size_weights)[0]
            members = self._pull_nodes(size, survivors)
            fresh = self._new_line(members)
            self.pending_events.append(("birth", fresh, ()))

    def _apply_expandcontract(self, t: int) -> None:
        vis = self.visible()
        e = self.cfg.event_count
        if len(vis) < e + 1:
            raise ValueError(
                f"infeasible: regime expandcontract needs more than {e} communities, "
                f"have {len(vis)} at snapshot {t}"
            )
        targets = [vis[i] for i in sorted(self.rng.sample(range(len(vis)), e))]
        for ln in targets:
            others = [o for o in self.visible() if o is not ln]
            prev_ref, prev_members = self.last_seen[ln.line_id]
            post = len(ln.members)
            grow = self.rng.random() < 0.5
            shrunk_target = min(math.floor(0.75 * post), prev_ref.size - 1)
            if not grow and shrunk_target < _MIN_COMMUNITY_FLOOR:
                grow = True
            if grow:
                target = max(math.ceil(1.25 * post), prev_ref.size + 1)
                ln.members |= self._pull_nodes(target - post, others)
                self._ensure_overlap(ln.members, prev_members, set())
                self.pending_events.append(("growth", ln, (prev_ref,)))
            else:
                drop = set(self.rng.sample(sorted(ln.members), post - shrunk_target))
                ln.members -= drop
                self._ensure_overlap(ln.members, prev_members, drop)
                self._scatter_nodes(drop, others)
                self.pending_events.append(("contraction", ln, (prev_ref,)))
            self.affected.add((prev_ref.snapshot, prev_ref.community))

    def _apply_mergesplit(self, t: int) -> None:
        vis = self.visible()
        e = self.cfg.event_count
        eligible = [ln for ln in vis if len(ln.members) >= 2 * _MIN_COMMUNITY_FLOOR]
        if len(eligible) < 3 * e:
            raise ValueError(
                f"infeasible: regime mergesplit needs {3 * e} eligible communities "
                f"per snapshot, have {len(eligible)} at snapshot {t}"
            )
        chosen = [eligible[i] for i in sorted(self.rng.sample(range(len(eligible)), 3 * e))]
        split_targets, merge_pool = chosen[:e], chosen[e:]
        for ln in split_targets:
            prev_ref, prev_members = self.last_seen[ln.line_id]
            shuffled = sorted(ln.members)
            self.rng.shuffle(shuffled)
            cut = round(self.rng.uniform(0.3, 0.7) * len(shuffled))
            cut = min(max(cut, _MIN_COMMUNITY_FLOOR), len(shuffled) - _MIN_COMMUNITY_FLOOR)
            part1, part2 = set(shuffled[:cut]), set(shuffled[cut:])
            self._ensure_overlap(part1, prev_members, part2)
            self._ensure_overlap(part2, prev_members, part1)
            ln.members = part1
            child = self._new_line(part2)
            self.pending_extra_links.append(
                ((prev_ref.snapshot, prev_ref.community), child)
            )
            self.pending_events.append(("splitting", (ln, child), ()))
            self.affected.add((prev_ref.snapshot, prev_ref.community))
        for i in range(0, len(merge_pool), 2):
            keeper, absorbed = merge_pool[i], merge_pool[i + 1]
            ref_a, prev_a = self.last_seen[keeper.line_id]
            ref_b, prev_b = self.last_seen[absorbed.line_id]
            keeper.members |= absorbed.members
            self.lines.remove(absorbed)
            self._ensure_overlap(keeper.members, prev_a, set())
            self._ensure_overlap(keeper.members, prev_b, set())
            self.pending_extra_links.append(((ref_b.snapshot, ref_b.community), keeper))
            self.pending_events.append(("merging", keeper, (ref_a, ref_b)))
            self.affected.add((ref_a.snapshot, ref_a.community))
            self.affected.add((ref_b.snapshot, ref_b.community))

    def _apply_intermittent(self, t: int, just_returned: set[int]) -> None:
        vis = self.visible()
        count = max(1, round(self.cfg.hidden_fraction * len(vis)))
        candidates = [ln for ln in vis if ln.line_id not in just_returned]
        if count >= len(candidates):
            raise ValueError(
                f"infeasible: cannot hide {count} of {len(candidates)} "
                f"eligible communities at snapshot {t}"
            )
        for i in sorted(self.rng.sample(range(len(candidates)), count)):
            candidates[i].hidden = True

    # -- snapshot assembly ------------------------------------------------

    def _wire(self, visible_lines: list[_Line]) -> Graph:
        cfg, rng = self.cfg, self.rng
        node_comm: dict[int, int] = {}
        present: list[int] = []
        for ci, ln in enumerate(visible_lines):
            for x in ln.members:
                node_comm[x] = ci
                present.append(x)
        edges: set[tuple[int, int]] = set()
        external_stubs: list[int] = []
        for ln in visible_lines:
            size = len(ln.members)
            stubs: list[int] = []
            for x in sorted(ln.members):
                d_int = min(int(round((1.0 - cfg.mu) * self.degrees[x])), size - 1)
                stubs.extend([x] * d_int)
                external_stubs.extend([x] * (self.degrees[x] - d_int))
            if len(stubs) % 2:
                stubs.pop(rng.randrange(len(stubs)))
            _match_stubs(stubs, edges, rng)
        if len(external_stubs) % 2:
            external_stubs.pop(rng.randrange(len(external_stubs)))
        _match_stubs(external_stubs, edges, rng, node_comm)
        return Graph(present, ((u, v, 1.0) for u, v in edges))

    def _finish_snapshot(self, t: int) -> None:
        vis = self.visible()
        members_now = [frozenset(ln.members) for ln in vis]
        self.partitions.append(Partition(t, tuple(members_now)))
        ref_of: dict[int, CommunityRef] = {}
        for ci, ln in enumerate(vis):
            ref = CommunityRef(t, ci, len(ln.members))
            ref_of[ln.line_id] = ref
            self.instances.append((t, ci))
            self.instance_line[(t, ci)] = ln.line_id
            if ln.line_id in self.last_seen:
                prev_ref, _ = self.last_seen[ln.line_id]
                self.evo_links.append(
                    ((prev_ref.snapshot, prev_ref.community), (t, ci))
                )
        for prev_key, child in self.pending_extra_links:
            ref = ref_of[child.line_id]
            self.evo_links.append((prev_key, (ref.snapshot, ref.community)))
        self.pending_extra_links.clear()
        for kind, who, related in self.pending_events:
            if kind == "splitting":
                pair = tuple(ref_of[ln.line_id] for ln in who)
                for ref in pair:
                    self.events.append((kind, ref, ref, pair))
                    self.affected.add((ref.snapshot, ref.community))
            else:
                ref = ref_of[who.line_id]
                self.events.append((kind, ref, ref, related))
                self.affected.add((ref.snapshot, ref.community))
        self.pending_events.clear()
        for ci, ln in enumerate(vis):
            self.last_seen[ln.line_id] = (ref_of[ln.line_id], members_now[ci])
        self.graphs.append(self._wire(vis))

    # -- main -------------------------------------------------------------

    def run(self) -> tuple[SnapshotSeries, GroundTruth]:
        cfg = self.cfg
        self.degrees = self.rng.choices(*_degree_distribution(cfg), k=cfg.nodes)
        self._seed_snapshot_one()
        self._finish_snapshot(1)
        for t in range(2, cfg.snapshots + 1):
            just_returned: set[int] = set()
            for ln in self.lines:
                if ln.hidden:
                    ln.hidden = False
                    just_returned.add(ln.line_id)
            self._churn_step()
            if cfg.event_count > 0 or cfg.regime == "intermittent":
                if cfg.regime == "birthdeath":
                    self._apply_birthdeath(t)
                elif cfg.regime == "expandcontract":
                    self._apply_expandcontract(t)
                elif cfg.regime == "mergesplit":
                    self._apply_mergesplit(t)
                elif cfg.regime == "intermittent":
                    self._apply_intermittent(t, just_returned)
            self._finish_snapshot(t)

        line_labels = self._line_labels()
        component_labels = self._component_labels()
        events = [
            EventRecord(kind, line_labels[(subject.snapshot, subject.community)],
                        subject, frozenset(related))
            for kind, _, subject, related in self.events
        ]
        events.sort(key=lambda e: (e.dyncomm,) + e.sort_key())
        series = SnapshotSeries([str(i) for i in range(cfg.nodes)], self.graphs)
        truth = GroundTruth(
            self.partitions, line_labels, events, component_labels,
            frozenset(self.affected),
        )
        return series, truth

    def _line_labels(self) -> dict[tuple[int, int], int]:
        renumber: dict[int, int] = {}
        labels: dict[tuple[int, int], int] = {}
        for (t, ci), line_id in sorted(self.instance_line.items()):
            if line_id not in renumber:
                renumber[line_id] = len(renumber)
            labels[(t, ci)] = renumber[line_id]
        return labels

    def _component_labels(self) -> dict[tuple[int, int], int]:
        index = {inst: i for i, inst in enumerate(sorted(self.instances))}
        parent = list(range(len(index)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.evo_links:
            ra, rb = find(index[a]), find(index[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        labels: dict[tuple[int, int], int] = {}
        renumber: dict[int, int] = {}
        for inst in sorted(index):
            root = find(index[inst])
            if root not in renumber:
                renumber[root] = len(renumber)
            labels[inst] = renumber[root]
        return labels


def _match_stubs(
    stubs: list[int],
    edges: set[tuple[int, int]],
    rng: random.Random,
    node_comm: dict[int, int] | None = None,
    rounds: int = 8,
) -> None:
    """Pair stubs into unique edges; leftovers that cannot place are dropped.

    With ``node_comm`` given, endpoints must lie in different communities
    (external wiring); otherwise only self-pairs and duplicates are
    rejected.
    """
    pool = stubs
    for _ in range(rounds):
        if not pool:
            return
        rng.shuffle(pool)
        retry: list[int] = []
        for i in range(0, len(pool) - 1, 2):
            u, v = pool[i], pool[i + 1]
            if u == v or (node_comm is not None and node_comm[u] == node_comm[v]):
                retry.extend((u, v))
                continue
            key = (u, v) if u < v else (v, u)
            if key in edges:
                retry.extend((u, v))
                continue
            edges.add(key)
        if len(pool) % 2:
            retry.append(pool[-1])
        if len(retry) == len(pool):
            return
        pool = retry


def generate(cfg: BenchConfig) -> tuple[SnapshotSeries, GroundTruth]:
    """Generate a synthetic dynamic network with its ground truth."""
    return _Generator(cfg).run()


def desk_scale(cfg: BenchConfig, nodes: int = 1000) -> BenchConfig:
    """Shrink a config to ``nodes``, scaling events by the community ratio."""
    vals, weights = _distribution(
        cfg.min_community, cfg.max_community, cfg.community_size_exponent
    )
    mean_size = _dist_mean(vals, weights)
    new_comms = nodes / mean_size
    if new_comms < 2:
        raise ValueError(
            f"infeasible: {nodes} nodes yield fewer than 2 communities "
            f"of mean size {mean_size:.1f}"
        )
    ratio = new_comms / (cfg.nodes / mean_size)
    return replace(
        cfg, nodes=nodes, event_count=max(1, round(cfg.event_count * ratio))
    )


def paper_scale_config(regime: str, seed: int = 0) -> BenchConfig:
    """Full-size benchmark: 15,000 nodes, 5 snapshots, 40 events per snapshot."""
    return BenchConfig(
        nodes=15_000, snapshots=5, avg_degree=20.0, max_degree=40, mu=0.2,
        churn=0.2, regime=regime, event_count=40, seed=seed,
    )


def desk_config(regime: str, seed: int = 0) -> BenchConfig:
    """Desk-scale benchmark used by the test suite: 1,000 nodes, ~55 communities.

    Sizes and degrees shrink together so detection stays easy at mu=0.2 while
    the community count stays high enough for count comparisons to resolve
    single-community differences.
    """
    return BenchConfig(
        nodes=1000, snapshots=5, avg_degree=10.0, max_degree=20, mu=0.2,
        churn=0.2, regime=regime, event_count=2, seed=seed,
        min_community=10, max_community=30,
    )


def timing_config(snapshots: int, seed: int = 0) -> BenchConfig:
    """Small-community config sized so 1,000 nodes yield ~87 communities per
    snapshot (~438 over five, ~872 over ten)."""
    return BenchConfig(
        nodes=1000, snapshots=snapshots, avg_degree=8.0, max_degree=16, mu=0.2,
        churn=0.2, regime="birthdeath", event_count=2, seed=seed,
        min_community=8, max_community=16,
    )


def save_dataset(
    series: SnapshotSeries, truth: GroundTruth, outdir: str | Path
) -> dict[str, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "snapshots": outdir / "snapshots.tsv",
        "membership": outdir / "membership.tsv",
        "dynamic_labels": outdir / "dynamic_labels.tsv",
        "component_labels": outdir / "component_labels.tsv",
        "events": outdir / "planted_events.jsonl",
    }
    save_snapshots(series, paths["snapshots"])
    save_partitions(truth.partitions, series, paths["membership"])
    for key, labels in (
        ("dynamic_labels", truth.dynamic_labels),
        ("component_labels", truth.component_labels),
    ):
        with open(paths[key], "w", encoding="utf-8") as fh:
            fh.write("# dyncomm\tsnapshot\tcommunity\n")
            for (t, ci) in sorted(labels):
                fh.write(f"{labels[(t, ci)]}\t{t}\t{ci}\n")
    save_events_jsonl(truth.events, paths["events"])
    return paths


def load_dataset(outdir: str | Path) -> tuple[SnapshotSeries, GroundTruth]:
    outdir = Path(outdir)
    series = load_snapshots(outdir / "snapshots.tsv")
    partitions = load_partitions(outdir / "membership.tsv", series)

    def read_labels(name: str) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        with open(outdir / name, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                dyn, t, ci = (int(p) for p in line.split())
                out[(t, ci)] = dyn
        return out

    labels = read_labels("dynamic_labels.tsv")
    component_labels = read_labels("component_labels.tsv")
    events: list[EventRecord] = []
    sizes = {
        (p.snapshot, ci): len(c)
        for p in partitions
        for ci, c in enumerate(p.communities)
    }
    with open(outdir / "planted_events.jsonl", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            doc = json.loads(line)
            subject = CommunityRef(
                doc["snapshot"], doc["community"], sizes[(doc["snapshot"], doc["community"])]
            )
            related = frozenset(
                CommunityRef(s, c, sizes[(s, c)]) for s, c in doc["related"]
            )
            events.append(EventRecord(doc["kind"], doc["dyncomm"], subject, related))
    return series, GroundTruth(partitions, labels, events, component_labels)
