"""Co-hashtag network construction and hashtag-overlap analytics.

Tweets aggregate into one snapshot per UTC calendar day: two users are
linked when they used a common hashtag that day, weighted by how many
hashtags they shared. Per-community hashtag profiles support an overlap
score describing how much a dynamic community's topics persist over time.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime, timezone
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .graphs import FormatError, Graph, Partition, SnapshotSeries
from .simnet import overlap_coefficient
from .tracker import DynamicCommunity


@dataclass(frozen=True)
class TweetRecord:
    user: str
    timestamp: datetime  # timezone-aware, UTC
    hashtags: frozenset[str]  # case-folded, '#' stripped, never empty strings


def normalize_hashtags(raw: Iterable[str]) -> frozenset[str]:
    return frozenset(
        tag for tag in (t.strip().lstrip("#").casefold() for t in raw) if tag
    )


def parse_tweets(path: str | Path) -> list[TweetRecord]:
    """Parse tweet records: ``user<TAB>iso-timestamp<TAB>tag1,tag2,...``.

    Naive timestamps are taken as UTC; aware ones are converted. Records
    whose hashtag set normalizes to empty are kept here but ignored by the
    network builder.
    """
    path = Path(path)
    out: list[TweetRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(
                    f"{path}:{lineno}: expected 'user<TAB>timestamp<TAB>tags', got {line!r}"
                )
            user, stamp, tags = parts
            try:
                ts = datetime.fromisoformat(stamp.strip())
            except ValueError:
                raise FormatError(
                    f"{path}:{lineno}: unparseable timestamp {stamp!r}"
                ) from None
            if ts.tzinfo is None:
                ts = ts.replace(tzinfo=timezone.utc)
            else:
                ts = ts.astimezone(timezone.utc)
            out.append(TweetRecord(user.strip(), ts, normalize_hashtags(tags.split(","))))
    return out


def build_cohashtag_series(
    tweets: Sequence[TweetRecord], granularity: str = "day"
) -> SnapshotSeries:
    """One snapshot per UTC day with at least one edge, days ascending.

    Edge weight between two users is the number of hashtags both used that
    day. Users active that day (with hashtags) appear as nodes even when
    isolated. Snapshot labels carry the ISO date.
    """
    if granularity != "day":
        raise ValueError(f"unsupported granularity {granularity!r}")
    if not tweets:
        raise ValueError("no tweet records")
    daily_tags: dict[date, dict[str, set[str]]] = {}
    for rec in tweets:
        if not rec.hashtags:
            continue
        per_user = daily_tags.setdefault(rec.timestamp.date(), {})
        per_user.setdefault(rec.user, set()).update(rec.hashtags)

    kept_days: list[tuple[date, dict[str, set[str]], dict[tuple[str, str], int]]] = []
    for day in sorted(daily_tags):
        per_user = daily_tags[day]
        by_tag: dict[str, list[str]] = {}
        for user in sorted(per_user):
            for tag in per_user[user]:
                by_tag.setdefault(tag, []).append(user)
        weights: dict[tuple[str, str], int] = {}
        for tag in sorted(by_tag):
            users = by_tag[tag]
            for u, v in combinations(users, 2):
                key = (u, v) if u < v else (v, u)
                weights[key] = weights.get(key, 0) + 1
        if weights:
            kept_days.append((day, per_user, weights))
    if not kept_days:
        raise ValueError("no day with a co-hashtag edge")

    labels = sorted({u for _, per_user, _ in kept_days for u in per_user})
    index = {u: i for i, u in enumerate(labels)}
    graphs = []
    for _, per_user, weights in kept_days:
        nodes = {index[u] for u in per_user}
        edges = ((index[u], index[v], float(w)) for (u, v), w in weights.items())
        graphs.append(Graph(nodes, edges))
    return SnapshotSeries(
        labels, graphs, snapshot_labels=[day.isoformat() for day, _, _ in kept_days]
    )


def hashtags_overlap(h1: frozenset[str] | set[str], h2: frozenset[str] | set[str]) -> float:
    """Shared-tag count over the smaller set size; both sets must be nonempty."""
    if not h1 or not h2:
        raise ValueError("hashtags overlap requires nonempty tag sets")
    return overlap_coefficient(h1, h2)


@dataclass(frozen=True)
class HashtagProfile:
    """Hashtags used by one community on one day, with usage counts."""

    tags: frozenset[str]
    counts: tuple[tuple[str, int], ...]  # (tag, uses), most used first

    def top(self, k: int = 10) -> tuple[str, ...]:
        return tuple(tag for tag, _ in self.counts[:k])


def build_profiles(
    tweets: Sequence[TweetRecord],
    series: SnapshotSeries,
    partitions: Sequence[Partition],
) -> dict[tuple[int, int], HashtagProfile]:
    """Per-(snapshot, community) hashtag profile from member activity that day."""
    if series.snapshot_labels is None:
        raise ValueError("series lacks day labels; build it with build_cohashtag_series")
    day_index = {day: t for t, day in enumerate(series.snapshot_labels, 1)}
    daily_user_counts: dict[int, dict[str, Counter]] = {}
    for rec in tweets:
        if not rec.hashtags:
            continue
        t = day_index.get(rec.timestamp.date().isoformat())
        if t is None:
            continue
        per_user = daily_user_counts.setdefault(t, {})
        counter = per_user.setdefault(rec.user, Counter())
        counter.update(rec.hashtags)

    profiles: dict[tuple[int, int], HashtagProfile] = {}
    for p in partitions:
        per_user = daily_user_counts.get(p.snapshot, {})
        for ci, members in enumerate(p.communities):
            tally: Counter = Counter()
            for node in members:
                tally.update(per_user.get(series.node_label(node), ()))
            ranked = tuple(
                sorted(tally.items(), key=lambda item: (-item[1], item[0]))
            )
            profiles[(p.snapshot, ci)] = HashtagProfile(frozenset(tally), ranked)
    return profiles


def average_hashtags_overlap(
    d: DynamicCommunity, profiles: dict[tuple[int, int], HashtagProfile]
) -> float | None:
    """Mean tag overlap across all unordered pairs of d's constituents.

    Undefined (None) for a single-constituent community. Every constituent
    must carry a nonempty profile.
    """
    tag_sets = []
    for ref in d.refs:
        profile = profiles.get((ref.snapshot, ref.community))
        if profile is None or not profile.tags:
            raise ValueError(
                f"missing or empty hashtag profile for snapshot {ref.snapshot} "
                f"community {ref.community}"
            )
        tag_sets.append(profile.tags)
    if len(tag_sets) < 2:
        return None
    pairs = list(combinations(tag_sets, 2))
    return sum(hashtags_overlap(a, b) for a, b in pairs) / len(pairs)


def community_summary(
    dyncomms: Sequence[DynamicCommunity],
    profiles: dict[tuple[int, int], HashtagProfile],
) -> list[tuple[int, int, int, float | None]]:
    """Rows (dyncomm, members, days, avg_overlap) for scatter plotting."""
    rows = []
    for d in dyncomms:
        rows.append(
            (
                d.id,
                len(d.node_union()),
                len(d.snapshots()),
                average_hashtags_overlap(d, profiles),
            )
        )
    return rows


def save_summary_csv(rows: Sequence[tuple], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["dyncomm", "members", "days", "avg_overlap"])
        for dyn, members, days, overlap in rows:
            w.writerow([dyn, members, days, "" if overlap is None else f"{overlap:.6f}"])


def save_top_hashtags_csv(
    profiles: dict[tuple[int, int], HashtagProfile], path: str | Path, k: int = 10
) -> None:
    """Top-k hashtags per (snapshot, community), for alluvial-style rendering."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["snapshot", "community", "rank", "hashtag", "uses"])
        for (t, ci) in sorted(profiles):
            for rank, (tag, uses) in enumerate(profiles[(t, ci)].counts[:k], 1):
                w.writerow([t, ci, rank, tag, uses])
