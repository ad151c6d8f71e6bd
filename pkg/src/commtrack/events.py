"""Critical-event reconstruction for dynamic communities.

Six event kinds describe how a community evolves, all evaluated inside one
dynamic community D over member overlap between its constituent static
communities:

- growth: some earlier community in D overlaps the subject and is smaller;
- contraction: some earlier community in D overlaps it and is larger;
- merging: at some single earlier snapshot, two or more communities in D
  overlap the subject;
- splitting: two or more communities of the subject's snapshot (the subject
  among them) each overlap a common earlier community in D;
- birth: no earlier community in D overlaps the subject;
- death: no later community in D overlaps the subject.

Earlier/later range over all snapshots, not just adjacent ones, so
intermittent communities participate. Kinds co-occur freely (a merged
community may also grow); each holding predicate yields a record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .simnet import CommunityRef
from .tracker import DynamicCommunity

EVENT_KINDS = ("birth", "death", "growth", "contraction", "merging", "splitting")


@dataclass(frozen=True)
class EventRecord:
    kind: str
    dyncomm: int
    subject: CommunityRef
    related: frozenset[CommunityRef]

    @property
    def snapshot(self) -> int:
        return self.subject.snapshot

    def sort_key(self):
        return (self.subject, EVENT_KINDS.index(self.kind), sorted(self.related))


def reconstruct(d: DynamicCommunity) -> list[EventRecord]:
    """Every event whose defining predicate holds for a constituent of ``d``.

    Output is sorted by (subject, kind) and independent of the storage order
    of the timeline.
    """
    refs = d.refs
    members = d.member_sets
    n = len(refs)
    out: list[EventRecord] = []
    for i in range(n):
        subject = refs[i]
        mine = members[i]
        overlapping_earlier = [
            j for j in range(n)
            if refs[j].snapshot < subject.snapshot and members[j] & mine
        ]
        overlapping_later = any(
            refs[j].snapshot > subject.snapshot and members[j] & mine
            for j in range(n)
        )
        if not overlapping_earlier:
            out.append(EventRecord("birth", d.id, subject, frozenset()))
        if not overlapping_later:
            out.append(EventRecord("death", d.id, subject, frozenset()))
        smaller = [j for j in overlapping_earlier if refs[j].size < subject.size]
        if smaller:
            out.append(
                EventRecord("growth", d.id, subject, frozenset(refs[j] for j in smaller))
            )
        larger = [j for j in overlapping_earlier if refs[j].size > subject.size]
        if larger:
            out.append(
                EventRecord(
                    "contraction", d.id, subject, frozenset(refs[j] for j in larger)
                )
            )
        merge_sets, split_set = merge_split_sets(d, subject)
        for related in merge_sets.values():
            out.append(EventRecord("merging", d.id, subject, related))
        if split_set:
            out.append(EventRecord("splitting", d.id, subject, split_set))
    out.sort(key=EventRecord.sort_key)
    return out


def merge_split_sets(
    d: DynamicCommunity, subject: CommunityRef
) -> tuple[dict[int, frozenset[CommunityRef]], frozenset[CommunityRef]]:
    """Maximal related sets behind merge and split records for ``subject``.

    Merging: for each earlier snapshot, the set of communities there that
    overlap the subject; kept only when it has at least two members (a lone
    predecessor is plain continuation, not a merge). Splitting: the set of
    communities at the subject's own snapshot that overlap some earlier
    community which also overlaps the subject; kept when at least two
    qualify (the subject always does, through any of its own predecessors).
    """
    refs = d.refs
    members = d.member_sets
    idx = refs.index(subject)
    mine = members[idx]

    by_snapshot: dict[int, list[CommunityRef]] = {}
    parents: list[int] = []
    for j, r in enumerate(refs):
        if r.snapshot < subject.snapshot and members[j] & mine:
            by_snapshot.setdefault(r.snapshot, []).append(r)
            parents.append(j)
    merge_sets = {
        snap: frozenset(group)
        for snap, group in by_snapshot.items()
        if len(group) >= 2
    }

    split_members: set[CommunityRef] = set()
    for p in parents:
        pm = members[p]
        for j, r in enumerate(refs):
            if r.snapshot == subject.snapshot and members[j] & pm:
                split_members.add(r)
    split_set = frozenset(split_members) if len(split_members) >= 2 else frozenset()
    return merge_sets, split_set


def reconstruct_all(dyncomms: Iterable[DynamicCommunity]) -> list[EventRecord]:
    out: list[EventRecord] = []
    for d in dyncomms:
        out.extend(reconstruct(d))
    out.sort(key=lambda e: (e.dyncomm,) + e.sort_key())
    return out


def save_events_jsonl(events: Sequence[EventRecord], path: str | Path) -> None:
    """One JSON object per line; related communities as [snapshot, community] pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in events:
            fh.write(
                json.dumps(
                    {
                        "dyncomm": e.dyncomm,
                        "kind": e.kind,
                        "snapshot": e.subject.snapshot,
                        "community": e.subject.community,
                        "related": [
                            [r.snapshot, r.community] for r in sorted(e.related)
                        ],
                    },
                    sort_keys=True,
                )
                + "\n"
            )
