"""Independent oracles and fixture builders shared by the test modules.

Everything here deliberately avoids the production code paths it checks:
modularity is evaluated as the literal ordered-pair double sum, similarity
networks via a plain quadratic scan with sorted-list intersections, and
events via direct predicate evaluation over all pairs and sets.
"""

from __future__ import annotations

import random
from itertools import combinations

from commtrack.graphs import Graph, Partition
from commtrack.simnet import CommunityRef
from commtrack.tracker import DynamicCommunity

# ---------------------------------------------------------------------------
# modularity oracles


def eq2_modularity(g: Graph, communities) -> float:
    """Literal double-sum modularity: (1/2m) * sum_xy [A_xy - k_x k_y / 2m]."""
    comm = {}
    next_id = 0
    for members in communities:
        for x in members:
            comm[x] = next_id
        next_id += 1
    for x in g.nodes():
        if x not in comm:
            comm[x] = next_id
            next_id += 1
    adj: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges():
        if u == v:
            adj[(u, u)] = w
        else:
            adj[(u, v)] = w
            adj[(v, u)] = w
    nodes = sorted(g.nodes())
    k = {x: sum(adj.get((x, y), 0.0) for y in nodes) for x in nodes}
    m = 0.5 * sum(k.values())
    total = 0.0
    for x in nodes:
        for y in nodes:
            if comm[x] == comm[y]:
                total += adj.get((x, y), 0.0) - k[x] * k[y] / (2.0 * m)
    return total / (2.0 * m)


def enumerate_set_partitions(items):
    """All set partitions of ``items`` (restricted-growth recursion)."""
    items = list(items)

    def rec(i, blocks):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def _fast_partition_modularity(edges, degrees, m, assignment):
    sigma_in: dict[int, float] = {}
    sigma_tot: dict[int, float] = {}
    for x, c in assignment.items():
        sigma_tot[c] = sigma_tot.get(c, 0.0) + degrees[x]
    for u, v, w in edges:
        cu = assignment[u]
        if cu == assignment[v]:
            sigma_in[cu] = sigma_in.get(cu, 0.0) + (w if u == v else 2.0 * w)
    two_m = 2.0 * m
    return sum(
        sigma_in.get(c, 0.0) / two_m - (sigma_tot[c] / two_m) ** 2 for c in sigma_tot
    )


def best_partition_exhaustive(g: Graph) -> tuple[float, list[list[int]]]:
    """Maximum-modularity partition by brute force (small graphs only)."""
    edges = list(g.edges())
    degrees = {x: g.weighted_degree(x) for x in g.nodes()}
    m = g.total_weight
    best_q, best_p = float("-inf"), None
    for blocks in enumerate_set_partitions(sorted(g.nodes())):
        assignment = {x: ci for ci, b in enumerate(blocks) for x in b}
        q = _fast_partition_modularity(edges, degrees, m, assignment)
        if q > best_q:
            best_q, best_p = q, [list(b) for b in blocks]
    return best_q, best_p


def clustering_quality_fraction(g: Graph, achieved: float, tol: float = 1e-12) -> float:
    """Fraction of all clusterings whose modularity is <= achieved + tol."""
    edges = list(g.edges())
    degrees = {x: g.weighted_degree(x) for x in g.nodes()}
    m = g.total_weight
    total = 0
    not_above = 0
    for blocks in enumerate_set_partitions(sorted(g.nodes())):
        assignment = {x: ci for ci, b in enumerate(blocks) for x in b}
        q = _fast_partition_modularity(edges, degrees, m, assignment)
        total += 1
        if q <= achieved + tol:
            not_above += 1
    return not_above / total


# ---------------------------------------------------------------------------
# similarity-network oracle


def _sorted_intersection_size(a: list, b: list) -> int:
    i = j = n = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            n += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return n


def simnet_oracle(partitions, metric="overlap"):
    """Edge dict keyed by ((s1, c1), (s2, c2)) from a plain quadratic scan."""
    comms = [
        (p.snapshot, ci, sorted(c))
        for p in partitions
        for ci, c in enumerate(p.communities)
    ]
    edges = {}
    for x in range(len(comms)):
        sx, cx, mx = comms[x]
        for y in range(x + 1, len(comms)):
            sy, cy, my = comms[y]
            if sx == sy:
                continue
            inter = _sorted_intersection_size(mx, my)
            if inter == 0:
                continue
            if metric == "overlap":
                w = inter / min(len(mx), len(my))
            else:
                w = inter / (len(mx) + len(my) - inter)
            key = ((sx, cx), (sy, cy)) if (sx, cx) < (sy, cy) else ((sy, cy), (sx, cx))
            edges[key] = w
    return edges


# ---------------------------------------------------------------------------
# events oracle: direct evaluation of the six predicates


def events_oracle(d: DynamicCommunity) -> set:
    """Set of (kind, subject, related) from literal predicate evaluation."""
    pairs = list(zip(d.refs, d.member_sets))
    out = set()
    for subject, mine in pairs:
        earlier = [(r, ms) for r, ms in pairs if r.snapshot < subject.snapshot]
        later = [(r, ms) for r, ms in pairs if r.snapshot > subject.snapshot]
        same = [(r, ms) for r, ms in pairs if r.snapshot == subject.snapshot]
        overl_earlier = [(r, ms) for r, ms in earlier if len(ms & mine) > 0]
        if len(overl_earlier) == 0:
            out.add(("birth", subject, frozenset()))
        if not any(len(ms & mine) > 0 for _, ms in later):
            out.add(("death", subject, frozenset()))
        growth_wit = frozenset(r for r, ms in overl_earlier if r.size < subject.size)
        if growth_wit:
            out.add(("growth", subject, growth_wit))
        contraction_wit = frozenset(r for r, ms in overl_earlier if r.size > subject.size)
        if contraction_wit:
            out.add(("contraction", subject, contraction_wit))
        for snap in sorted({r.snapshot for r, _ in overl_earlier}):
            group = frozenset(r for r, _ in overl_earlier if r.snapshot == snap)
            if len(group) >= 2:
                out.add(("merging", subject, group))
        split_set = set()
        for parent, pms in overl_earlier:
            for r, ms in same:
                if len(ms & pms) > 0:
                    split_set.add(r)
        if len(split_set) >= 2:
            out.add(("splitting", subject, frozenset(split_set)))
    return out


# ---------------------------------------------------------------------------
# random builders


def random_weighted_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    edges = [
        (u, v, round(rng.uniform(0.5, 2.0), 3))
        for u, v in combinations(range(n), 2)
        if rng.random() < p
    ]
    if not edges:
        edges = [(0, 1, 1.0)]
    return Graph(range(n), edges)


def random_partition_series(
    rng: random.Random, snapshots: int, pool: int, max_comms: int
) -> list[Partition]:
    parts = []
    for t in range(1, snapshots + 1):
        population = rng.sample(range(pool), rng.randint(2, pool))
        rng.shuffle(population)
        k = rng.randint(1, min(max_comms, len(population)))
        cuts = sorted(rng.sample(range(1, len(population)), k - 1)) if k > 1 else []
        bounds = [0] + cuts + [len(population)]
        comms = [population[a:b] for a, b in zip(bounds, bounds[1:])]
        parts.append(Partition.of(t, comms))
    return parts


def random_dyncomm(rng: random.Random, n_refs: int, snapshots: int, pool: int) -> DynamicCommunity:
    per_snapshot: dict[int, int] = {}
    refs = []
    members = []
    for _ in range(n_refs):
        t = rng.randint(1, snapshots)
        ci = per_snapshot.get(t, 0)
        per_snapshot[t] = ci + 1
        size = rng.randint(1, max(2, pool // 3))
        ms = frozenset(rng.sample(range(pool), size))
        refs.append(CommunityRef(t, ci, len(ms)))
        members.append(ms)
    order = sorted(range(n_refs), key=lambda i: refs[i])
    return DynamicCommunity(
        0, tuple(refs[i] for i in order), tuple(members[i] for i in order)
    )


# ---------------------------------------------------------------------------
# five-line schematic fixture: growth, contraction, merge, split, birth, death


def _rng_set(lo, hi):
    return frozenset(range(lo, hi + 1))


FIG_EXPECTED_CLUSTERS = 4


def fig_partitions() -> list[Partition]:
    """Five evolving lineages over five snapshots.

    Line 1 grows at snapshot 2 and dies at 4. Line 4 contracts at 3 and
    splits in two at 5. Line 3 is born at 2 and merges with line 2 at 4
    (line 2 skips snapshot 2 entirely). A fresh community is born at 5.
    Memberships persist within each lineage, so later snapshots re-satisfy
    some predicates against older constituents (a growth stays bigger than
    its origin, a merged union keeps overlapping both parents); the
    reconstruction reports those repeats by design.
    """
    a1 = _rng_set(1, 10)
    a2 = a3 = a4 = _rng_set(1, 15)

    b1 = b3 = _rng_set(100, 119)
    c2 = c3 = _rng_set(150, 169)
    m4 = m5 = b1 | c2

    e1 = e2 = _rng_set(200, 239)
    e3 = e4 = _rng_set(200, 229)
    f5a = _rng_set(200, 214)
    f5b = _rng_set(215, 229)

    g5 = _rng_set(300, 319)

    return [
        Partition(1, (a1, b1, e1)),
        Partition(2, (a2, c2, e2)),
        Partition(3, (a3, b3, c3, e3)),
        Partition(4, (a4, m4, e4)),
        Partition(5, (m5, f5a, f5b, g5)),
    ]
