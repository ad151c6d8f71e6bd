"""Louvain community detection on weighted graphs.

Provides the standalone modularity score, the incremental single-move gain
used during greedy optimization, the repeated local-move sweep (phase one,
shared with the dynamic-community tracker), and the full two-phase
hierarchical method with graph aggregation.

Move semantics: a node is first removed from its community, insertion gains
are evaluated for every neighboring community plus its original one, and the
node moves only when the best candidate strictly beats reinsertion at home.
Ties break toward the lowest community id so results do not depend on the
traversal order of equal-gain candidates.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from math import fsum
from typing import Callable, Iterable, Sequence

from .graphs import Graph

# Phase-1 convergence floor: a sweep whose total gain falls below this
# terminates, avoiding floating-point livelock on near-degenerate ties.
SWEEP_GAIN_EPS = 1e-7

MoveAudit = Callable[["MoveState", int, int, int, float], None]


def modularity(g: Graph, communities: Iterable[Iterable[int]]) -> float:
    """Weighted modularity of a node grouping, in [-0.5, 1].

    Nodes absent from ``communities`` are treated as singletons. Undefined
    (raises ValueError) for an edgeless graph. The score compares
    intra-community edge weight against the degree-preserving null model:
    sum over communities of in/(2m) - (tot/(2m))^2, where ``in`` counts
    ordered intra-community adjacency entries and ``tot`` sums member
    degrees.
    """
    m = g.total_weight
    if m == 0.0:
        raise ValueError("modularity undefined for edgeless graph")
    comm: dict[int, int] = {}
    next_id = 0
    for members in communities:
        for x in members:
            if x in comm:
                raise ValueError(f"node {x} assigned to two communities")
            if x not in g:
                raise ValueError(f"community member {x} not in graph")
            comm[x] = next_id
        next_id += 1
    for x in g.nodes():
        if x not in comm:
            comm[x] = next_id
            next_id += 1
    sigma_in: dict[int, float] = defaultdict(float)
    sigma_tot: dict[int, float] = defaultdict(float)
    for x in g.nodes():
        cx = comm[x]
        sigma_tot[cx] += g.weighted_degree(x)
        for y, w in g.neighbors(x).items():
            if y == x:
                sigma_in[cx] += w
            elif comm[y] == cx:
                sigma_in[cx] += w
    two_m = 2.0 * m
    return fsum(
        sigma_in[c] / two_m - (sigma_tot[c] / two_m) ** 2 for c in sorted(sigma_tot)
    )


class MoveState:
    """Incremental bookkeeping (community sums) for local moves on one graph.

    Tracks the community assignment plus per-community total degree and
    internal weight, so single-move gains cost O(deg) instead of a full
    rescore. Starts from the all-singletons assignment with community ids
    seeded by node id.
    """

    __slots__ = ("g", "m", "node_comm", "sigma_tot", "sigma_in", "comm_size")

    def __init__(self, g: Graph):
        if g.total_weight == 0.0:
            raise ValueError("local moves undefined for edgeless graph")
        self.g = g
        self.m = g.total_weight
        self.node_comm = {x: x for x in g.nodes()}
        self.sigma_tot = {x: g.weighted_degree(x) for x in g.nodes()}
        self.sigma_in = {x: g.neighbors(x).get(x, 0.0) for x in g.nodes()}
        self.comm_size = {x: 1 for x in g.nodes()}

    def neighbor_weights(self, x: int) -> dict[int, float]:
        """Community id -> weight of edges from ``x`` into it (self-loop excluded)."""
        links: dict[int, float] = {}
        node_comm = self.node_comm
        for y, w in self.g.neighbors(x).items():
            if y == x:
                continue
            c = node_comm[y]
            links[c] = links.get(c, 0.0) + w
        return links

    def remove(self, x: int, links: dict[int, float]) -> int:
        """Detach ``x`` from its community; returns the community id left."""
        c = self.node_comm[x]
        k_x = self.g.weighted_degree(x)
        loop = self.g.neighbors(x).get(x, 0.0)
        self.sigma_tot[c] -= k_x
        self.sigma_in[c] -= 2.0 * links.get(c, 0.0) + loop
        self.comm_size[c] -= 1
        if self.comm_size[c] == 0:
            del self.sigma_tot[c], self.sigma_in[c], self.comm_size[c]
        del self.node_comm[x]
        return c

    def insert(self, x: int, c: int, links: dict[int, float]) -> None:
        k_x = self.g.weighted_degree(x)
        loop = self.g.neighbors(x).get(x, 0.0)
        self.sigma_tot[c] = self.sigma_tot.get(c, 0.0) + k_x
        self.sigma_in[c] = self.sigma_in.get(c, 0.0) + 2.0 * links.get(c, 0.0) + loop
        self.comm_size[c] = self.comm_size.get(c, 0) + 1
        self.node_comm[x] = c

    def insertion_gain(self, k_x: float, c: int, k_x_in: float) -> float:
        """Modularity gain of inserting a detached node into community ``c``."""
        return k_x_in / self.m - self.sigma_tot.get(c, 0.0) * k_x / (2.0 * self.m * self.m)

    def modularity(self) -> float:
        two_m = 2.0 * self.m
        return fsum(
            self.sigma_in[c] / two_m - (self.sigma_tot[c] / two_m) ** 2
            for c in sorted(self.sigma_tot)
        )

    def communities(self) -> list[list[int]]:
        """Current grouping as sorted member lists, ordered by smallest member."""
        groups: dict[int, list[int]] = defaultdict(list)
        for x in sorted(self.node_comm):
            groups[self.node_comm[x]].append(x)
        return sorted(groups.values(), key=lambda members: members[0])


def modularity_gain(state: MoveState, x: int, target: int) -> float:
    """Gain of inserting ``x`` (already detached by the caller) into ``target``.

    Raises KeyError when the target community does not exist.
    """
    if target not in state.sigma_tot:
        raise KeyError(f"unknown community {target}")
    k_x = state.g.weighted_degree(x)
    k_x_in = 0.0
    node_comm = state.node_comm
    for y, w in state.g.neighbors(x).items():
        if y != x and node_comm.get(y) == target:
            k_x_in += w
    return state.insertion_gain(k_x, target, k_x_in)


def local_sweeps(
    g: Graph,
    order: Sequence[int],
    state: MoveState | None = None,
    on_accepted_move: MoveAudit | None = None,
) -> MoveState:
    """Repeat local-move sweeps over ``order`` until no move improves modularity.

    This is the single-phase optimizer: no aggregation happens here. Every
    accepted move strictly increases modularity; ``on_accepted_move`` (if
    given) fires after each accepted move with (state, node, source
    community, destination community, net gain).
    """
    if state is None:
        state = MoveState(g)
    while True:
        sweep_gain = 0.0
        moved = 0
        for x in order:
            k_x = g.weighted_degree(x)
            if k_x == 0.0:
                continue
            links = state.neighbor_weights(x)
            home = state.remove(x, links)
            gain_home = state.insertion_gain(k_x, home, links.get(home, 0.0))
            best_c, best_gain = home, gain_home
            for c in sorted(links):
                if c == home:
                    continue
                gain_c = state.insertion_gain(k_x, c, links[c])
                if gain_c > best_gain:
                    best_gain, best_c = gain_c, c
            state.insert(x, best_c, links)
            if best_c != home:
                moved += 1
                sweep_gain += best_gain - gain_home
                if on_accepted_move is not None:
                    on_accepted_move(state, x, home, best_c, best_gain - gain_home)
        if not moved or sweep_gain < SWEEP_GAIN_EPS:
            break
    return state


@dataclass(frozen=True)
class LouvainResult:
    """Hierarchy produced by :func:`detect`: one level per pass, finest first.

    Each level partitions the original node set; coarser levels are unions
    of finer-level communities and modularity is non-decreasing across
    levels.
    """

    levels: tuple[tuple[frozenset[int], ...], ...]
    modularities: tuple[float, ...]
    seed: int

    def best_level(self) -> tuple[frozenset[int], ...]:
        return self.levels[-1]


def detect(g: Graph, seed: int = 0, max_passes: int = 20) -> LouvainResult:
    """Full Louvain: local-move sweeps then community aggregation, repeated.

    Each pass shuffles the node visit order once (seed-determined, fixed for
    all sweeps within the pass), optimizes locally, records the induced
    partition of the original nodes as a level, and aggregates communities
    into a coarser graph. Passes stop when modularity no longer increases or
    ``max_passes`` is reached. Deterministic for a given (graph, seed).
    """
    if g.total_weight == 0.0:
        raise ValueError("Louvain requires a graph with at least one edge")
    rng = random.Random(seed)
    current = g
    carry: dict[int, tuple[int, ...]] = {x: (x,) for x in g.nodes()}
    levels: list[tuple[frozenset[int], ...]] = []
    mods: list[float] = []
    for _ in range(max_passes):
        order = sorted(current.nodes())
        rng.shuffle(order)
        state = local_sweeps(current, order)
        groups = state.communities()
        level = tuple(
            frozenset(itertools.chain.from_iterable(carry[x] for x in grp))
            for grp in groups
        )
        mod = modularity(g, level)
        if mods and mod <= mods[-1] + 1e-12:
            break
        levels.append(level)
        mods.append(mod)
        if len(groups) == current.number_of_nodes():
            break
        current, carry = _aggregate(current, groups, carry)
    return LouvainResult(tuple(levels), tuple(mods), seed)


def _aggregate(
    g: Graph, groups: list[list[int]], carry: dict[int, tuple[int, ...]]
) -> tuple[Graph, dict[int, tuple[int, ...]]]:
    """Collapse each group into a supernode, preserving total weight and degrees.

    Intra-group weight W becomes a diagonal entry 2W (plus any existing
    diagonal), so supernode degrees equal the sum of member degrees.
    """
    comm_of = {x: gi for gi, grp in enumerate(groups) for x in grp}
    diag: dict[int, float] = defaultdict(float)
    cross: dict[tuple[int, int], float] = defaultdict(float)
    for u, v, w in g.edges():
        cu, cv = comm_of[u], comm_of[v]
        if cu == cv:
            diag[cu] += w if u == v else 2.0 * w
        else:
            key = (cu, cv) if cu < cv else (cv, cu)
            cross[key] += w
    edges: list[tuple[int, int, float]] = [(c, c, w) for c, w in diag.items()]
    edges.extend((a, b, w) for (a, b), w in cross.items())
    new_carry = {
        gi: tuple(itertools.chain.from_iterable(carry[x] for x in grp))
        for gi, grp in enumerate(groups)
    }
    return Graph(range(len(groups)), edges, allow_self_loops=True), new_carry


def pick_level(result: LouvainResult, target_count: int) -> tuple[frozenset[int], ...]:
    """Level whose community count is nearest ``target_count``; ties go finer."""
    if not result.levels:
        raise ValueError("empty Louvain result")
    best = min(
        range(len(result.levels)),
        key=lambda i: (abs(len(result.levels[i]) - target_count), i),
    )
    return result.levels[best]
