"""Vertex-disjoint path packing and minimum vertex cuts between node sets.

Both questions reduce to max-flow on a node-split graph: every node ``v``
becomes an arc ``v_in -> v_out`` of capacity one, original edges run
``a_out -> b_in``, a super-source feeds the departure set and the arrival set
feeds a super-sink.  Non-node arcs get capacity ``L + 1`` so the flow value is
pinned by node arcs alone and every minimum cut consists of node arcs; the set
of cut nodes is then read off residual reachability.  Path families and cuts
certify each other (their sizes always match).

Departure and arrival sets may overlap: a shared node yields a trivial
single-node path, and disjointness includes endpoints.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .network import Network


@dataclass(frozen=True)
class PathCertificate:
    """A family of pairwise vertex-disjoint directed paths (as label tuples)."""

    paths: tuple[tuple[str, ...], ...]

    @property
    def count(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class Bottleneck:
    """A vertex cut meeting every path from the departure set to the arrival set."""

    nodes: tuple[str, ...]

    @property
    def b(self) -> int:
        return len(self.nodes)


class _FlowGraph:
    """Dinic max-flow with deterministic arc ordering."""

    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * len(self.adj)
        level[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for e in self.adj[v]:
                w = self.to[e]
                if self.cap[e] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    queue.append(w)
        return level if level[t] >= 0 else None

    def _push(self, s: int, t: int, level: list[int], it: list[int]) -> int:
        # Iterative DFS for one blocking-flow augmentation of value 1..cap.
        path: list[int] = []
        v = s
        while True:
            if v == t:
                bottleneck = min(self.cap[e] for e in path)
                for e in path:
                    self.cap[e] -= bottleneck
                    self.cap[e ^ 1] += bottleneck
                return bottleneck
            advanced = False
            while it[v] < len(self.adj[v]):
                e = self.adj[v][it[v]]
                w = self.to[e]
                if self.cap[e] > 0 and level[w] == level[v] + 1:
                    path.append(e)
                    v = w
                    advanced = True
                    break
                it[v] += 1
            if advanced:
                continue
            level[v] = -1
            if not path:
                return 0
            v = self.to[path[-1] ^ 1]
            it[v] += 1
            path.pop()

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * len(self.adj)
            while True:
                pushed = self._push(s, t, level[:], it)
                if pushed == 0:
                    break
                total += pushed

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for e in self.adj[v]:
                w = self.to[e]
                if self.cap[e] > 0 and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen


def _solve(
    g: Network, sources: Iterable[str], targets: Iterable[str]
) -> tuple[int, PathCertificate, Bottleneck]:
    src_idx = sorted({g.index_of(v) for v in sources})
    tgt_idx = sorted({g.index_of(v) for v in targets})
    if not src_idx or not tgt_idx:
        return 0, PathCertificate(()), Bottleneck(())
    n = g.size
    big = n + 1
    s, t = 2 * n, 2 * n + 1
    net = _FlowGraph(2 * n + 2)
    for v in range(n):  # arc ids 2v / 2v+1 are node v's split arc
        net.add(2 * v, 2 * v + 1, 1)
    for v in src_idx:
        net.add(s, 2 * v, big)
    for v in tgt_idx:
        net.add(2 * v + 1, t, big)
    for a, b in g.edges:
        net.add(2 * a + 1, 2 * b, big)

    flow = net.max_flow(s, t)

    # Decompose into vertex-disjoint paths: walk forward arcs carrying flow.
    remaining = [0] * len(net.to)
    for e in range(0, len(net.to), 2):
        remaining[e] = net.cap[e ^ 1]  # reverse residual == flow pushed
    paths = []
    for e in net.adj[s]:
        if e % 2 or not remaining[e]:
            continue
        remaining[e] -= 1
        v = net.to[e] // 2
        labels = [g.label_of(v)]
        node = 2 * v
        while True:
            nxt = None
            for e2 in net.adj[node]:
                if e2 % 2 == 0 and remaining[e2] > 0:
                    nxt = e2
                    break
            assert nxt is not None, "flow conservation violated during decomposition"
            remaining[nxt] -= 1
            dest = net.to[nxt]
            if dest == t:
                break
            if dest % 2 == 0 and dest // 2 != v:  # entered another node
                v = dest // 2
                labels.append(g.label_of(v))
            node = dest
        paths.append(tuple(labels))
    assert len(paths) == flow

    reach = net.residual_reachable(s)
    cut = tuple(
        g.label_of(v) for v in range(n) if 2 * v in reach and 2 * v + 1 not in reach
    )
    assert len(cut) == flow, "vertex cut size must equal max disjoint-path count"
    return flow, PathCertificate(tuple(paths)), Bottleneck(cut)


def max_disjoint_paths(
    g: Network, sources: Iterable[str], targets: Iterable[str]
) -> tuple[int, PathCertificate]:
    """Maximum number of pairwise vertex-disjoint paths from sources to targets."""
    count, cert, _ = _solve(g, sources, targets)
    return count, cert


def min_vertex_cut(
    g: Network, sources: Iterable[str], targets: Iterable[str]
) -> Bottleneck:
    """A minimum node set whose removal disconnects sources from targets.

    Source/target nodes themselves may appear in the cut (a shared node is a
    trivial path and must be cut).
    """
    _, _, cut = _solve(g, sources, targets)
    return cut


def verify_path_certificate(
    g: Network,
    sources: Iterable[str],
    targets: Iterable[str],
    cert: PathCertificate,
) -> bool:
    """Soundness check: paths exist in g, run source->target, and are disjoint."""
    src = set(sources)
    tgt = set(targets)
    seen: set[str] = set()
    for path in cert.paths:
        if not path or path[0] not in src or path[-1] not in tgt:
            return False
        if any(node in seen for node in path) or len(set(path)) != len(path):
            return False
        seen.update(path)
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                return False
    return True


def verify_bottleneck(
    g: Network,
    sources: Iterable[str],
    targets: Iterable[str],
    cut: Bottleneck,
) -> bool:
    """Soundness check: removing the cut leaves no source->target path.

    A node in both sets counts as a trivial path, so it must be in the cut.
    """
    blocked = set(cut.nodes)
    start = {g.index_of(v) for v in sources if v not in blocked}
    goal = {g.index_of(v) for v in targets if v not in blocked}
    blocked_idx = {g.index_of(v) for v in blocked}
    queue = deque(start)
    seen = set(start)
    while queue:
        v = queue.popleft()
        if v in goal:
            return False
        for w in g._out[v]:
            if w not in seen and w not in blocked_idx:
                seen.add(w)
                queue.append(w)
    return not (start & goal)
