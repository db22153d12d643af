"""Network topology: the directed-graph model, file format, and structural queries.

A network is a simple directed graph (string node labels, no self-loops) with a
designated subset of *measured* nodes.  An edge ``(a, b)`` means a signal flows
from ``a`` into ``b``; in matrix form the transfer function sits at row ``b``,
column ``a``.

The on-disk document format is JSON::

    {
      "nodes": ["1", "2", "3"],
      "edges": [{"from": "1", "to": "2"}, {"from": "1", "to": "3"}],
      "measured": ["2", "3"]
    }

``parse_network`` / ``serialize_network`` round-trip this format; ``to_dot``
renders Graphviz with measured nodes drawn as double circles.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable


class NetworkError(ValueError):
    """Raised for malformed network documents or invalid node/edge references."""


@dataclass(frozen=True)
class Network:
    """Immutable directed network with measured-node designation.

    Attributes:
        labels: Node labels in declaration order; the position of a label is
            its internal index.
        edges: Canonically sorted ``(source_index, target_index)`` pairs.
        measured: Sorted indices of measured nodes.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    measured: tuple[int, ...]

    @classmethod
    def build(
        cls,
        nodes: Iterable[str],
        edges: Iterable[tuple[str, str]] = (),
        measured: Iterable[str] = (),
    ) -> "Network":
        """Construct and validate a network from label-level data."""
        labels = tuple(str(n) for n in nodes)
        if len(set(labels)) != len(labels):
            raise NetworkError("duplicate node labels")
        index = {lab: i for i, lab in enumerate(labels)}
        edge_set: set[tuple[int, int]] = set()
        for a, b in edges:
            if a not in index:
                raise NetworkError(f"edge references unknown node {a!r}")
            if b not in index:
                raise NetworkError(f"edge references unknown node {b!r}")
            if a == b:
                raise NetworkError(f"self-loop on node {a!r} not allowed")
            pair = (index[a], index[b])
            if pair in edge_set:
                raise NetworkError(f"duplicate edge {a!r} -> {b!r}")
            edge_set.add(pair)
        meas: set[int] = set()
        for m in measured:
            if m not in index:
                raise NetworkError(f"measured set references unknown node {m!r}")
            meas.add(index[m])
        return cls(labels, tuple(sorted(edge_set)), tuple(sorted(meas)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        lists: list[list[int]] = [[] for _ in self.labels]
        for a, b in self.edges:
            lists[a].append(b)
        return tuple(tuple(l) for l in lists)

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        lists: list[list[int]] = [[] for _ in self.labels]
        for a, b in self.edges:
            lists[b].append(a)
        return tuple(tuple(l) for l in lists)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise NetworkError(f"unknown node {label!r}") from None

    def label_of(self, i: int) -> str:
        return self.labels[i]

    def out_neighbors(self, label: str) -> tuple[str, ...]:
        """Targets of edges leaving ``label``, sorted by index."""
        return tuple(self.labels[j] for j in self._out[self.index_of(label)])

    def in_neighbors(self, label: str) -> tuple[str, ...]:
        """Sources of edges entering ``label``, sorted by index."""
        return tuple(self.labels[j] for j in self._in[self.index_of(label)])

    def out_degree(self, label: str) -> int:
        return len(self._out[self.index_of(label)])

    def has_edge(self, a: str, b: str) -> bool:
        return (self.index_of(a), self.index_of(b)) in set(self.edges)

    @property
    def edge_labels(self) -> tuple[tuple[str, str], ...]:
        return tuple((self.labels[a], self.labels[b]) for a, b in self.edges)

    @property
    def measured_labels(self) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in self.measured)

    def with_measured(self, measured: Iterable[str]) -> "Network":
        """Copy of this network with a different measured set."""
        return Network.build(self.labels, self.edge_labels, measured)


def parse_network(text: str) -> Network:
    """Parse a JSON network document; raises NetworkError on any malformation."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise NetworkError("document root must be an object")
    extra = set(doc) - {"nodes", "edges", "measured"}
    if extra:
        raise NetworkError(f"unknown document keys: {sorted(extra)}")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise NetworkError('"nodes" must be a list of strings')
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise NetworkError('"edges" must be a list')
    edges = []
    for e in raw_edges:
        if not isinstance(e, dict) or set(e) != {"from", "to"}:
            raise NetworkError('each edge must be an object with "from" and "to"')
        if not isinstance(e["from"], str) or not isinstance(e["to"], str):
            raise NetworkError("edge endpoints must be strings")
        edges.append((e["from"], e["to"]))
    measured = doc.get("measured", [])
    if not isinstance(measured, list) or not all(isinstance(m, str) for m in measured):
        raise NetworkError('"measured" must be a list of strings')
    return Network.build(nodes, edges, measured)


def serialize_network(g: Network) -> str:
    """Canonical JSON document for ``g`` (inverse of parse_network)."""
    doc = {
        "nodes": list(g.labels),
        "edges": [{"from": a, "to": b} for a, b in g.edge_labels],
        "measured": list(g.measured_labels),
    }
    return json.dumps(doc, indent=2) + "\n"


def to_dot(g: Network) -> str:
    """Graphviz rendering; measured nodes are double circles."""
    lines = ["digraph network {"]
    meas = set(g.measured)
    for i, lab in enumerate(g.labels):
        attr = " [shape=doublecircle]" if i in meas else ""
        lines.append(f'  "{lab}"{attr};')
    for a, b in g.edge_labels:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def sources_sinks(g: Network) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(sources, sinks): nodes with no incoming / no outgoing edges.

    Isolated nodes (no edges at all) count as both.
    """
    sources = tuple(lab for i, lab in enumerate(g.labels) if not g._in[i])
    sinks = tuple(lab for i, lab in enumerate(g.labels) if not g._out[i])
    return sources, sinks


def can_reach(g: Network, a: str, b: str) -> bool:
    """True iff a directed walk a -> ... -> b exists (trivially true for a == b)."""
    start, goal = g.index_of(a), g.index_of(b)
    if start == goal:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g._out[v]:
            if w == goal:
                return True
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def _reach_set(out: tuple[tuple[int, ...], ...], starts: Iterable[int]) -> set[int]:
    seen = set(starts)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in out[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def unique_walk(g: Network, a: str, b: str) -> bool:
    """True iff there is exactly one directed walk from ``a`` to ``b``.

    Considers the subgraph induced on nodes lying on some a->b walk: any cycle
    there yields infinitely many walks, otherwise walks coincide with paths and
    are counted exactly.  Requires ``a != b``.
    """
    ia, ib = g.index_of(a), g.index_of(b)
    if ia == ib:
        raise NetworkError("unique_walk requires distinct endpoints")
    fwd = _reach_set(g._out, [ia])
    back = _reach_set(g._in, [ib])
    between = fwd & back
    if ia not in between or ib not in between:
        return False
    # Cycle within the corridor => infinitely many walks.
    if not _induced_is_acyclic(g, between):
        return False
    return _dag_path_count(g, between, ia, ib) == 1


def _induced_is_acyclic(g: Network, nodes: set[int]) -> bool:
    indeg = {v: 0 for v in nodes}
    for v in nodes:
        for w in g._out[v]:
            if w in nodes:
                indeg[w] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    visited = 0
    while queue:
        v = queue.popleft()
        visited += 1
        for w in g._out[v]:
            if w in nodes:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return visited == len(nodes)


def _dag_path_count(g: Network, nodes: set[int], src: int, dst: int) -> int:
    order = _topo_order(g, nodes)
    counts = {v: 0 for v in nodes}
    counts[src] = 1
    for v in order:
        c = counts[v]
        if c:
            for w in g._out[v]:
                if w in nodes:
                    counts[w] += c
    return counts[dst]


def _topo_order(g: Network, nodes: set[int]) -> list[int]:
    indeg = {v: 0 for v in nodes}
    for v in nodes:
        for w in g._out[v]:
            if w in nodes:
                indeg[w] += 1
    queue = deque(sorted(v for v, d in indeg.items() if d == 0))
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g._out[v]:
            if w in nodes:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return order


def _warn_if_disconnected(g: Network) -> None:
    if g.size == 0:
        return
    undirected: list[set[int]] = [set() for _ in g.labels]
    for a, b in g.edges:
        undirected[a].add(b)
        undirected[b].add(a)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in undirected[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != g.size:
        warnings.warn(
            "network is weakly disconnected; multitree verdict applies to the whole node set",
            stacklevel=3,
        )


def is_multitree(g: Network) -> bool:
    """True iff the graph is acyclic and no ordered node pair has two distinct paths.

    Warns (UserWarning) when the graph is weakly disconnected; the verdict still
    follows the formal definition.
    """
    _warn_if_disconnected(g)
    all_nodes = set(range(g.size))
    if not _induced_is_acyclic(g, all_nodes):
        return False
    order = _topo_order(g, all_nodes)
    for src in range(g.size):
        counts = [0] * g.size
        counts[src] = 1
        for v in order:
            if counts[v]:
                for w in g._out[v]:
                    counts[w] += counts[v]
                    if w != src and counts[w] > 1:
                        return False
    return True


def _strongly_connected_components(g: Network) -> list[list[int]]:
    # Kosaraju with explicit stacks.
    n = g.size
    visited = [False] * n
    finish: list[int] = []
    for s in range(n):
        if visited[s]:
            continue
        stack: list[tuple[int, int]] = [(s, 0)]
        visited[s] = True
        while stack:
            v, ptr = stack.pop()
            if ptr < len(g._out[v]):
                stack.append((v, ptr + 1))
                w = g._out[v][ptr]
                if not visited[w]:
                    visited[w] = True
                    stack.append((w, 0))
            else:
                finish.append(v)
    comp = [-1] * n
    ncomp = 0
    for s in reversed(finish):
        if comp[s] != -1:
            continue
        comp[s] = ncomp
        stack2 = [s]
        while stack2:
            v = stack2.pop()
            for w in g._in[v]:
                if comp[w] == -1:
                    comp[w] = ncomp
                    stack2.append(w)
        ncomp += 1
    groups: list[list[int]] = [[] for _ in range(ncomp)]
    for v in range(n):
        groups[comp[v]].append(v)
    return groups


def isolated_cycles(g: Network) -> tuple[tuple[str, ...], ...]:
    """Simple directed cycles none of whose nodes lie on any other cycle.

    Detected as strongly connected components that are exactly a single cycle:
    at least two nodes, every member with in- and out-degree one inside the
    component.  Each cycle is returned in traversal order starting from its
    lowest-index node; cycles are ordered by that node.
    """
    cycles = []
    for group in _strongly_connected_components(g):
        if len(group) < 2:
            continue
        members = set(group)
        inner_out = {}
        ok = True
        for v in group:
            outs = [w for w in g._out[v] if w in members]
            ins = [w for w in g._in[v] if w in members]
            if len(outs) != 1 or len(ins) != 1:
                ok = False
                break
            inner_out[v] = outs[0]
        if not ok:
            continue
        start = min(group)
        cycle = [start]
        v = inner_out[start]
        while v != start:
            cycle.append(v)
            v = inner_out[v]
        cycles.append((min(group), tuple(g.labels[v] for v in cycle)))
    return tuple(c for _, c in sorted(cycles))


@dataclass(frozen=True)
class StructureSummary:
    """Node/edge/source/sink/measurement counts used by the counting bounds."""

    nodes: int
    edges: int
    sources: int
    sinks: int
    measured: int
    max_out_degree: int


def structure_summary(g: Network) -> StructureSummary:
    sources, sinks = sources_sinks(g)
    max_out = max((len(o) for o in g._out), default=0)
    return StructureSummary(
        nodes=g.size,
        edges=len(g.edges),
        sources=len(sources),
        sinks=len(sinks),
        measured=len(g.measured),
        max_out_degree=max_out,
    )
