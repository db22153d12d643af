"""Graph-theoretic identifiability verdicts for measured LTI networks.

The governing condition is path-based: all edges leaving node ``i`` are
(generically) identifiable from the measured set C exactly when there are
``d_i⁺`` pairwise vertex-disjoint paths from the out-neighbors of ``i`` into C
(trivial single-node paths allowed, disjointness includes endpoints).  Failing
nodes carry a minimum vertex cut as a counterexample certificate.

Per-edge sufficient tests (subset condition, unique-walk cover, isolated-cycle
rule) can certify individual edges even when a column fails as a whole; when
none applies the edge is reported *unknown by graph tests*, never negatively —
definitive negatives require the numeric rank oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .network import (
    Network,
    NetworkError,
    StructureSummary,
    _reach_set,
    _topo_order,
    is_multitree,
    isolated_cycles,
    sources_sinks,
    structure_summary,
    unique_walk,
)
from .paths import Bottleneck, PathCertificate, _solve


class NodeStatus(Enum):
    ALL_IDENTIFIABLE = "all-out-edges-identifiable"
    NOT_ALL_IDENTIFIABLE = "not-all-identifiable"
    NO_OUT_EDGES = "no-out-edges"


class EdgeStatus(Enum):
    IDENTIFIABLE = "identifiable"
    UNKNOWN = "unknown-by-graph-tests"
    # Only ever attached with rank-oracle backing; graph tests alone never
    # assert a negative.
    NOT_IDENTIFIABLE = "not-identifiable"


@dataclass(frozen=True)
class NodeVerdict:
    """Identifiability verdict for the edges leaving one node."""

    node: str
    out_neighbors: tuple[str, ...]
    d_plus: int
    status: NodeStatus
    certificate: PathCertificate | Bottleneck

    @property
    def passes(self) -> bool:
        return self.status is not NodeStatus.NOT_ALL_IDENTIFIABLE

    def to_dict(self, explain: bool = False) -> dict:
        out = {
            "node": self.node,
            "out_neighbors": list(self.out_neighbors),
            "d_plus": self.d_plus,
            "status": self.status.value,
        }
        if explain:
            out["certificate"] = _certificate_dict(self.certificate)
        return out


@dataclass(frozen=True)
class EdgeVerdict:
    """Identifiability verdict for a single edge, with the test that decided it."""

    edge: tuple[str, str]
    status: EdgeStatus
    basis: str | None

    def to_dict(self) -> dict:
        return {
            "from": self.edge[0],
            "to": self.edge[1],
            "status": self.status.value,
            "basis": self.basis,
        }


def _certificate_dict(cert: PathCertificate | Bottleneck) -> dict:
    if isinstance(cert, PathCertificate):
        return {"type": "disjoint-paths", "paths": [list(p) for p in cert.paths]}
    return {"type": "vertex-cut", "nodes": list(cert.nodes), "size": cert.b}


def _terminal_sinks(g: Network) -> tuple[str, ...]:
    """Sinks that terminate at least one edge.

    Such a sink must be measured (an in-edge's column can never reach C
    through it otherwise); isolated nodes are sinks too but carry no unknowns.
    """
    _, sinks = sources_sinks(g)
    return tuple(v for v in sinks if g.in_neighbors(v))


def check_node(g: Network, node: str) -> NodeVerdict:
    """Decide whether every edge leaving ``node`` is identifiable from g.measured."""
    outs = g.out_neighbors(node)
    d = len(outs)
    if d == 0:
        return NodeVerdict(node, outs, 0, NodeStatus.NO_OUT_EDGES, PathCertificate(()))
    measured = g.measured_labels
    if not measured:
        return NodeVerdict(
            node, outs, d, NodeStatus.NOT_ALL_IDENTIFIABLE, Bottleneck(())
        )
    count, cert, cut = _solve(g, outs, measured)
    if count == d:
        return NodeVerdict(node, outs, d, NodeStatus.ALL_IDENTIFIABLE, cert)
    return NodeVerdict(node, outs, d, NodeStatus.NOT_ALL_IDENTIFIABLE, cut)


def check_subset(
    g: Network, node: str, targets: Iterable[str]
) -> tuple[bool, tuple[str, ...]]:
    """Sufficient test for a *subset* of the edges leaving ``node``.

    The edges node->t for t in ``targets`` are identifiable if there are
    |targets| disjoint paths from ``targets`` into measured nodes that no other
    out-neighbor of ``node`` can reach (reachability includes the node itself).
    Returns (verdict, measured endpoints used); sufficient only — False is not
    a proof of non-identifiability.
    """
    nstar = sorted(set(targets), key=g.index_of)
    outs = set(g.out_neighbors(node))
    for v in nstar:
        if v not in outs:
            raise NetworkError(f"{v!r} is not an out-neighbor of {node!r}")
    if not nstar:
        return True, ()
    rest_idx = [g.index_of(v) for v in outs.difference(nstar)]
    tainted = _reach_set(g._out, rest_idx) if rest_idx else set()
    candidates = [m for m in g.measured if m not in tainted]
    if not candidates:
        return False, ()
    count, cert, _ = _solve(g, nstar, [g.label_of(m) for m in candidates])
    if count == len(nstar):
        ends = sorted((p[-1] for p in cert.paths), key=g.index_of)
        return True, tuple(ends)
    return False, ()


def measured_cover(g: Network, node: str) -> tuple[tuple[str, str], ...]:
    """Edges identified by measuring ``node``: those on a unique walk into it.

    For every other node ``i`` with exactly one walk i -> ... -> node, all edges
    on that walk are identifiable; returns their sorted union.  ``node`` must be
    measured.
    """
    j = g.index_of(node)
    if j not in g.measured:
        raise NetworkError(f"node {node!r} is not measured")
    covered: set[tuple[int, int]] = set()
    back = _reach_set(g._in, [j])
    for i in range(g.size):
        if i == j or i not in back:
            continue
        if not unique_walk(g, g.label_of(i), node):
            continue
        corridor = _reach_set(g._out, [i]) & back
        # With a unique walk the corridor is exactly the walk's node set and
        # its induced edges are the walk's edges, in topological order.
        order = _topo_order(g, corridor)
        for a, b in zip(order, order[1:]):
            covered.add((a, b))
    return tuple(
        (g.label_of(a), g.label_of(b)) for a, b in sorted(covered)
    )


def _cycle_edge_sets(g: Network) -> list[tuple[set[tuple[str, str]], bool]]:
    out = []
    measured = set(g.measured_labels)
    for cyc in isolated_cycles(g):
        pairs = set(zip(cyc, cyc[1:] + cyc[:1]))
        out.append((pairs, bool(measured.intersection(cyc))))
    return out


def check_edge(g: Network, a: str, b: str) -> EdgeVerdict:
    """Per-edge verdict for a -> b via the graph tests, in order:

    whole-column condition, subset condition, unique-walk cover, isolated-cycle
    rule.  Inconclusive tests yield UNKNOWN (never a definitive negative).
    """
    if not g.has_edge(a, b):
        raise NetworkError(f"no edge {a!r} -> {b!r}")
    node_ok = check_node(g, a).passes
    cover = set()
    for m in g.measured_labels:
        cover.update(measured_cover(g, m))
    return _edge_verdict(g, a, b, node_ok, cover, _cycle_edge_sets(g))


def _edge_verdict(
    g: Network,
    a: str,
    b: str,
    node_ok: bool,
    cover: set[tuple[str, str]],
    cycle_sets: list[tuple[set[tuple[str, str]], bool]],
) -> EdgeVerdict:
    if node_ok:
        return EdgeVerdict((a, b), EdgeStatus.IDENTIFIABLE, "node")
    if check_subset(g, a, (b,))[0]:
        return EdgeVerdict((a, b), EdgeStatus.IDENTIFIABLE, "subset")
    if (a, b) in cover:
        return EdgeVerdict((a, b), EdgeStatus.IDENTIFIABLE, "unique-walk")
    for pairs, has_measured in cycle_sets:
        if (a, b) in pairs and has_measured:
            return EdgeVerdict((a, b), EdgeStatus.IDENTIFIABLE, "cycle")
    return EdgeVerdict((a, b), EdgeStatus.UNKNOWN, None)


@dataclass(frozen=True)
class BoundChecks:
    """Necessary-condition counters: counting bound, out-degree bound, sink rule.

    ``extra_measured`` is the number of measured non-sink nodes (m); the
    counting bound requires (m + s)(L - s) >= n for n edges, L nodes, s sinks.
    """

    counting_satisfied: bool
    counting_min_measured: int
    extra_measured: int
    out_degree_satisfied: bool
    sinks_satisfied: bool
    # Sinks with incoming edges that are not measured (isolated nodes exempt).
    unmeasured_sinks: tuple[str, ...]

    @property
    def all_satisfied(self) -> bool:
        return (
            self.counting_satisfied
            and self.out_degree_satisfied
            and self.sinks_satisfied
        )

    def to_dict(self) -> dict:
        return {
            "counting_satisfied": self.counting_satisfied,
            "counting_min_measured": self.counting_min_measured,
            "extra_measured": self.extra_measured,
            "out_degree_satisfied": self.out_degree_satisfied,
            "sinks_satisfied": self.sinks_satisfied,
            "unmeasured_sinks": list(self.unmeasured_sinks),
            "all_satisfied": self.all_satisfied,
        }


def bound_checks(g: Network) -> BoundChecks:
    """Evaluate the three necessary conditions for full identifiability."""
    summary = structure_summary(g)
    _, sinks = sources_sinks(g)
    measured = set(g.measured_labels)
    unmeasured_sinks = tuple(
        v for v in _terminal_sinks(g) if v not in measured
    )
    m = len(measured.difference(sinks))
    s = summary.sinks
    L = summary.nodes
    n = summary.edges
    if L > s:
        counting_ok = (m + s) * (L - s) >= n
        counting_min = math.ceil(n / (L - s))
    else:
        counting_ok = n == 0
        counting_min = 0
    return BoundChecks(
        counting_satisfied=counting_ok,
        counting_min_measured=counting_min,
        extra_measured=m,
        out_degree_satisfied=summary.measured >= summary.max_out_degree,
        sinks_satisfied=not unmeasured_sinks,
        unmeasured_sinks=unmeasured_sinks,
    )


@dataclass(frozen=True)
class CycleNote:
    nodes: tuple[str, ...]
    has_measured: bool


@dataclass(frozen=True)
class Shortcuts:
    """Structure-class fast verdicts that bypass per-node flow checks."""

    multitree: bool
    multitree_sinks_measured: bool
    cycles: tuple[CycleNote, ...]

    def to_dict(self) -> dict:
        return {
            "multitree": self.multitree,
            "multitree_sinks_measured": self.multitree_sinks_measured,
            "isolated_cycles": [
                {"nodes": list(c.nodes), "has_measured": c.has_measured}
                for c in self.cycles
            ],
        }


@dataclass(frozen=True)
class IdentifiabilityReport:
    summary: StructureSummary
    nodes: tuple[NodeVerdict, ...]
    edges: tuple[EdgeVerdict, ...]
    bounds: BoundChecks
    shortcuts: Shortcuts
    fully_identifiable: bool

    def to_dict(self, explain: bool = False) -> dict:
        return {
            "summary": {
                "nodes": self.summary.nodes,
                "edges": self.summary.edges,
                "sources": self.summary.sources,
                "sinks": self.summary.sinks,
                "measured": self.summary.measured,
                "max_out_degree": self.summary.max_out_degree,
            },
            "nodes": [v.to_dict(explain) for v in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
            "bounds": self.bounds.to_dict(),
            "shortcuts": self.shortcuts.to_dict(),
            "fully_identifiable": self.fully_identifiable,
        }


def full_report(g: Network) -> IdentifiabilityReport:
    """Node-by-node and edge-by-edge verdicts plus bounds and shortcuts."""
    node_verdicts = tuple(check_node(g, v) for v in g.labels)
    node_ok = {v.node: v.passes for v in node_verdicts}
    cover: set[tuple[str, str]] = set()
    for m in g.measured_labels:
        cover.update(measured_cover(g, m))
    cycle_sets = _cycle_edge_sets(g)
    edge_verdicts = tuple(
        _edge_verdict(g, a, b, node_ok[a], cover, cycle_sets)
        for a, b in g.edge_labels
    )
    multitree = is_multitree(g)
    shortcuts = Shortcuts(
        multitree=multitree,
        multitree_sinks_measured=multitree
        and set(_terminal_sinks(g)) <= set(g.measured_labels),
        cycles=tuple(
            CycleNote(cyc, bool(set(cyc) & set(g.measured_labels)))
            for cyc in isolated_cycles(g)
        ),
    )
    return IdentifiabilityReport(
        summary=structure_summary(g),
        nodes=node_verdicts,
        edges=edge_verdicts,
        bounds=bound_checks(g),
        shortcuts=shortcuts,
        fully_identifiable=all(v.passes for v in node_verdicts),
    )


def _all_nodes_pass(g: Network) -> bool:
    return all(check_node(g, v).passes for v in g.labels if g.out_degree(v))


def _search_lower_bound(g: Network, n_sinks: int) -> int:
    summary = structure_summary(g)
    counting = (
        math.ceil(summary.edges / (summary.nodes - summary.sinks))
        if summary.nodes > summary.sinks
        else 0
    )
    return max(counting, summary.max_out_degree, n_sinks)


def min_measurement_set(g: Network, mode: str = "exact") -> tuple[str, ...]:
    """Smallest measured set making the whole network identifiable.

    Sinks that terminate an edge are always required, so the search runs over
    supersets of that set.  ``exact`` enumerates candidate sets by size then
    lexicographically (guarded to 20 nodes); ``greedy`` repeatedly adds the
    node fixing the most failing columns (ties broken lexicographically) and
    is not optimal.  Returns labels sorted by declaration order.
    """
    if mode not in ("exact", "greedy"):
        raise NetworkError(f"unknown search mode {mode!r}")
    sinks = sorted(_terminal_sinks(g))
    if mode == "exact":
        if g.size > 20:
            raise NetworkError("exact search is limited to networks of at most 20 nodes")
        others = sorted(v for v in g.labels if v not in set(sinks))
        lower = _search_lower_bound(g, len(sinks))
        for k in range(max(lower, len(sinks)), g.size + 1):
            for extra in combinations(others, k - len(sinks)):
                candidate = sinks + list(extra)
                if _all_nodes_pass(g.with_measured(candidate)):
                    return tuple(sorted(candidate, key=g.index_of))
        raise AssertionError("measuring every node always succeeds")
    chosen = set(sinks)
    while not _all_nodes_pass(g.with_measured(chosen)):
        current = g.with_measured(chosen)
        failing = [
            v
            for v in g.labels
            if g.out_degree(v) and not check_node(current, v).passes
        ]
        best, best_fixed = None, -1
        for cand in sorted(v for v in g.labels if v not in chosen):
            trial = g.with_measured(chosen | {cand})
            fixed = sum(1 for v in failing if check_node(trial, v).passes)
            if fixed > best_fixed:
                best, best_fixed = cand, fixed
        assert best is not None
        chosen.add(best)
    return tuple(sorted(chosen, key=g.index_of))
