"""Independent brute-force oracles and random generators for the test suite.

Everything here is deliberately naive (exhaustive enumeration, no flow, no
matrix algebra) so it can cross-check the package's algorithms.
"""

from __future__ import annotations

import random
from itertools import combinations

from hypothesis import strategies as st

from netident import Network


# ---------------------------------------------------------------------------
# exhaustive path / walk / cycle enumeration


def simple_paths(g: Network, a: str, b: str) -> list[tuple[str, ...]]:
    """All simple directed paths a -> b, including the trivial path when a == b."""
    if a == b:
        return [(a,)]
    out = []

    def walk(v: str, seen: tuple[str, ...]):
        for w in g.out_neighbors(v):
            if w == b:
                out.append(seen + (w,))
            elif w not in seen:
                walk(w, seen + (w,))

    walk(a, (a,))
    return out


def count_walks(g: Network, a: str, b: str, length: int) -> int:
    """Walks of exactly ``length`` steps from a to b, by literal enumeration."""
    if length == 0:
        return int(a == b)
    total = 0
    stack = [(a, 0)]
    while stack:
        v, steps = stack.pop()
        if steps == length:
            total += int(v == b)
            continue
        for w in g.out_neighbors(v):
            stack.append((w, steps + 1))
    return total


def walk_endpoint_tally(g: Network, a: str, length: int) -> dict[str, int]:
    """Walks of exactly ``length`` steps from a to every endpoint, one DFS pass."""
    tally = {v: 0 for v in g.labels}
    stack = [(a, 0)]
    while stack:
        v, steps = stack.pop()
        if steps == length:
            tally[v] += 1
            continue
        for w in g.out_neighbors(v):
            stack.append((w, steps + 1))
    return tally


def walk_unique(g: Network, a: str, b: str) -> bool:
    """Exactly one walk a -> b?  Walk counts beyond 2L-1 imply a repeated node,
    hence a cycle on the corridor and infinitely many walks."""
    total = 0
    for length in range(1, 2 * g.size):
        total += count_walks(g, a, b, length)
        if total > 1:
            return False
    return total == 1


def simple_cycles(g: Network) -> list[tuple[str, ...]]:
    """All simple directed cycles, each rotated to start at its smallest label."""
    found = set()
    labels = sorted(g.labels)
    for start in labels:
        def walk(v: str, seen: tuple[str, ...]):
            for w in g.out_neighbors(v):
                if w == start:
                    rot = seen.index(min(seen))
                    found.add(seen[rot:] + seen[:rot])
                elif w not in seen and w > start:
                    walk(w, seen + (w,))

        walk(start, (start,))
    return sorted(found)


def isolated_cycles_brute(g: Network) -> list[tuple[str, ...]]:
    cycles = simple_cycles(g)
    out = []
    for c in cycles:
        others = set()
        for d in cycles:
            if d != c:
                others.update(d)
        if not others.intersection(c):
            out.append(c)
    return sorted(out)


def is_multitree_brute(g: Network) -> bool:
    if simple_cycles(g):
        return False
    for a in g.labels:
        for b in g.labels:
            if a != b and len(simple_paths(g, a, b)) > 1:
                return False
    return True


# ---------------------------------------------------------------------------
# exhaustive disjoint-path packing and vertex cuts


def _candidate_paths(g: Network, sources, targets) -> list[tuple[str, ...]]:
    paths = []
    for s in sorted(set(sources)):
        for t in sorted(set(targets)):
            if s == t:
                paths.append((s,))
            else:
                paths.extend(simple_paths(g, s, t))
    return paths


def max_disjoint_brute(g: Network, sources, targets) -> int:
    """Largest pairwise vertex-disjoint subfamily, by exhaustive search."""
    paths = _candidate_paths(g, sources, targets)
    sets = [frozenset(p) for p in paths]
    best = 0

    def extend(idx: int, used: frozenset, count: int):
        nonlocal best
        best = max(best, count)
        if count + (len(paths) - idx) <= best:
            return
        for i in range(idx, len(paths)):
            if not sets[i] & used:
                extend(i + 1, used | sets[i], count + 1)

    extend(0, frozenset(), 0)
    return best


def min_cut_brute(g: Network, sources, targets) -> int:
    """Size of the smallest node set meeting every source->target path."""
    paths = _candidate_paths(g, sources, targets)
    if not paths:
        return 0
    nodes = sorted(set().union(*[set(p) for p in paths]))
    for k in range(len(nodes) + 1):
        for cut in combinations(nodes, k):
            blocked = set(cut)
            if all(blocked & set(p) for p in paths):
                return k
    raise AssertionError("cutting every candidate node always works")


# ---------------------------------------------------------------------------
# seeded random generators (plain random.Random for reproducible suites)


def random_network(
    rnd: random.Random,
    max_nodes: int,
    min_nodes: int = 2,
    allow_empty_measured: bool = True,
) -> Network:
    L = rnd.randint(min_nodes, max_nodes)
    labels = [f"v{i}" for i in range(L)]
    p_edge = rnd.uniform(0.1, 0.5)
    edges = [
        (a, b)
        for a in labels
        for b in labels
        if a != b and rnd.random() < p_edge
    ]
    p_meas = rnd.uniform(0.2, 0.8)
    measured = [v for v in labels if rnd.random() < p_meas]
    if not measured and not allow_empty_measured:
        measured = [rnd.choice(labels)]
    return Network.build(labels, edges, measured)


def random_multitree(rnd: random.Random, max_nodes: int) -> Network:
    """Random forest (every node has at most one parent): always a multitree."""
    L = rnd.randint(2, max_nodes)
    labels = [f"v{i}" for i in range(L)]
    edges = []
    for i in range(1, L):
        if rnd.random() < 0.8:
            parent = rnd.randrange(i)
            edges.append((labels[parent], labels[i]))
    return Network.build(labels, edges, [])


def lone_cycle(length: int, measured_at: int) -> Network:
    labels = [f"c{i}" for i in range(length)]
    edges = [(labels[i], labels[(i + 1) % length]) for i in range(length)]
    return Network.build(labels, edges, [labels[measured_at % length]])


# ---------------------------------------------------------------------------
# hypothesis strategies


@st.composite
def networks(
    draw,
    max_nodes: int = 6,
    require_measured: bool = False,
    require_edges: bool = False,
):
    L = draw(st.integers(1, max_nodes))
    labels = [f"n{i}" for i in range(L)]
    pairs = [(a, b) for a in labels for b in labels if a != b]
    if pairs:
        min_edges = 1 if require_edges else 0
        edges = draw(
            st.lists(
                st.sampled_from(pairs), min_size=min_edges, unique=True, max_size=len(pairs)
            )
        )
    else:
        edges = []
    min_meas = 1 if require_measured else 0
    measured = draw(
        st.lists(st.sampled_from(labels), min_size=min_meas, unique=True, max_size=L)
    )
    return Network.build(labels, edges, measured)


@st.composite
def networks_with_node_pair(draw, max_nodes: int = 6):
    g = draw(networks(max_nodes=max_nodes))
    if g.size < 2:
        g = Network.build(["n0", "n1"], [], g.measured_labels)
    a = draw(st.sampled_from(sorted(g.labels)))
    b = draw(st.sampled_from(sorted(set(g.labels) - {a})))
    return g, a, b
