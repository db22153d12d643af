"""Randomized generic-rank oracle, independent of the graph-theoretic engine.

Identifiability of edges leaving node ``i`` from measurements C reduces to a
rank statement about the closed-loop response T = (I - G)^-1 of a random
instantiation: the column block T[C, N_i⁺] must have full column rank (and for
a single edge, dropping its column must lower the rank).  Since these are
generic (almost-everywhere) properties, evaluating them on random instances
decides them with overwhelming probability; verdicts are computed over the
reals *and* over the prime field GF(2^61 - 1) and must agree.

Real instances keep all edge weights positive so every entry of T is a
cancellation-free sum of walk gains: structural zeros are exact and tiny
long-path entries retain full relative precision, which keeps singular-value
rank thresholds honest.  Submatrices are equilibrated by exact powers of two
(rank-preserving) before thresholding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import gf
from .network import Network, NetworkError
from .paths import PathCertificate

DEFAULT_TRIALS = 8
_RETRY_SHIFT = 6151  # seed offset for the single disagreement retry
_RANK_REL_TOL = 1e-9


class OracleError(RuntimeError):
    """Raised when the oracle cannot produce a trustworthy verdict."""


class FieldDisagreement(OracleError):
    """Real and prime-field verdicts disagreed even after a retry."""


@dataclass(frozen=True)
class RankQuery:
    """A generic-rank question: rank of T[rows, cols] vs. the expected value."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    expected: int


@dataclass(frozen=True, eq=False)
class GenericInstance:
    """One random instantiation of the network's transfer matrices.

    ``gmat``/``tmat`` are numpy float arrays for the real field and nested int
    lists for the prime field; indices follow node declaration order with
    entry (i, j) weighting the edge j -> i.
    """

    field: str
    gmat: object
    tmat: object

    def submatrix_rank(self, rows: Iterable[int], cols: Iterable[int]) -> int:
        rows = list(rows)
        cols = list(cols)
        if not rows or not cols:
            return 0
        if self.field == "real":
            return _real_rank(self.tmat[np.ix_(rows, cols)])
        return gf.rank([[self.tmat[r][c] for c in cols] for r in rows])


def _equilibrate(m: np.ndarray) -> np.ndarray:
    """Scale rows then columns by exact powers of two onto a common magnitude."""
    m = m.copy()
    for axis in (1, 0):
        peak = np.max(np.abs(m), axis=axis, keepdims=True)
        scale = np.ones_like(peak)
        nz = peak > 0
        scale[nz] = np.exp2(-np.floor(np.log2(peak[nz])))
        m *= scale
    return m


def _real_rank(m: np.ndarray, rel_tol: float = _RANK_REL_TOL) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(_equilibrate(m), compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv > sv[0] * rel_tol))


def _real_instance(g: Network, seed: int) -> GenericInstance:
    rng = np.random.default_rng(seed)
    L = g.size
    vals = rng.uniform(0.1, 1.0, size=len(g.edges)) / max(L, 1)
    G = np.zeros((L, L))
    for (a, b), v in zip(g.edges, vals):
        G[b, a] = v
    # (I-G)^-1 as the telescoping product (I+G)(I+G^2)(I+G^4)...: all terms
    # positive, so structural zeros and tiny path gains are computed exactly /
    # to full relative precision.  Row sums < 1 guarantee convergence.
    T = np.eye(L) + G
    sq = G
    for _ in range(12):
        sq = sq @ sq
        T = T + T @ sq
    cond_bound = np.linalg.norm(np.eye(L) - G, np.inf) * np.linalg.norm(T, np.inf)
    assert cond_bound < 1e6, "sampled instance is ill-conditioned"
    return GenericInstance("real", G, T)


def _prime_instance(g: Network, seed: int) -> GenericInstance:
    L = g.size
    for attempt in range(64):
        rnd = random.Random(seed * 1000003 + attempt)
        G = [[0] * L for _ in range(L)]
        for a, b in g.edges:
            G[b][a] = rnd.randrange(1, gf.P)
        M = [
            [(int(i == j) - G[i][j]) % gf.P for j in range(L)]
            for i in range(L)
        ]
        T = gf.mat_inv(M)
        if T is not None:
            return GenericInstance("prime", G, T)
    raise OracleError("could not sample an invertible prime-field instance")


@lru_cache(maxsize=4096)
def random_instance(g: Network, seed: int, field: str = "real") -> GenericInstance:
    """Random weights on g's edges plus the induced closed-loop matrix.

    Real: entries uniform in [0.1, 1]/L (spectral radius < 1 by row sums).
    Prime: entries uniform nonzero in GF(2^61 - 1), resampled if I - G is
    singular.  Deterministic in (g, seed, field).
    """
    if field == "real":
        return _real_instance(g, seed)
    if field == "prime":
        return _prime_instance(g, seed)
    raise NetworkError(f"unknown field {field!r}")


def generic_rank(
    g: Network,
    rows: Iterable[str],
    cols: Iterable[str],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    field: str = "real",
) -> int:
    """Generic rank of T[rows, cols]: max over random instances (sub-seeds seed+t)."""
    ridx = [g.index_of(v) for v in rows]
    cidx = [g.index_of(v) for v in cols]
    return max(
        random_instance(g, seed + t, field).submatrix_rank(ridx, cidx)
        for t in range(trials)
    )


def column_rank_query(g: Network, node: str) -> RankQuery:
    """The rank question deciding all edges leaving ``node`` at once."""
    outs = g.out_neighbors(node)
    return RankQuery(rows=g.measured_labels, cols=outs, expected=len(outs))


def _two_field_verdict(decide, seed: int) -> bool:
    real = decide("real", seed)
    prime = decide("prime", seed)
    if real == prime:
        return real
    real2 = decide("real", seed + _RETRY_SHIFT)
    prime2 = decide("prime", seed + _RETRY_SHIFT)
    if real2 == prime2:
        return real2
    raise FieldDisagreement(
        f"real field says {real2}, prime field says {prime2}"
    )


def generic_column_identifiable(
    g: Network, node: str, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> bool:
    """Numeric counterpart of the per-node graph condition.

    True iff T[measured, out-neighbors] has full column rank generically,
    checked over both fields (which must agree).
    """
    query = column_rank_query(g, node)
    if query.expected == 0:
        return True

    def decide(field: str, s: int) -> bool:
        return (
            generic_rank(g, query.rows, query.cols, trials, s, field)
            == query.expected
        )

    return _two_field_verdict(decide, seed)


def generic_edge_identifiable(
    g: Network, a: str, b: str, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> bool:
    """True iff edge a -> b is generically identifiable from the measured set.

    Rank test: dropping b's column from T[measured, N_a⁺] must lower the rank
    (equivalently, no null direction touches that column).  Both fields must
    agree.
    """
    if not g.has_edge(a, b):
        raise NetworkError(f"no edge {a!r} -> {b!r}")
    cols = g.out_neighbors(a)
    rest = tuple(v for v in cols if v != b)
    rows = g.measured_labels

    def decide(field: str, s: int) -> bool:
        full = generic_rank(g, rows, cols, trials, s, field)
        dropped = generic_rank(g, rows, rest, trials, s, field)
        return full == dropped + 1

    return _two_field_verdict(decide, seed)


def lemma_walk_count(g: Network, k: int) -> list[list[int]]:
    """Exact k-step walk counts: entry (i, j) counts length-k walks j -> i."""
    if k < 0:
        raise NetworkError("walk length must be nonnegative")
    L = g.size
    A = [[0] * L for _ in range(L)]
    for a, b in g.edges:
        A[b][a] = 1
    out = [[int(i == j) for j in range(L)] for i in range(L)]
    for _ in range(k):
        out = _int_mat_mul(out, A)
    return out


def _int_mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Plain integer matrix product (exact, arbitrary precision)."""
    n = len(b[0]) if b else 0
    return [[sum(x * b[k][j] for k, x in enumerate(row)) for j in range(n)] for row in a]


def lemma_disjoint_permutation(paths: Iterable[Iterable[str]] | PathCertificate) -> bool:
    """Check the disjoint-path submatrix identity on a path family.

    For vertex-disjoint paths with 0/1 adjacency restricted to their union,
    (I - A)^-1 restricted to (targets x sources) must be the identity pairing
    each path's end to its start — in particular a permutation matrix.  Raises
    on overlapping paths.
    """
    if isinstance(paths, PathCertificate):
        paths = paths.paths
    family = [tuple(p) for p in paths]
    nodes: list[str] = []
    seen: set[str] = set()
    for p in family:
        if not p:
            raise NetworkError("empty path in family")
        for v in p:
            if v in seen:
                raise NetworkError(f"paths overlap at node {v!r}")
            seen.add(v)
            nodes.append(v)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    A = [[0] * n for _ in range(n)]
    for p in family:
        for a, b in zip(p, p[1:]):
            A[idx[b]][idx[a]] = 1
    # A is nilpotent (disjoint simple paths), so the inverse is the finite
    # geometric series, exact over the integers.
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    power = [row[:] for row in A]
    for _ in range(n):
        T = [[t + q for t, q in zip(tr, qr)] for tr, qr in zip(T, power)]
        power = _int_mat_mul(power, A)
    sub = [[T[idx[p[-1]]][idx[q[0]]] for q in family] for p in family]
    for i, row in enumerate(sub):
        for j, entry in enumerate(row):
            if entry != (1 if i == j else 0):
                return False
    # Permutation-matrix sanity on the restriction (identity passes trivially).
    return all(sum(row) == 1 for row in sub) and all(
        sum(col) == 1 for col in zip(*sub)
    )


def lemma_partition_rank_bound(
    g: Network,
    upstream: Iterable[str],
    cut: Iterable[str],
    downstream: Iterable[str],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> bool:
    """Check the separator rank bound on random real instances.

    For a partition (S=upstream, B=cut, P=downstream) of the nodes with no
    direct S -> P edge, rank(T[P ∪ B, S ∪ B]) <= |B| in every trial, and the
    factorization T[P,S] = (I - G[P,P])^-1 G[P,B] T[B,S] holds to 1e-9
    relative.
    """
    S = sorted({g.index_of(v) for v in upstream})
    B = sorted({g.index_of(v) for v in cut})
    Pp = sorted({g.index_of(v) for v in downstream})
    if set(S) & set(B) or set(S) & set(Pp) or set(B) & set(Pp):
        raise NetworkError("partition blocks must be disjoint")
    if len(S) + len(B) + len(Pp) != g.size:
        raise NetworkError("partition must cover every node")
    sset, pset = set(S), set(Pp)
    for a, b in g.edges:
        if a in sset and b in pset:
            raise NetworkError(
                f"edge {g.label_of(a)!r} -> {g.label_of(b)!r} crosses the cut"
            )
    rows = Pp + B
    cols = S + B
    for t in range(trials):
        inst = random_instance(g, seed + t, "real")
        T = inst.tmat
        G = inst.gmat
        if rows and cols and inst.submatrix_rank(rows, cols) > len(B):
            return False
        if S and Pp:
            t_ps = T[np.ix_(Pp, S)]
            g_pp = G[np.ix_(Pp, Pp)]
            g_pb = G[np.ix_(Pp, B)]
            t_bs = T[np.ix_(B, S)]
            predicted = np.linalg.solve(np.eye(len(Pp)) - g_pp, g_pb @ t_bs)
            err = np.linalg.norm(t_ps - predicted)
            if err > 1e-9 * max(1.0, np.linalg.norm(t_ps)):
                return False
    return True


@dataclass(frozen=True)
class NodeAgreement:
    node: str
    theorem: bool
    oracle: bool

    @property
    def agree(self) -> bool:
        return self.theorem == self.oracle


@dataclass(frozen=True)
class EdgeAgreement:
    edge: tuple[str, str]
    status: str
    oracle: bool

    @property
    def agree(self) -> bool:
        # Graph tests are sound but incomplete: an identifiable claim must be
        # confirmed; unknowns cannot disagree.
        return self.oracle or self.status != "identifiable"


@dataclass(frozen=True)
class VerificationTable:
    nodes: tuple[NodeAgreement, ...]
    edges: tuple[EdgeAgreement, ...]

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.nodes) and all(r.agree for r in self.edges)

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "node": r.node,
                    "theorem": r.theorem,
                    "oracle": r.oracle,
                    "agree": r.agree,
                }
                for r in self.nodes
            ],
            "edges": [
                {
                    "from": r.edge[0],
                    "to": r.edge[1],
                    "status": r.status,
                    "oracle": r.oracle,
                    "agree": r.agree,
                }
                for r in self.edges
            ],
            "all_agree": self.all_agree,
        }


def verify_network(
    g: Network, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> VerificationTable:
    """Cross-check every node and edge verdict against the rank oracle."""
    from .identify import check_edge, check_node

    nodes = tuple(
        NodeAgreement(
            node=v,
            theorem=check_node(g, v).passes,
            oracle=generic_column_identifiable(g, v, trials, seed),
        )
        for v in g.labels
    )
    edges = tuple(
        EdgeAgreement(
            edge=(a, b),
            status=check_edge(g, a, b).status.value,
            oracle=generic_edge_identifiable(g, a, b, trials, seed),
        )
        for a, b in g.edge_labels
    )
    return VerificationTable(nodes=nodes, edges=edges)
