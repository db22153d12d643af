#!/usr/bin/env python3
"""Randomized agreement sweep: graph theorems vs. numeric oracles at scale.

Three seeded experiments over random digraphs:
  duality    — max disjoint-path count equals min vertex-cut size, and both
               certificates verify;
  agreement  — the per-node graph condition matches the generic-rank oracle
               in real and prime-field arithmetic;
  recovery   — simulate-and-recover pipelines match the per-edge oracle and
               hit the target coefficient accuracy on identifiable edges.

Exits 0 only if every instance agrees.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass

from netident import (
    Network,
    check_node,
    column_rank_query,
    generic_edge_identifiable,
    generic_rank,
    max_disjoint_paths,
    min_vertex_cut,
    run_pipeline,
    verify_bottleneck,
    verify_path_certificate,
)


@dataclass(frozen=True)
class SweepConfig:
    graphs: int = 500
    max_nodes: int = 8
    pipelines: int = 25
    pipeline_max_nodes: int = 6
    trials: int = 8
    seed: int = 0
    error_budget: float = 1e-6


def random_network(rnd: random.Random, max_nodes: int, measured: bool) -> Network:
    L = rnd.randint(2, max_nodes)
    labels = [f"v{i}" for i in range(L)]
    p_edge = rnd.uniform(0.1, 0.5)
    edges = [
        (a, b) for a in labels for b in labels if a != b and rnd.random() < p_edge
    ]
    p_meas = rnd.uniform(0.2, 0.8)
    chosen = [v for v in labels if rnd.random() < p_meas]
    if measured and not chosen:
        chosen = [rnd.choice(labels)]
    return Network.build(labels, edges, chosen)


def sweep_duality(cfg: SweepConfig) -> int:
    rnd = random.Random(cfg.seed * 3 + 1)
    bad = 0
    for _ in range(cfg.graphs):
        g = random_network(rnd, cfg.max_nodes + 2, measured=False)
        labels = sorted(g.labels)
        sources = rnd.sample(labels, rnd.randint(1, len(labels)))
        targets = rnd.sample(labels, rnd.randint(1, len(labels)))
        count, cert = max_disjoint_paths(g, sources, targets)
        cut = min_vertex_cut(g, sources, targets)
        if not (
            count == cert.count == cut.b
            and verify_path_certificate(g, sources, targets, cert)
            and verify_bottleneck(g, sources, targets, cut)
        ):
            bad += 1
    return bad


def sweep_agreement(cfg: SweepConfig) -> int:
    rnd = random.Random(cfg.seed * 3 + 2)
    bad = 0
    for idx in range(cfg.graphs):
        g = random_network(rnd, cfg.max_nodes, measured=False)
        for node in g.labels:
            theorem = check_node(g, node).passes
            query = column_rank_query(g, node)
            for field in ("real", "prime"):
                rank = generic_rank(
                    g, query.rows, query.cols, cfg.trials, seed=idx, field=field
                )
                if (rank == query.expected) != theorem:
                    bad += 1
    return bad


def sweep_recovery(cfg: SweepConfig) -> tuple[int, float]:
    rnd = random.Random(cfg.seed * 3 + 3)
    bad = 0
    worst = 0.0
    for run in range(cfg.pipelines):
        g = random_network(rnd, cfg.pipeline_max_nodes, measured=True)
        if not g.edges:
            continue
        result = run_pipeline(g, seed=cfg.seed + run, order=rnd.randint(1, 3))
        errors = result.edge_errors()
        for (a, b), flag in result.recovery.unique.items():
            oracle = generic_edge_identifiable(g, a, b, cfg.trials, seed=run)
            if flag != oracle:
                bad += 1
                continue
            if flag:
                err = errors[(a, b)]
                worst = max(worst, err)
                if err > cfg.error_budget:
                    bad += 1
    return bad, worst


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--graphs", type=int, default=500)
    parser.add_argument("--max-nodes", type=int, default=8)
    parser.add_argument("--pipelines", type=int, default=25)
    parser.add_argument("--trials", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--error-budget", type=float, default=1e-6)
    args = parser.parse_args(argv)
    cfg = SweepConfig(
        graphs=args.graphs,
        max_nodes=args.max_nodes,
        pipelines=args.pipelines,
        trials=args.trials,
        seed=args.seed,
        error_budget=args.error_budget,
    )

    t0 = time.perf_counter()
    bad_duality = sweep_duality(cfg)
    print(f"duality    : {cfg.graphs} digraphs, {bad_duality} violations "
          f"({time.perf_counter() - t0:.1f} s)")

    t0 = time.perf_counter()
    bad_agree = sweep_agreement(cfg)
    print(f"agreement  : {cfg.graphs} instances x 2 fields, {bad_agree} disagreements "
          f"({time.perf_counter() - t0:.1f} s)")

    t0 = time.perf_counter()
    bad_rec, worst = sweep_recovery(cfg)
    print(f"recovery   : {cfg.pipelines} pipelines, {bad_rec} violations, "
          f"worst identifiable-edge error {worst:.2e} "
          f"({time.perf_counter() - t0:.1f} s)")

    return 0 if bad_duality == bad_agree == bad_rec == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
