"""Command-line front end.

Subcommands wrap the library one-to-one: ``analyze`` (full report), ``node`` /
``edge`` (single verdicts), ``cover`` (edges identified by one measured node),
``minmeasure`` (smallest sufficient measured set), ``verify`` (theorem vs.
rank-oracle agreement), ``simulate`` (end-to-end numeric recovery).

Exit codes: 0 identifiable / all-good, 1 not identifiable, 2 input error,
3 oracle disagreement.  ``--format structured`` emits stable JSON (the human
rendering is a pure view of the same data); the NETIDENT_FORMAT environment
variable sets the default format.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .identify import (
    EdgeStatus,
    EdgeVerdict,
    check_edge,
    check_node,
    full_report,
    measured_cover,
    min_measurement_set,
)
from .network import Network, NetworkError, parse_network
from .oracle import (
    DEFAULT_TRIALS,
    FieldDisagreement,
    OracleError,
    generic_edge_identifiable,
    verify_network,
)
from .simulate import (
    DEFAULT_ORDER,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EstimationError,
    SimulationError,
    run_pipeline,
    simulate,
    white_excitation,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_ORACLE = 3


def _load(path: str) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read())


def _emit(args: argparse.Namespace, payload: dict, human: str) -> None:
    if args.format == "structured":
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def _fmt_cert(cert_dict: dict) -> str:
    if cert_dict["type"] == "disjoint-paths":
        if not cert_dict["paths"]:
            return "no paths required"
        return "paths: " + "; ".join(" -> ".join(p) for p in cert_dict["paths"])
    return "cut: {" + ", ".join(cert_dict["nodes"]) + "}"


def cmd_analyze(args: argparse.Namespace) -> int:
    g = _load(args.file)
    report = full_report(g)
    payload = report.to_dict(explain=args.explain)
    lines = [
        f"network: {report.summary.nodes} nodes, {report.summary.edges} edges, "
        f"{report.summary.sources} sources, {report.summary.sinks} sinks, "
        f"measured {report.summary.measured} (max out-degree {report.summary.max_out_degree})"
    ]
    b = report.bounds
    lines.append(
        "bounds: counting {} (m={}, need >= {} measured) | out-degree {} | sinks {}{}".format(
            "ok" if b.counting_satisfied else "VIOLATED",
            b.extra_measured,
            b.counting_min_measured,
            "ok" if b.out_degree_satisfied else "VIOLATED",
            "ok" if b.sinks_satisfied else "VIOLATED",
            "" if b.sinks_satisfied else " (unmeasured: " + ", ".join(b.unmeasured_sinks) + ")",
        )
    )
    if report.shortcuts.multitree:
        lines.append(
            "shortcut: multitree"
            + (" with all sinks measured -> fully identifiable"
               if report.shortcuts.multitree_sinks_measured else "")
        )
    for note in report.shortcuts.cycles:
        lines.append(
            "shortcut: isolated cycle {}{}".format(
                " -> ".join(note.nodes),
                " (measured: identifiable)" if note.has_measured else " (no measured node)",
            )
        )
    for v in report.nodes:
        suffix = ""
        if args.explain:
            suffix = "  [" + _fmt_cert(v.to_dict(True)["certificate"]) + "]"
        lines.append(f"node {v.node}: {v.status.value} (d+={v.d_plus}){suffix}")
    for e in report.edges:
        basis = f" ({e.basis})" if e.basis else ""
        lines.append(f"edge {e.edge[0]} -> {e.edge[1]}: {e.status.value}{basis}")
    lines.append(
        "fully identifiable: " + ("yes" if report.fully_identifiable else "no")
    )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if report.fully_identifiable else EXIT_NEGATIVE


def cmd_node(args: argparse.Namespace) -> int:
    g = _load(args.file)
    verdict = check_node(g, args.node)
    payload = verdict.to_dict(explain=args.explain)
    human = f"node {verdict.node}: {verdict.status.value} (d+={verdict.d_plus})"
    if args.explain:
        human += "\n  " + _fmt_cert(verdict.to_dict(True)["certificate"])
    _emit(args, payload, human)
    return EXIT_OK if verdict.passes else EXIT_NEGATIVE


def cmd_edge(args: argparse.Namespace) -> int:
    g = _load(args.file)
    verdict = check_edge(g, args.source, args.target)
    if args.oracle and verdict.status is EdgeStatus.UNKNOWN:
        ok = generic_edge_identifiable(
            g, args.source, args.target, trials=args.trials, seed=args.seed
        )
        verdict = EdgeVerdict(
            verdict.edge,
            EdgeStatus.IDENTIFIABLE if ok else EdgeStatus.NOT_IDENTIFIABLE,
            "oracle",
        )
    payload = verdict.to_dict()
    basis = f" ({verdict.basis})" if verdict.basis else ""
    _emit(
        args,
        payload,
        f"edge {verdict.edge[0]} -> {verdict.edge[1]}: {verdict.status.value}{basis}",
    )
    return EXIT_OK if verdict.status is EdgeStatus.IDENTIFIABLE else EXIT_NEGATIVE


def cmd_cover(args: argparse.Namespace) -> int:
    g = _load(args.file)
    edges = measured_cover(g, args.node)
    payload = {
        "node": args.node,
        "edges": [{"from": a, "to": b} for a, b in edges],
    }
    human = (
        f"measuring {args.node} identifies: "
        + (", ".join(f"{a} -> {b}" for a, b in edges) if edges else "(no edges)")
    )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_minmeasure(args: argparse.Namespace) -> int:
    g = _load(args.file)
    chosen = min_measurement_set(g, mode=args.mode)
    payload = {"mode": args.mode, "measured": list(chosen)}
    _emit(
        args,
        payload,
        f"minimal measured set ({args.mode}): {{{', '.join(chosen)}}} (size {len(chosen)})",
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = _load(args.file)
    table = verify_network(g, trials=args.trials, seed=args.seed)
    payload = table.to_dict()
    lines = ["node  theorem  oracle  agree"]
    for r in table.nodes:
        lines.append(
            f"{r.node:<5} {str(r.theorem):<8} {str(r.oracle):<7} {str(r.agree)}"
        )
    lines.append("edge         status                  oracle  agree")
    for e in table.edges:
        lines.append(
            f"{e.edge[0]} -> {e.edge[1]:<6} {e.status:<23} {str(e.oracle):<7} {str(e.agree)}"
        )
    lines.append("all agree: " + ("yes" if table.all_agree else "NO"))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if table.all_agree else EXIT_ORACLE


def _dump_signals(path: str, dyn, seed: int, n_samples: int) -> None:
    r = white_excitation(dyn.g.size, n_samples, seed + 1)
    w, _ = simulate(dyn, r)
    cols = [np.arange(n_samples)]
    names = ["t"]
    for j, lab in enumerate(dyn.g.labels):
        cols.append(r[j])
        names.append(f"r[{lab}]")
    for j, lab in enumerate(dyn.g.labels):
        cols.append(w[j])
        names.append(f"w[{lab}]")
    np.savetxt(
        path,
        np.column_stack(cols),
        header=" ".join(names),
        fmt="%.12g",
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    g = _load(args.file)
    result = run_pipeline(
        g, seed=args.seed, order=args.order, n_samples=args.samples
    )
    errors = result.edge_errors()
    edges_payload = []
    lines = [
        f"closed-loop FIR length: {result.order_hat + 1}",
        f"max fit residual: {float(np.max(result.estimate.residuals)) if result.estimate.residuals.size else 0.0:.3e}",
        "edge        unique  rel-error   true -> estimated coefficients",
    ]
    for e in g.edge_labels:
        true = result.dyn.coeffs[e]
        est = result.recovery.coeffs.get(e)
        unique = result.recovery.unique.get(e, False)
        err = errors.get(e)
        edges_payload.append(
            {
                "from": e[0],
                "to": e[1],
                "unique": unique,
                "relative_error": err,
                "true_coefficients": [float(x) for x in true],
                "estimated_coefficients": (
                    [float(x) for x in est] if est is not None else None
                ),
            }
        )
        err_txt = f"{err:.2e}" if err is not None else "-"
        est_txt = (
            "[" + ", ".join(f"{x:+.4f}" for x in est) + "]" if est is not None else "-"
        )
        true_txt = "[" + ", ".join(f"{x:+.4f}" for x in true) + "]"
        lines.append(
            f"{e[0]} -> {e[1]:<6} {str(unique):<7} {err_txt:<11} {true_txt} -> {est_txt}"
        )
    payload = {
        "order": args.order,
        "samples": args.samples,
        "seed": args.seed,
        "closed_loop_fir_length": result.order_hat + 1,
        "fit_residuals": [float(x) for x in result.estimate.residuals],
        "column_residuals": {
            k: float(v) for k, v in sorted(result.recovery.residuals.items())
        },
        "edges": edges_payload,
    }
    if args.dump_signals:
        _dump_signals(args.dump_signals, result.dyn, args.seed, args.samples)
        lines.append(f"signals written to {args.dump_signals}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netident",
        description="Decide which edge transfer functions of a measured LTI "
        "network are generically identifiable.",
    )
    default_format = os.environ.get("NETIDENT_FORMAT", "human")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="network document (JSON)")
        p.add_argument(
            "--format",
            choices=["human", "structured"],
            default=default_format,
            help="output format (default from NETIDENT_FORMAT, else human)",
        )

    p = sub.add_parser("analyze", help="full identifiability report")
    common(p)
    p.add_argument("--explain", action="store_true", help="attach certificates")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("node", help="verdict for one node's outgoing edges")
    common(p)
    p.add_argument("node")
    p.add_argument("--explain", action="store_true", help="attach certificate")
    p.set_defaults(func=cmd_node)

    p = sub.add_parser("edge", help="verdict for a single edge")
    common(p)
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="resolve unknown verdicts with the numeric rank oracle",
    )
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_edge)

    p = sub.add_parser("cover", help="edges identified by one measured node")
    common(p)
    p.add_argument("node")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("minmeasure", help="smallest sufficient measured set")
    common(p)
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.set_defaults(func=cmd_minmeasure)

    p = sub.add_parser("verify", help="cross-check verdicts against the rank oracle")
    common(p)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate dynamics and recover them")
    common(p)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument(
        "--dump-signals",
        metavar="PATH",
        help="write excitation and node signals as column-separated text",
    )
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FieldDisagreement as exc:
        print(f"oracle disagreement: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (NetworkError, OSError, SimulationError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
