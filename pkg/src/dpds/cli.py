"""Command-line interface.

Subcommands:
    run    parameter sweep over a dataset, CSV + sidecar output
    gen    write a synthetic graph as a canonical edge list
    fetch  download, normalize, and cache a public edge-list dataset
    audit  empirical privacy check on a tiny graph pair
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audit import (
    ALGORITHMS as AUDIT_ALGORITHMS,
    audit_privacy,
    broken_constants,
    mechanism_runner,
)
from .datasets import fetch_dataset, graph_from_spec, load_graph
from .experiments import (
    ALGORITHMS as RUN_ALGORITHMS,
    ExperimentConfig,
    run_experiment,
    write_outputs,
)
from .graph import Graph, serialize_edge_list
from .par import DEFAULT_MAX_ITERS
from .results import PrivacyParams
from .rng import RngStream

_ANALYZED_EPS_MAX = 1.0


def _float_list(text: str):
    return tuple(float(tok) for tok in text.split(",") if tok)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpds",
        description="Differentially private densest-subgraph toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a parameter sweep, emit CSV")
    p_run.add_argument("--algo", required=True, choices=RUN_ALGORITHMS)
    p_run.add_argument(
        "--graph",
        required=True,
        help="dataset: file path, cached name, or generator spec "
        "(er:<n>:<p>:seed=<s> | planted:<n>:<k>:<p>:seed=<s>)",
    )
    p_run.add_argument("--eps", type=_float_list, default=(1.0,),
                       help="comma-separated epsilon grid (default 1)")
    p_run.add_argument("--delta", type=_float_list, default=(1e-6,),
                       help="comma-separated delta grid (default 1e-6)")
    p_run.add_argument("--trials", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0, help="master seed")
    p_run.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p_run.add_argument("--out", type=Path, default=None,
                       help="CSV path; stdout (no sidecars) if omitted")
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.add_argument("--trace", action="store_true",
                       help="also write per-trial trace JSON sidecars")
    p_run.add_argument("--timings", action="store_true",
                       help="fill wall_ms (breaks byte-for-byte reproducibility)")

    p_gen = sub.add_parser("gen", help="generate a synthetic graph")
    p_gen.add_argument("spec", help="er:<n>:<p>:seed=<s> | planted:<n>:<k>:<p>:seed=<s>")
    p_gen.add_argument("--out", type=Path, default=None, help="output path (default stdout)")

    p_fetch = sub.add_parser("fetch", help="download and cache a dataset")
    p_fetch.add_argument("name")
    p_fetch.add_argument("--url", default=None)
    p_fetch.add_argument("--expect", default=None, help="expected 'nodes,edges'")
    p_fetch.add_argument("--cache", type=Path, default=None,
                         help="cache directory (default $DPDS_CACHE or ~/.cache/dpds)")
    p_fetch.add_argument("--force", action="store_true", help="re-download")

    p_audit = sub.add_parser("audit", help="empirical privacy check")
    p_audit.add_argument("--algo", required=True, choices=AUDIT_ALGORITHMS)
    p_audit.add_argument("--eps", type=float, default=1.0)
    p_audit.add_argument("--delta", type=float, default=0.05)
    p_audit.add_argument("--samples", type=int, default=10**6)
    p_audit.add_argument(
        "--graph", default=None,
        help="tiny base graph (path or generator spec); default 4-node path",
    )
    p_audit.add_argument("--edge", default="0,2", help="edge to toggle, 'u,v'")
    p_audit.add_argument("--seed", type=int, default=0)
    p_audit.add_argument("--jobs", type=int, default=1)
    p_audit.add_argument("--mutant", action="store_true",
                         help="audit the deliberately broken variant instead")
    p_audit.add_argument("--out", type=Path, default=None,
                         help="JSON report path (default stdout)")
    return parser


def _cmd_run(args) -> int:
    config = ExperimentConfig(
        dataset=args.graph,
        algorithm=args.algo,
        eps_list=args.eps,
        delta_list=args.delta,
        trials=args.trials,
        master_seed=args.seed,
        max_iters=args.max_iters,
        jobs=args.jobs,
        trace=args.trace,
        timings=args.timings,
    )
    if args.algo != "baseline":
        total_runs = len(args.eps) * len(args.delta) * args.trials
        if total_runs > 1:
            print(
                f"note: {total_runs} private runs on the same data; repeated "
                "execution degrades the privacy guarantee, in the worst case "
                "linearly in the number of runs.",
                file=sys.stderr,
            )
        if any(eps > _ANALYZED_EPS_MAX for eps in args.eps):
            print(
                "note: epsilon above 1 is outside the analyzed regime; the "
                "stated accuracy bounds do not apply.",
                file=sys.stderr,
            )
    outputs, _ = run_experiment(config)
    if any(out.row["truncated"] for out in outputs):
        print(
            "warning: at least one run hit the iteration cap; truncated rows "
            "do not carry the intended privacy guarantee.",
            file=sys.stderr,
        )
    if args.out is None:
        write_outputs(outputs, None, sys.stdout)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_outputs(outputs, args.out, fh)
    return 0


def _cmd_gen(args) -> int:
    graph = graph_from_spec(args.spec)
    text = serialize_edge_list(graph)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {args.out} (n={graph.n}, m={graph.m})", file=sys.stderr)
    return 0


def _cmd_fetch(args) -> int:
    expect = None
    if args.expect:
        parts = args.expect.split(",")
        expect = (int(parts[0]), int(parts[1]))
    path, graph = fetch_dataset(
        args.name, url=args.url, expect=expect, cache=args.cache, force=args.force
    )
    print(f"{path} (n={graph.n}, m={graph.m})")
    return 0


def _default_audit_graph() -> Graph:
    return Graph(4, [(0, 1), (1, 2), (2, 3)])


def _cmd_audit(args) -> int:
    params = PrivacyParams(args.eps, args.delta)
    if args.graph is None:
        graph = _default_audit_graph()
    else:
        _, graph = load_graph(args.graph)
    u, v = (int(tok) for tok in args.edge.split(","))
    constants = broken_constants(args.algo, params) if args.mutant else None
    runner = mechanism_runner(args.algo, constants=constants)
    report = audit_privacy(
        runner, graph, (u, v), params, args.samples, RngStream(args.seed),
        jobs=args.jobs,
    )
    report["algorithm"] = args.algo
    report["mutant"] = bool(args.mutant)
    text = json.dumps(report, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    verdict = "pass" if report["pass"] else "FAIL"
    print(
        f"audit {verdict}: max adjusted margin {report['max_adjusted_margin']:+.3g}",
        file=sys.stderr,
    )
    return 0 if report["pass"] or args.mutant else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "fetch":
            return _cmd_fetch(args)
        if args.command == "audit":
            return _cmd_audit(args)
    except ValueError as exc:
        # bad parameter values are usage errors, same exit code argparse uses
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
