"""Experiment harness: parameter grids, repeated trials, CSV output.

One CSV row is one trial of one (algorithm, epsilon, delta) cell.  Each
trial gets its own RNG substream derived from the master seed and the cell
coordinates, so results are reproducible regardless of execution order or
worker count, and the whole output (CSV plus selected-set sidecar files) is
byte-identical across repeat invocations.
"""

from __future__ import annotations

import dataclasses
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from .baseline import charikar_peel
from .datasets import load_graph
from .graph import Graph, NodeSet
from .mapreduce import run_mr_dense
from .metrics import jaccard, recall, relative_density
from .par import DEFAULT_MAX_ITERS, run_par
from .phases import run_phase
from .results import DPResult, PrivacyParams
from .rng import RngStream
from .seq import run_seq

CSV_COLUMNS = [
    "dataset",
    "algorithm",
    "epsilon",
    "delta",
    "trial",
    "seed",
    "n",
    "m",
    "density",
    "baseline_density",
    "relative_density",
    "jaccard",
    "recall",
    "iterations",
    "phases",
    "truncated",
    "wall_ms",
]

ALGORITHMS = ("baseline", "seq", "par", "phase", "mr")


@dataclass(frozen=True)
class ExperimentConfig:
    """One harness invocation: dataset, algorithm, grid, trials, seed."""

    dataset: str
    algorithm: str
    eps_list: Tuple[float, ...]
    delta_list: Tuple[float, ...]
    trials: int = 1
    master_seed: int = 0
    max_iters: int = DEFAULT_MAX_ITERS
    jobs: int = 1
    trace: bool = False
    timings: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}"
            )
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.eps_list:
            raise ValueError("need at least one epsilon")
        for eps in self.eps_list:
            if not eps > 0:
                raise ValueError(f"epsilon must be positive, got {eps}")
        for delta in self.delta_list:
            if not 0.0 < delta < 1.0:
                raise ValueError(f"delta must be in (0, 1), got {delta}")
        if not self.delta_list:
            raise ValueError("need at least one delta")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")


@dataclass(frozen=True)
class TrialOutput:
    """One CSV row plus its sidecar payloads."""

    row: dict
    sidecar_name: str
    selected_ids: Tuple[int, ...]
    trace_payload: Optional[str]


def trial_stream(
    master_seed: int, dataset: str, algorithm: str, eps: float, delta: float, trial: int
) -> RngStream:
    """The per-trial stream: a pure function of master seed and coordinates."""
    return RngStream(master_seed).substream(
        "trial", dataset, algorithm, float(eps), float(delta), trial
    )


def _run_algorithm(
    algorithm: str,
    graph: Graph,
    params: PrivacyParams,
    rng: RngStream,
    max_iters: int,
    keep_trace: bool,
) -> DPResult:
    if algorithm == "seq":
        return run_seq(graph, params, rng, keep_trace=keep_trace)
    if algorithm == "par":
        return run_par(graph, params, rng, max_iters=max_iters)
    if algorithm == "phase":
        return run_phase(graph, params, rng)
    if algorithm == "mr":
        return run_mr_dense(graph, params, rng)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _trace_json(algorithm: str, result: DPResult) -> Optional[str]:
    if result.records is not None:
        payload = [dataclasses.asdict(rec) for rec in result.records]
        return json.dumps({"phases": payload}, indent=2)
    if result.peel is not None:
        payload = [dataclasses.asdict(step) for step in result.peel.removals]
        return json.dumps(
            {"removals": payload, "best_index": result.peel.best_index}, indent=2
        )
    return None


def _sanitize(token: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in token)


def run_trial(
    graph: Graph,
    dataset: str,
    baseline_ids: Tuple[int, ...],
    baseline_density: float,
    config: ExperimentConfig,
    eps: float,
    delta: float,
    trial: int,
) -> TrialOutput:
    """Execute one grid cell trial and assemble its row."""
    stream = trial_stream(
        config.master_seed, dataset, config.algorithm, eps, delta, trial
    )
    wall_start = time.perf_counter()
    if config.algorithm == "baseline":
        selected = NodeSet(baseline_ids)
        result = DPResult(
            selected=selected,
            density=baseline_density,
            trace_len=graph.n,
            iterations=graph.n,
            seed=stream.token(),
        )
        trace_payload = None
        if config.trace:
            _, _, trace = charikar_peel(graph)
            payload = [dataclasses.asdict(step) for step in trace.removals]
            trace_payload = json.dumps(
                {"removals": payload, "best_index": trace.best_index}, indent=2
            )
    else:
        params = PrivacyParams(eps, delta)
        result = _run_algorithm(
            config.algorithm, graph, params, stream, config.max_iters, config.trace
        )
        trace_payload = _trace_json(config.algorithm, result) if config.trace else None
    wall_ms = int(round((time.perf_counter() - wall_start) * 1000)) if config.timings else 0

    base_set = set(baseline_ids)
    if baseline_density > 0:
        rel = relative_density(result.selected, baseline_ids, graph)
    else:
        rel = float("nan")
    jac = jaccard(result.selected, base_set)
    rec = recall(result.selected, base_set) if base_set else float("nan")
    row = {
        "dataset": dataset,
        "algorithm": config.algorithm,
        "epsilon": eps,
        "delta": delta,
        "trial": trial,
        "seed": result.seed,
        "n": graph.n,
        "m": graph.m,
        "density": result.density,
        "baseline_density": baseline_density,
        "relative_density": rel,
        "jaccard": jac,
        "recall": rec,
        "iterations": result.iterations,
        "phases": result.phases,
        "truncated": int(result.truncated),
        "wall_ms": wall_ms,
    }
    sidecar = (
        f"{_sanitize(dataset)}-{config.algorithm}"
        f"-eps{eps!r}-delta{delta!r}-trial{trial}.nodes"
    )
    return TrialOutput(row, sidecar, tuple(result.selected), trace_payload)


def run_experiment(config: ExperimentConfig) -> Tuple[List[TrialOutput], Graph]:
    """Run the full grid; outputs are ordered (eps, delta, trial)."""
    dataset, graph = load_graph(config.dataset)
    baseline_set, baseline_density, _ = charikar_peel(graph)
    baseline_ids = tuple(baseline_set)
    cells = [
        (eps, delta, trial)
        for eps in config.eps_list
        for delta in config.delta_list
        for trial in range(config.trials)
    ]
    if config.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outputs = list(
                pool.map(
                    run_trial,
                    [graph] * len(cells),
                    [dataset] * len(cells),
                    [baseline_ids] * len(cells),
                    [baseline_density] * len(cells),
                    [config] * len(cells),
                    [c[0] for c in cells],
                    [c[1] for c in cells],
                    [c[2] for c in cells],
                )
            )
    else:
        outputs = [
            run_trial(graph, dataset, baseline_ids, baseline_density, config, *cell)
            for cell in cells
        ]
    return outputs, graph


def write_outputs(
    outputs: List[TrialOutput], csv_path: Optional[Path], fh
) -> None:
    """Write the CSV to ``fh`` and sidecar files next to ``csv_path``.

    Sidecars (selected node ids, one per line, plus optional trace JSON) go
    into ``<csv stem>_sets/``; they are skipped when writing to stdout.
    """
    import csv as csv_module

    writer = csv_module.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for out in outputs:
        writer.writerow([out.row[col] for col in CSV_COLUMNS])
    if csv_path is None:
        return
    sets_dir = csv_path.parent / (csv_path.stem + "_sets")
    sets_dir.mkdir(parents=True, exist_ok=True)
    for out in outputs:
        body = "".join(f"{v}\n" for v in out.selected_ids)
        (sets_dir / out.sidecar_name).write_text(body, encoding="utf-8")
        if out.trace_payload is not None:
            trace_name = out.sidecar_name.rsplit(".", 1)[0] + ".trace.json"
            (sets_dir / trace_name).write_text(out.trace_payload + "\n", encoding="utf-8")
