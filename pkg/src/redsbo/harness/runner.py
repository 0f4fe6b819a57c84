"""Monte Carlo experiment execution and result files.

Output layout for one experiment directory::

    trace_<strategy>_r<i>.csv    per-query records (deterministic)
    epochs_<strategy>_r<i>.csv   per-epoch diagnostics (deterministic)
    timing_<strategy>_r<i>.csv   per-query compute time in ns
    aggregate_<strategy>.csv     mean/std cumulative regret per t
    summary.csv                  final regret and wall-time mean/std
    metadata.json                config echo, seeds, versions
    plot_<strategy>_mean.dat / plot_<strategy>_band.dat
"""
from __future__ import annotations

import csv
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import redsbo
from redsbo.baselines import StrategyKind, run_strategy
from redsbo.benchmarks import Problem, make_problem
from redsbo.domain import RngSeed
from redsbo.errors import InvalidTraceError
from redsbo.harness.config import ExperimentConfig
from redsbo.trace import Trace

log = logging.getLogger(__name__)

TRACE_SCHEMA = "# redsbo-trace v1"
DISCRETIZATION_STREAM = 2_000_000
NOISE_STREAM_OFFSET = 1_000_000


def _num(v) -> str:
    return repr(float(v))


def cumulative_regret(trace: Trace, f_star: float) -> np.ndarray:
    """Prefix sums of ``f_star - f(x_t)``."""
    if trace.f_x.size != trace.T or np.any(np.isnan(trace.f_x)):
        raise InvalidTraceError("trace has no noise-free function values")
    return np.cumsum(f_star - trace.f_x)


def write_trace_csv(path: Path, trace: Trace, f_star: float, run_id: int) -> None:
    inst = f_star - trace.f_x
    cum = np.cumsum(inst)
    d = trace.X.shape[1]
    with open(path, "w", newline="") as fh:
        fh.write(f"{TRACE_SCHEMA} strategy={trace.strategy}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "t", "epoch", "point_index"] + [f"x{j + 1}" for j in range(d)]
                   + ["y", "f_x", "inst_regret", "cum_regret"])
        for k in range(trace.T):
            w.writerow([run_id, int(trace.t[k]), int(trace.epoch[k]), int(trace.index[k])]
                       + [_num(v) for v in trace.X[k]]
                       + [_num(trace.y[k]), _num(trace.f_x[k]), _num(inst[k]), _num(cum[k])])


def write_timing_csv(path: Path, trace: Trace, run_id: int) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run_id", "t", "wall_ns"])
        for t, ns in zip(trace.t, trace.wall_ns):
            w.writerow([run_id, int(t), int(ns)])


def write_epochs_csv(path: Path, trace: Trace) -> None:
    cols = ["r", "planned", "queries", "active_before", "active_after", "gap", "x_star_active",
            "max_sigma", "band_scale", "band_offset", "tau_eff"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for e in trace.epochs:
            w.writerow([e.r, e.planned, e.queries, e.active_before,
                        "" if e.active_after is None else e.active_after, _num(e.gap),
                        "" if e.x_star_active is None else int(e.x_star_active),
                        _num(e.max_sigma), _num(e.band_scale), _num(e.band_offset), _num(e.tau_eff)])


@dataclass
class Aggregate:
    strategy: str
    t: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    final: np.ndarray  # final cumulative regret per replica
    wall_s: np.ndarray  # total compute seconds per replica

    @property
    def replicas(self) -> int:
        return self.final.size


def aggregate(strategy: str, traces: list[Trace], f_star: float) -> Aggregate:
    curves = np.array([cumulative_regret(tr, f_star) for tr in traces])
    return Aggregate(
        strategy=strategy,
        t=traces[0].t.copy(),
        mean=curves.mean(axis=0),
        std=curves.std(axis=0),
        final=curves[:, -1],
        wall_s=np.array([tr.total_wall_ns for tr in traces]) / 1e9,
    )


def write_aggregate_csv(path: Path, agg: Aggregate) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "mean_cum_regret", "std_cum_regret"])
        for t, m, s in zip(agg.t, agg.mean, agg.std):
            w.writerow([int(t), _num(m), _num(s)])


def emit_plot_data(aggregates, out_dir) -> list[Path]:
    """Whitespace-separated ``t mean`` and ``t lower upper`` files per strategy."""
    out_dir = Path(out_dir)
    paths = []
    for agg in aggregates:
        mean_path = out_dir / f"plot_{agg.strategy}_mean.dat"
        band_path = out_dir / f"plot_{agg.strategy}_band.dat"
        with open(mean_path, "w") as fh:
            for t, m in zip(agg.t, agg.mean):
                fh.write(f"{int(t)} {_num(m)}\n")
        with open(band_path, "w") as fh:
            for t, m, s in zip(agg.t, agg.mean, agg.std):
                fh.write(f"{int(t)} {_num(m - s)} {_num(m + s)}\n")
        paths += [mean_path, band_path]
    return paths


def _check_writable(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(dir=out, prefix=".probe", delete=True):
        pass


def _run_replica(args):
    kind, cfg, problem, replica = args
    run_cfg = cfg.run_config(replica)
    objective = problem.objective(RngSeed(cfg.seed, NOISE_STREAM_OFFSET + replica))
    return run_strategy(kind, objective, run_cfg, problem.domain, cfg.make_kernel(), **problem.benchmark_kwargs)


def resolve_workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("REDS_WORKERS")
    return max(1, int(env)) if env else 1


@dataclass
class ExperimentResult:
    out: Path
    problem: Problem
    traces: dict = field(default_factory=dict)
    aggregates: dict = field(default_factory=dict)


def build_problem(cfg: ExperimentConfig) -> Problem:
    return make_problem(cfg.bench, cfg.effective_domain_size, RngSeed(cfg.seed, DISCRETIZATION_STREAM))


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Run every strategy for ``cfg.replicas`` replicas and write all result files.

    The output directory is checked for writability before any computation.
    """
    out = Path(cfg.out)
    _check_writable(out)
    workers = resolve_workers(workers if workers is not None else cfg.workers)
    problem = build_problem(cfg)
    result = ExperimentResult(out, problem)
    for kind in cfg.strategies:
        jobs = [(kind, cfg, problem, i) for i in range(cfg.replicas)]
        if workers > 1 and cfg.replicas > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                traces = list(pool.map(_run_replica, jobs))
        else:
            traces = [_run_replica(job) for job in jobs]
        result.traces[kind] = traces
        for i, tr in enumerate(traces):
            write_trace_csv(out / f"trace_{kind.value}_r{i}.csv", tr, problem.f_star, i)
            write_epochs_csv(out / f"epochs_{kind.value}_r{i}.csv", tr)
            write_timing_csv(out / f"timing_{kind.value}_r{i}.csv", tr, i)
        agg = aggregate(kind.value, traces, problem.f_star)
        result.aggregates[kind] = agg
        write_aggregate_csv(out / f"aggregate_{kind.value}.csv", agg)
        log.info("%s: final regret %.3f +- %.3f, %.3fs per run", kind.value,
                 agg.final.mean(), agg.final.std(), agg.wall_s.mean())
    _write_summary(out / "summary.csv", result.aggregates.values())
    emit_plot_data(result.aggregates.values(), out)
    meta = {
        "config": cfg.echo(),
        "f_star": problem.f_star,
        "x_star": problem.x_star,
        "seeds": {
            "master": cfg.seed,
            "replica_streams": list(range(cfg.replicas)),
            "noise_streams": [NOISE_STREAM_OFFSET + i for i in range(cfg.replicas)],
            "discretization_stream": DISCRETIZATION_STREAM,
        },
        "version": redsbo.__version__,
        "numpy": np.__version__,
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return result


def _write_summary(path: Path, aggregates) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["strategy", "replicas", "final_regret_mean", "final_regret_std", "wall_s_mean", "wall_s_std"])
        for agg in aggregates:
            w.writerow([agg.strategy, agg.replicas, _num(agg.final.mean()), _num(agg.final.std()),
                        _num(agg.wall_s.mean()), _num(agg.wall_s.std())])


def default_strategies() -> tuple:
    return (StrategyKind.REDS, StrategyKind.BPE_MPV)
