"""Comparison strategies: maximum-variance elimination, GP-UCB and pure uniform sampling.

The elimination baseline is a reconstruction of batched pure exploration:
the REDS epoch skeleton with each query chosen as the active candidate of
largest posterior variance under the current epoch's data.
"""
from __future__ import annotations

import enum
import time

import numpy as np

from redsbo import gp
from redsbo.domain import DiscreteDomain, sample_uniform
from redsbo.errors import ConfigError
from redsbo.kernels import Kernel
from redsbo.reds import RunConfig, Variant, alpha_tau, run_epochs, run_reds
from redsbo.trace import EpochSummary, Trace, TraceRecorder


class StrategyKind(str, enum.Enum):
    REDS = "reds"
    BPE_MPV = "bpe"
    GP_UCB = "gp_ucb"
    UNIFORM = "uniform"

    @classmethod
    def parse(cls, text: str) -> "StrategyKind":
        key = text.strip().lower().replace("-", "_")
        aliases = {"bpe_mpv": "bpe", "gpucb": "gp_ucb", "uniform_no_shrink": "uniform", "uniformnoshrink": "uniform"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ConfigError(f"unknown strategy {text!r}") from None


class MaxVarianceSelector:
    """Query the active candidate with the largest current-epoch posterior variance."""

    name = "bpe"

    def __init__(self, kernel: Kernel, tau: float):
        self.kernel = kernel
        self.tau = tau

    def start_epoch(self, dom: DiscreteDomain, rng: np.random.Generator) -> None:
        self.dom = dom

    def next(self, X_epoch: list, Y_epoch: list) -> int:
        if X_epoch:
            model = gp.fit(self.kernel, np.array(X_epoch), np.array(Y_epoch), self.tau)
        else:
            model = gp.fit(self.kernel, np.zeros((0, self.dom.d)), [], self.tau)
        return gp.max_active_variance(model, self.dom)[0]


def run_bpe(objective, cfg: RunConfig, domain: DiscreteDomain, kernel: Kernel, **benchmark) -> Trace:
    """Epoch-wise elimination with maximum-posterior-variance queries (refit per query)."""
    return run_epochs(objective, cfg, domain, kernel, MaxVarianceSelector(kernel, cfg.model_tau), **benchmark)


def _sequential_setup(cfg, domain, benchmark, name):
    if cfg.domain_size != len(domain):
        raise ConfigError(f"domain_size={cfg.domain_size} but the domain has {len(domain)} points")
    dom = domain.copy()
    dom.reset()
    f_values = benchmark.get("f_values")
    if f_values is not None:
        f_values = np.asarray(f_values, dtype=np.float64)
    rec = TraceRecorder(name, dom.d)
    rec.active_history.append(dom.active.copy())
    return dom, f_values, rec


def run_gp_ucb(objective, cfg: RunConfig, domain: DiscreteDomain, kernel: Kernel, **benchmark) -> Trace:
    """Fully sequential GP-UCB over the whole candidate set (noisy variant only).

    At every step the model is refit on the complete history and the next
    query maximizes ``mu + alpha sigma``.
    """
    if cfg.variant is not Variant.NOISY:
        raise ConfigError("GP-UCB is defined for the noisy variant only")
    dom, f_values, rec = _sequential_setup(cfg, domain, benchmark, "gp_ucb")
    scale = cfg.alpha
    if scale is None:
        scale = alpha_tau(cfg.delta, cfg.B, cfg.sigma_noise, cfg.tau, cfg.domain_size)
    pts = dom.points
    X, Y = [], []
    for t in range(1, cfg.T + 1):
        t0 = time.perf_counter_ns()
        model = gp.fit(kernel, np.array(X) if X else np.zeros((0, dom.d)), Y, cfg.tau)
        mu, var = model.predict(pts)
        i = int(np.argmax(mu + scale * np.sqrt(var)))
        elapsed = time.perf_counter_ns() - t0
        y = float(objective(pts[i]))
        X.append(pts[i])
        Y.append(y)
        rec.add(t, 1, i, pts[i], y, f_values[i] if f_values is not None else np.nan, elapsed)
    rec.epochs.append(EpochSummary(r=1, planned=cfg.T, queries=cfg.T, active_before=len(dom)))
    rec.active_history.append(dom.active.copy())
    return rec.build()


def checkpoint_sizes(n1: int, T: int) -> list[int]:
    sizes, n = [], int(n1)
    while n <= T:
        sizes.append(n)
        n *= 2
    return sizes


def run_uniform(objective, cfg: RunConfig, domain: DiscreteDomain, kernel: Kernel, **benchmark) -> Trace:
    """``T`` uniform queries with no shrinking.

    A model is fitted on the first ``n`` queries for each doubling checkpoint
    ``n = N1, 2 N1, ... <= T`` and the worst candidate variance is stored in
    ``trace.checkpoints``.
    """
    dom, f_values, rec = _sequential_setup(cfg, domain, benchmark, "uniform")
    rng = cfg.seed.generator()
    t0 = time.perf_counter_ns()
    idx = sample_uniform(dom, cfg.T, rng)
    per_query = (time.perf_counter_ns() - t0) // cfg.T
    X, Y = dom.points[idx], np.empty(cfg.T)
    checkpoints = checkpoint_sizes(cfg.n1, cfg.T)
    segment = np.searchsorted(checkpoints, np.arange(1, cfg.T + 1), side="left") + 1
    for t, i in enumerate(idx):
        Y[t] = float(objective(X[t]))
        rec.add(t + 1, segment[t], i, X[t], Y[t], f_values[i] if f_values is not None else np.nan, per_query)
    for r, n in enumerate(checkpoints, start=1):
        t0 = time.perf_counter_ns()
        model = gp.fit(kernel, X[:n], Y[:n], cfg.model_tau)
        _, sup_var = gp.max_active_variance(model, dom)
        fit_ns = time.perf_counter_ns() - t0
        rec.checkpoints.append((n, sup_var))
        rec.epochs.append(EpochSummary(r=r, planned=n, queries=n, active_before=len(dom),
                                       max_sigma=float(np.sqrt(sup_var)), tau_eff=model.tau_eff, fit_ns=fit_ns))
    rec.active_history.append(dom.active.copy())
    return rec.build()


RUNNERS = {
    StrategyKind.REDS: run_reds,
    StrategyKind.BPE_MPV: run_bpe,
    StrategyKind.GP_UCB: run_gp_ucb,
    StrategyKind.UNIFORM: run_uniform,
}


def run_strategy(kind, objective, cfg: RunConfig, domain: DiscreteDomain, kernel: Kernel, **benchmark) -> Trace:
    if not isinstance(kind, StrategyKind):
        kind = StrategyKind.parse(kind)
    return RUNNERS[kind](objective, cfg, domain, kernel, **benchmark)
