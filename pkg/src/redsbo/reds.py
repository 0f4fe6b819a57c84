"""Random exploration with domain shrinking (REDS).

Each epoch ``r`` draws ``N_r = N_1 2^(r-1)`` points uniformly from the active
candidates, fits a GP on that epoch's observations only, and discards every
candidate whose upper confidence bound falls below the best lower bound.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from redsbo import gp
from redsbo.domain import DiscreteDomain, RngSeed, sample_uniform
from redsbo.errors import ConfigError, InvalidArgumentError
from redsbo.kernels import Kernel
from redsbo.trace import EpochSummary, Trace, TraceRecorder

SHRINK_TOL = 1e-12


class Variant(str, enum.Enum):
    NOISE_FREE = "noise_free"
    NOISY = "noisy"


@dataclass(frozen=True)
class RunConfig:
    """Algorithm parameters for one run.

    ``alpha`` optionally replaces the confidence-width multiplier (``B`` in
    the noise-free variant, the theoretical ``alpha_tau(delta')`` in the
    noisy one). Tuned values are common in practice.
    """

    B: float = 1.0
    delta: float = 0.1
    tau: float = 0.0
    sigma_noise: float = 0.0
    n1: int = 50
    T: int = 1000
    variant: Variant = Variant.NOISE_FREE
    domain_size: int = 2000
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))
    alpha: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.B > 0:
            raise ConfigError("B must be positive")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        if self.tau < 0 or self.sigma_noise < 0:
            raise ConfigError("tau and sigma_noise must be non-negative")
        if int(self.n1) < 1 or int(self.T) < 1 or int(self.domain_size) < 1:
            raise ConfigError("n1, T and domain_size must be positive")
        if self.variant is Variant.NOISY and not self.tau > 0:
            raise ConfigError("the noisy variant needs tau > 0")
        if self.variant is Variant.NOISE_FREE and self.sigma_noise != 0:
            raise ConfigError("the noise-free variant needs sigma_noise = 0")
        if self.alpha is not None and not self.alpha > 0:
            raise ConfigError("alpha override must be positive")

    @property
    def model_tau(self) -> float:
        return 0.0 if self.variant is Variant.NOISE_FREE else float(self.tau)

    @property
    def delta_prime(self) -> float:
        """Per-epoch confidence level: delta/log2(T), halved again when noisy."""
        epochs = max(math.log2(self.T), 1.0)
        if self.variant is Variant.NOISY:
            return self.delta / (2.0 * epochs)
        return self.delta / epochs


@dataclass(frozen=True)
class ConfidenceBand:
    """Bounds over the active candidates listed in ``indices``."""

    indices: np.ndarray
    mean: np.ndarray
    sigma: np.ndarray
    ucb: np.ndarray
    lcb: np.ndarray
    scale: float
    offset: float


def alpha_tau(delta: float, B: float, sigma_noise: float, tau: float, domain_size: int) -> float:
    """Noisy confidence multiplier ``B + sigma_noise sqrt((2/tau) log(|D|/delta))``."""
    if not tau > 0:
        raise InvalidArgumentError("alpha_tau needs tau > 0")
    if not 0 < delta <= 1 or int(domain_size) < 1:
        raise InvalidArgumentError("alpha_tau needs delta in (0, 1] and domain_size >= 1")
    return B + sigma_noise * math.sqrt((2.0 / tau) * math.log(domain_size / delta))


def band_parameters(cfg: RunConfig, delta_prime: float) -> tuple[float, float]:
    """(width multiplier, additive offset) of the confidence band."""
    if cfg.variant is Variant.NOISE_FREE:
        return (cfg.alpha if cfg.alpha is not None else cfg.B), 0.0
    scale = cfg.alpha
    if scale is None:
        scale = alpha_tau(delta_prime, cfg.B, cfg.sigma_noise, cfg.tau, cfg.domain_size)
    offset = 2.0 * cfg.B / cfg.T + math.sqrt(
        (2.0 * cfg.sigma_noise**2 / (cfg.T * cfg.tau)) * math.log(2.0 * cfg.T / delta_prime)
    )
    return float(scale), float(offset)


def confidence_band(m: gp.PosteriorModel, dom: DiscreteDomain, cfg: RunConfig, delta_prime: float) -> ConfidenceBand:
    scale, offset = band_parameters(cfg, delta_prime)
    idx = dom.active_indices
    mu, var = m.predict(dom.points[idx])
    sigma = np.sqrt(var)
    return ConfidenceBand(
        indices=idx,
        mean=mu,
        sigma=sigma,
        ucb=mu + scale * sigma + offset,
        lcb=mu - scale * sigma - offset,
        scale=scale,
        offset=offset,
    )


def shrink(dom: DiscreteDomain, band: ConfidenceBand) -> np.ndarray:
    """Active mask after dropping candidates with ``ucb < max lcb``.

    The lcb-maximizer always survives because its ucb is at least its lcb.
    """
    keep = band.ucb >= band.lcb.max() - SHRINK_TOL
    mask = np.zeros(len(dom), dtype=bool)
    mask[band.indices[keep]] = True
    return mask


def epoch_gap(dom: DiscreteDomain, f_values, f_star: float) -> float:
    """Worst gap ``f_star - min f`` over the active candidates."""
    return float(f_star - np.min(np.asarray(f_values)[dom.active]))


def epoch_schedule(n1: int, T: int) -> list[int]:
    """Query counts per epoch; the last entry is truncated to the budget."""
    sizes, used, n = [], 0, int(n1)
    while used < T:
        sizes.append(min(n, T - used))
        used += sizes[-1]
        n *= 2
    return sizes


class UniformSelector:
    """REDS query rule: one uniform draw from the active set per query."""

    name = "reds"

    def __init__(self, kernel: Kernel, tau: float):
        self.kernel = kernel

    def start_epoch(self, dom: DiscreteDomain, rng: np.random.Generator) -> None:
        self.dom = dom
        self.rng = rng

    def next(self, X_epoch: list, Y_epoch: list) -> int:
        return int(sample_uniform(self.dom, 1, self.rng)[0])


def run_epochs(
    objective,
    cfg: RunConfig,
    domain: DiscreteDomain,
    kernel: Kernel,
    selector,
    *,
    f_values=None,
    f_star: float | None = None,
    x_star: int | None = None,
) -> Trace:
    """Doubling-epoch skeleton shared by REDS and the MPV baseline.

    Only the per-query rule (``selector``) differs between strategies. The
    caller's ``domain`` is not modified.
    """
    if cfg.domain_size != len(domain):
        raise ConfigError(f"domain_size={cfg.domain_size} but the domain has {len(domain)} points")
    dom = domain.copy()
    dom.reset()
    rng = cfg.seed.generator()
    rec = TraceRecorder(selector.name, dom.d)
    benchmark = f_values is not None
    if benchmark:
        f_values = np.asarray(f_values, dtype=np.float64)
        if f_star is None:
            x_star = int(np.argmax(f_values))
            f_star = float(f_values[x_star])
    delta_prime = cfg.delta_prime
    t, r, N = 0, 1, int(cfg.n1)
    while t < cfg.T:
        n_q = min(N, cfg.T - t)
        rec.active_history.append(dom.active.copy())
        summary = EpochSummary(r=r, planned=N, queries=n_q, active_before=dom.n_active)
        if benchmark:
            summary.gap = epoch_gap(dom, f_values, f_star)
            if x_star is not None:
                summary.x_star_active = bool(dom.active[x_star])
        first = len(rec)
        selector.start_epoch(dom, rng)
        X_epoch, Y_epoch = [], []
        for k in range(n_q):
            t0 = time.perf_counter_ns()
            i = selector.next(X_epoch, Y_epoch)
            elapsed = time.perf_counter_ns() - t0
            x = dom.points[i]
            y = float(objective(x))
            X_epoch.append(x)
            Y_epoch.append(y)
            rec.add(t + k + 1, r, i, x, y, f_values[i] if benchmark else np.nan, elapsed)
        t += n_q
        if t < cfg.T:
            t0 = time.perf_counter_ns()
            model = gp.fit(kernel, np.array(X_epoch), np.array(Y_epoch), cfg.model_tau)
            band = confidence_band(model, dom, cfg, delta_prime)
            dom.restrict(shrink(dom, band))
            summary.fit_ns = time.perf_counter_ns() - t0
            rec.spread_ns(first, summary.fit_ns)
            summary.active_after = dom.n_active
            summary.max_sigma = float(band.sigma.max())
            summary.band_scale = band.scale
            summary.band_offset = band.offset
            summary.tau_eff = model.tau_eff
        rec.epochs.append(summary)
        r += 1
        N *= 2
    rec.active_history.append(dom.active.copy())
    return rec.build()


def run_reds(objective, cfg: RunConfig, domain: DiscreteDomain, kernel: Kernel, **benchmark) -> Trace:
    """Run REDS for ``cfg.T`` queries. ``benchmark`` may carry ``f_values``,
    ``f_star`` and ``x_star`` to enable regret and gap diagnostics."""
    return run_epochs(objective, cfg, domain, kernel, UniformSelector(kernel, cfg.model_tau), **benchmark)


def gap_bound_violations(trace: Trace, cfg: RunConfig) -> int:
    """Count epochs whose realized gap exceeds the per-epoch regret bound.

    Epoch 1 is bounded by ``2B``; later epochs by four confidence widths of
    the previous epoch's worst active standard deviation plus the noisy
    offsets.
    """
    violations = 0
    for prev, cur in zip([None] + trace.epochs[:-1], trace.epochs):
        if math.isnan(cur.gap):
            continue
        if prev is None:
            bound = 2.0 * cfg.B
        elif math.isnan(prev.max_sigma):
            continue
        else:
            bound = 4.0 * prev.band_scale * prev.max_sigma
            if cfg.variant is Variant.NOISY:
                bound += 2.0 * cfg.B / cfg.T + cfg.sigma_noise * math.sqrt(
                    2.0 / (cfg.T * cfg.tau) * math.log(4.0 * cfg.T / cfg.delta_prime)
                )
        violations += cur.gap > bound + 1e-12
    return int(violations)


def nested_violations(trace: Trace) -> int:
    """Number of epoch transitions where the active set grew or emptied."""
    bad = 0
    for before, after in zip(trace.active_history, trace.active_history[1:]):
        bad += bool(np.any(after & ~before)) or not after.any()
    return bad
