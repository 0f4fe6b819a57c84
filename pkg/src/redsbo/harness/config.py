"""Flat ``key = value`` experiment configuration files."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from redsbo.baselines import StrategyKind
from redsbo.benchmarks import BenchmarkSpec, get_benchmark
from redsbo.domain import RngSeed
from redsbo.errors import ConfigError, RedsError
from redsbo.kernels import Kernel, make_kernel
from redsbo.reds import RunConfig, Variant

_FLOATS = {"B", "delta", "tau", "sigma_noise", "alpha", "lengthscale", "nu"}
_INTS = {"n1", "T", "domain_size", "seed", "replicas", "workers"}
_STRINGS = {"benchmark", "strategy", "strategies", "variant", "kernel", "out"}


@dataclass(frozen=True)
class ExperimentConfig:
    benchmark: str = "branin"
    strategies: tuple = (StrategyKind.REDS,)
    variant: Variant = Variant.NOISY
    B: float | None = None
    delta: float = 0.1
    tau: float = 0.2
    sigma_noise: float | None = None
    n1: int | None = None
    T: int = 1000
    domain_size: int | None = None
    alpha: float | None = None
    kernel: str = "se"
    lengthscale: float | None = None
    nu: float = 2.5
    seed: int = 0
    replicas: int = 10
    workers: int | None = None
    out: Path = field(default_factory=lambda: Path("results"))

    def __post_init__(self):
        try:
            object.__setattr__(self, "variant", Variant(self.variant))
        except ValueError:
            raise ConfigError(f"unknown variant {self.variant!r}") from None
        strategies = tuple(s if isinstance(s, StrategyKind) else StrategyKind.parse(s) for s in self.strategies)
        if not strategies:
            raise ConfigError("at least one strategy is required")
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "out", Path(self.out))
        if int(self.replicas) < 1:
            raise ConfigError("replicas must be >= 1")
        if self.workers is not None and int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        try:
            self.bench
            self.make_kernel()
            self.run_config(0)
        except ConfigError:
            raise
        except RedsError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def bench(self) -> BenchmarkSpec:
        try:
            return get_benchmark(self.benchmark, sigma_noise=self.effective_sigma)
        except RedsError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def effective_sigma(self) -> float:
        if self.variant is Variant.NOISE_FREE:
            return 0.0
        return 0.2 if self.sigma_noise is None else float(self.sigma_noise)

    @property
    def effective_domain_size(self) -> int:
        return int(self.domain_size) if self.domain_size is not None else get_benchmark(self.benchmark).domain_size

    def make_kernel(self) -> Kernel:
        ls = self.lengthscale if self.lengthscale is not None else get_benchmark(self.benchmark).lengthscale
        return make_kernel(self.kernel, lengthscale=ls, nu=self.nu)

    def run_config(self, replica: int) -> RunConfig:
        base = get_benchmark(self.benchmark)
        return RunConfig(
            B=self.B if self.B is not None else base.bounds[1],
            delta=self.delta,
            tau=self.tau if self.variant is Variant.NOISY else 0.0,
            sigma_noise=self.effective_sigma,
            n1=self.n1 if self.n1 is not None else base.n1,
            T=self.T,
            variant=self.variant,
            domain_size=self.effective_domain_size,
            seed=RngSeed(self.seed, replica),
            alpha=self.alpha,
        )

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def echo(self) -> dict:
        return {
            "benchmark": self.bench.name,
            "strategies": [s.value for s in self.strategies],
            "variant": self.variant.value,
            "B": self.run_config(0).B,
            "delta": self.delta,
            "tau": self.run_config(0).tau,
            "sigma_noise": self.effective_sigma,
            "n1": self.run_config(0).n1,
            "T": self.T,
            "domain_size": self.effective_domain_size,
            "alpha": self.alpha,
            "kernel": self.kernel,
            "lengthscale": getattr(self.make_kernel(), "lengthscale", None),
            "seed": self.seed,
            "replicas": self.replicas,
        }


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _FLOATS:
                values[key] = float(value)
            elif key in _INTS:
                values[key] = int(value)
            elif key in _STRINGS:
                values[key] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    if "strategy" in values and "strategies" in values:
        raise ConfigError("use either 'strategy' or 'strategies', not both")
    names = values.pop("strategy", None) or values.pop("strategies", None)
    if names:
        values["strategies"] = tuple(s for s in (n.strip() for n in names.split(",")) if s)
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)

