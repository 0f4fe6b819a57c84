"""Branin and Hartmann test functions on unit cubes, with Gaussian observation noise."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from redsbo.domain import Box, DiscreteDomain, RngSeed, as_generator, discretize, grid_argmax
from redsbo.errors import InvalidArgumentError

HARTMANN_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
HARTMANN_C = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ],
    dtype=np.float64,
)
HARTMANN_W = np.array([1.0, 1.2, 3.0, 3.2])


def branin(x1, x2):
    """Rescaled, sign-flipped Branin on [0, 1]^2 (maximum about 1.047)."""
    u = 15.0 * np.asarray(x1, dtype=np.float64) - 5.0
    v = 15.0 * np.asarray(x2, dtype=np.float64)
    quad = (v - 5.1 * u**2 / (4.0 * np.pi**2) + 5.0 * u / np.pi - 6.0) ** 2
    return -(quad + (10.0 - 10.0 / (8.0 * np.pi)) * np.cos(u) - 44.81) / 51.95


def _hartmann(x, d):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != d:
        raise InvalidArgumentError(f"expected {d}-dimensional input, got {x.shape[-1]}")
    A, C = HARTMANN_A[:, :d], HARTMANN_C[:, :d]
    expo = np.sum(A * (x[..., None, :] - C) ** 2, axis=-1)
    return np.exp(-expo) @ HARTMANN_W


def hartmann4(x):
    """Hartmann sum over the first four columns of the 4x6 constants."""
    return _hartmann(x, 4)


def hartmann6(x):
    return _hartmann(x, 6)


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    d: int
    bounds: tuple[float, float]
    lengthscale: float
    n1: int
    domain_size: int
    sigma_noise: float = 0.2

    @property
    def box(self) -> Box:
        return Box.unit(self.d)

    def f(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.name == "branin":
            return branin(X[:, 0], X[:, 1])
        if self.name == "hartmann4":
            return hartmann4(X)
        return hartmann6(X)

    def __call__(self, x) -> float:
        return float(self.f(x)[0])


BENCHMARKS = {
    "branin": BenchmarkSpec("branin", 2, (0.5, 1.2), 0.2, 50, 2000),
    "hartmann4": BenchmarkSpec("hartmann4", 4, (0.0, 3.8), 1.0, 100, 7000),
    "hartmann6": BenchmarkSpec("hartmann6", 6, (0.0, 3.5), 1.0, 100, 20000),
}


def get_benchmark(name: str, sigma_noise: float | None = None) -> BenchmarkSpec:
    key = name.lower().replace("-", "").replace("_", "")
    aliases = {"branin": "branin", "hartmann4": "hartmann4", "hartmann4d": "hartmann4",
               "hartmann6": "hartmann6", "hartmann6d": "hartmann6"}
    if key not in aliases:
        raise InvalidArgumentError(f"unknown benchmark {name!r}")
    spec = BENCHMARKS[aliases[key]]
    if sigma_noise is not None:
        spec = BenchmarkSpec(spec.name, spec.d, spec.bounds, spec.lengthscale, spec.n1,
                             spec.domain_size, float(sigma_noise))
    return spec


def observe(spec: BenchmarkSpec, x, rng) -> float:
    """One noisy observation ``f(x) + sigma_noise * N(0, 1)``."""
    fx = spec(x)
    if spec.sigma_noise == 0:
        return fx
    return fx + spec.sigma_noise * float(as_generator(rng).standard_normal())


class NoisyObjective:
    """Observation oracle owning its own noise stream."""

    def __init__(self, spec: BenchmarkSpec, seed: RngSeed):
        self.spec = spec
        self._rng = seed.generator()

    def __call__(self, x) -> float:
        return observe(self.spec, x, self._rng)


@dataclass(frozen=True, eq=False)
class Problem:
    """A benchmark on a fixed random candidate set, with its cached optimum."""

    spec: BenchmarkSpec
    domain: DiscreteDomain
    f_values: np.ndarray
    f_star: float
    x_star: int

    def objective(self, seed: RngSeed) -> NoisyObjective:
        return NoisyObjective(self.spec, seed)

    @property
    def benchmark_kwargs(self) -> dict:
        return {"f_values": self.f_values, "f_star": self.f_star, "x_star": self.x_star}


def make_problem(spec: BenchmarkSpec, m: int | None, seed: RngSeed) -> Problem:
    dom = discretize(spec.box, m or spec.domain_size, seed)
    f_values = spec.f(dom.points)
    f_values.setflags(write=False)
    x_star, f_star = grid_argmax(f_values, dom)
    return Problem(spec, dom, f_values, f_star, x_star)
