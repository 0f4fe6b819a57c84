import math

import numpy as np
import pytest

from redsbo.benchmarks import (
    BENCHMARKS,
    NoisyObjective,
    branin,
    get_benchmark,
    hartmann4,
    hartmann6,
    make_problem,
    observe,
)
from redsbo.domain import RngSeed
from redsbo.errors import InvalidArgumentError

# independent scalar transcription of the Hartmann constants
_A = [[10, 3, 17, 3.5, 1.7, 8], [0.05, 10, 17, 0.1, 8, 14], [3, 3.5, 1.7, 10, 17, 8], [17, 8, 0.05, 10, 0.1, 14]]
_P = [[1312, 1696, 5569, 124, 8283, 5886], [2329, 4135, 8307, 3736, 1004, 9991],
      [2348, 1451, 3522, 2883, 3047, 6650], [4047, 8828, 8732, 5743, 1091, 381]]
_ALPHA = [1.0, 1.2, 3.0, 3.2]


def _hartmann_ref(x):
    total = 0.0
    for i in range(4):
        s = sum(_A[i][j] * (x[j] - _P[i][j] / 10000.0) ** 2 for j in range(len(x)))
        total += _ALPHA[i] * math.exp(-s)
    return total


def _branin_ref(x1, x2):
    a, b, c, r, s, t = 1.0, 5.1 / (4 * math.pi**2), 5 / math.pi, 6.0, 10.0, 1 / (8 * math.pi)
    u, v = 15 * x1 - 5, 15 * x2
    raw = a * (v - b * u * u + c * u - r) ** 2 + s * (1 - t) * math.cos(u) + s
    return -(raw - 54.81) / 51.95


def test_branin_dual_transcription(rng):
    X = rng.uniform(size=(200, 2))
    ref = np.array([_branin_ref(*x) for x in X])
    np.testing.assert_allclose(branin(X[:, 0], X[:, 1]), ref, rtol=0, atol=1e-12)


@pytest.mark.parametrize("d,fn", [(4, hartmann4), (6, hartmann6)])
def test_hartmann_dual_transcription(d, fn, rng):
    X = rng.uniform(size=(200, d))
    ref = np.array([_hartmann_ref(x) for x in X])
    np.testing.assert_allclose(fn(X), ref, rtol=1e-13)


def test_known_values():
    assert branin(0.0, 0.0) == pytest.approx(-4.876209740358164, abs=1e-12)
    xs = np.array([0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573])
    assert hartmann6(xs) == pytest.approx(3.3223680114, abs=1e-6)
    # one of the three Branin maximizers, mapped to the unit square
    assert branin((math.pi + 5) / 15, 2.275 / 15) == pytest.approx(1.047393891093, abs=1e-9)


def test_hartmann_dimension_check():
    with pytest.raises(InvalidArgumentError):
        hartmann4(np.zeros(6))


@pytest.mark.parametrize("name", sorted(BENCHMARKS))
def test_values_within_declared_bounds(name, rng):
    spec = get_benchmark(name)
    lo, hi = spec.bounds
    v = spec.f(rng.uniform(size=(20000, spec.d)))
    # declared bounds bracket the maximum, which random samples never exceed
    assert v.max() < hi
    if name != "branin":
        assert v.min() >= lo


def test_branin_max_within_bounds():
    g = np.linspace(0, 1, 1001)
    U, V = np.meshgrid(g, g)
    m = branin(U, V).max()
    assert 1.047393891093 - 1e-5 < m <= 1.047393891093 + 1e-12
    assert 0.5 < m < 1.2


def test_get_benchmark_aliases_and_override():
    assert get_benchmark("Hartmann-6D").name == "hartmann6"
    assert get_benchmark("branin", sigma_noise=0.0).sigma_noise == 0.0
    with pytest.raises(InvalidArgumentError):
        get_benchmark("ackley")


def test_observe_moments():
    spec = get_benchmark("branin")
    x = np.array([0.3, 0.4])
    r = np.random.default_rng(5)
    ys = np.array([observe(spec, x, r) for _ in range(100_000)])
    fx = spec(x)
    se_mean = 0.2 / math.sqrt(1e5)
    assert abs(ys.mean() - fx) < 5 * se_mean
    assert ys.std() == pytest.approx(0.2, rel=0.02)


def test_observe_noise_free_exact():
    spec = get_benchmark("hartmann6", sigma_noise=0.0)
    x = np.full(6, 0.3)
    assert observe(spec, x, np.random.default_rng(0)) == spec(x)


def test_noise_streams_distinct_and_reproducible():
    spec = get_benchmark("branin")
    x = np.array([0.5, 0.5])
    a = [NoisyObjective(spec, RngSeed(0, 10**6))(x) for _ in range(1)]
    oa, ob, oc = (NoisyObjective(spec, RngSeed(0, 10**6 + i)) for i in (0, 1, 0))
    sa = [oa(x) for _ in range(5)]
    sb = [ob(x) for _ in range(5)]
    sc = [oc(x) for _ in range(5)]
    assert sa == sc and sa != sb and a[0] == sa[0]


def test_problem_cache_consistency():
    p = make_problem(get_benchmark("branin"), 500, RngSeed(4, 2_000_000))
    np.testing.assert_array_equal(p.f_values, get_benchmark("branin").f(p.domain.points))
    assert p.f_star == p.f_values.max() and p.f_values[p.x_star] == p.f_star
    assert len(p.domain) == 500
    assert not p.f_values.flags.writeable


def test_default_problem_sizes():
    p = make_problem(get_benchmark("hartmann4"), None, RngSeed(0, 2_000_000))
    assert len(p.domain) == 7000 and p.domain.d == 4
