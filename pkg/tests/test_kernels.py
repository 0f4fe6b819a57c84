import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redsbo.errors import InvalidArgumentError
from redsbo.kernels import (
    FiniteRankMercer,
    Matern,
    MercerSpec,
    SquaredExponential,
    feature_map,
    gram,
    kernel_eval,
    make_kernel,
)

KERNELS_2D = [SquaredExponential(0.2), SquaredExponential(1.0), Matern(0.5, 0.3), Matern(1.5, 0.5), Matern(2.5, 1.0)]


def test_se_unit_diagonal(rng):
    k = SquaredExponential(0.2)
    for x in rng.uniform(size=(10, 2)):
        assert kernel_eval(k, x, x) == 1.0


def test_mercer_origin_partial_sum():
    c = 1 / (2 * (math.pi**2 / 6))
    spec = MercerSpec(beta=2.0, J=200)
    assert spec.c == pytest.approx(c, rel=1e-15)
    oracle = c * 2 * math.fsum(j**-2.0 for j in range(1, 201))
    k = FiniteRankMercer(spec)
    assert kernel_eval(k, 0.0, 0.0) == pytest.approx(oracle, rel=1e-13)
    assert 0.99 < oracle < 1.0


def test_matern_half_is_exponential(rng):
    k = Matern(0.5, 1.0)
    for x, y in zip(rng.uniform(size=(10, 3)), rng.uniform(size=(10, 3))):
        assert kernel_eval(k, x, y) == pytest.approx(math.exp(-np.linalg.norm(x - y)), rel=1e-14)


def test_matern_closed_forms(rng):
    x, y = rng.uniform(size=2), rng.uniform(size=2)
    r = np.linalg.norm(x - y) / 0.4
    s3, s5 = math.sqrt(3) * r, math.sqrt(5) * r
    assert kernel_eval(Matern(1.5, 0.4), x, y) == pytest.approx((1 + s3) * math.exp(-s3), rel=1e-14)
    assert kernel_eval(Matern(2.5, 0.4), x, y) == pytest.approx((1 + s5 + s5**2 / 3) * math.exp(-s5), rel=1e-14)


def test_matern_rejects_general_nu():
    with pytest.raises(InvalidArgumentError):
        Matern(0.7, 1.0)


def test_gram_single_point():
    K = gram(SquaredExponential(0.3), np.array([[0.1, 0.2]]))
    assert K.shape == (1, 1) and K[0, 0] == 1.0


def test_gram_duplicate_rank_one():
    X = np.array([[0.3, 0.4], [0.3, 0.4]])
    K = gram(SquaredExponential(0.2), X)
    assert np.array_equal(K, np.ones((2, 2)))
    np.testing.assert_allclose(np.linalg.eigvalsh(K), [0.0, 2.0], atol=1e-15)


def test_gram_matches_explicit_features(rng):
    spec = MercerSpec(beta=2.0, J=200)
    x = rng.uniform(size=10)
    j = np.arange(1, 201)
    lam = spec.c * j**-2.0
    Phi = np.sqrt(2) * np.cos(np.pi * np.outer(x, j))
    oracle = Phi @ np.diag(lam) @ Phi.T
    np.testing.assert_allclose(gram(FiniteRankMercer(spec), x), oracle, atol=1e-12, rtol=0)


def test_feature_map_origin():
    spec = MercerSpec(beta=2.0, J=50)
    np.testing.assert_allclose(feature_map(spec, 0.0), np.sqrt(spec.eigenvalues) * np.sqrt(2), rtol=1e-15)


def test_feature_map_half_zeros():
    f = feature_map(MercerSpec(beta=2.0, J=40), 0.5)
    odd = f[0::2]  # j = 1, 3, 5, ...
    assert np.all(np.abs(odd) < 1e-15)
    assert np.all(np.abs(f[1::2]) > 1e-6)


def test_feature_inner_product_is_kernel(rng):
    spec = MercerSpec(beta=2.5, J=300)
    k = FiniteRankMercer(spec)
    for x, y in rng.uniform(size=(20, 2)):
        assert abs(np.dot(feature_map(spec, x), feature_map(spec, y)) - kernel_eval(k, x, y)) <= 1e-14
        fx = feature_map(spec, x)
        assert np.dot(fx, fx) == kernel_eval(k, x, x)


def test_mercer_spec_invariants():
    spec = MercerSpec(beta=3.0, J=100)
    lam = spec.eigenvalues
    assert np.all(np.diff(lam) < 0) and lam[-1] > 0
    assert spec.F == pytest.approx(math.sqrt(2))
    grid = np.linspace(0, 1, 2001)
    assert np.max(np.abs(spec.eigenfunctions(grid))) <= spec.F + 1e-15
    with pytest.raises(InvalidArgumentError):
        MercerSpec(beta=1.0)


@pytest.mark.parametrize("k", KERNELS_2D, ids=repr)
def test_symmetry(k, rng):
    X, Y = rng.uniform(size=(15, 2)), rng.uniform(size=(15, 2))
    assert np.array_equal(k.cross(X, Y), k.cross(Y, X).T)


def test_mercer_symmetry(rng):
    k = FiniteRankMercer(MercerSpec(2.0, 300))
    x, y = rng.uniform(size=15), rng.uniform(size=15)
    assert np.max(np.abs(k.cross(x, y) - k.cross(y, x).T)) == 0.0


@pytest.mark.parametrize("k", KERNELS_2D + [FiniteRankMercer(MercerSpec(2.0, 500))], ids=repr)
def test_gram_psd(k):
    rng = np.random.default_rng(0)
    for _ in range(100):
        X = rng.uniform(size=(20, 1 if isinstance(k, FiniteRankMercer) else 2))
        if isinstance(k, FiniteRankMercer):
            X = X[:, 0]
        assert np.linalg.eigvalsh(gram(k, X)).min() >= -1e-8


@pytest.mark.parametrize("k", KERNELS_2D, ids=repr)
def test_normalization_stationary(k, rng):
    assert np.max(k.diag(rng.uniform(size=(10_000, 2)))) <= 1 + 1e-12


@pytest.mark.parametrize("beta", [1.5, 2.0, 3.0])
def test_normalization_mercer(beta):
    k = FiniteRankMercer(MercerSpec(beta, 500))
    assert np.max(k.diag(np.linspace(0, 1, 10_000))) <= 1 + 1e-12


def test_mercer_gram_equals_feature_outer(rng):
    spec = MercerSpec(2.0, 500)
    x = rng.uniform(size=40)
    P = spec.features(x)
    np.testing.assert_allclose(gram(FiniteRankMercer(spec), x), P @ P.T, atol=1e-10, rtol=0)


def test_eigenfunctions_orthonormal():
    spec = MercerSpec(2.0, 30)
    n = 100_000
    x = (np.arange(n) + 0.5) / n  # midpoint rule on [0, 1]
    Phi = spec.eigenfunctions(x)
    G = Phi.T @ Phi / n
    assert np.max(np.abs(G - np.eye(30))) <= 1e-4


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.05, 2.0))
def test_se_bounded_symmetric(a, b, ls):
    k = SquaredExponential(ls)
    assert 0.0 <= kernel_eval(k, [a, b], [b, a]) <= 1.0
    assert kernel_eval(k, [a, b], [b, a]) == kernel_eval(k, [b, a], [a, b])


def test_make_kernel():
    assert make_kernel("se", lengthscale=0.5) == SquaredExponential(0.5)
    assert make_kernel("matern", lengthscale=0.5, nu=1.5) == Matern(1.5, 0.5)
    assert isinstance(make_kernel("mercer", beta=3.0, J=10), FiniteRankMercer)
    with pytest.raises(InvalidArgumentError):
        make_kernel("periodic")
