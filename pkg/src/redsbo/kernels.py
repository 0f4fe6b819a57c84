"""Covariance kernels: squared-exponential, Matern and a finite-rank Mercer kernel.

Every kernel exposes ``cross(X, Y)`` (the ``len(X) x len(Y)`` covariance
matrix) and ``diag(X)``. Points are ``(n, d)`` arrays; 1-d inputs to the
Mercer kernel may also be passed as flat vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import zeta

from redsbo import _backend
from redsbo.errors import InvalidArgumentError

_MATERN_NUS = (0.5, 1.5, 2.5)


def _as_points(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 0:
        X = X.reshape(1, 1)
    elif X.ndim == 1:
        X = X[None, :]
    return np.ascontiguousarray(X)


class Kernel:
    """Base class; subclasses implement :meth:`cross` and :meth:`diag`."""

    def cross(self, X, Y) -> np.ndarray:
        raise NotImplementedError

    def diag(self, X) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x, y) -> float:
        return float(self.cross(_as_points(x), _as_points(y))[0, 0])


@dataclass(frozen=True)
class SquaredExponential(Kernel):
    """``k(x, x') = exp(-|x - x'|^2 / (2 l^2))``."""

    lengthscale: float = 0.2

    def __post_init__(self):
        if not self.lengthscale > 0:
            raise InvalidArgumentError("lengthscale must be positive")

    def cross(self, X, Y):
        return _backend.impl.se_cross(_as_points(X), _as_points(Y), float(self.lengthscale))

    def diag(self, X):
        return np.ones(_as_points(X).shape[0])


@dataclass(frozen=True)
class Matern(Kernel):
    """Matern kernel for half-integer smoothness ``nu`` in {1/2, 3/2, 5/2}."""

    nu: float = 2.5
    lengthscale: float = 1.0

    def __post_init__(self):
        if float(self.nu) not in _MATERN_NUS:
            raise InvalidArgumentError(f"Matern nu must be one of {_MATERN_NUS}")
        if not self.lengthscale > 0:
            raise InvalidArgumentError("lengthscale must be positive")

    def cross(self, X, Y):
        return _backend.impl.matern_cross(
            _as_points(X), _as_points(Y), float(self.nu), float(self.lengthscale)
        )

    def diag(self, X):
        return np.ones(_as_points(X).shape[0])


@dataclass(frozen=True)
class MercerSpec:
    """Eigen-structure of a rank-``J`` kernel on [0, 1] under the uniform measure.

    Eigenfunctions are ``sqrt(2) cos(pi j x)`` (orthonormal, bounded by
    ``F = sqrt(2)``) and eigenvalues ``c j^-beta``. The default scale
    ``c = 1 / (2 zeta(beta))`` keeps ``k(x, x) <= 1``.
    """

    beta: float = 2.0
    J: int = 500
    c: float | None = None
    d: int = field(default=1, init=False)

    def __post_init__(self):
        if not self.beta > 1:
            raise InvalidArgumentError("eigendecay exponent beta must exceed 1")
        if int(self.J) < 1:
            raise InvalidArgumentError("truncation rank J must be positive")
        object.__setattr__(self, "J", int(self.J))
        if self.c is None:
            object.__setattr__(self, "c", 1.0 / (2.0 * float(zeta(self.beta))))
        elif not self.c > 0:
            raise InvalidArgumentError("eigenvalue scale c must be positive")

    @property
    def F(self) -> float:
        return float(np.sqrt(2.0))

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        lam = self.c * np.arange(1, self.J + 1, dtype=np.float64) ** (-self.beta)
        lam.setflags(write=False)
        return lam

    @cached_property
    def _feature_scale(self) -> np.ndarray:
        return np.ascontiguousarray(np.sqrt(2.0 * self.eigenvalues))

    def eigenfunctions(self, x) -> np.ndarray:
        """``(n, J)`` matrix of ``phi_j(x_i)``."""
        x = _flat_unit(x)
        return _backend.impl.cosine_features(x, np.full(self.J, np.sqrt(2.0)))

    def features(self, x) -> np.ndarray:
        """``(n, J)`` matrix of ``sqrt(lambda_j) phi_j(x_i)``."""
        return _backend.impl.cosine_features(_flat_unit(x), self._feature_scale)


def _flat_unit(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise InvalidArgumentError("Mercer kernel is defined on [0, 1] only")
        x = x[:, 0]
    return np.ascontiguousarray(np.atleast_1d(x))


@dataclass(frozen=True)
class FiniteRankMercer(Kernel):
    """``k(x, x') = sum_j lambda_j phi_j(x) phi_j(x')`` evaluated through features."""

    spec: MercerSpec = field(default_factory=MercerSpec)

    def cross(self, X, Y):
        return self.spec.features(X) @ self.spec.features(Y).T

    def diag(self, X):
        P = self.spec.features(X)
        return np.einsum("ij,ij->i", P, P)

    def __call__(self, x, y):
        return float(np.dot(feature_map(self.spec, x), feature_map(self.spec, y)))


def feature_map(spec: MercerSpec, x) -> np.ndarray:
    """Coordinates of the canonical feature of ``x`` in the orthonormal RKHS basis."""
    return spec.features(np.atleast_1d(np.asarray(x, dtype=np.float64)).reshape(1))[0]


def kernel_eval(k: Kernel, x, x_prime) -> float:
    return k(x, x_prime)


def gram(k: Kernel, X) -> np.ndarray:
    """Symmetric Gram matrix ``[k(x_i, x_j)]``."""
    X = _as_points(X) if not isinstance(k, FiniteRankMercer) else X
    K = k.cross(X, X)
    return 0.5 * (K + K.T)


def make_kernel(name: str, lengthscale: float = 0.2, nu: float = 2.5, beta: float = 2.0, J: int = 500) -> Kernel:
    """Build a kernel from a config-style name (``se``, ``matern``, ``mercer``)."""
    name = name.lower().replace("-", "_")
    if name in ("se", "rbf", "squared_exponential"):
        return SquaredExponential(lengthscale)
    if name == "matern":
        return Matern(nu, lengthscale)
    if name in ("mercer", "finite_rank_mercer"):
        return FiniteRankMercer(MercerSpec(beta=beta, J=J))
    raise InvalidArgumentError(f"unknown kernel {name!r}")
