"""Exact Gaussian-process posterior, information gain and worst-case variance."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from redsbo.domain import DiscreteDomain
from redsbo.errors import EmptyDomainError, InvalidArgumentError, NumericalDegeneracyError
from redsbo.kernels import FiniteRankMercer, Kernel

log = logging.getLogger(__name__)

JITTER_LADDER = (0.0, 1e-10, 1e-8, 1e-6, 1e-4)
# pivots below this fraction of the largest prior variance count as a failed factorization
PIVOT_RTOL = 1e-12
NEGATIVE_VARIANCE_TOL = 1e-6
_QUERY_CHUNK = 2048


class Health:
    """Counters for silently repaired numerical events."""

    def __init__(self):
        self.negative_variance = 0
        self.jitter_escalations = 0

    def reset(self):
        self.negative_variance = 0
        self.jitter_escalations = 0


health = Health()


def _points(kernel: Kernel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if isinstance(kernel, FiniteRankMercer) and X.ndim == 1:
        return X[:, None]
    if X.ndim == 1:
        return X[None, :]
    return X


@dataclass(frozen=True, eq=False)
class PosteriorModel:
    """GP posterior conditioned on ``(X, Y)`` with regularizer ``tau``.

    ``tau_eff`` is the value actually added to the Gram diagonal; it exceeds
    ``tau`` only when the factorization needed jitter.
    """

    kernel: Kernel
    X: np.ndarray
    Y: np.ndarray
    tau: float
    tau_eff: float
    chol: np.ndarray
    alpha: np.ndarray

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def _blocks(self, Xq):
        Xq = _points(self.kernel, Xq)
        for start in range(0, Xq.shape[0], _QUERY_CHUNK):
            yield Xq[start:start + _QUERY_CHUNK]

    def mean(self, Xq) -> np.ndarray:
        if self.n == 0:
            return np.zeros(_points(self.kernel, Xq).shape[0])
        out = [self.kernel.cross(self.X, B).T @ self.alpha for B in self._blocks(Xq)]
        return np.concatenate(out)

    def variance(self, Xq) -> np.ndarray:
        return self.predict(Xq)[1]

    def predict(self, Xq) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and (clamped) variance at the query points."""
        means, variances = [], []
        for B in self._blocks(Xq):
            prior = self.kernel.diag(B)
            if self.n == 0:
                means.append(np.zeros(B.shape[0]))
                variances.append(prior)
                continue
            Kxq = self.kernel.cross(self.X, B)
            means.append(Kxq.T @ self.alpha)
            V = solve_triangular(self.chol, Kxq, lower=True, check_finite=False)
            variances.append(_clamp(prior - np.einsum("ij,ij->j", V, V)))
        return np.concatenate(means), np.concatenate(variances)


def _clamp(raw: np.ndarray) -> np.ndarray:
    bad = int(np.count_nonzero(raw < -NEGATIVE_VARIANCE_TOL))
    if bad:
        health.negative_variance += bad
        log.warning("%d posterior variances below -%g clamped to zero", bad, NEGATIVE_VARIANCE_TOL)
    return np.maximum(raw, 0.0)


def _try_cholesky(K: np.ndarray, ridge: float, scale: float):
    A = K + ridge * np.eye(K.shape[0])
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        return None
    piv = np.diag(L)
    if not np.all(np.isfinite(piv)) or np.min(piv) ** 2 < PIVOT_RTOL * scale:
        return None
    return L


def fit(kernel: Kernel, X, Y, tau: float = 0.0) -> PosteriorModel:
    """Condition the zero-mean GP prior on observations ``Y`` at ``X``.

    The factorization of ``K + tau I`` is retried with extra jitter from
    :data:`JITTER_LADDER` when it fails or produces vanishing pivots, which
    happens for duplicated inputs in the noise-free case.

    Raises
    ------
    NumericalDegeneracyError
        If every rung of the jitter ladder fails.
    """
    if tau < 0:
        raise InvalidArgumentError("tau must be non-negative")
    Y = np.asarray(Y, dtype=np.float64).reshape(-1)
    if Y.size == 0:
        X0 = np.asarray(X, dtype=np.float64)
        empty = np.zeros((0, X0.shape[1] if X0.ndim == 2 else 1))
        return PosteriorModel(kernel, empty, Y, float(tau), float(tau), np.zeros((0, 0)), np.zeros(0))
    X = _points(kernel, X)
    if X.shape[0] != Y.size:
        raise InvalidArgumentError("X and Y must have the same length")
    K = kernel.cross(X, X)
    K = 0.5 * (K + K.T)
    scale = max(float(np.max(np.diag(K))), np.finfo(float).tiny)
    ridge = float(tau)
    for i, jitter in enumerate(JITTER_LADDER):
        ridge = float(tau) + jitter
        L = _try_cholesky(K, ridge, scale)
        if L is not None:
            if i:
                health.jitter_escalations += 1
            break
    else:
        raise NumericalDegeneracyError("Cholesky factorization failed", ridge)
    alpha = cho_solve((L, True), Y, check_finite=False)
    for arr in (X, Y, L, alpha):
        arr.setflags(write=False)
    return PosteriorModel(kernel, X, Y, float(tau), ridge, L, alpha)


def _single(kernel: Kernel, x) -> bool:
    return np.ndim(x) == (0 if isinstance(kernel, FiniteRankMercer) else 1)


def mean(m: PosteriorModel, x):
    """Posterior mean at one point (float) or a batch of points (array)."""
    out = m.mean(x)
    return float(out[0]) if _single(m.kernel, x) else out


def variance(m: PosteriorModel, x):
    """Posterior variance, clamped at zero; float for one point, array otherwise."""
    out = m.variance(x)
    return float(out[0]) if _single(m.kernel, x) else out


def info_gain(kernel: Kernel, X, tau: float) -> float:
    """``0.5 log det(I + K / tau)`` via the Cholesky diagonal."""
    if not tau > 0:
        raise InvalidArgumentError("information gain needs tau > 0")
    X = _points(kernel, X)
    if X.shape[0] < 1:
        raise InvalidArgumentError("information gain needs at least one point")
    K = kernel.cross(X, X)
    A = np.eye(X.shape[0]) + 0.5 * (K + K.T) / tau
    L = np.linalg.cholesky(A)
    return float(np.sum(np.log(np.diag(L))))


def max_active_variance(m: PosteriorModel, dom: DiscreteDomain) -> tuple[int, float]:
    """Largest posterior variance over the active candidates (smallest index on ties)."""
    idx = dom.active_indices
    if idx.size == 0:
        raise EmptyDomainError("no active points")
    var = m.variance(dom.points[idx])
    k = int(np.argmax(var))
    return int(idx[k]), float(var[k])
