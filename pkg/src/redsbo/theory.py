"""Numerical checks of random-sampling concentration on the finite-rank Mercer kernel.

Everything here works in the ``J``-dimensional feature space of
:class:`~redsbo.kernels.FiniteRankMercer`, where the sample covariance
operator is ``Zhat = Psi^T Psi + tau I`` and its expectation under uniform
sampling is ``Z = diag(n lambda + tau)``. Suprema over ``x`` are taken on a
fixed uniform grid of [0, 1].
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from redsbo import gp
from redsbo.baselines import run_uniform
from redsbo.domain import Box, DiscreteDomain, RngSeed, discretize
from redsbo.errors import InsufficientDataError, InvalidArgumentError
from redsbo.kernels import FiniteRankMercer, MercerSpec
from redsbo.reds import RunConfig, Variant

log = logging.getLogger(__name__)

GRID_SIZE = 10_000
NBAR_CAP = 10**9


def unit_grid(size: int = GRID_SIZE) -> np.ndarray:
    return np.linspace(0.0, 1.0, int(size))


def _as_samples(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    return X[:, 0] if X.ndim == 2 else np.atleast_1d(X)


@dataclass(frozen=True)
class SpectralProfile:
    """Grid suprema of head and tail eigen-mass for every cut ``R = 0..J``.

    ``N[R] = sup_x sum_{j<=R} phi_j(x)^2`` and
    ``T[R] = sup_x sum_{j>R} lambda_j phi_j(x)^2``; ``T[J] = 0`` because the
    kernel has rank ``J``.
    """

    N: np.ndarray
    T: np.ndarray


def spectral_profile(spec: MercerSpec, grid=None) -> SpectralProfile:
    grid = unit_grid() if grid is None else _as_samples(grid)
    N = np.zeros(spec.J + 1)
    T = np.zeros(spec.J + 1)
    head = np.zeros(grid.size)
    phi2 = spec.eigenfunctions(grid) ** 2
    weighted = phi2 * spec.eigenvalues
    tail = weighted.sum(axis=1)
    T[0] = tail.max()
    for R in range(1, spec.J + 1):
        head += phi2[:, R - 1]
        tail -= weighted[:, R - 1]
        N[R] = head.max()
        T[R] = max(tail.max(), 0.0) if R < spec.J else 0.0
    return SpectralProfile(N, T)


def spectral_function_N(spec: MercerSpec, R: int, grid=None) -> float:
    """``sup_x sum_{j<=R} phi_j(x)^2`` on the grid."""
    if not 1 <= R <= spec.J:
        raise InvalidArgumentError(f"R must lie in [1, {spec.J}]")
    grid = unit_grid() if grid is None else _as_samples(grid)
    phi = spec.eigenfunctions(grid)[:, :R]
    return float(np.max(np.sum(phi * phi, axis=1)))


def tail_function_T(spec: MercerSpec, R: int, grid=None) -> float:
    """``sup_x sum_{R<j<=J} lambda_j phi_j(x)^2`` on the grid."""
    if not 0 <= R < spec.J:
        raise InvalidArgumentError(f"R must lie in [0, {spec.J})")
    grid = unit_grid() if grid is None else _as_samples(grid)
    phi = spec.eigenfunctions(grid)[:, R:]
    return float(np.max(phi * phi @ spec.eigenvalues[R:]))


def _lambda_after(spec: MercerSpec, R: int) -> float:
    return float(spec.eigenvalues[R]) if R < spec.J else 0.0


def rset_conditions(spec: MercerSpec, profile: SpectralProfile, n: int, R: int, delta: float, tau: float):
    """Both sample-size conditions for cut ``R`` at sample size ``n``, as booleans."""
    first = profile.N[R] <= n / (1944.0 * math.log(6.0 * n / delta))
    second = max(42.0 * profile.T[R], n * _lambda_after(spec, R)) * math.log(12.0 / delta) <= tau / 27.0
    return bool(first), bool(second)


@dataclass(frozen=True)
class NbarReport:
    nbar: int | None
    n_rset: int | None
    witness_R: int | None
    floor_term: int
    feasible: bool


def _min_n_first(NR: float, delta: float, cap: int) -> int | None:
    ok = lambda n: NR <= n / (1944.0 * math.log(6.0 * n / delta))  # noqa: E731
    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 2 * cap:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def nbar(spec: MercerSpec, delta: float, tau: float, cap: int = NBAR_CAP, profile=None) -> NbarReport:
    """Sample size beyond which the concentration argument applies.

    For each cut ``R`` the first condition holds on ``[n_1(R), inf)`` and the
    second on ``[1, n_2(R)]``, so the smallest feasible ``n`` is the smallest
    ``n_1(R)`` that still satisfies the second condition. ``n_1(R)`` is found
    by doubling and bisection.
    """
    if not 0 < delta < 1 or not tau > 0:
        raise InvalidArgumentError("nbar needs delta in (0, 1) and tau > 0")
    profile = spectral_profile(spec) if profile is None else profile
    floor_term = math.ceil(729.0 * spec.F**4 * math.log(12.0 / delta))
    best, witness = None, None
    for R in range(1, spec.J + 1):
        if 42.0 * profile.T[R] * math.log(12.0 / delta) > tau / 27.0:
            continue
        n1 = _min_n_first(profile.N[R], delta, cap)
        if n1 is None or n1 > cap:
            continue
        if n1 * _lambda_after(spec, R) * math.log(12.0 / delta) > tau / 27.0:
            continue
        if best is None or n1 < best:
            best, witness = n1, R
    if best is None:
        return NbarReport(None, None, None, floor_term, False)
    return NbarReport(max(best, floor_term), best, witness, floor_term, True)


@dataclass(frozen=True, eq=False)
class OperatorPair:
    """Sample covariance operator and its expectation, in feature coordinates."""

    Zhat: np.ndarray
    Z: np.ndarray  # diagonal entries n lambda_j + tau
    n: int


def operator_pair(spec: MercerSpec, X, tau: float) -> OperatorPair:
    Psi = spec.features(_as_samples(X)) if np.size(X) else np.zeros((0, spec.J))
    Zhat = Psi.T @ Psi + tau * np.eye(spec.J)
    return OperatorPair(0.5 * (Zhat + Zhat.T), Psi.shape[0] * spec.eigenvalues + tau, Psi.shape[0])


def operator_deviation(spec: MercerSpec, X, tau: float) -> float:
    """Spectral norm of ``Z^-1/2 Zhat Z^-1/2 - I``."""
    if not tau > 0:
        raise InvalidArgumentError("operator deviation needs tau > 0")
    pair = operator_pair(spec, X, tau)
    s = 1.0 / np.sqrt(pair.Z)
    M = pair.Zhat * np.outer(s, s) - np.eye(spec.J)
    return float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (M + M.T)))))


def _quad_forms(spec: MercerSpec, X, tau: float, probes):
    pair = operator_pair(spec, X, tau)
    P = spec.features(_as_samples(probes))
    q_hat = np.einsum("ij,ji->i", P, cho_solve(cho_factor(pair.Zhat), P.T))
    q = (P * P) @ (1.0 / pair.Z)
    return q_hat, q


def feature_space_variance(spec: MercerSpec, X, tau: float, probes) -> np.ndarray:
    """Posterior variance computed as ``tau <psi_x, Zhat^-1 psi_x>``."""
    if not tau > 0:
        raise InvalidArgumentError("the feature-space identity needs tau > 0")
    return tau * _quad_forms(spec, X, tau, probes)[0]


@dataclass
class VarianceRatioReport:
    applicable: bool
    deviation: float
    factor: float
    ratios: np.ndarray
    passed: np.ndarray

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max()) if self.ratios.size else float("nan")

    @property
    def all_pass(self) -> bool:
        return bool(np.all(self.passed))


def ratio_factor(b: float) -> float:
    """``sqrt(1-b) / (sqrt(1-b) - sqrt(2b))`` for ``b`` in [0, 1/3)."""
    return math.sqrt(1.0 - b) / (math.sqrt(1.0 - b) - math.sqrt(2.0 * b))


def variance_ratio_check(spec: MercerSpec, X, tau: float, probes) -> VarianceRatioReport:
    """Compare ``<psi, Zhat^-1 psi>`` with the deviation-dependent multiple of ``<psi, Z^-1 psi>``.

    Only meaningful when the measured deviation is below 1/3; otherwise the
    report is marked not applicable and every probe counts as passing.
    """
    b = operator_deviation(spec, X, tau)
    q_hat, q = _quad_forms(spec, X, tau, probes)
    ratios = q_hat / q
    if b >= 1.0 / 3.0:
        return VarianceRatioReport(False, b, float("inf"), ratios, np.ones(ratios.size, dtype=bool))
    factor = ratio_factor(b)
    return VarianceRatioReport(True, b, factor, ratios, q_hat <= factor * q * (1.0 + 1e-12))


@dataclass(frozen=True)
class InfoGainBoundReport:
    lhs: float
    rhs: float
    info_gain: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs


def info_gain_bound_check(spec: MercerSpec, X, tau: float, grid=None) -> InfoGainBoundReport:
    """``sup_x <psi_x, Z^-1 psi_x>`` against ``54 F^2 / (13 n)`` times the information gain."""
    X = _as_samples(X)
    n = X.size
    if n < 1 or not tau > 0:
        raise InvalidArgumentError("needs n >= 1 and tau > 0")
    grid = unit_grid() if grid is None else _as_samples(grid)
    P = spec.features(grid)
    lhs = float(np.max((P * P) @ (1.0 / (n * spec.eigenvalues + tau))))
    gain = gp.info_gain(FiniteRankMercer(spec), X, tau)
    return InfoGainBoundReport(lhs, 54.0 * spec.F**2 / (13.0 * n) * gain, gain)


@dataclass(frozen=True)
class DecayFit:
    ns: np.ndarray
    sup_var: np.ndarray
    slope: float
    intercept: float
    dropped: int = 0


def decay_fit(checkpoints) -> DecayFit:
    """Least-squares slope of ``log sup_var`` against ``log n``."""
    pts = [(int(n), float(v)) for n, v in checkpoints]
    kept = [(n, v) for n, v in pts if v > 0 and np.isfinite(v)]
    dropped = len(pts) - len(kept)
    if dropped:
        log.warning("dropping %d non-positive checkpoint variances", dropped)
    if len(kept) < 4:
        raise InsufficientDataError(f"need at least 4 positive checkpoints, have {len(kept)}")
    ns = np.array([n for n, _ in kept], dtype=np.float64)
    if np.any(np.diff(ns) <= 0):
        raise InvalidArgumentError("checkpoint sizes must be strictly increasing")
    sv = np.array([v for _, v in kept])
    slope, intercept = np.polyfit(np.log(ns), np.log(sv), 1)
    return DecayFit(ns, sv, float(slope), float(intercept), dropped)


def _zero_objective(x) -> float:
    return 0.0


def decay_curve(spec: MercerSpec, tau: float, n_min: int, n_max: int, seed: RngSeed, grid_size: int = GRID_SIZE):
    """Worst grid variance after ``n_min, 2 n_min, ..., n_max`` uniform samples.

    Samples are drawn i.i.d. from the evaluation grid itself (the candidate
    set of a uniform-sampling run); ``tau = 0`` gives noise-free fits.
    """
    dom = DiscreteDomain(unit_grid(grid_size)[:, None], Box.unit(1))
    variant = Variant.NOISY if tau > 0 else Variant.NOISE_FREE
    cfg = RunConfig(B=1.0, delta=0.5, tau=tau, n1=n_min, T=n_max, variant=variant,
                    domain_size=len(dom), seed=seed)
    return run_uniform(_zero_objective, cfg, dom, FiniteRankMercer(spec)).checkpoints


def sample_points(n: int, seed: RngSeed) -> np.ndarray:
    return discretize(Box.unit(1), n, seed).points[:, 0]


@dataclass
class ValidationRecord:
    name: str
    params: dict
    measured: float
    bound: float | list
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def validate(beta: float = 2.0, tau: float = 0.2, seeds: int = 10, J: int = 500, delta: float = 0.1,
             master_seed: int = 0, quick: bool = False) -> list[ValidationRecord]:
    """Run the concentration checks and return one record per check."""
    spec = MercerSpec(beta=beta, J=J)
    records = []
    n_max = 1024 if quick else 4096
    base = {"beta": beta, "tau": tau, "J": J, "seeds": seeds}

    for label, t, window in (("decay_noisy", tau, (1.0 / beta - 1.0 - 0.5, 1.0 / beta - 1.0 + 0.3)),
                             ("decay_noise_free", 0.0, (1.0 - beta - 0.6, 1.0 - beta + 0.3))):
        slopes = [decay_fit(decay_curve(spec, t, 64, n_max, RngSeed(master_seed, s))).slope for s in range(seeds)]
        med = float(np.median(slopes))
        records.append(ValidationRecord(label, {**base, "tau": t, "n": [64, n_max]}, med, list(window),
                                        window[0] <= med <= window[1], {"slopes": slopes}))

    n2 = 512
    probes = unit_grid(100)
    viol, applicable = 0, 0
    for s in range(seeds):
        rep = variance_ratio_check(spec, sample_points(n2, RngSeed(master_seed, 100 + s)), tau, probes)
        applicable += rep.applicable
        viol += int(np.sum(~rep.passed))
    records.append(ValidationRecord("variance_ratio", {**base, "n": n2}, float(viol), 0.0, viol == 0,
                                    {"applicable_seeds": applicable}))

    n3 = 512 if quick else 2048
    passes = [info_gain_bound_check(spec, sample_points(n3, RngSeed(master_seed, 200 + s)), tau).passed
              for s in range(seeds)]
    rate = float(np.mean(passes))
    records.append(ValidationRecord("info_gain_bound", {**base, "n": n3}, rate, 1.0 - delta, rate >= 1.0 - delta))

    devs = [operator_deviation(spec, sample_points(n_max, RngSeed(master_seed, 300 + s)), tau) for s in range(seeds)]
    frac = float(np.mean(np.array(devs) <= 1.0 / 9.0))
    records.append(ValidationRecord("operator_deviation", {**base, "n": n_max}, frac, 1.0 - delta / 2.0,
                                    frac >= 1.0 - delta / 2.0, {"median_deviation": float(np.median(devs))}))

    worst = 0.0
    for s in range(seeds):
        X = sample_points(256, RngSeed(master_seed, 400 + s))
        model = gp.fit(FiniteRankMercer(spec), X, np.zeros(X.size), tau)
        a, b = feature_space_variance(spec, X, tau, probes), model.variance(probes)
        worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))))
    records.append(ValidationRecord("feature_space_identity", {**base, "n": 256}, worst, 1e-6, worst <= 1e-6))

    rep = nbar(spec, delta, tau)
    records.append(ValidationRecord("nbar", {**base, "delta": delta}, float(rep.nbar or -1), float(NBAR_CAP),
                                    rep.feasible, {"n_rset": rep.n_rset, "witness_R": rep.witness_R,
                                                   "floor_term": rep.floor_term}))
    return records
