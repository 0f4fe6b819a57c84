import math

import numpy as np
import pytest
from scipy.linalg import sqrtm

from redsbo import gp
from redsbo.domain import RngSeed
from redsbo.errors import InsufficientDataError, InvalidArgumentError
from redsbo.kernels import FiniteRankMercer, MercerSpec
from redsbo.theory import (
    decay_curve,
    decay_fit,
    info_gain_bound_check,
    nbar,
    operator_deviation,
    operator_pair,
    ratio_factor,
    rset_conditions,
    sample_points,
    spectral_function_N,
    spectral_profile,
    tail_function_T,
    unit_grid,
    validate,
    variance_ratio_check,
)

SPEC = MercerSpec(2.0, 500)
SMALL = MercerSpec(2.0, 40)


@pytest.mark.parametrize("R", [1, 2, 17, 40])
def test_spectral_function_is_2R(R):
    # every phi_j^2 equals 2 at x = 0, which is on the grid
    assert spectral_function_N(SMALL, R) == pytest.approx(2.0 * R, rel=1e-12)


@pytest.mark.parametrize("R", [0, 1, 10, 39])
def test_tail_function_closed_form(R):
    assert tail_function_T(SMALL, R) == pytest.approx(2.0 * SMALL.eigenvalues[R:].sum(), rel=1e-12)


def test_profile_matches_pointwise_functions():
    prof = spectral_profile(SMALL)
    for R in (1, 5, 39):
        assert prof.N[R] == pytest.approx(spectral_function_N(SMALL, R), rel=1e-12)
        assert prof.T[R] == pytest.approx(tail_function_T(SMALL, R), rel=1e-9)
    assert prof.T[SMALL.J] == 0.0 and prof.N[0] == 0.0
    # k(0, 0) = 2 * sum of eigenvalues
    assert prof.T[0] == pytest.approx(2.0 * SMALL.eigenvalues.sum(), rel=1e-12)


def test_spectral_range_checks():
    with pytest.raises(InvalidArgumentError):
        spectral_function_N(SMALL, 0)
    with pytest.raises(InvalidArgumentError):
        tail_function_T(SMALL, SMALL.J)


def _exhaustive_feasible(spec, prof, n, delta, tau):
    return [R for R in range(0, spec.J + 1) if all(rset_conditions(spec, prof, n, R, delta, tau))]


@pytest.mark.parametrize("spec", [SMALL, MercerSpec(3.0, 40)])
def test_nbar_witness_small(spec):
    prof = spectral_profile(spec)
    rep = nbar(spec, 0.1, 0.2, profile=prof)
    assert rep.feasible
    assert all(rset_conditions(spec, prof, rep.n_rset, rep.witness_R, 0.1, 0.2))
    assert _exhaustive_feasible(spec, prof, rep.n_rset - 1, 0.1, 0.2) == []
    assert rep.nbar == max(rep.n_rset, rep.floor_term)


def test_nbar_floor_term():
    rep = nbar(SMALL, 0.1, 0.2)
    assert rep.floor_term == math.ceil(729 * 4 * math.log(120))
    assert nbar(SMALL, 0.05, 0.2).floor_term == 15982


def test_nbar_infeasible_under_cap():
    rep = nbar(SMALL, 0.1, 0.2, cap=1000)
    assert not rep.feasible and rep.nbar is None


def test_nbar_rejects():
    with pytest.raises(InvalidArgumentError):
        nbar(SMALL, 0.1, 0.0)


def test_operator_deviation_empty_is_zero():
    assert operator_deviation(SMALL, np.zeros(0), 0.2) <= 1e-15


def test_operator_deviation_dense_oracle():
    for X in (np.array([0.37]), sample_points(30, RngSeed(1))):
        pair = operator_pair(SMALL, X, 0.2)
        Zm12 = np.linalg.inv(sqrtm(np.diag(pair.Z)).real)
        M = Zm12 @ pair.Zhat @ Zm12 - np.eye(SMALL.J)
        oracle = np.max(np.abs(np.linalg.eigvals(M).real))
        assert operator_deviation(SMALL, X, 0.2) == pytest.approx(oracle, rel=1e-9)


def test_operator_deviation_permutation_invariant():
    X = sample_points(200, RngSeed(2))
    a = operator_deviation(SPEC, X, 0.2)
    b = operator_deviation(SPEC, np.random.default_rng(0).permutation(X), 0.2)
    assert a == pytest.approx(b, rel=1e-10)


def test_ratio_factor():
    assert ratio_factor(0.0) == 1.0
    b = 0.1
    assert ratio_factor(b) == pytest.approx(math.sqrt(0.9) / (math.sqrt(0.9) - math.sqrt(0.2)))


def test_variance_ratio_applicable_case():
    rep = variance_ratio_check(SPEC, sample_points(8192, RngSeed(0, 101)), 0.2, unit_grid(100))
    assert rep.applicable and rep.deviation < 1 / 3
    assert rep.all_pass
    assert rep.max_ratio <= rep.factor


def test_variance_ratio_not_applicable_small_n():
    rep = variance_ratio_check(SPEC, sample_points(32, RngSeed(0)), 0.2, unit_grid(50))
    assert not rep.applicable and rep.all_pass and rep.deviation >= 1 / 3


def test_info_gain_bound_single_point():
    X = np.array([0.25])
    rep = info_gain_bound_check(SPEC, X, 0.2)
    gain = gp.info_gain(FiniteRankMercer(SPEC), X, 0.2)
    assert rep.info_gain == pytest.approx(gain)
    assert rep.rhs == pytest.approx(54 * 2 / 13 * gain)
    lhs = np.max((SPEC.features(unit_grid()) ** 2) @ (1 / (SPEC.eigenvalues + 0.2)))
    assert rep.lhs == pytest.approx(lhs)


def test_info_gain_bound_rejects():
    with pytest.raises(InvalidArgumentError):
        info_gain_bound_check(SPEC, np.zeros(0), 0.2)


def test_decay_fit_exact_power_law():
    ns = [64, 128, 256, 512, 1024]
    fit = decay_fit([(n, 3.0 * n**-0.7) for n in ns])
    assert fit.slope == pytest.approx(-0.7, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-10)


def test_decay_fit_drops_and_raises(caplog):
    pts = [(64, 1.0), (128, 0.0), (256, 0.25), (512, 0.125), (1024, 0.0625)]
    fit = decay_fit(pts)
    assert fit.dropped == 1 and fit.slope == pytest.approx(-1.0)
    with pytest.raises(InsufficientDataError):
        decay_fit(pts[:4])


def test_decay_curve_shape():
    cps = decay_curve(SMALL, 0.2, 16, 128, RngSeed(0), grid_size=500)
    assert [n for n, _ in cps] == [16, 32, 64, 128]
    assert all(b <= a + 1e-12 for (_, a), (_, b) in zip(cps, cps[1:]))


def test_validate_quick_records():
    recs = validate(beta=2.0, tau=0.2, seeds=2, J=60, quick=True)
    names = [r.name for r in recs]
    assert names == ["decay_noisy", "decay_noise_free", "variance_ratio", "info_gain_bound",
                     "operator_deviation", "feature_space_identity", "nbar"]
    for r in recs:
        assert set(r.to_dict()) == {"name", "params", "measured", "bound", "passed", "details"}
