"""Kernel-bandit optimization by random exploration with domain shrinking."""
from redsbo._backend import BACKEND
from redsbo.domain import Box, DiscreteDomain, RngSeed, discretize, grid_argmax, sample_uniform
from redsbo.gp import PosteriorModel, fit, info_gain, max_active_variance
from redsbo.kernels import FiniteRankMercer, Matern, MercerSpec, SquaredExponential, feature_map, gram, kernel_eval
from redsbo.reds import RunConfig, Variant, alpha_tau, confidence_band, run_reds, shrink
from redsbo.trace import Trace

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Box",
    "DiscreteDomain",
    "FiniteRankMercer",
    "Matern",
    "MercerSpec",
    "PosteriorModel",
    "RngSeed",
    "RunConfig",
    "SquaredExponential",
    "Trace",
    "Variant",
    "alpha_tau",
    "confidence_band",
    "discretize",
    "feature_map",
    "fit",
    "gram",
    "grid_argmax",
    "info_gain",
    "kernel_eval",
    "max_active_variance",
    "run_reds",
    "sample_uniform",
    "shrink",
]
