"""Segmented regression and robust Theil-Sen/bootstrap inference for
interrupted time series."""

__version__ = "0.1.0"

from .core import Coding, DesignMatrix, InterventionSpec, TimeSeries, build_design, median, quantile, split
from .ols import OlsFit, ols_fit, t_cdf, t_test_beta3
from .robust import RobustEffect, Segment, SlopeSample, pairwise_slopes, robust_effect
from .rng import RngSpec
from .bootstrap import BootstrapResult, bootstrap_inference, bootstrap_null_test, bootstrap_percentile_ci
from .autocorr import durbin_watson, newey_west_se, prais_winsten

__all__ = [
    "BootstrapResult",
    "Coding",
    "DesignMatrix",
    "InterventionSpec",
    "OlsFit",
    "RngSpec",
    "RobustEffect",
    "Segment",
    "SlopeSample",
    "TimeSeries",
    "bootstrap_inference",
    "bootstrap_null_test",
    "bootstrap_percentile_ci",
    "build_design",
    "durbin_watson",
    "median",
    "newey_west_se",
    "ols_fit",
    "pairwise_slopes",
    "prais_winsten",
    "quantile",
    "robust_effect",
    "split",
    "t_cdf",
    "t_test_beta3",
]
