"""Simultaneous bands and max-type tests for second-order parameters of a time series."""

from ._core import (
    Band,
    BootstrapDraws,
    DegenerateVarianceError,
    DomainError,
    Estimates,
    InferenceReport,
    NumericalError,
    __version__,
    aic_order,
    approx_check,
    bootstrap,
    coverage,
    estimate_second_order,
    example1,
    gaussian_max_quantile,
    hac_cov,
    hypothesis_tests,
    plugin_radii,
    select_bandwidth,
    sieve_bootstrap,
    simulate,
    true_parameters,
    yule_walker,
)

__all__ = [
    "Band",
    "BootstrapDraws",
    "DegenerateVarianceError",
    "DomainError",
    "Estimates",
    "InferenceReport",
    "NumericalError",
    "__version__",
    "aic_order",
    "approx_check",
    "bootstrap",
    "coverage",
    "estimate_second_order",
    "example1",
    "gaussian_max_quantile",
    "hac_cov",
    "hypothesis_tests",
    "plugin_radii",
    "select_bandwidth",
    "sieve_bootstrap",
    "simulate",
    "true_parameters",
    "yule_walker",
]
