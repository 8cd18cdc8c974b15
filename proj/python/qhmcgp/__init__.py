"""Gaussian process regression with quantum-inspired HMC hyperparameter
sampling and adaptively placed inequality / monotonicity constraints."""

from ._qhmcgp import (
    ChainFailure,
    ConfigError,
    Error,
    InvalidArgument,
    benchmark_target,
    derivative_posterior,
    nll,
    nll_grad,
    normal_cdf,
    normal_quantile,
    posterior,
    relative_error,
    resolve_config,
    run_chain,
    run_experiment,
    se_kernel,
    selftest,
)

__all__ = [
    "ChainFailure",
    "ConfigError",
    "Error",
    "InvalidArgument",
    "benchmark_target",
    "derivative_posterior",
    "nll",
    "nll_grad",
    "normal_cdf",
    "normal_quantile",
    "posterior",
    "relative_error",
    "resolve_config",
    "run_chain",
    "run_experiment",
    "se_kernel",
    "selftest",
]
