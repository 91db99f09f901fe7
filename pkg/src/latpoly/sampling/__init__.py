"""Monte Carlo estimators for walk counts, bridge spans and tree spans."""

from .report import span_condition_report, wilson_interval
from .rng import stream
from .trees import (
    RegraftChain,
    chain_diagnostics,
    class_key,
    exact_transition_matrix,
    sample_trees_mcmc,
    stationary_vector,
    total_variation_from_uniform,
)
from .walks import PERM, ROSENBLUTH, TREE_MCMC, Estimate, PermConfig, SampleRun, sample_walks

__all__ = [
    "PERM",
    "ROSENBLUTH",
    "TREE_MCMC",
    "Estimate",
    "PermConfig",
    "RegraftChain",
    "SampleRun",
    "chain_diagnostics",
    "class_key",
    "exact_transition_matrix",
    "sample_trees_mcmc",
    "sample_walks",
    "span_condition_report",
    "stationary_vector",
    "stream",
    "total_variation_from_uniform",
    "wilson_interval",
]
