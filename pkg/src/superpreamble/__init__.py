"""Simulator for multi-phase random-access preambles with massive MIMO.

Users contend by sending a super preamble (one orthogonal sequence per
phase); the base station correlates the received signal with the pool,
detects which super preambles are present from cross-phase correlations,
and recovers channels with a pseudo-inverse.  The package provides the
building blocks, closed-form rate bounds, a brute-force enumeration
oracle, a reproducible Monte Carlo harness, and a CLI that regenerates
the standard measurement grids as CSV (optionally with figures).
"""

__version__ = "0.1.0"

from .airlink import NoiseSpec, correlate_pool, synthesize_correlation_fast, synthesize_received
from .bounds import BoundSet, all_user_bounds, bound_table, single_user_bounds
from .channel import (CorrelatedGeometry, DEFAULT_GEOMETRY, complex_normal,
                      correlated_rayleigh, iid_rayleigh, steering_vector)
from .detector import (DetectionResult, PhasePairCorrelations, cross_correlations,
                       detect, detect_single_phase)
from .errors import ResourceLimitError
from .estimation import ChannelEstimate, estimate_channels, nmse, prune_false
from .harness import (ExperimentConfig, Metrics, SweepRow, TrialOutcome,
                      run_experiment, run_trial, sweep, trial_rng)
from .preambles import (PreamblePool, RankReport, SelectionMatrix, build_pool,
                        draw_selection, enumerate_solvable_probabilities,
                        rank_exact, selection_from_indices, solvability)

__all__ = [
    "__version__",
    "BoundSet", "ChannelEstimate", "CorrelatedGeometry", "DEFAULT_GEOMETRY",
    "DetectionResult", "ExperimentConfig", "Metrics", "NoiseSpec",
    "PhasePairCorrelations", "PreamblePool", "RankReport", "ResourceLimitError",
    "SelectionMatrix", "SweepRow", "TrialOutcome",
    "all_user_bounds", "bound_table", "build_pool", "complex_normal",
    "correlate_pool", "correlated_rayleigh", "cross_correlations", "detect",
    "detect_single_phase", "draw_selection", "enumerate_solvable_probabilities",
    "estimate_channels", "iid_rayleigh", "nmse", "prune_false", "rank_exact",
    "run_experiment", "run_trial", "selection_from_indices", "single_user_bounds",
    "solvability", "steering_vector", "sweep", "synthesize_correlation_fast",
    "synthesize_received", "trial_rng",
]
