"""Variable length Markov chains: context tree estimation, simulation and
exponential error bounds."""
from .core_tree import (
    BINARY,
    Alphabet,
    CombSpec,
    ContextOracle,
    ContextTree,
    ProbabilisticContextTree,
    ValidationReport,
    context_of,
    load_model,
    model_from_dict,
    model_to_dict,
    suf,
    truncate,
    validate_tree,
)
from .empirical import CountTrie, build_counts, count, count_dot, delta, empirical_prob
from .errors import *  # noqa: F401,F403
from .estimator import (
    EstimationParams,
    EstimationResult,
    attach_rows,
    estimate,
    estimate_brute_force,
    trees_equal_truncated,
)
from .experiments import ExperimentConfig, RecoveryCurve, run_deviation_experiment, run_recovery_experiment
from .model_analysis import (
    BoundReport,
    StationaryLaw,
    alpha_sequence,
    bound_count_deviation,
    bound_phat_deviation,
    bound_recovery,
    bound_report,
    conditional_probability,
    constant_C,
    divergence_sets,
    epsilon,
    minimal_depth,
    rho_sequence,
    stationary_law,
    word_probability,
)
from .sampler import SamplePath, child_seed, sample_path

__version__ = "0.1.0"
