"""Simulation laboratory for secretary-style selection with predictions.

Selection rules that peg doubtful competitors against a running prediction
error, with probability-1 value guarantees and a fairness floor, plus the
classic and prediction-trusting baselines they are measured against.
"""

from .core import (
    ADDITIVE,
    ALGEBRAS,
    MULTIPLICATIVE,
    SYMMETRIC_MULTIPLICATIVE,
    ErrorAlgebra,
    Instance,
    RunningError,
    Schedule,
    algebra_assumption_check,
    best_predicted_index,
    best_true_index,
    lambert_w0,
    lambert_wm1,
    make_instance,
    prediction_error,
    sample_schedule,
)
from .generators import (
    ADVERSARIAL,
    ALMOST_CONSTANT,
    FAMILIES,
    LEARNED_DYNKIN_COUNTER,
    SWEEP_FAMILIES,
    UNFAIR,
    UNIFORM,
    VALUE_MAX_COUNTER,
    FamilySpec,
    counterexample_learned_dynkin,
    counterexample_value_max,
    gen_adversarial,
    gen_almost_constant,
    gen_uniform,
    gen_unfair,
    generate_instance,
)
from .harness import (
    REGISTRY,
    AlgorithmSpec,
    ExactStats,
    OracleComparison,
    TrialStats,
    check_smoothness,
    compare_oracle_montecarlo,
    exact_oracle,
    generate_cell,
    run_trials,
    trial_seed,
)
from .multi_select import SetSelection, fair_half_run, k_pegging_run, rank_accessor
from .single_select import (
    CLASSIC_CUTOFF,
    SelectionOutcome,
    additive_pegging_run,
    dynkin_run,
    highest_prediction_run,
    learned_dynkin_run,
    multiplicative_pegging_run,
    pegging_run,
    symmetric_pegging_run,
    value_max_phase_times,
    value_max_secretary_run,
)

__version__ = "0.1.0"

__all__ = [
    "ADDITIVE",
    "ADVERSARIAL",
    "ALGEBRAS",
    "ALMOST_CONSTANT",
    "CLASSIC_CUTOFF",
    "FAMILIES",
    "LEARNED_DYNKIN_COUNTER",
    "MULTIPLICATIVE",
    "REGISTRY",
    "SWEEP_FAMILIES",
    "SYMMETRIC_MULTIPLICATIVE",
    "UNFAIR",
    "UNIFORM",
    "VALUE_MAX_COUNTER",
    "AlgorithmSpec",
    "ErrorAlgebra",
    "ExactStats",
    "FamilySpec",
    "Instance",
    "OracleComparison",
    "RunningError",
    "Schedule",
    "SelectionOutcome",
    "SetSelection",
    "TrialStats",
    "additive_pegging_run",
    "algebra_assumption_check",
    "best_predicted_index",
    "best_true_index",
    "check_smoothness",
    "compare_oracle_montecarlo",
    "counterexample_learned_dynkin",
    "counterexample_value_max",
    "dynkin_run",
    "exact_oracle",
    "fair_half_run",
    "gen_adversarial",
    "gen_almost_constant",
    "gen_uniform",
    "gen_unfair",
    "generate_cell",
    "generate_instance",
    "highest_prediction_run",
    "k_pegging_run",
    "lambert_w0",
    "lambert_wm1",
    "learned_dynkin_run",
    "make_instance",
    "multiplicative_pegging_run",
    "pegging_run",
    "prediction_error",
    "rank_accessor",
    "run_trials",
    "sample_schedule",
    "symmetric_pegging_run",
    "trial_seed",
    "value_max_phase_times",
    "value_max_secretary_run",
]
