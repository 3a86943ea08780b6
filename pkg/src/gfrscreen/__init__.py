"""Variable screening for sparse high-dimensional linear regression.

Implements greedy forward regression (J columns per step; J = 1 is plain
forward regression), marginal screening (SIS) and its iterated variant
(ISIS), BIC-based stopping along a solution path, built-in Monte-Carlo
benchmark designs, and brute-force restricted eigenvalue/correlation
diagnostics.
"""

__version__ = "0.1.0"

from .errors import BudgetExceededError, DegeneracyError, ValidationError
from .projection import (
    ActiveSetState,
    CandidateGain,
    add_columns,
    all_candidate_gains,
    candidate_gain,
    init_state,
    sum_squared_residuals,
)
from .screening import (
    ScreeningPath,
    StepRecord,
    default_sis_size,
    fr_path,
    gfr_path,
    isis_path,
    sis_path,
    sis_rank,
    sis_select,
)
from .model_select import BicTrace, bic_trace, ebic_trace
from .simgen import SimulationSpec, TrueModel, make_example, sample_dataset
from .metrics import (
    MetricsReport,
    ReplicationOutcome,
    run_scenario,
    run_scenario_i,
    run_scenario_ii,
    run_scenario_iii,
)
from .diagnostics import (
    ConditionReport,
    RestrictedCorrelation,
    RestrictedSpectrum,
    check_coverage_budget_condition,
    check_step_recovery_condition,
    restricted_correlation,
    restricted_eigenvalues,
    restricted_isometry,
)
from .dataio import Dataset, read_dataset, standardize, standardize_columns, write_dataset_csv

__all__ = [
    "ActiveSetState",
    "BicTrace",
    "BudgetExceededError",
    "CandidateGain",
    "ConditionReport",
    "Dataset",
    "DegeneracyError",
    "MetricsReport",
    "ReplicationOutcome",
    "RestrictedCorrelation",
    "RestrictedSpectrum",
    "ScreeningPath",
    "SimulationSpec",
    "StepRecord",
    "TrueModel",
    "ValidationError",
    "add_columns",
    "all_candidate_gains",
    "bic_trace",
    "candidate_gain",
    "check_coverage_budget_condition",
    "check_step_recovery_condition",
    "default_sis_size",
    "ebic_trace",
    "fr_path",
    "gfr_path",
    "init_state",
    "isis_path",
    "make_example",
    "read_dataset",
    "restricted_correlation",
    "restricted_eigenvalues",
    "restricted_isometry",
    "run_scenario",
    "run_scenario_i",
    "run_scenario_ii",
    "run_scenario_iii",
    "sample_dataset",
    "sis_path",
    "sis_rank",
    "sis_select",
    "standardize",
    "standardize_columns",
    "sum_squared_residuals",
    "write_dataset_csv",
]
