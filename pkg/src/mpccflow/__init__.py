"""Gradient-flow solver for mathematical programs with complementarity constraints.

The pipeline: relax each complementarity pair through a piecewise kernel
(`regularize`), penalize the relaxed constraint stack into a smooth energy
(`energy`), integrate the steepest-descent flow of that energy to a rest
point (`flow`), and drive the relaxation/penalty homotopy with multi-start
and stationarity classification (`driver`). `suite` ships the benchmark
problems, `cli` the command-line front end.
"""

from .model import (
    Array,
    EvalRecord,
    FeasibilityRecord,
    IndexSets,
    ProblemDef,
    ScalarField,
    classify_indices,
    evaluate,
    finite_difference_gradient,
    gradient_consistency,
    mpcc_feasibility,
)
from .regularize import (
    RegularizedStack,
    grad_phi,
    jacobian_transpose_apply,
    ncp_check,
    phi,
    relax_b,
    stack_constraints,
)
from .energy import EnergyParams, energy, energy_and_grad, grad_energy, penalty
from .flow import (
    FlowConfig,
    LyapunovReport,
    StepResult,
    Trajectory,
    integrate,
    lyapunov_report,
    resolve_grad_tol,
    step_dense,
    trajectory_from_csv,
    trajectory_to_csv,
)
from .driver import (
    DEFAULT_BETAS,
    DEFAULT_LAMBDAS,
    LicqRecord,
    MultiStartResult,
    MultiplierEstimate,
    Schedule,
    SolveReport,
    StageRecord,
    check_mpcc_licq,
    classify_stationarity,
    estimate_multipliers,
    multi_start,
    nlp_beta_feasibility,
    report_to_json,
    sample_start,
    select_best,
    solve,
)
from .suite import (
    BenchmarkEntry,
    ReferenceRow,
    RunSetting,
    benchmark_entries,
    benchmark_entry,
    get_problem,
    list_problems,
    mpcc1,
    mpcc3,
    mpcc4,
    mpcc5,
    mpcc6,
    register_problem,
)

__version__ = "0.1.0"

__all__ = [
    "Array",
    "DEFAULT_BETAS",
    "DEFAULT_LAMBDAS",
    "BenchmarkEntry",
    "EnergyParams",
    "EvalRecord",
    "FeasibilityRecord",
    "FlowConfig",
    "IndexSets",
    "LicqRecord",
    "LyapunovReport",
    "MultiStartResult",
    "MultiplierEstimate",
    "ProblemDef",
    "ReferenceRow",
    "RunSetting",
    "ScalarField",
    "Schedule",
    "SolveReport",
    "StageRecord",
    "StepResult",
    "Trajectory",
    "benchmark_entries",
    "benchmark_entry",
    "check_mpcc_licq",
    "classify_indices",
    "classify_stationarity",
    "energy",
    "energy_and_grad",
    "estimate_multipliers",
    "evaluate",
    "finite_difference_gradient",
    "get_problem",
    "grad_energy",
    "grad_phi",
    "gradient_consistency",
    "integrate",
    "jacobian_transpose_apply",
    "list_problems",
    "lyapunov_report",
    "mpcc1",
    "mpcc3",
    "mpcc4",
    "mpcc5",
    "mpcc6",
    "mpcc_feasibility",
    "multi_start",
    "ncp_check",
    "nlp_beta_feasibility",
    "penalty",
    "phi",
    "register_problem",
    "relax_b",
    "report_to_json",
    "resolve_grad_tol",
    "sample_start",
    "select_best",
    "solve",
    "stack_constraints",
    "step_dense",
    "trajectory_from_csv",
    "trajectory_to_csv",
    "__version__",
]
