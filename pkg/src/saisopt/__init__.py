"""Population-based continuous minimization with symbiotic operators.

Public surface: benchmark catalog (`make_problem`, `list_problems`), the
SAIS and SOS engines (`run_sais`, `run_sos`), and the experiment harness
(`run_experiment`, `sweep`, `average_curve`, `compare_cost`).
"""

from .benchmarks import BenchmarkEntry, list_problems, make_problem, with_noise_hook
from .core import (
    Antibody,
    ConfigurationError,
    ContractViolationError,
    EvalCounter,
    Problem,
    RngStream,
    RunAbortedError,
    TrialResult,
    clamp_to_bounds,
    evaluate,
    random_antibody,
)
from .harness import (
    CostReport,
    ExperimentSpec,
    SummaryStats,
    average_curve,
    compare_cost,
    run_experiment,
    summarize,
    sweep,
)
from .sais import (
    OPERATORS,
    PhasePartition,
    SaisConfig,
    commensalism_phase,
    elitist_merge,
    mutualism_phase,
    parasitism_phase,
    partition,
    run_sais,
)
from .sos import SosConfig, run_sos

__version__ = "0.1.0"

__all__ = [
    "Antibody",
    "BenchmarkEntry",
    "ConfigurationError",
    "ContractViolationError",
    "CostReport",
    "EvalCounter",
    "ExperimentSpec",
    "OPERATORS",
    "PhasePartition",
    "Problem",
    "RngStream",
    "RunAbortedError",
    "SaisConfig",
    "SosConfig",
    "SummaryStats",
    "TrialResult",
    "average_curve",
    "clamp_to_bounds",
    "commensalism_phase",
    "compare_cost",
    "elitist_merge",
    "evaluate",
    "list_problems",
    "make_problem",
    "mutualism_phase",
    "parasitism_phase",
    "partition",
    "random_antibody",
    "run_experiment",
    "run_sais",
    "run_sos",
    "summarize",
    "sweep",
    "with_noise_hook",
]
