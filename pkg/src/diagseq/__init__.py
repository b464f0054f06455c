"""Sequential fault diagnosis toolkit.

Orders diagnostic tests by ascending cost/probability ratio, evaluates the
expected time of arbitrary fixed orders under a single-fault assumption,
quantifies how robust order comparisons are to noisy inputs, and serves the
whole thing over a small HTTP API with an interactive session model.
"""

from .engine import (
    EvaluatedStrategy,
    SequencedTest,
    brute_force_optimum,
    condition_on_pass,
    cp_sequence,
    cp_strategy,
    expected_cost,
    swap_delta,
)
from .model import (
    Component,
    ExpertRule,
    FaultModel,
    ModelValidationError,
    Symptom,
    TestStrategy,
    bundled_dataset,
    normalize,
    parse_model,
    serialize_model,
)
from .report import ComparisonReport, ComparisonRow, compare, render
from .sensitivity import (
    DEFAULT_SEED,
    CriticalFactorNotFound,
    SensitivityConfig,
    SensitivitySummary,
    critical_error_factor,
    diff_distribution,
    sample_cost,
    sample_prob,
)

__version__ = "0.1.0"

__all__ = [
    "Component",
    "Symptom",
    "TestStrategy",
    "ExpertRule",
    "FaultModel",
    "ModelValidationError",
    "parse_model",
    "serialize_model",
    "normalize",
    "bundled_dataset",
    "SequencedTest",
    "EvaluatedStrategy",
    "expected_cost",
    "cp_sequence",
    "cp_strategy",
    "swap_delta",
    "brute_force_optimum",
    "condition_on_pass",
    "SensitivityConfig",
    "SensitivitySummary",
    "CriticalFactorNotFound",
    "DEFAULT_SEED",
    "sample_cost",
    "sample_prob",
    "diff_distribution",
    "critical_error_factor",
    "ComparisonRow",
    "ComparisonReport",
    "compare",
    "render",
    "__version__",
]
