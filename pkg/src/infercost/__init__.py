"""Economics of LLM inference: GPU hourly cost, run cost, optimal
concurrency under service-level thresholds, and the cost-quality frontier."""

from .cost_model import (
    A800_BASELINE,
    ClusterSpec,
    GpuCostParams,
    HourlyCostBreakdown,
    break_even_utilization,
    cluster_hourly,
    effective_hourly,
    hourly_breakdown,
    reference_cluster_rate,
    run_cost,
)
from .dataset import (
    BenchmarkRun,
    ModelCard,
    Sweep,
    parse_dataset,
    parse_runs,
    recompute_costs,
    serialize_dataset,
    serialize_runs,
)
from .errors import EndpointError, ValidationError
from .fixture import FIXTURE_DATASET_ID, FIXTURE_HOURLY_USD, canonical_fixture
from .selection import (
    Frontier,
    MissingScoreError,
    OptimalChoice,
    ParetoPoint,
    PerfThresholds,
    WhatIfResult,
    feasible_configs,
    pareto_frontier,
    scaling_analysis,
    select_optimal,
    what_if,
)

__version__ = "0.1.0"

__all__ = [
    "A800_BASELINE",
    "BenchmarkRun",
    "ClusterSpec",
    "EndpointError",
    "FIXTURE_DATASET_ID",
    "FIXTURE_HOURLY_USD",
    "Frontier",
    "GpuCostParams",
    "HourlyCostBreakdown",
    "MissingScoreError",
    "ModelCard",
    "OptimalChoice",
    "ParetoPoint",
    "PerfThresholds",
    "Sweep",
    "ValidationError",
    "WhatIfResult",
    "break_even_utilization",
    "canonical_fixture",
    "cluster_hourly",
    "effective_hourly",
    "feasible_configs",
    "hourly_breakdown",
    "pareto_frontier",
    "parse_dataset",
    "parse_runs",
    "recompute_costs",
    "reference_cluster_rate",
    "run_cost",
    "scaling_analysis",
    "select_optimal",
    "serialize_dataset",
    "serialize_runs",
    "what_if",
]
