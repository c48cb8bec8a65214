"""Closed-loop load runner for OpenAI-compatible streaming endpoints, plus a
deterministic mock endpoint for offline testing."""

from .mock_server import MockServer, MockTiming
from .runner import (
    LevelAggregate,
    LevelOutcome,
    RequestPayload,
    RequestTrace,
    RunConfig,
    SweepResult,
    WorkloadSpec,
    aggregate,
    load_workload,
    peak_in_flight,
    run_level,
    run_sweep,
    write_trace_log,
)

__all__ = [
    "LevelAggregate",
    "LevelOutcome",
    "MockServer",
    "MockTiming",
    "RequestPayload",
    "RequestTrace",
    "RunConfig",
    "SweepResult",
    "WorkloadSpec",
    "aggregate",
    "load_workload",
    "peak_in_flight",
    "run_level",
    "run_sweep",
    "write_trace_log",
]
