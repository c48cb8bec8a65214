"""Optimal-configuration selection and the cost-quality frontier.

Service-level thresholds gate which concurrency levels are acceptable;
among those, the cheapest level (shortest total completion time) wins.
Across models, two-axis Pareto dominance over (cost, quality) separates
the efficient frontier from dominated choices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cost_model import GpuCostParams, reference_cluster_rate, run_cost
from .dataset import BenchmarkRun, Sweep
from .errors import ValidationError


@dataclass(frozen=True)
class PerfThresholds:
    """Service-level targets: TTFT ceiling and per-request throughput floor, both strict."""

    max_ttft_s: float = 1.0
    min_throughput_tok_s: float = 20.0

    def __post_init__(self) -> None:
        if not self.max_ttft_s > 0:
            raise ValidationError("max_ttft_s must be > 0", field="max_ttft_s")
        if not self.min_throughput_tok_s > 0:
            raise ValidationError("min_throughput_tok_s must be > 0", field="min_throughput_tok_s")

    def as_dict(self) -> dict:
        return {"max_ttft_s": self.max_ttft_s, "min_throughput_tok_s": self.min_throughput_tok_s}


@dataclass(frozen=True)
class RejectedLevel:
    concurrency: int
    reasons: tuple[str, ...]

    def as_dict(self) -> dict:
        return {"concurrency": self.concurrency, "reasons": list(self.reasons)}


@dataclass(frozen=True)
class OptimalChoice:
    """Outcome of selecting one model's concurrency under thresholds.

    When no level qualifies, `feasible` is False, `run` is absent, and
    `rejected` holds the full audit of why each level failed.
    """

    model_id: str
    feasible: bool
    concurrency: int | None
    run: BenchmarkRun | None
    cost_usd: float | None
    rejected: tuple[RejectedLevel, ...]

    def as_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "feasible": self.feasible,
            "concurrency": self.concurrency,
            "run": self.run.as_dict() if self.run is not None else None,
            "cost_usd": self.cost_usd,
            "rejected": [r.as_dict() for r in self.rejected],
        }


@dataclass(frozen=True)
class ParetoPoint:
    """One model's coordinates at its optimal configuration."""

    model_id: str
    cost_usd: float
    quality: float
    params_billion: float

    def __post_init__(self) -> None:
        if not self.cost_usd > 0:
            raise ValidationError("cost_usd must be > 0", field="cost_usd")
        if not 0 <= self.quality <= 100:
            raise ValidationError("quality must be in [0, 100]", field="quality")

    def as_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "cost_usd": self.cost_usd,
            "quality": self.quality,
            "params_billion": self.params_billion,
        }


@dataclass(frozen=True)
class DominatedPoint:
    point: ParetoPoint
    dominated_by: ParetoPoint

    def as_dict(self) -> dict:
        return {"point": self.point.as_dict(), "dominated_by": self.dominated_by.model_id}


@dataclass(frozen=True)
class Frontier:
    """Non-dominated points sorted by cost ascending, plus the dominated rest."""

    points: tuple[ParetoPoint, ...]
    dominated: tuple[DominatedPoint, ...]

    @property
    def member_ids(self) -> tuple[str, ...]:
        return tuple(p.model_id for p in self.points)

    def as_dict(self) -> dict:
        return {
            "points": [p.as_dict() for p in self.points],
            "dominated": [d.as_dict() for d in self.dominated],
        }


def dominates(a: ParetoPoint, b: ParetoPoint) -> bool:
    """True if `a` is no worse than `b` on both axes and strictly better on one."""
    return (
        a.cost_usd <= b.cost_usd
        and a.quality >= b.quality
        and (a.cost_usd < b.cost_usd or a.quality > b.quality)
    )


def _violations(run: BenchmarkRun, thresholds: PerfThresholds) -> tuple[str, ...]:
    reasons = []
    if not run.avg_ttft_s < thresholds.max_ttft_s:
        reasons.append(f"avg_ttft_s {run.avg_ttft_s} not < {thresholds.max_ttft_s}")
    if not run.avg_throughput_tok_s > thresholds.min_throughput_tok_s:
        reasons.append(f"avg_throughput_tok_s {run.avg_throughput_tok_s} not > {thresholds.min_throughput_tok_s}")
    return tuple(reasons)


def feasible_configs(sweep: Sweep, thresholds: PerfThresholds) -> list[BenchmarkRun]:
    """Runs meeting both thresholds (strict comparisons), order preserved."""
    return [run for run in sweep.runs if not _violations(run, thresholds)]


def select_optimal(sweep: Sweep, thresholds: PerfThresholds, hourly_usd: float) -> OptimalChoice:
    """Pick the feasible run with the shortest total time (lowest cost).

    Ties on total time break toward the lower concurrency. When nothing
    qualifies the result is infeasible and carries the rejection audit.
    """
    if not sweep.runs:
        raise ValidationError(f"sweep {sweep.model_id!r} has no runs", field="runs")
    if not hourly_usd > 0:
        raise ValidationError("hourly_usd must be > 0", field="hourly_usd")
    rejected = tuple(
        RejectedLevel(run.concurrency, reasons)
        for run in sweep.runs
        if (reasons := _violations(run, thresholds))
    )
    feasible = feasible_configs(sweep, thresholds)
    if not feasible:
        return OptimalChoice(sweep.model_id, False, None, None, None, rejected)
    best = min(feasible, key=lambda run: (run.total_time_s, run.concurrency))
    return OptimalChoice(
        model_id=sweep.model_id,
        feasible=True,
        concurrency=best.concurrency,
        run=best,
        cost_usd=run_cost(hourly_usd, best.total_time_s),
        rejected=rejected,
    )


def pareto_frontier(points: list[ParetoPoint] | tuple[ParetoPoint, ...]) -> Frontier:
    """Split points into the non-dominated frontier and dominated rest.

    Duplicate (cost, quality) pairs co-exist on the frontier; each
    dominated point records the cheapest frontier point dominating it.
    """
    points = list(points)
    if not points:
        raise ValidationError("points must be non-empty", field="points")
    seen: set[str] = set()
    for point in points:
        if point.model_id in seen:
            raise ValidationError(f"duplicate model_id {point.model_id!r}", field="model_id")
        seen.add(point.model_id)
    frontier = [
        p for p in points
        if not any(dominates(q, p) for q in points if q is not p)
    ]
    frontier.sort(key=lambda p: (p.cost_usd, p.quality, p.model_id))
    frontier_set = {p.model_id for p in frontier}
    dominated = []
    for point in sorted((p for p in points if p.model_id not in frontier_set),
                        key=lambda p: (p.cost_usd, p.quality, p.model_id)):
        witness = next(q for q in frontier if dominates(q, point))
        dominated.append(DominatedPoint(point=point, dominated_by=witness))
    return Frontier(points=tuple(frontier), dominated=tuple(dominated))


@dataclass(frozen=True)
class ScalingStep:
    """Consecutive-level deltas of one sweep."""

    from_concurrency: int
    to_concurrency: int
    delta_total_time_s: float
    delta_avg_throughput_tok_s: float
    delta_avg_ttft_s: float
    marginal_cost_change_usd: float | None
    knee: bool

    def as_dict(self) -> dict:
        return {
            "from_concurrency": self.from_concurrency,
            "to_concurrency": self.to_concurrency,
            "delta_total_time_s": self.delta_total_time_s,
            "delta_avg_throughput_tok_s": self.delta_avg_throughput_tok_s,
            "delta_avg_ttft_s": self.delta_avg_ttft_s,
            "marginal_cost_change_usd": self.marginal_cost_change_usd,
            "knee": self.knee,
        }


def scaling_analysis(sweep: Sweep, thresholds: PerfThresholds = PerfThresholds(),
                     hourly_usd: float | None = None) -> list[ScalingStep]:
    """Per-step deltas across a sweep's concurrency ladder.

    A step is flagged as a knee when total time keeps falling but the
    destination level violates a threshold: throughput below the floor or
    TTFT above the ceiling. That is where scaling stops buying service
    quality even though it still buys completion time. Cost deltas use
    `hourly_usd` when given, otherwise the runs' stored costs.
    """
    if len(sweep.runs) < 2:
        raise ValidationError(f"sweep {sweep.model_id!r} needs >= 2 runs for scaling analysis", field="runs")

    def cost_of(run: BenchmarkRun) -> float | None:
        if hourly_usd is not None:
            return run_cost(hourly_usd, run.total_time_s)
        return run.cost_usd

    steps = []
    for prev, cur in zip(sweep.runs, sweep.runs[1:]):
        prev_cost, cur_cost = cost_of(prev), cost_of(cur)
        time_falling = cur.total_time_s < prev.total_time_s
        steps.append(ScalingStep(
            from_concurrency=prev.concurrency,
            to_concurrency=cur.concurrency,
            delta_total_time_s=cur.total_time_s - prev.total_time_s,
            delta_avg_throughput_tok_s=cur.avg_throughput_tok_s - prev.avg_throughput_tok_s,
            delta_avg_ttft_s=cur.avg_ttft_s - prev.avg_ttft_s,
            marginal_cost_change_usd=(cur_cost - prev_cost) if prev_cost is not None and cur_cost is not None else None,
            knee=time_falling and bool(_violations(cur, thresholds)),
        ))
    return steps


def first_knee(steps: list[ScalingStep]) -> ScalingStep | None:
    """The first flagged step, if any: the canonical inflection point."""
    return next((s for s in steps if s.knee), None)


class MissingScoreError(ValidationError):
    """A sweep has no matching model card, so it cannot be placed on the frontier."""

    def __init__(self, model_id: str):
        super().__init__(f"no quality score for model {model_id!r}", field="model_id")
        self.model_id = model_id


@dataclass(frozen=True)
class WhatIfResult:
    """Everything a what-if evaluation produces, a pure function of its inputs."""

    hourly_usd: float
    optima: tuple[OptimalChoice, ...]
    frontier: Frontier | None

    def as_dict(self) -> dict:
        return {
            "hourly_usd": self.hourly_usd,
            "optima": [o.as_dict() for o in self.optima],
            "frontier": self.frontier.as_dict() if self.frontier is not None else None,
        }


def what_if(sweeps, model_cards, cost_params: GpuCostParams, gpu_count: int,
            thresholds: PerfThresholds) -> WhatIfResult:
    """Recompute the hourly rate, every model's optimum, and the frontier.

    The rate is the quotable cluster rate (cents-rounded per card). Every
    sweep must have a model card; infeasible models stay in the optima
    list but are excluded from the frontier. Optima are ordered by quality
    score descending.
    """
    sweeps = list(sweeps)
    if not sweeps:
        raise ValidationError("at least one sweep is required", field="sweeps")
    cards_by_id = {card.model_id: card for card in model_cards}
    for sweep in sweeps:
        if sweep.model_id not in cards_by_id:
            raise MissingScoreError(sweep.model_id)
    hourly_usd = reference_cluster_rate(cost_params, gpu_count)
    if not hourly_usd > 0:
        raise ValidationError("cost parameters produce a zero hourly rate", field="cost_params")
    choices = [select_optimal(sweep, thresholds, hourly_usd) for sweep in sweeps]
    choices.sort(key=lambda c: (-cards_by_id[c.model_id].quality_score, c.model_id))
    points = [
        ParetoPoint(
            model_id=choice.model_id,
            cost_usd=choice.cost_usd,
            quality=cards_by_id[choice.model_id].quality_score,
            params_billion=cards_by_id[choice.model_id].params_billion,
        )
        for choice in choices
        if choice.feasible
    ]
    frontier = pareto_frontier(points) if points else None
    return WhatIfResult(hourly_usd=hourly_usd, optima=tuple(choices), frontier=frontier)
