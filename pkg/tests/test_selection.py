import pytest

from infercost import (
    A800_BASELINE,
    BenchmarkRun,
    FIXTURE_HOURLY_USD,
    GpuCostParams,
    MissingScoreError,
    ParetoPoint,
    PerfThresholds,
    Sweep,
    ValidationError,
    feasible_configs,
    pareto_frontier,
    scaling_analysis,
    select_optimal,
    what_if,
)
from infercost.selection import dominates, first_knee

EXPECTED_OPTIMA = {
    "WiNGPT-2.7": 16,
    "GLM-4-32B": 8,
    "gpt-oss-20b": 64,
    "WiNGPT-3.0": 16,
    "Seed-OSS-36B": 16,
    "medgemma-27b": 32,
    "Mistral-Small": 64,
    "Qwen3-30B": 64,
    "WiNGPT-3.5": 48,
}

EXPECTED_FRONTIER = ("gpt-oss-20b", "Mistral-Small", "Qwen3-30B", "WiNGPT-3.5")


def brute_force_frontier_ids(points):
    """Independent O(n^2) dominance filter used as the oracle."""
    ids = set()
    for p in points:
        dominated = False
        for q in points:
            if q is p:
                continue
            if (q.cost_usd <= p.cost_usd and q.quality >= p.quality
                    and (q.cost_usd < p.cost_usd or q.quality > p.quality)):
                dominated = True
                break
        if not dominated:
            ids.add(p.model_id)
    return ids


def make_run(model="m", conc=8, time_s=100.0, ttft=0.1, tput=25.0):
    return BenchmarkRun(model_id=model, concurrency=conc, request_count=10,
                       total_time_s=time_s, avg_ttft_s=ttft, input_tokens=100,
                       output_tokens=50, total_tokens=150, avg_throughput_tok_s=tput)


class TestFeasibleConfigs:
    def test_wingpt27_defaults(self, fixture_sweeps, default_thresholds):
        feasible = feasible_configs(fixture_sweeps["WiNGPT-2.7"], default_thresholds)
        assert [r.concurrency for r in feasible] == [8, 16]

    def test_wingpt30_defaults(self, fixture_sweeps, default_thresholds):
        feasible = feasible_configs(fixture_sweeps["WiNGPT-3.0"], default_thresholds)
        assert [r.concurrency for r in feasible] == [8, 16]
        rejected = {r.concurrency for r in fixture_sweeps["WiNGPT-3.0"].runs} - {8, 16}
        assert 128 in rejected  # 57.404 s TTFT

    def test_vacuous_thresholds_admit_all(self, fixture_sweeps):
        thresholds = PerfThresholds(max_ttft_s=1e9, min_throughput_tok_s=1e-9)
        for sweep in fixture_sweeps.values():
            assert feasible_configs(sweep, thresholds) == list(sweep.runs)

    def test_comparisons_are_strict(self):
        sweep = Sweep("m", (make_run(conc=8, ttft=1.0, tput=20.0),))
        assert feasible_configs(sweep, PerfThresholds(1.0, 20.0)) == []


class TestSelectOptimal:
    def test_fixture_reproduces_published_optima(self, fixture_sweeps, default_thresholds):
        for model, expected in EXPECTED_OPTIMA.items():
            choice = select_optimal(fixture_sweeps[model], default_thresholds, FIXTURE_HOURLY_USD)
            assert choice.feasible
            assert choice.concurrency == expected, model

    def test_wingpt35_cost(self, fixture_sweeps, default_thresholds):
        choice = select_optimal(fixture_sweeps["WiNGPT-3.5"], default_thresholds, 1.58)
        assert round(choice.cost_usd, 2) == 0.34

    def test_gptoss_near_tie_resolved_by_unrounded_time(self, fixture_sweeps, default_thresholds):
        sweep = fixture_sweeps["gpt-oss-20b"]
        choice = select_optimal(sweep, default_thresholds, 1.58)
        assert choice.concurrency == 64
        t48 = next(r for r in sweep.runs if r.concurrency == 48)
        # both levels display the same cost; the raw times decide
        assert round(1.58 * t48.total_time_s / 3600, 2) == round(choice.cost_usd, 2) == 0.11
        assert choice.run.total_time_s < t48.total_time_s

    def test_glm4_only_eight_feasible(self, fixture_sweeps, default_thresholds):
        choice = select_optimal(fixture_sweeps["GLM-4-32B"], default_thresholds, 1.58)
        assert choice.concurrency == 8
        assert {r.concurrency for r in choice.rejected} == {16, 32, 48, 64, 128}

    def test_tie_breaks_to_lower_concurrency(self, default_thresholds):
        sweep = Sweep("m", (make_run(conc=8, time_s=100.0), make_run(conc=16, time_s=100.0)))
        choice = select_optimal(sweep, default_thresholds, 1.0)
        assert choice.concurrency == 8

    def test_infeasible_sweep_has_audit_not_run(self, fixture_sweeps):
        thresholds = PerfThresholds(max_ttft_s=0.001, min_throughput_tok_s=1e6)
        choice = select_optimal(fixture_sweeps["WiNGPT-3.5"], thresholds, 1.58)
        assert not choice.feasible
        assert choice.run is None and choice.concurrency is None and choice.cost_usd is None
        assert {r.concurrency for r in choice.rejected} == {8, 16, 32, 48, 64, 128}
        assert all(len(r.reasons) == 2 for r in choice.rejected)

    def test_empty_sweep_rejected(self, default_thresholds):
        with pytest.raises(ValidationError):
            select_optimal(Sweep("m", ()), default_thresholds, 1.58)


class TestParetoFrontier:
    def points_from_fixture(self, fixture_dataset):
        sweeps, cards = fixture_dataset
        by_id = {c.model_id: c for c in cards}
        points = []
        for sweep in sweeps:
            choice = select_optimal(sweep, PerfThresholds(), FIXTURE_HOURLY_USD)
            card = by_id[sweep.model_id]
            points.append(ParetoPoint(sweep.model_id, choice.cost_usd,
                                      card.quality_score, card.params_billion))
        return points

    def test_fixture_frontier(self, fixture_dataset):
        points = self.points_from_fixture(fixture_dataset)
        frontier = pareto_frontier(points)
        assert frontier.member_ids == EXPECTED_FRONTIER
        assert set(frontier.member_ids) == brute_force_frontier_ids(points)

    def test_dominance_witnesses_valid(self, fixture_dataset):
        points = self.points_from_fixture(fixture_dataset)
        frontier = pareto_frontier(points)
        members = set(frontier.member_ids)
        assert len(frontier.dominated) == len(points) - len(members)
        for entry in frontier.dominated:
            assert entry.dominated_by.model_id in members
            assert dominates(entry.dominated_by, entry.point)

    def test_frontier_sorted_cost_and_quality_increase_together(self, fixture_dataset):
        frontier = pareto_frontier(self.points_from_fixture(fixture_dataset))
        costs = [p.cost_usd for p in frontier.points]
        qualities = [p.quality for p in frontier.points]
        assert costs == sorted(costs)
        for (c1, q1), (c2, q2) in zip(zip(costs, qualities), zip(costs[1:], qualities[1:])):
            if c2 > c1:
                assert q2 > q1

    def test_singleton(self):
        point = ParetoPoint("m", 1.0, 50.0, 10)
        frontier = pareto_frontier([point])
        assert frontier.points == (point,)
        assert frontier.dominated == ()

    def test_equal_cost_higher_quality_wins(self):
        a = ParetoPoint("a", 1.0, 60.0, 10)
        b = ParetoPoint("b", 1.0, 50.0, 10)
        frontier = pareto_frontier([a, b])
        assert frontier.member_ids == ("a",)
        assert frontier.dominated[0].point == b

    def test_exact_ties_coexist(self):
        a = ParetoPoint("a", 1.0, 50.0, 10)
        b = ParetoPoint("b", 1.0, 50.0, 20)
        frontier = pareto_frontier([a, b])
        assert set(frontier.member_ids) == {"a", "b"}

    def test_duplicate_model_id_rejected(self):
        a = ParetoPoint("a", 1.0, 50.0, 10)
        with pytest.raises(ValidationError, match="duplicate"):
            pareto_frontier([a, a])

    def test_params_never_affect_dominance(self):
        small = ParetoPoint("small", 1.0, 50.0, 1)
        huge = ParetoPoint("huge", 2.0, 40.0, 1000)
        assert pareto_frontier([small, huge]).member_ids == ("small",)


class TestScalingAnalysis:
    def test_wingpt35_cumulative_time_drop(self, fixture_sweeps):
        sweep = fixture_sweeps["WiNGPT-3.5"]
        steps = scaling_analysis(sweep)
        assert sweep.runs[0].total_time_s == 2034.05
        drop = sum(s.delta_total_time_s for s in steps[:3])  # 8 -> 48
        assert drop == pytest.approx(774.11 - 2034.05, abs=1e-9)

    def test_wingpt30_ttft_knee_at_128(self, fixture_sweeps):
        steps = scaling_analysis(fixture_sweeps["WiNGPT-3.0"])
        last = steps[-1]
        assert (last.from_concurrency, last.to_concurrency) == (64, 128)
        assert last.delta_avg_ttft_s == pytest.approx(57.404 - 5.219, abs=1e-9)
        assert last.knee

    def test_first_knee_is_first_threshold_crossing(self, fixture_sweeps):
        steps = scaling_analysis(fixture_sweeps["WiNGPT-3.0"])
        knee = first_knee(steps)
        assert (knee.from_concurrency, knee.to_concurrency) == (16, 32)

    def test_constant_sweep_no_knee(self):
        runs = tuple(make_run(conc=c, time_s=100.0, ttft=5.0, tput=1.0) for c in (8, 16, 32))
        steps = scaling_analysis(Sweep("m", runs))
        assert all(s.delta_total_time_s == 0 for s in steps)
        assert all(s.delta_avg_ttft_s == 0 for s in steps)
        assert first_knee(steps) is None

    def test_requires_two_runs(self):
        with pytest.raises(ValidationError):
            scaling_analysis(Sweep("m", (make_run(),)))

    def test_marginal_cost_uses_rate_when_given(self, fixture_sweeps):
        steps = scaling_analysis(fixture_sweeps["WiNGPT-3.5"], hourly_usd=1.58)
        expected = 1.58 * (1098.77 - 2034.05) / 3600
        assert steps[0].marginal_cost_change_usd == pytest.approx(expected, rel=1e-12)


class TestWhatIf:
    def test_baseline_reproduces_published_table(self, fixture_dataset, default_thresholds):
        sweeps, cards = fixture_dataset
        result = what_if(sweeps, cards, A800_BASELINE, 2, default_thresholds)
        assert result.hourly_usd == 1.58
        assert {c.model_id: c.concurrency for c in result.optima} == EXPECTED_OPTIMA
        assert result.frontier.member_ids == EXPECTED_FRONTIER
        # ordered by quality descending
        assert [c.model_id for c in result.optima][:3] == ["WiNGPT-3.5", "Seed-OSS-36B", "WiNGPT-3.0"]

    def test_relaxed_thresholds_move_to_min_time(self, fixture_dataset):
        sweeps, cards = fixture_dataset
        relaxed = PerfThresholds(max_ttft_s=1e9, min_throughput_tok_s=1e-9)
        result = what_if(sweeps, cards, A800_BASELINE, 2, relaxed)
        by_id = {c.model_id: c for c in result.optima}
        assert by_id["gpt-oss-20b"].concurrency == 128
        for sweep in sweeps:
            fastest = min(sweep.runs, key=lambda r: (r.total_time_s, r.concurrency))
            assert by_id[sweep.model_id].concurrency == fastest.concurrency

    def test_electricity_price_change_keeps_frontier(self, fixture_dataset, default_thresholds):
        sweeps, cards = fixture_dataset
        doubled = GpuCostParams(**{**A800_BASELINE.as_dict(), "electricity_price": 2.0})
        result = what_if(sweeps, cards, doubled, 2, default_thresholds)
        assert result.frontier.member_ids == EXPECTED_FRONTIER
        assert result.hourly_usd > 1.58

    def test_purely_deterministic(self, fixture_dataset, default_thresholds):
        sweeps, cards = fixture_dataset
        a = what_if(sweeps, cards, A800_BASELINE, 2, default_thresholds)
        b = what_if(sweeps, cards, A800_BASELINE, 2, default_thresholds)
        assert a == b

    def test_missing_score_names_model(self, fixture_dataset, default_thresholds):
        sweeps, cards = fixture_dataset
        partial = [c for c in cards if c.model_id != "Qwen3-30B"]
        with pytest.raises(MissingScoreError, match="Qwen3-30B") as err:
            what_if(sweeps, partial, A800_BASELINE, 2, default_thresholds)
        assert err.value.model_id == "Qwen3-30B"

    def test_min_throughput_30_shrinks_feasible_sets(self, fixture_dataset):
        sweeps, cards = fixture_dataset
        result = what_if(sweeps, cards, A800_BASELINE, 2,
                         PerfThresholds(max_ttft_s=1.0, min_throughput_tok_s=30.0))
        by_id = {c.model_id: c for c in result.optima}
        w27 = by_id["WiNGPT-2.7"]
        assert w27.concurrency == 8
        assert round(w27.cost_usd, 2) == 0.61

    def test_empty_sweeps_rejected(self, fixture_dataset, default_thresholds):
        with pytest.raises(ValidationError):
            what_if([], fixture_dataset[1], A800_BASELINE, 2, default_thresholds)
