"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Live-endpoint acceptance is property-based against the bundled
deterministic mock: the absolute timings in the embedded dataset were
measured on dedicated dual-A800 hardware with specific serving stacks and
are NOT reproducible here by design; what must hold is the measurement
machinery itself (scripted TTFT recovered within tolerance, exact token
accounting, the closed-loop in-flight bound, and aggregation equal to a
brute-force recomputation from the trace log).
"""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infercost import (
    A800_BASELINE,
    FIXTURE_HOURLY_USD,
    ParetoPoint,
    PerfThresholds,
    canonical_fixture,
    feasible_configs,
    hourly_breakdown,
    pareto_frontier,
    parse_runs,
    reference_cluster_rate,
    run_cost,
    select_optimal,
    what_if,
)
from infercost.bench import MockServer, MockTiming, RequestPayload, RunConfig, WorkloadSpec, aggregate, peak_in_flight, run_level
from infercost.cli import main as cli_main
from infercost.cost_model import GpuCostParams
from infercost.selection import dominates

from test_properties import pareto_points, params_st, sweeps, thresholds_st
from test_selection import brute_force_frontier_ids
from schema_utils import validate_against

finite = dict(allow_nan=False, allow_infinity=False)

EXPECTED_OPTIMA = {
    "WiNGPT-2.7": 16, "GLM-4-32B": 8, "gpt-oss-20b": 64, "WiNGPT-3.0": 16,
    "Seed-OSS-36B": 16, "medgemma-27b": 32, "Mistral-Small": 64,
    "Qwen3-30B": 64, "WiNGPT-3.5": 48,
}
EXPECTED_FRONTIER = ("gpt-oss-20b", "Mistral-Small", "Qwen3-30B", "WiNGPT-3.5")


def report(name: str) -> None:
    print(f"[acceptance] {name}: PASS")


def test_hourly_cost_regression():
    """Baseline parameters: components display 0.64/0.08/0.06, raw total in
    [0.78, 0.79], dual-card reference rate 1.58 within 0.005."""
    b = hourly_breakdown(A800_BASELINE)
    assert f"{b.depreciation_usd_hr:.2f}" == "0.64"
    assert f"{b.power_usd_hr:.2f}" == "0.08"
    assert f"{b.maintenance_usd_hr:.2f}" == "0.06"
    assert 0.78 <= b.total_usd_hr <= 0.79
    assert abs(reference_cluster_rate(A800_BASELINE, 2) - 1.58) <= 0.005
    report("hourly-cost-regression")


def test_cost_column_reproduction():
    """run_cost at the canonical 1.58 USD/hr reproduces all 54 published
    costs within a cent, with four spot values exact at 2 decimals."""
    sweeps_fx, _ = canonical_fixture()
    checked = 0
    for sweep in sweeps_fx:
        for run in sweep.runs:
            recomputed = run_cost(FIXTURE_HOURLY_USD, run.total_time_s)
            assert abs(recomputed - run.cost_usd) <= 0.01, (sweep.model_id, run.concurrency)
            checked += 1
    assert checked == 54

    def published(model, conc):
        sweep = next(s for s in sweeps_fx if s.model_id == model)
        return next(r for r in sweep.runs if r.concurrency == conc).total_time_s

    assert round(run_cost(1.58, published("WiNGPT-3.5", 48)), 2) == 0.34
    assert round(run_cost(1.58, published("WiNGPT-3.0", 16)), 2) == 3.47
    assert round(run_cost(1.58, published("gpt-oss-20b", 64)), 2) == 0.11
    assert round(run_cost(1.58, published("medgemma-27b", 32)), 2) == 0.97
    report("cost-column-reproduction")


def test_optimal_configuration_reproduction():
    """Default thresholds at 1.58 USD/hr select exactly the nine published
    optimal concurrency levels; the gpt-oss 48-vs-64 near-tie resolves to 64
    on unrounded time even though both display the same cost."""
    sweeps_fx, _ = canonical_fixture()
    thresholds = PerfThresholds(max_ttft_s=1.0, min_throughput_tok_s=20.0)
    selected = {}
    for sweep in sweeps_fx:
        choice = select_optimal(sweep, thresholds, FIXTURE_HOURLY_USD)
        assert choice.feasible, sweep.model_id
        selected[sweep.model_id] = choice
    assert {m: c.concurrency for m, c in selected.items()} == EXPECTED_OPTIMA

    gptoss = next(s for s in sweeps_fx if s.model_id == "gpt-oss-20b")
    t48 = next(r for r in gptoss.runs if r.concurrency == 48)
    t64 = next(r for r in gptoss.runs if r.concurrency == 64)
    assert round(run_cost(1.58, t48.total_time_s), 2) == round(run_cost(1.58, t64.total_time_s), 2)
    assert t64.total_time_s < t48.total_time_s
    assert selected["gpt-oss-20b"].concurrency == 64
    report("optimal-configuration-reproduction")


def test_frontier_reproduction():
    """The nine (cost, score) points yield the published four-model frontier,
    every excluded point carries a valid dominance witness, and the result
    equals an independent O(n^2) brute-force filter."""
    sweeps_fx, cards = canonical_fixture()
    cards_by_id = {c.model_id: c for c in cards}
    points = []
    for sweep in sweeps_fx:
        choice = select_optimal(sweep, PerfThresholds(), FIXTURE_HOURLY_USD)
        card = cards_by_id[sweep.model_id]
        points.append(ParetoPoint(sweep.model_id, choice.cost_usd,
                                  card.quality_score, card.params_billion))
    frontier = pareto_frontier(points)
    assert frontier.member_ids == EXPECTED_FRONTIER
    assert set(frontier.member_ids) == brute_force_frontier_ids(points)
    assert len(frontier.dominated) == 5
    for entry in frontier.dominated:
        assert entry.dominated_by.model_id in EXPECTED_FRONTIER
        assert dominates(entry.dominated_by, entry.point)
    report("frontier-reproduction")


class TestPropertySuites:
    """Randomized invariants; the frontier oracle runs on >= 1000 point sets."""

    @given(pareto_points(max_size=200))
    @settings(max_examples=1000, deadline=None)
    def test_frontier_equals_oracle_on_1000_sets(self, points):
        frontier = pareto_frontier(points)
        assert set(frontier.member_ids) == brute_force_frontier_ids(points)
        members = set(frontier.member_ids)
        for entry in frontier.dominated:
            assert entry.dominated_by.model_id in members
            assert dominates(entry.dominated_by, entry.point)

    @given(pareto_points(max_size=25))
    @settings(max_examples=300, deadline=None)
    def test_dominance_is_strict_partial_order(self, points):
        for a in points:
            assert not dominates(a, a)
        for a in points:
            for b in points:
                if a is b:
                    continue
                assert not (dominates(a, b) and dominates(b, a))
                for c in points:
                    if dominates(a, b) and dominates(b, c):
                        assert dominates(a, c)

    @given(sweeps(), thresholds_st, st.floats(0.001, 1000.0, **finite),
           st.floats(0.001, 1000.0, **finite))
    @settings(max_examples=200, deadline=None)
    def test_selection_optimality_and_scale_invariance(self, sweep, thresholds, rate, k):
        choice = select_optimal(sweep, thresholds, rate)
        feasible = feasible_configs(sweep, thresholds)
        if choice.feasible:
            assert all(run.total_time_s >= choice.run.total_time_s for run in feasible)
        else:
            assert feasible == []
        rescaled = select_optimal(sweep, thresholds, rate * k)
        assert rescaled.concurrency == choice.concurrency

    @given(sweeps(), thresholds_st, st.floats(1.0, 10.0, **finite), st.floats(1.0, 10.0, **finite))
    @settings(max_examples=200, deadline=None)
    def test_threshold_monotonicity(self, sweep, thresholds, ttft_factor, tput_factor):
        relaxed = PerfThresholds(thresholds.max_ttft_s * ttft_factor,
                                 thresholds.min_throughput_tok_s / tput_factor)
        tight = {r.concurrency for r in feasible_configs(sweep, thresholds)}
        loose = {r.concurrency for r in feasible_configs(sweep, relaxed)}
        assert tight <= loose

    @given(st.floats(0.001, 1e6, **finite), st.floats(1e-6, 1e9, **finite),
           st.floats(1e-6, 1e9, **finite))
    @settings(max_examples=200, deadline=None)
    def test_run_cost_linearity(self, hourly, a, b):
        assert run_cost(hourly, a + b) == pytest.approx(
            run_cost(hourly, a) + run_cost(hourly, b), rel=1e-9)

    @given(params_st)
    @settings(max_examples=200, deadline=None)
    def test_currency_consistency(self, params):
        cny_total = (
            params.purchase_price / (params.depreciation_years * 8760 * params.utilization)
            + params.avg_power_kw * params.pue * params.electricity_price
            + params.purchase_price * params.maintenance_rate / 8760
        )
        assert hourly_breakdown(params).total_usd_hr == pytest.approx(
            cny_total / params.fx_cny_per_usd, rel=1e-12, abs=1e-300)

    def test_report_line(self):
        report("property-suites")


def test_bench_runner_oracle():
    """Against the scripted mock endpoint: TTFT within 25 ms of the script,
    exact token totals, closed-loop bound never exceeded, and aggregation
    equal to a brute-force recomputation from the trace log."""
    timing = MockTiming(first_token_delay_s=0.05, inter_token_gap_s=0.01, output_tokens=10)
    workload = WorkloadSpec("oracle", tuple(
        RequestPayload(messages=({"role": "user", "content": f"alpha beta {i}"},))
        for i in range(16)
    ))
    with MockServer(timing) as mock:
        config = RunConfig(endpoint_url=mock.url, model_name="mock-model",
                           concurrency_levels=(4,), request_timeout_s=10, warmup_requests=0)
        traces = run_level(config, workload, 4)

    assert len(traces) == 16 and all(t.ok for t in traces)
    for trace in traces:
        assert abs((trace.first_token_ts - trace.send_ts) - timing.first_token_delay_s) <= 0.025
        assert trace.output_tokens == 10
        assert trace.input_tokens == 3
    assert peak_in_flight(traces) <= 4

    level = aggregate(traces, 4, "mock-model")
    run = level.run
    expected_total = max(t.end_ts for t in traces) - min(t.send_ts for t in traces)
    expected_ttft = sum(t.first_token_ts - t.send_ts for t in traces) / len(traces)
    rates = [t.output_tokens / (t.end_ts - t.first_token_ts) for t in traces
             if t.end_ts > t.first_token_ts]
    assert run.input_tokens == sum(t.input_tokens for t in traces)
    assert run.output_tokens == sum(t.output_tokens for t in traces)
    assert run.total_tokens == run.input_tokens + run.output_tokens
    assert run.request_count == 16
    assert abs(run.total_time_s - expected_total) <= 0.005
    assert abs(run.avg_ttft_s - expected_ttft) <= 0.005
    assert run.avg_throughput_tok_s == pytest.approx(sum(rates) / len(rates), rel=1e-9)
    assert aggregate(traces, 4, "mock-model") == level
    report("bench-runner-oracle")


def test_pipeline_coherence(tmp_path, capsys):
    """sweep (mock) -> select -> frontier end to end with schema-valid
    documents; select --fixture plus frontier --fixture equals whatif."""
    workload_file = tmp_path / "workload.json"
    workload_file.write_text(json.dumps({
        "name": "pipeline",
        "requests": [{"messages": [{"role": "user", "content": f"req {i}"}]} for i in range(6)],
    }))
    runs_file = tmp_path / "runs.json"
    trace_file = tmp_path / "traces.jsonl"
    scores_file = tmp_path / "scores.json"
    scores_file.write_text(json.dumps([
        {"model_id": "mock-model", "params_billion": 7, "quality_score": 50.0},
    ]))

    with MockServer(MockTiming(0.02, 0.005, 8)) as mock:
        code = cli_main(["sweep", "--endpoint", mock.url, "--model", "mock-model",
                         "--workload", str(workload_file), "--levels", "2,4",
                         "--warmup", "1", "--out", str(runs_file),
                         "--trace-log", str(trace_file)])
    capsys.readouterr()
    assert code == 0
    run_doc = json.loads(runs_file.read_text())
    validate_against("run-file.schema.json", run_doc)
    for line in trace_file.read_text().splitlines():
        validate_against("trace-log.schema.json", json.loads(line))
    assert len(parse_runs(runs_file.read_text(), "json")) == 1

    code = cli_main(["select", "--runs", str(runs_file), "--format", "json",
                     "--max-ttft", "1", "--min-throughput", "0.001"])
    select_live = json.loads(capsys.readouterr().out)
    assert code == 0
    assert select_live["optima"][0]["feasible"]

    code = cli_main(["frontier", "--runs", str(runs_file), "--scores", str(scores_file),
                     "--format", "json", "--max-ttft", "1", "--min-throughput", "0.001"])
    frontier_live = json.loads(capsys.readouterr().out)
    assert code == 0
    assert [p["model_id"] for p in frontier_live["frontier"]["points"]] == ["mock-model"]

    # fixture route: whatif must equal select + frontier value-for-value
    assert cli_main(["select", "--fixture", "--format", "json"]) == 0
    select_doc = json.loads(capsys.readouterr().out)
    assert cli_main(["frontier", "--fixture", "--format", "json"]) == 0
    frontier_doc = json.loads(capsys.readouterr().out)
    assert cli_main(["whatif", "--fixture"]) == 0
    whatif_doc = json.loads(capsys.readouterr().out)
    validate_against("whatif-response.schema.json", whatif_doc)
    select_by_id = {o["model_id"]: o for o in select_doc["optima"]}
    assert len(whatif_doc["optima"]) == len(select_by_id)
    for choice in whatif_doc["optima"]:
        assert choice == select_by_id[choice["model_id"]]
    assert whatif_doc["frontier"] == frontier_doc["frontier"]
    assert whatif_doc["hourly_rate_usd"] == select_doc["hourly_rate_usd"] == 1.58

    with capsys.disabled():
        report("pipeline-coherence")


def test_whatif_reproduces_published_table():
    """Baseline parameters on the fixture reproduce the nine published
    optimal rows and the four-model frontier through the what-if path."""
    sweeps_fx, cards = canonical_fixture()
    result = what_if(sweeps_fx, cards, A800_BASELINE, 2, PerfThresholds())
    assert result.hourly_usd == 1.58
    assert {c.model_id: c.concurrency for c in result.optima} == EXPECTED_OPTIMA
    assert result.frontier.member_ids == EXPECTED_FRONTIER
    for choice in result.optima:
        sweep = next(s for s in sweeps_fx if s.model_id == choice.model_id)
        published = next(r for r in sweep.runs if r.concurrency == choice.concurrency)
        assert round(choice.cost_usd, 2) == published.cost_usd
    report("whatif-table-reproduction")
