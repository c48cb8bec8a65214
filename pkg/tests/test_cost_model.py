import math

import pytest

from infercost import (
    A800_BASELINE,
    ClusterSpec,
    GpuCostParams,
    HourlyCostBreakdown,
    ValidationError,
    break_even_utilization,
    cluster_hourly,
    effective_hourly,
    hourly_breakdown,
    reference_cluster_rate,
    run_cost,
)
from infercost.cost_model import HOURS_PER_YEAR, load_params, params_from_dict

# Independent oracle: the three formulas evaluated directly on the baseline.
BASELINE_DEPRECIATION = 120_000 / (3 * 8760 * 1.0) / 7.09
BASELINE_POWER = 0.4 * 1.5 * 1.0 / 7.09
BASELINE_MAINTENANCE = 120_000 * 0.03 / 8760 / 7.09
BASELINE_TOTAL = BASELINE_DEPRECIATION + BASELINE_POWER + BASELINE_MAINTENANCE


class TestHourlyBreakdown:
    def test_baseline_components(self):
        b = hourly_breakdown(A800_BASELINE)
        assert b.depreciation_usd_hr == pytest.approx(BASELINE_DEPRECIATION, rel=1e-12)
        assert b.power_usd_hr == pytest.approx(BASELINE_POWER, rel=1e-12)
        assert b.maintenance_usd_hr == pytest.approx(BASELINE_MAINTENANCE, rel=1e-12)
        assert b.total_usd_hr == pytest.approx(BASELINE_TOTAL, rel=1e-12)

    def test_baseline_displays_as_published(self):
        b = hourly_breakdown(A800_BASELINE)
        assert round(b.depreciation_usd_hr, 2) == 0.64
        assert round(b.power_usd_hr, 2) == 0.08
        assert round(b.maintenance_usd_hr, 2) == 0.06
        assert 0.78 <= b.total_usd_hr <= 0.79

    def test_zero_price_zero_power(self):
        params = GpuCostParams(purchase_price=0, depreciation_years=3, utilization=1.0,
                               avg_power_kw=0, pue=1.5, electricity_price=1.0,
                               maintenance_rate=0.03, fx_cny_per_usd=7.09)
        b = hourly_breakdown(params)
        assert b.depreciation_usd_hr == 0
        assert b.power_usd_hr == 0
        assert b.maintenance_usd_hr == 0
        assert b.total_usd_hr == 0

    def test_total_is_component_sum(self):
        b = hourly_breakdown(A800_BASELINE)
        assert b.total_usd_hr == b.depreciation_usd_hr + b.power_usd_hr + b.maintenance_usd_hr

    def test_hours_per_year_is_flat(self):
        assert HOURS_PER_YEAR == 8760

    @pytest.mark.parametrize("field,value", [
        ("purchase_price", -1),
        ("depreciation_years", 0),
        ("utilization", 0),
        ("utilization", 1.5),
        ("avg_power_kw", -0.1),
        ("pue", 0.9),
        ("electricity_price", -1),
        ("maintenance_rate", 1.5),
        ("fx_cny_per_usd", 0),
        ("purchase_price", float("nan")),
        ("avg_power_kw", float("inf")),
    ])
    def test_rejects_bad_parameters_naming_field(self, field, value):
        kwargs = A800_BASELINE.as_dict()
        kwargs[field] = value
        with pytest.raises(ValidationError) as err:
            GpuCostParams(**kwargs)
        assert err.value.field == field


class TestEffectiveHourly:
    def test_identity_at_full_utilization(self):
        b = HourlyCostBreakdown(0.644, 0.085, 0.058, 0.787)
        assert effective_hourly(b, 1.0) == 0.787

    def test_divides_by_utilization(self):
        b = HourlyCostBreakdown(0.644, 0.085, 0.058, 0.787)
        assert effective_hourly(b, 0.7) == pytest.approx(0.787 / 0.7, rel=1e-12)
        assert effective_hourly(b, 0.7) == pytest.approx(1.124, abs=5e-4)

    def test_half_utilization_doubles(self):
        b = HourlyCostBreakdown(0.65, 0.08, 0.06, 0.79)
        assert effective_hourly(b, 0.5) == pytest.approx(1.58, rel=1e-12)

    def test_baseline_through_effective(self):
        assert effective_hourly(hourly_breakdown(A800_BASELINE), 0.7) == pytest.approx(
            BASELINE_TOTAL / 0.7, rel=1e-12)

    @pytest.mark.parametrize("u", [0, -0.5, 1.01, float("nan")])
    def test_rejects_out_of_range_utilization(self, u):
        b = HourlyCostBreakdown(0.644, 0.085, 0.058, 0.787)
        with pytest.raises(ValidationError):
            effective_hourly(b, u)

    def test_rejects_non_baseline_breakdown(self):
        params = GpuCostParams(**{**A800_BASELINE.as_dict(), "utilization": 0.7})
        with pytest.raises(ValidationError, match="utilization 1.0"):
            effective_hourly(hourly_breakdown(params), 0.7)


class TestClusterHourly:
    def test_single_card_identity(self):
        params = A800_BASELINE
        spec = ClusterSpec(gpu_count=1, params=params)
        assert cluster_hourly(spec) == hourly_breakdown(params).total_usd_hr

    def test_dual_card(self):
        assert cluster_hourly(ClusterSpec(2, A800_BASELINE)) == pytest.approx(2 * BASELINE_TOTAL, rel=1e-12)

    def test_eight_cards_at_79_cents(self):
        # per-card total of exactly 0.79 USD: pure power draw, fx 1
        params = GpuCostParams(purchase_price=0, depreciation_years=1, avg_power_kw=0.79,
                               pue=1.0, electricity_price=1.0, fx_cny_per_usd=1.0)
        assert cluster_hourly(ClusterSpec(8, params)) == pytest.approx(6.32, rel=1e-12)

    def test_reference_rate_dual_card_is_158(self):
        assert reference_cluster_rate(A800_BASELINE, 2) == 1.58

    def test_rejects_zero_gpus(self):
        with pytest.raises(ValidationError):
            ClusterSpec(gpu_count=0, params=A800_BASELINE)
        with pytest.raises(ValidationError):
            ClusterSpec(gpu_count=1.5, params=A800_BASELINE)  # type: ignore[arg-type]


class TestRunCost:
    def test_published_spot_values(self):
        assert run_cost(1.58, 774.11) == pytest.approx(1.58 * 774.11 / 3600, rel=1e-15)
        assert round(run_cost(1.58, 774.11), 2) == 0.34
        assert round(run_cost(1.58, 249.17), 2) == 0.11

    def test_one_hour_identity(self):
        assert run_cost(1.58, 3600) == 1.58

    def test_unrounded(self):
        assert run_cost(1.58, 774.11) != 0.34

    @pytest.mark.parametrize("hourly,duration", [(-1, 10), (1, -10), (float("nan"), 1), (1, float("inf"))])
    def test_rejects_bad_inputs(self, hourly, duration):
        with pytest.raises(ValidationError):
            run_cost(hourly, duration)


class TestBreakEven:
    def test_against_cloud_rates(self):
        assert break_even_utilization(0.79, 4.80) == pytest.approx(0.79 / 4.80, rel=1e-12)
        assert break_even_utilization(0.79, 4.80) == pytest.approx(0.1646, abs=5e-5)
        assert break_even_utilization(0.79, 5.08) == pytest.approx(0.1555, abs=5e-5)

    def test_equal_rates(self):
        assert break_even_utilization(0.79, 0.79) == 1.0

    def test_above_one_means_never(self):
        assert break_even_utilization(2.0, 1.0) > 1

    @pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (-1, 1)])
    def test_rejects_non_positive(self, a, b):
        with pytest.raises(ValidationError):
            break_even_utilization(a, b)


class TestCurrencyConsistency:
    def test_cny_total_divided_equals_usd_components(self):
        params = A800_BASELINE
        cny_total = (
            params.purchase_price / (params.depreciation_years * 8760 * params.utilization)
            + params.avg_power_kw * params.pue * params.electricity_price
            + params.purchase_price * params.maintenance_rate / 8760
        )
        b = hourly_breakdown(params)
        assert math.isclose(cny_total / params.fx_cny_per_usd, b.total_usd_hr, rel_tol=1e-12)


class TestParamsIO:
    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text('{"purchase_price": 120000, "depreciation_years": 3, "avg_power_kw": 0.4, '
                        '"pue": 1.5, "electricity_price": 1.0, "maintenance_rate": 0.03, '
                        '"fx_cny_per_usd": 7.09, "utilization": 1.0}')
        assert load_params(path) == A800_BASELINE

    def test_toml(self, tmp_path):
        path = tmp_path / "params.toml"
        path.write_text("purchase_price = 120000\ndepreciation_years = 3\n")
        params = load_params(path)
        assert params.purchase_price == 120000
        assert params.fx_cny_per_usd == 7.09

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError, match="unknown cost parameter"):
            params_from_dict({"purchase_price": 1, "depreciation_years": 1, "gpu_model": "a800"})

    def test_missing_required_rejected(self):
        with pytest.raises(ValidationError, match="missing required"):
            params_from_dict({"utilization": 0.5})
