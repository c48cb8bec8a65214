"""GPU ownership economics.

Decomposes the hourly cost of a self-hosted GPU into depreciation, power,
and maintenance, converts benchmark durations into dollar costs, and
compares self-hosting against cloud rental rates.

All arithmetic is double precision; rounding to cents happens only where a
value is quoted for display or via `reference_cluster_rate`, which models
the convention of pricing a cluster off the per-card rate rounded to cents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ValidationError

HOURS_PER_YEAR = 8760  # 365 * 24, leap days ignored


def _check(condition: bool, field: str, message: str) -> None:
    if not condition:
        raise ValidationError(message, field=field)


def _check_finite(value: float, field: str) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise ValidationError(f"{field} must be a finite number, got {value!r}", field=field)


@dataclass(frozen=True)
class GpuCostParams:
    """Per-card cost inputs. Prices are CNY; `fx_cny_per_usd` converts to USD.

    `utilization` enters the depreciation term (idle hours still depreciate
    the card, so each productive hour carries more of the purchase price).
    The standardized baseline is utilization 1.0; see `effective_hourly` for
    discounting a baseline rate to a lower realized utilization.
    """

    purchase_price: float          # CNY per card
    depreciation_years: float
    utilization: float = 1.0       # fraction of wall-clock hours doing useful work
    avg_power_kw: float = 0.0
    pue: float = 1.0               # facility power / IT-equipment power
    electricity_price: float = 0.0  # CNY per kWh
    maintenance_rate: float = 0.0   # annual fraction of purchase price
    fx_cny_per_usd: float = 7.09

    def __post_init__(self) -> None:
        for f in fields(self):
            _check_finite(getattr(self, f.name), f.name)
        _check(self.purchase_price >= 0, "purchase_price", "purchase_price must be >= 0")
        _check(self.depreciation_years > 0, "depreciation_years", "depreciation_years must be > 0")
        _check(0 < self.utilization <= 1, "utilization", "utilization must be in (0, 1]")
        _check(self.avg_power_kw >= 0, "avg_power_kw", "avg_power_kw must be >= 0")
        _check(self.pue >= 1, "pue", "pue must be >= 1")
        _check(self.electricity_price >= 0, "electricity_price", "electricity_price must be >= 0")
        _check(0 <= self.maintenance_rate <= 1, "maintenance_rate", "maintenance_rate must be in [0, 1]")
        _check(self.fx_cny_per_usd > 0, "fx_cny_per_usd", "fx_cny_per_usd must be > 0")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


#: Reference parameter set for a single A800 80G card: 120k CNY purchase
#: price, straight-line depreciation over 3 years, 0.4 kW draw in a
#: PUE-1.5 facility at 1.0 CNY/kWh, 3% annual maintenance.
A800_BASELINE = GpuCostParams(
    purchase_price=120_000,
    depreciation_years=3,
    utilization=1.0,
    avg_power_kw=0.4,
    pue=1.5,
    electricity_price=1.0,
    maintenance_rate=0.03,
    fx_cny_per_usd=7.09,
)

PRESETS = {"a800-baseline": A800_BASELINE}

#: Published on-demand rates for comparable accelerators (USD/hour),
#: reference data for break-even comparisons.
CLOUD_RATES_USD_HR = {
    "aws-p4de": 5.08,
    "alicloud-gn7e-c16g1.4xlarge": 4.80,
}
CLOUD_RATE_BAND_USD_HR = (2.82, 5.64)


@dataclass(frozen=True)
class HourlyCostBreakdown:
    """Hourly USD cost of one card, split into its three components.

    `at_utilization` records the utilization the breakdown was computed
    with (1.0 for a standardized baseline).
    """

    depreciation_usd_hr: float
    power_usd_hr: float
    maintenance_usd_hr: float
    total_usd_hr: float
    at_utilization: float = 1.0

    def __post_init__(self) -> None:
        for name in ("depreciation_usd_hr", "power_usd_hr", "maintenance_usd_hr", "total_usd_hr"):
            value = getattr(self, name)
            _check_finite(value, name)
            _check(value >= 0, name, f"{name} must be >= 0")
        component_sum = self.depreciation_usd_hr + self.power_usd_hr + self.maintenance_usd_hr
        _check(
            math.isclose(self.total_usd_hr, component_sum, rel_tol=1e-9, abs_tol=1e-12),
            "total_usd_hr",
            "total_usd_hr must equal the sum of the three components",
        )

    def as_dict(self) -> dict:
        return {
            "depreciation_usd_hr": self.depreciation_usd_hr,
            "power_usd_hr": self.power_usd_hr,
            "maintenance_usd_hr": self.maintenance_usd_hr,
            "total_usd_hr": self.total_usd_hr,
            "at_utilization": self.at_utilization,
        }


@dataclass(frozen=True)
class ClusterSpec:
    gpu_count: int
    params: GpuCostParams

    def __post_init__(self) -> None:
        if not isinstance(self.gpu_count, int) or isinstance(self.gpu_count, bool):
            raise ValidationError("gpu_count must be an integer", field="gpu_count")
        _check(self.gpu_count >= 1, "gpu_count", "gpu_count must be >= 1")


def hourly_breakdown(params: GpuCostParams) -> HourlyCostBreakdown:
    """Hourly cost of one card in USD: depreciation + power + maintenance.

    Depreciation spreads the purchase price over `depreciation_years` of
    utilization-adjusted hours; power is draw * PUE * electricity price;
    maintenance is the annual fee prorated per hour. Each component is
    computed in CNY and converted at `fx_cny_per_usd`.
    """
    fx = params.fx_cny_per_usd
    depreciation = params.purchase_price / (params.depreciation_years * HOURS_PER_YEAR * params.utilization) / fx
    power = params.avg_power_kw * params.pue * params.electricity_price / fx
    maintenance = params.purchase_price * params.maintenance_rate / HOURS_PER_YEAR / fx
    return HourlyCostBreakdown(
        depreciation_usd_hr=depreciation,
        power_usd_hr=power,
        maintenance_usd_hr=maintenance,
        total_usd_hr=depreciation + power + maintenance,
        at_utilization=params.utilization,
    )


def effective_hourly(base: HourlyCostBreakdown, u: float) -> float:
    """Effective USD/hour per productive compute hour at utilization `u`.

    `base` must be a standardized baseline computed at utilization 1.0;
    the effective cost is the baseline total divided by `u`.
    """
    _check_finite(u, "u")
    _check(0 < u <= 1, "u", "u must be in (0, 1]")
    if base.at_utilization != 1.0:
        raise ValidationError(
            "effective_hourly requires a baseline breakdown computed at utilization 1.0, "
            f"got one computed at {base.at_utilization}",
            field="base",
        )
    return base.total_usd_hr / u


def cluster_hourly(spec: ClusterSpec) -> float:
    """Exact hourly USD cost of `gpu_count` identical cards."""
    return spec.gpu_count * hourly_breakdown(spec.params).total_usd_hr


def reference_cluster_rate(params: GpuCostParams, gpu_count: int) -> float:
    """Quotable cluster rate: per-card total rounded to cents, times card count.

    Published cost figures are built on the cents-rounded per-card rate
    (0.79 * 2 = 1.58 for a dual-card box on the baseline parameters), so
    cost columns recomputed against this rate match published values. Use
    `cluster_hourly` when the unrounded product is wanted.
    """
    spec = ClusterSpec(gpu_count=gpu_count, params=params)
    return round(hourly_breakdown(spec.params).total_usd_hr, 2) * spec.gpu_count


def run_cost(hourly_usd: float, duration_s: float) -> float:
    """USD cost of running at `hourly_usd` for `duration_s` seconds, unrounded."""
    _check_finite(hourly_usd, "hourly_usd")
    _check_finite(duration_s, "duration_s")
    _check(hourly_usd >= 0, "hourly_usd", "hourly_usd must be >= 0")
    _check(duration_s >= 0, "duration_s", "duration_s must be >= 0")
    return hourly_usd * duration_s / 3600


def break_even_utilization(self_host_base_usd_hr: float, cloud_usd_hr: float) -> float:
    """Utilization above which self-hosting beats renting at `cloud_usd_hr`.

    Self-host effective cost is base/u, so the break-even point is
    u* = base / cloud. Values above 1 mean self-hosting never breaks even
    at these rates.
    """
    _check_finite(self_host_base_usd_hr, "self_host_base_usd_hr")
    _check_finite(cloud_usd_hr, "cloud_usd_hr")
    _check(self_host_base_usd_hr > 0, "self_host_base_usd_hr", "self_host_base_usd_hr must be > 0")
    _check(cloud_usd_hr > 0, "cloud_usd_hr", "cloud_usd_hr must be > 0")
    return self_host_base_usd_hr / cloud_usd_hr


_PARAM_FIELD_NAMES = tuple(f.name for f in fields(GpuCostParams))
_REQUIRED_PARAM_FIELDS = ("purchase_price", "depreciation_years")


def params_from_dict(data: dict) -> GpuCostParams:
    """Build GpuCostParams from a flat mapping; unknown keys are an error."""
    if not isinstance(data, dict):
        raise ValidationError("cost parameters must be a flat key/value mapping")
    unknown = sorted(set(data) - set(_PARAM_FIELD_NAMES))
    if unknown:
        raise ValidationError(f"unknown cost parameter key(s): {', '.join(unknown)}", field=unknown[0])
    missing = [name for name in _REQUIRED_PARAM_FIELDS if name not in data]
    if missing:
        raise ValidationError(f"missing required cost parameter(s): {', '.join(missing)}", field=missing[0])
    return GpuCostParams(**data)


def load_params(path: str | Path) -> GpuCostParams:
    """Load cost parameters from a JSON or TOML file (chosen by suffix)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        data = tomllib.loads(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return params_from_dict(data)
