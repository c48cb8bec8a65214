"""Comparison tables, what-if payloads, and the frontier plot.

Rendering is a pure function of (data, options): identical inputs yield
byte-identical documents. Raw values stay unrounded; the `display` block
carries the canonical formatted strings so every consumer (CLI table,
HTTP response, UI) quotes the same digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .dataset import ModelCard
from .errors import ValidationError
from .selection import Frontier, ParetoPoint, PerfThresholds, WhatIfResult


def fmt_usd(value: float) -> str:
    return f"{value:.2f}"


def fmt_seconds(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text if text else "0"


def fmt_ttft(value: float) -> str:
    return f"{value:.3f}"


def fmt_rate(value: float) -> str:
    return f"{value:.2f}"


def fmt_score(value: float) -> str:
    return f"{value:g}"


def fmt_params(value: float) -> str:
    return f"{value:g}"


@dataclass(frozen=True)
class ReportRow:
    model_id: str
    params_billion: float
    quality_score: float
    feasible: bool
    on_frontier: bool
    concurrency: int | None
    total_time_s: float | None
    avg_ttft_s: float | None
    input_tokens: int | None
    output_tokens: int | None
    total_tokens: int | None
    avg_throughput_tok_s: float | None
    cost_usd: float | None

    def display(self) -> dict:
        """Formatted strings for every displayable column; '-' when absent."""
        def opt(value, fmt):
            return fmt(value) if value is not None else "-"

        return {
            "model_id": self.model_id,
            "params_billion": fmt_params(self.params_billion),
            "concurrency": opt(self.concurrency, str),
            "total_time_s": opt(self.total_time_s, fmt_seconds),
            "avg_ttft_s": opt(self.avg_ttft_s, fmt_ttft),
            "input_tokens": opt(self.input_tokens, str),
            "output_tokens": opt(self.output_tokens, str),
            "total_tokens": opt(self.total_tokens, str),
            "avg_throughput_tok_s": opt(self.avg_throughput_tok_s, fmt_rate),
            "cost_usd": opt(self.cost_usd, fmt_usd),
            "quality_score": fmt_score(self.quality_score),
            "on_frontier": "yes" if self.on_frontier else "no",
            "feasible": "yes" if self.feasible else "no",
        }

    def as_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "params_billion": self.params_billion,
            "quality_score": self.quality_score,
            "feasible": self.feasible,
            "on_frontier": self.on_frontier,
            "concurrency": self.concurrency,
            "total_time_s": self.total_time_s,
            "avg_ttft_s": self.avg_ttft_s,
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "total_tokens": self.total_tokens,
            "avg_throughput_tok_s": self.avg_throughput_tok_s,
            "cost_usd": self.cost_usd,
            "display": self.display(),
        }


@dataclass(frozen=True)
class ReportMeta:
    hourly_usd: float
    thresholds: PerfThresholds
    dataset_id: str
    generated_at: str | None = None

    def as_dict(self) -> dict:
        return {
            "hourly_usd": self.hourly_usd,
            "thresholds": self.thresholds.as_dict(),
            "dataset_id": self.dataset_id,
            "generated_at": self.generated_at,
        }


@dataclass(frozen=True)
class ComparisonReport:
    """Per-model comparison at optimal configurations, quality-descending."""

    rows: tuple[ReportRow, ...]
    meta: ReportMeta


def build_report(result: WhatIfResult, model_cards, dataset_id: str,
                 thresholds: PerfThresholds = PerfThresholds(),
                 generated_at: str | None = None) -> ComparisonReport:
    cards_by_id = {card.model_id: card for card in model_cards}
    frontier_ids = set(result.frontier.member_ids) if result.frontier is not None else set()
    rows = []
    for choice in result.optima:
        card: ModelCard = cards_by_id[choice.model_id]
        run = choice.run
        rows.append(ReportRow(
            model_id=choice.model_id,
            params_billion=card.params_billion,
            quality_score=card.quality_score,
            feasible=choice.feasible,
            on_frontier=choice.model_id in frontier_ids,
            concurrency=choice.concurrency,
            total_time_s=run.total_time_s if run else None,
            avg_ttft_s=run.avg_ttft_s if run else None,
            input_tokens=run.input_tokens if run else None,
            output_tokens=run.output_tokens if run else None,
            total_tokens=run.total_tokens if run else None,
            avg_throughput_tok_s=run.avg_throughput_tok_s if run else None,
            cost_usd=choice.cost_usd,
        ))
    rows.sort(key=lambda r: (-r.quality_score, r.model_id))
    meta = ReportMeta(
        hourly_usd=result.hourly_usd,
        thresholds=thresholds,
        dataset_id=dataset_id,
        generated_at=generated_at,
    )
    return ComparisonReport(rows=tuple(rows), meta=meta)


_MARKDOWN_COLUMNS = (
    ("model_id", "Model"),
    ("params_billion", "Params (B)"),
    ("concurrency", "Conc."),
    ("total_time_s", "Total Time (s)"),
    ("avg_ttft_s", "Avg. TTFT (s)"),
    ("input_tokens", "Input Tokens"),
    ("output_tokens", "Output Tokens"),
    ("total_tokens", "Total Tokens"),
    ("avg_throughput_tok_s", "Throughput (tok/s)"),
    ("cost_usd", "Cost ($)"),
    ("quality_score", "Score"),
    ("on_frontier", "Frontier"),
)

_CSV_COLUMNS = (
    "model_id", "params_billion", "concurrency", "total_time_s", "avg_ttft_s",
    "input_tokens", "output_tokens", "total_tokens", "avg_throughput_tok_s",
    "cost_usd", "quality_score", "feasible", "on_frontier",
)


def render_table(report: ComparisonReport, format: str) -> str:
    """Render the comparison as markdown, csv, or json; byte-stable."""
    if format == "markdown":
        header = "| " + " | ".join(title for _, title in _MARKDOWN_COLUMNS) + " |"
        rule = "|" + "|".join("---" for _ in _MARKDOWN_COLUMNS) + "|"
        lines = [header, rule]
        for row in report.rows:
            display = row.display()
            lines.append("| " + " | ".join(display[key] for key, _ in _MARKDOWN_COLUMNS) + " |")
        return "\n".join(lines) + "\n"
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for row in report.rows:
            data = row.as_dict()
            writer.writerow("" if data[col] is None else data[col] for col in _CSV_COLUMNS)
        return out.getvalue()
    if format == "json":
        doc = {"meta": report.meta.as_dict(), "rows": [row.as_dict() for row in report.rows]}
        return json.dumps(doc, indent=2) + "\n"
    raise ValidationError(f"unknown format {format!r}, expected markdown, csv, or json", field="format")


def whatif_payload(result: WhatIfResult, model_cards, dataset_id: str,
                   thresholds: PerfThresholds, cost_block: dict | None = None) -> dict:
    """Canonical what-if document shared by the CLI and the HTTP service."""
    report = build_report(result, model_cards, dataset_id, thresholds)
    payload = {
        "hourly_rate_usd": result.hourly_usd,
        "hourly_rate_display": fmt_usd(result.hourly_usd),
        "thresholds": thresholds.as_dict(),
        "dataset_id": dataset_id,
        "optima": [choice.as_dict() for choice in result.optima],
        "frontier": result.frontier.as_dict() if result.frontier is not None else None,
        "rows": [row.as_dict() for row in report.rows],
    }
    if cost_block is not None:
        payload["cost"] = cost_block
    return payload


@dataclass(frozen=True)
class PlotOptions:
    width: int = 860
    height: int = 520
    log_x: bool = False
    sweet_spot_usd: float | None = 1.40
    bubble_scale: float = 2.2
    title: str = "Model quality vs. inference cost"


_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 28.0
_MARGIN_TOP = 44.0
_MARGIN_BOTTOM = 52.0

_SVG_STYLE = (
    "text{font-family:Helvetica,Arial,sans-serif;font-size:12px;fill:#333}"
    ".title{font-size:15px;font-weight:bold}"
    ".axis{stroke:#444;stroke-width:1}"
    ".tick{stroke:#444;stroke-width:1}"
    ".grid{stroke:#ddd;stroke-width:0.5}"
    ".band{fill:#2a9d8f;fill-opacity:0.08}"
    ".band-edge{stroke:#2a9d8f;stroke-width:1;stroke-dasharray:4 3}"
    ".stair{fill:none;stroke:#e76f51;stroke-width:1.5}"
    ".pt{stroke:#333;stroke-width:0.75}"
    ".pt.frontier{fill:#e76f51;fill-opacity:0.85}"
    ".pt.dominated{fill:#7f8fa6;fill-opacity:0.55}"
    ".lbl{font-size:11px}"
)


def _num(value: float) -> str:
    return f"{value:.2f}"


def _pad_domain(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        pad = 0.05 * (hi - lo)
        return lo - pad, hi + pad
    pad = 0.05 * abs(lo) if lo != 0 else 0.5
    return lo - pad, lo + pad


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt_tick(value: float) -> str:
    if abs(value) >= 100:
        return f"{value:.0f}"
    if abs(value) >= 1:
        return f"{value:.2f}".rstrip("0").rstrip(".")
    return f"{value:.3f}".rstrip("0").rstrip(".")


def render_frontier_plot(frontier: Frontier, all_points, options: PlotOptions = PlotOptions()) -> str:
    """2D cost-quality scatter: bubbles sized by parameter count (area
    proportional), frontier points highlighted and joined by a staircase,
    optional sweet-spot cost band. Standalone SVG, no external assets."""
    points: list[ParetoPoint] = list(all_points)
    if not points:
        raise ValidationError("at least one point is required", field="points")
    frontier_ids = set(frontier.member_ids)

    def tx(cost: float) -> float:
        return math.log10(cost) if options.log_x else cost

    x_lo, x_hi = _pad_domain(min(tx(p.cost_usd) for p in points), max(tx(p.cost_usd) for p in points))
    y_lo, y_hi = _pad_domain(min(p.quality for p in points), max(p.quality for p in points))
    plot_w = options.width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = options.height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(cost: float) -> float:
        return _MARGIN_LEFT + (tx(cost) - x_lo) / (x_hi - x_lo) * plot_w

    def sy(quality: float) -> float:
        return _MARGIN_TOP + (y_hi - quality) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{options.width}" height="{options.height}" '
        f'viewBox="0 0 {options.width} {options.height}">',
        f"<style>{_SVG_STYLE}</style>",
        f'<rect width="{options.width}" height="{options.height}" fill="white"/>',
        f'<text class="title" x="{_num(_MARGIN_LEFT)}" y="24">{options.title}</text>',
    ]

    if options.sweet_spot_usd is not None and tx(options.sweet_spot_usd) > x_lo:
        band_right = min(tx(options.sweet_spot_usd), x_hi)
        x_right = _MARGIN_LEFT + (band_right - x_lo) / (x_hi - x_lo) * plot_w
        parts.append(
            f'<rect class="band" x="{_num(_MARGIN_LEFT)}" y="{_num(_MARGIN_TOP)}" '
            f'width="{_num(x_right - _MARGIN_LEFT)}" height="{_num(plot_h)}"/>'
        )
        if band_right < x_hi:
            parts.append(
                f'<line class="band-edge" x1="{_num(x_right)}" y1="{_num(_MARGIN_TOP)}" '
                f'x2="{_num(x_right)}" y2="{_num(_MARGIN_TOP + plot_h)}"/>'
            )
            parts.append(
                f'<text class="lbl" x="{_num(x_right + 4)}" y="{_num(_MARGIN_TOP + 14)}">'
                f"sweet spot &lt; ${fmt_usd(options.sweet_spot_usd)}</text>"
            )

    axis_y = _MARGIN_TOP + plot_h
    for raw in _ticks(x_lo, x_hi):
        x = _MARGIN_LEFT + (raw - x_lo) / (x_hi - x_lo) * plot_w
        label = _fmt_tick(10 ** raw if options.log_x else raw)
        parts.append(f'<line class="grid" x1="{_num(x)}" y1="{_num(_MARGIN_TOP)}" x2="{_num(x)}" y2="{_num(axis_y)}"/>')
        parts.append(f'<line class="tick" x1="{_num(x)}" y1="{_num(axis_y)}" x2="{_num(x)}" y2="{_num(axis_y + 5)}"/>')
        parts.append(f'<text x="{_num(x - 10)}" y="{_num(axis_y + 18)}">{label}</text>')
    for raw in _ticks(y_lo, y_hi):
        y = _MARGIN_TOP + (y_hi - raw) / (y_hi - y_lo) * plot_h
        parts.append(f'<line class="grid" x1="{_num(_MARGIN_LEFT)}" y1="{_num(y)}" x2="{_num(_MARGIN_LEFT + plot_w)}" y2="{_num(y)}"/>')
        parts.append(f'<line class="tick" x1="{_num(_MARGIN_LEFT - 5)}" y1="{_num(y)}" x2="{_num(_MARGIN_LEFT)}" y2="{_num(y)}"/>')
        parts.append(f'<text x="{_num(_MARGIN_LEFT - 36)}" y="{_num(y + 4)}">{_fmt_tick(raw)}</text>')
    parts.append(f'<line class="axis" x1="{_num(_MARGIN_LEFT)}" y1="{_num(_MARGIN_TOP)}" x2="{_num(_MARGIN_LEFT)}" y2="{_num(axis_y)}"/>')
    parts.append(f'<line class="axis" x1="{_num(_MARGIN_LEFT)}" y1="{_num(axis_y)}" x2="{_num(_MARGIN_LEFT + plot_w)}" y2="{_num(axis_y)}"/>')
    parts.append(f'<text x="{_num(_MARGIN_LEFT + plot_w / 2 - 40)}" y="{_num(options.height - 12)}">cost (USD)</text>')
    parts.append(
        f'<text x="16" y="{_num(_MARGIN_TOP + plot_h / 2)}" '
        f'transform="rotate(-90 16 {_num(_MARGIN_TOP + plot_h / 2)})">quality score</text>'
    )

    stairs = [p for p in points if p.model_id in frontier_ids]
    stairs.sort(key=lambda p: (p.cost_usd, p.quality, p.model_id))
    if stairs:
        d = [f"M{_num(sx(stairs[0].cost_usd))} {_num(sy(stairs[0].quality))}"]
        for prev, cur in zip(stairs, stairs[1:]):
            d.append(f"H{_num(sx(cur.cost_usd))}")
            d.append(f"V{_num(sy(cur.quality))}")
        parts.append(f'<path class="stair" d="{" ".join(d)}"/>')

    for point in sorted(points, key=lambda p: (p.cost_usd, p.quality, p.model_id)):
        kind = "frontier" if point.model_id in frontier_ids else "dominated"
        radius = options.bubble_scale * math.sqrt(point.params_billion)
        x, y = sx(point.cost_usd), sy(point.quality)
        parts.append(f'<circle class="pt {kind}" cx="{_num(x)}" cy="{_num(y)}" r="{_num(radius)}"/>')
        parts.append(f'<text class="lbl" x="{_num(x + radius + 4)}" y="{_num(y + 4)}">{point.model_id}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
