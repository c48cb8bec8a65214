"""Stateless HTTP facade over the cost model, selection, and dataset.

Every endpoint is a pure computation over the request body (or the
embedded dataset), so identical requests yield identical responses across
calls and restarts. The compiled explorer UI, when present, is served
from the same origin at /.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .cost_model import (
    A800_BASELINE,
    ClusterSpec,
    break_even_utilization,
    cluster_hourly,
    hourly_breakdown,
    params_from_dict,
)
from .dataset import DatasetError, ModelCard, Sweep, parse_dataset, parse_model_cards
from .errors import ValidationError
from .fixture import FIXTURE_DATASET_ID, canonical_fixture
from .reporting import fmt_usd, whatif_payload
from .selection import MissingScoreError, PerfThresholds, what_if

_WHATIF_KEYS = {"cost_params", "gpu_count", "thresholds", "dataset", "cloud_rate_usd_hr"}

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>infercost api</title></head>
<body>
<h1>infercost API</h1>
<p>The explorer UI bundle is not built. Endpoints:</p>
<ul>
<li>POST /api/cost/hourly</li>
<li>POST /api/whatif</li>
<li>GET /api/datasets/wineval3</li>
<li>GET /healthz</li>
</ul>
</body></html>
"""


def _thresholds_from(body: dict) -> PerfThresholds:
    if not isinstance(body, dict):
        raise ValidationError("thresholds must be an object", field="thresholds")
    unknown = sorted(set(body) - {"max_ttft_s", "min_throughput_tok_s"})
    if unknown:
        raise ValidationError(f"unknown threshold key(s): {', '.join(unknown)}", field=unknown[0])
    defaults = PerfThresholds()
    return PerfThresholds(
        max_ttft_s=body.get("max_ttft_s", defaults.max_ttft_s),
        min_throughput_tok_s=body.get("min_throughput_tok_s", defaults.min_throughput_tok_s),
    )


def _dataset_from(spec, default_dataset: tuple[tuple[Sweep, ...], tuple[ModelCard, ...]] | None):
    if spec is None:
        if default_dataset is not None:
            return default_dataset, "default"
        return canonical_fixture(), FIXTURE_DATASET_ID
    if spec == "fixture":
        return canonical_fixture(), FIXTURE_DATASET_ID
    if isinstance(spec, dict) and "content" in spec:
        # raw uploaded document, parsed and validated server-side
        unknown = sorted(set(spec) - {"format", "content", "scores_format", "scores_content"})
        if unknown:
            raise ValidationError(f"unknown dataset key(s): {', '.join(unknown)}", field="dataset")
        format = spec.get("format", "json")
        sweeps, cards = parse_dataset(str(spec["content"]), format)
        if spec.get("scores_content") is not None:
            cards = parse_model_cards(str(spec["scores_content"]), spec.get("scores_format", "json"))
        if not sweeps:
            raise ValidationError("inline dataset contains no runs", field="dataset")
        return (tuple(sweeps), tuple(cards)), "inline"
    if isinstance(spec, dict):
        sweeps, cards = parse_dataset(json.dumps(spec), "json")
        if not sweeps:
            raise ValidationError("inline dataset contains no runs", field="dataset")
        return (tuple(sweeps), tuple(cards)), "inline"
    raise ValidationError("dataset must be \"fixture\" or an inline {sweeps, model_cards} object",
                          field="dataset")


def fixture_document() -> dict:
    """The embedded dataset in run-file JSON shape (uploadable as-is)."""
    sweeps, cards = canonical_fixture()
    return {
        "sweeps": [
            {"model_id": s.model_id, "runs": [r.as_dict(include_model_id=False) for r in s.runs]}
            for s in sweeps
        ],
        "model_cards": [c.as_dict() for c in cards],
    }


def evaluate_whatif(body: dict, default_dataset=None) -> dict:
    """Single computation path behind POST /api/whatif and the CLI what-if."""
    if not isinstance(body, dict):
        raise ValidationError("request body must be a JSON object")
    unknown = sorted(set(body) - _WHATIF_KEYS)
    if unknown:
        raise ValidationError(f"unknown key(s): {', '.join(unknown)}", field=unknown[0])

    params = params_from_dict(body["cost_params"]) if "cost_params" in body else A800_BASELINE
    gpu_count = body.get("gpu_count", 2)
    thresholds = _thresholds_from(body.get("thresholds", {}))
    (sweeps, cards), dataset_id = _dataset_from(body.get("dataset"), default_dataset)

    result = what_if(sweeps, cards, params, gpu_count, thresholds)

    breakdown = hourly_breakdown(params)
    cost_block = {
        "per_gpu": breakdown.as_dict(),
        "gpu_count": gpu_count,
        "cluster_hourly_usd": cluster_hourly(ClusterSpec(gpu_count=gpu_count, params=params)),
        "reference_rate_usd": result.hourly_usd,
        "break_even": None,
        "display": {
            "per_gpu_total": fmt_usd(breakdown.total_usd_hr),
            "cluster_hourly_usd": fmt_usd(gpu_count * breakdown.total_usd_hr),
            "reference_rate_usd": fmt_usd(result.hourly_usd),
        },
    }
    cloud_rate = body.get("cloud_rate_usd_hr")
    if cloud_rate is not None:
        utilization = break_even_utilization(breakdown.total_usd_hr, float(cloud_rate))
        cost_block["break_even"] = {
            "cloud_rate_usd_hr": float(cloud_rate),
            "utilization": utilization,
        }
        cost_block["display"]["break_even_utilization"] = f"{100 * utilization:.1f}%"
    return whatif_payload(result, cards, dataset_id, thresholds, cost_block=cost_block)


def _error_response(exc: ValidationError) -> JSONResponse:
    status = 422 if isinstance(exc, MissingScoreError) else 400
    detail: dict = {"message": str(exc), "field": exc.field}
    if isinstance(exc, DatasetError):
        detail["failures"] = [
            {"row": f.row, "field": f.field, "message": f.message} for f in exc.failures
        ]
    if isinstance(exc, MissingScoreError):
        detail["model_id"] = exc.model_id
    return JSONResponse(status_code=status, content={"error": detail})


def create_app(static_dir: str | Path | None = None, default_dataset=None) -> FastAPI:
    """Build the service; `default_dataset` overrides what "no dataset field" means."""
    app = FastAPI(title="infercost", docs_url=None, redoc_url=None)

    @app.exception_handler(ValidationError)
    async def handle_validation(request: Request, exc: ValidationError):
        return _error_response(exc)

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/api/cost/hourly")
    async def cost_hourly(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error_response(ValidationError("request body must be valid JSON"))
        try:
            return hourly_breakdown(params_from_dict(body)).as_dict()
        except ValidationError as exc:
            return _error_response(exc)

    @app.post("/api/whatif")
    async def whatif_endpoint(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error_response(ValidationError("request body must be valid JSON"))
        try:
            return evaluate_whatif(body, default_dataset=default_dataset)
        except ValidationError as exc:
            return _error_response(exc)

    @app.get("/api/datasets/wineval3")
    async def dataset_wineval3():
        return fixture_document()

    static_path = Path(static_dir) if static_dir else None
    if static_path is not None and static_path.is_dir():
        app.mount("/", StaticFiles(directory=static_path, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def index():
            return _PLACEHOLDER_PAGE

    return app
