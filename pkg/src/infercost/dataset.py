"""Benchmark-run data model, ingestion, and serialization.

A run file is either CSV (header row required, UTF-8, '.' decimal
separator, no thousands separators) or JSON (a flat array of run objects,
or an object ``{"sweeps": [...], "model_cards": [...]}``). Ingestion is
fail-closed: any invalid row rejects the whole file, with every failure
reported by row and field.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace

from .cost_model import run_cost
from .errors import ValidationError

RUN_FIELDS = (
    "model_id",
    "concurrency",
    "request_count",
    "total_time_s",
    "avg_ttft_s",
    "input_tokens",
    "output_tokens",
    "total_tokens",
    "avg_throughput_tok_s",
    "cost_usd",
)
_INT_RUN_FIELDS = {"concurrency", "request_count", "input_tokens", "output_tokens", "total_tokens"}
_FLOAT_RUN_FIELDS = {"total_time_s", "avg_ttft_s", "avg_throughput_tok_s"}

CARD_FIELDS = ("model_id", "params_billion", "quality_score", "notes")


@dataclass(frozen=True)
class RowFailure:
    row: int | None      # 1-based data row, None for file-level problems
    field: str | None
    message: str

    def __str__(self) -> str:
        where = f"row {self.row}: " if self.row is not None else ""
        field = f"{self.field}: " if self.field else ""
        return f"{where}{field}{self.message}"


class DatasetError(ValidationError):
    """One or more rows of a run document failed validation."""

    def __init__(self, failures: list[RowFailure]):
        self.failures = tuple(failures)
        head = "; ".join(str(f) for f in self.failures[:5])
        more = f" (+{len(self.failures) - 5} more)" if len(self.failures) > 5 else ""
        super().__init__(f"{len(self.failures)} invalid row(s): {head}{more}")


@dataclass(frozen=True)
class BenchmarkRun:
    """One model at one concurrency level: timing, token, and throughput metrics."""

    model_id: str
    concurrency: int
    request_count: int
    total_time_s: float
    avg_ttft_s: float
    input_tokens: int
    output_tokens: int
    total_tokens: int
    avg_throughput_tok_s: float
    cost_usd: float | None = None

    def __post_init__(self) -> None:
        if not self.model_id:
            raise ValidationError("model_id must be non-empty", field="model_id")
        for name in ("concurrency", "request_count", "input_tokens", "output_tokens", "total_tokens"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValidationError(f"{name} must be an integer, got {value!r}", field=name)
        if self.concurrency < 1:
            raise ValidationError("concurrency must be >= 1", field="concurrency")
        if self.request_count < 1:
            raise ValidationError("request_count must be >= 1", field="request_count")
        for name in ("input_tokens", "output_tokens", "total_tokens"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0", field=name)
        if not self.total_time_s > 0:
            raise ValidationError("total_time_s must be > 0", field="total_time_s")
        for name in ("avg_ttft_s", "avg_throughput_tok_s"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0", field=name)
        if self.total_tokens != self.input_tokens + self.output_tokens:
            raise ValidationError(
                f"total_tokens must equal input_tokens + output_tokens "
                f"({self.input_tokens} + {self.output_tokens} = "
                f"{self.input_tokens + self.output_tokens}, got {self.total_tokens})",
                field="total_tokens",
            )
        if self.cost_usd is not None and self.cost_usd < 0:
            raise ValidationError("cost_usd must be >= 0", field="cost_usd")

    def as_dict(self, include_model_id: bool = True) -> dict:
        data = {name: getattr(self, name) for name in RUN_FIELDS}
        if not include_model_id:
            del data["model_id"]
        return data


@dataclass(frozen=True)
class ModelCard:
    """Externally supplied identity and quality score of one model."""

    model_id: str
    params_billion: float
    quality_score: float
    notes: str = ""

    def __post_init__(self) -> None:
        if not self.model_id:
            raise ValidationError("model_id must be non-empty", field="model_id")
        if not self.params_billion > 0:
            raise ValidationError("params_billion must be > 0", field="params_billion")
        if not 0 <= self.quality_score <= 100:
            raise ValidationError("quality_score must be in [0, 100]", field="quality_score")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in CARD_FIELDS}


@dataclass(frozen=True)
class Sweep:
    """All runs of one model, ordered by concurrency ascending."""

    model_id: str
    runs: tuple[BenchmarkRun, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "runs", tuple(self.runs))
        for run in self.runs:
            if run.model_id != self.model_id:
                raise ValidationError(
                    f"sweep {self.model_id!r} contains a run for {run.model_id!r}", field="model_id"
                )
        concurrencies = [run.concurrency for run in self.runs]
        if any(b <= a for a, b in zip(concurrencies, concurrencies[1:])):
            raise ValidationError(
                f"sweep {self.model_id!r}: concurrency values must be strictly increasing, got {concurrencies}",
                field="concurrency",
            )
        counts = {run.request_count for run in self.runs}
        if len(counts) > 1:
            raise ValidationError(
                f"sweep {self.model_id!r}: request_count must be identical across runs, got {sorted(counts)}",
                field="request_count",
            )


def _coerce_value(field: str, raw, failures: list[RowFailure], row: int):
    """Convert one raw cell/JSON value to the field's type; None on failure."""
    if field == "model_id":
        value = str(raw).strip() if raw is not None else ""
        if not value:
            failures.append(RowFailure(row, field, "must be non-empty"))
            return None
        return value
    if field == "cost_usd" and (raw is None or (isinstance(raw, str) and not raw.strip())):
        return None
    if isinstance(raw, str):
        raw = raw.strip()
        try:
            raw = int(raw) if field in _INT_RUN_FIELDS else float(raw)
        except ValueError:
            failures.append(RowFailure(row, field, f"not a number: {raw!r}"))
            return None
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        failures.append(RowFailure(row, field, f"not a number: {raw!r}"))
        return None
    if field in _INT_RUN_FIELDS:
        if isinstance(raw, float):
            if not raw.is_integer():
                failures.append(RowFailure(row, field, f"must be an integer, got {raw!r}"))
                return None
            raw = int(raw)
        return raw
    return float(raw)


def _run_from_mapping(mapping: dict, row: int, failures: list[RowFailure],
                      model_id: str | None = None) -> BenchmarkRun | None:
    data: dict = {}
    if model_id is not None:
        if "model_id" in mapping and str(mapping["model_id"]) != model_id:
            failures.append(RowFailure(
                row, "model_id",
                f"run model_id {mapping['model_id']!r} conflicts with sweep model_id {model_id!r}",
            ))
            return None
        mapping = {"model_id": model_id, **mapping}
    unknown = sorted(set(mapping) - set(RUN_FIELDS))
    if unknown:
        failures.append(RowFailure(row, unknown[0], f"unknown field(s): {', '.join(unknown)}"))
        return None
    before = len(failures)
    for field in RUN_FIELDS:
        if field not in mapping:
            if field == "cost_usd":
                data[field] = None
                continue
            failures.append(RowFailure(row, field, "missing field"))
            continue
        value = _coerce_value(field, mapping[field], failures, row)
        if value is not None or field == "cost_usd":
            data[field] = value
    if len(failures) > before:
        return None
    try:
        return BenchmarkRun(**data)
    except ValidationError as exc:
        failures.append(RowFailure(row, exc.field, str(exc)))
        return None


def _group_into_sweeps(rows: list[BenchmarkRun], failures: list[RowFailure],
                       row_of: dict[int, int]) -> list[Sweep]:
    by_model: dict[str, list[BenchmarkRun]] = {}
    seen: dict[tuple[str, int], int] = {}
    for index, run in enumerate(rows):
        key = (run.model_id, run.concurrency)
        if key in seen:
            failures.append(RowFailure(
                row_of[index], "concurrency",
                f"duplicate (model_id, concurrency) pair {key}, first seen at row {row_of[seen[key]]}",
            ))
            continue
        seen[key] = index
        by_model.setdefault(run.model_id, []).append(run)
    sweeps = []
    for model_id, runs in by_model.items():
        try:
            sweeps.append(Sweep(model_id=model_id, runs=tuple(sorted(runs, key=lambda r: r.concurrency))))
        except ValidationError as exc:
            failures.append(RowFailure(None, exc.field, str(exc)))
    return sweeps


def parse_runs(document: str, format: str) -> list[Sweep]:
    """Parse a run document into sweeps grouped by model, sorted and validated.

    Raises DatasetError listing every failing row if anything is invalid.
    Sweeps keep first-appearance order; an empty document yields [].
    """
    sweeps, _ = parse_dataset(document, format)
    return sweeps


def parse_dataset(document: str, format: str) -> tuple[list[Sweep], list[ModelCard]]:
    """Like parse_runs but also returns model cards when the document has them."""
    if format == "csv":
        return _parse_csv_runs(document), []
    if format == "json":
        return _parse_json_dataset(document)
    raise ValidationError(f"unknown format {format!r}, expected 'csv' or 'json'", field="format")


def _parse_csv_runs(document: str) -> list[Sweep]:
    if not document.strip():
        return []
    failures: list[RowFailure] = []
    reader = csv.reader(io.StringIO(document))
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise DatasetError([RowFailure(None, None, f"malformed CSV: {exc}")]) from exc
    header = [h.strip() for h in rows[0]]
    missing = [f for f in RUN_FIELDS if f not in header and f != "cost_usd"]
    unknown = sorted(set(header) - set(RUN_FIELDS))
    if missing:
        raise DatasetError([RowFailure(None, missing[0], f"missing column(s): {', '.join(missing)}")])
    if unknown:
        raise DatasetError([RowFailure(None, unknown[0], f"unknown column(s): {', '.join(unknown)}")])
    runs: list[BenchmarkRun] = []
    row_of: dict[int, int] = {}
    for row_index, cells in enumerate(rows[1:], start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            failures.append(RowFailure(row_index, None, f"expected {len(header)} cells, got {len(cells)}"))
            continue
        run = _run_from_mapping(dict(zip(header, cells)), row_index, failures)
        if run is not None:
            row_of[len(runs)] = row_index
            runs.append(run)
    sweeps = _group_into_sweeps(runs, failures, row_of)
    if failures:
        raise DatasetError(failures)
    return sweeps


def _parse_json_dataset(document: str) -> tuple[list[Sweep], list[ModelCard]]:
    if not document.strip():
        return [], []
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DatasetError([RowFailure(None, None, f"malformed JSON: {exc}")]) from exc
    failures: list[RowFailure] = []
    runs: list[BenchmarkRun] = []
    row_of: dict[int, int] = {}
    cards: list[ModelCard] = []

    def add_run(mapping, row, model_id=None):
        if not isinstance(mapping, dict):
            failures.append(RowFailure(row, None, f"run must be an object, got {type(mapping).__name__}"))
            return
        run = _run_from_mapping(mapping, row, failures, model_id=model_id)
        if run is not None:
            row_of[len(runs)] = row
            runs.append(run)

    row = 0
    if isinstance(data, list):
        for entry in data:
            row += 1
            add_run(entry, row)
    elif isinstance(data, dict):
        unknown = sorted(set(data) - {"sweeps", "model_cards"})
        if unknown:
            raise DatasetError([RowFailure(None, unknown[0], f"unknown top-level key(s): {', '.join(unknown)}")])
        for sweep_obj in data.get("sweeps", []):
            if not isinstance(sweep_obj, dict) or "model_id" not in sweep_obj or "runs" not in sweep_obj:
                failures.append(RowFailure(None, "sweeps", "each sweep needs model_id and runs"))
                continue
            for entry in sweep_obj["runs"]:
                row += 1
                add_run(entry, row, model_id=str(sweep_obj["model_id"]))
        for card_index, card_obj in enumerate(data.get("model_cards", []), start=1):
            card = _card_from_mapping(card_obj, card_index, failures)
            if card is not None:
                cards.append(card)
    else:
        raise DatasetError([RowFailure(None, None, "document must be a JSON array or object")])

    sweeps = _group_into_sweeps(runs, failures, row_of)
    if failures:
        raise DatasetError(failures)
    return sweeps, cards


def _card_from_mapping(mapping, row: int, failures: list[RowFailure]) -> ModelCard | None:
    if not isinstance(mapping, dict):
        failures.append(RowFailure(row, "model_cards", "model card must be an object"))
        return None
    unknown = sorted(set(mapping) - set(CARD_FIELDS))
    if unknown:
        failures.append(RowFailure(row, unknown[0], f"unknown model card field(s): {', '.join(unknown)}"))
        return None
    try:
        return ModelCard(
            model_id=str(mapping["model_id"]),
            params_billion=float(mapping["params_billion"]),
            quality_score=float(mapping["quality_score"]),
            notes=str(mapping.get("notes", "")),
        )
    except ValidationError as exc:
        failures.append(RowFailure(row, exc.field, str(exc)))
        return None
    except (KeyError, TypeError, ValueError) as exc:
        field = exc.args[0] if isinstance(exc, KeyError) else None
        failures.append(RowFailure(row, field, f"invalid model card: {exc}"))
        return None


def parse_model_cards(document: str, format: str) -> list[ModelCard]:
    """Parse a scores document: JSON array of cards, full dataset JSON, or CSV."""
    if format == "json":
        data = json.loads(document) if document.strip() else []
        failures: list[RowFailure] = []
        if isinstance(data, dict):
            data = data.get("model_cards", [])
        cards = []
        for index, entry in enumerate(data, start=1):
            card = _card_from_mapping(entry, index, failures)
            if card is not None:
                cards.append(card)
        if failures:
            raise DatasetError(failures)
        return cards
    if format == "csv":
        if not document.strip():
            return []
        failures = []
        reader = csv.DictReader(io.StringIO(document))
        cards = []
        for index, mapping in enumerate(reader, start=1):
            card = _card_from_mapping({k: v for k, v in mapping.items() if v is not None}, index, failures)
            if card is not None:
                cards.append(card)
        if failures:
            raise DatasetError(failures)
        return cards
    raise ValidationError(f"unknown format {format!r}, expected 'csv' or 'json'", field="format")


def _format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(value)


def serialize_runs(sweeps: list[Sweep] | tuple[Sweep, ...], format: str) -> str:
    """Serialize sweeps with canonical field ordering; reparses to the same value."""
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(RUN_FIELDS)
        for sweep in sweeps:
            for run in sweep.runs:
                writer.writerow(_format_number(v) if not isinstance(v, str) else v
                                for v in (getattr(run, f) for f in RUN_FIELDS))
        return out.getvalue()
    if format == "json":
        return serialize_dataset(sweeps, None)
    raise ValidationError(f"unknown format {format!r}, expected 'csv' or 'json'", field="format")


def serialize_dataset(sweeps, model_cards=None) -> str:
    """Canonical JSON document: {"sweeps": [...], "model_cards": [...]}."""
    doc: dict = {
        "sweeps": [
            {"model_id": sweep.model_id, "runs": [run.as_dict(include_model_id=False) for run in sweep.runs]}
            for sweep in sweeps
        ]
    }
    if model_cards is not None:
        doc["model_cards"] = [card.as_dict() for card in model_cards]
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class CostCheck:
    """Published-vs-recomputed cost for one run."""

    concurrency: int
    published_usd: float
    recomputed_usd: float

    @property
    def abs_error(self) -> float:
        return abs(self.published_usd - self.recomputed_usd)


def recompute_costs(sweep: Sweep, hourly_usd: float) -> Sweep:
    """Return the sweep with cost_usd recomputed from total_time_s at `hourly_usd`."""
    if not hourly_usd > 0:
        raise ValidationError("hourly_usd must be > 0", field="hourly_usd")
    return Sweep(
        model_id=sweep.model_id,
        runs=tuple(replace(run, cost_usd=run_cost(hourly_usd, run.total_time_s)) for run in sweep.runs),
    )


def cost_crosschecks(sweep: Sweep, hourly_usd: float) -> tuple[CostCheck, ...]:
    """Compare published costs against recomputation; runs without a published cost are skipped."""
    if not hourly_usd > 0:
        raise ValidationError("hourly_usd must be > 0", field="hourly_usd")
    return tuple(
        CostCheck(run.concurrency, run.cost_usd, run_cost(hourly_usd, run.total_time_s))
        for run in sweep.runs
        if run.cost_usd is not None
    )
