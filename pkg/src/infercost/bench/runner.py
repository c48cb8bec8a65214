"""Closed-loop concurrency sweep against a streaming chat-completions endpoint.

The load model keeps exactly min(concurrency, remaining) requests in
flight: a fixed pool of workers pulls from the request queue and a new
request starts only when one finishes. Timestamps come from a monotonic
clock; wall-clock time belongs in report metadata, never in measurements.
"""

from __future__ import annotations

import asyncio
import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

import aiohttp

from ..dataset import BenchmarkRun, Sweep
from ..errors import EndpointError, ValidationError


@dataclass(frozen=True)
class RequestPayload:
    """One chat request: messages plus optional generation limits."""

    messages: tuple[dict, ...]
    max_tokens: int | None = None
    temperature: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages:
            raise ValidationError("payload must have at least one message", field="messages")

    def as_body(self, model_name: str) -> dict:
        body: dict = {
            "model": model_name,
            "messages": [dict(m) for m in self.messages],
            "stream": True,
            "stream_options": {"include_usage": True},
        }
        if self.max_tokens is not None:
            body["max_tokens"] = self.max_tokens
        if self.temperature is not None:
            body["temperature"] = self.temperature
        return body


@dataclass(frozen=True)
class WorkloadSpec:
    name: str
    requests: tuple[RequestPayload, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "requests", tuple(self.requests))
        if not self.requests:
            raise ValidationError("workload must contain at least one request", field="requests")


def load_workload(text: str, name: str = "workload") -> WorkloadSpec:
    """Parse a workload file: {"name", "requests": [{"messages", ...}]} or a bare array."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"workload is not valid JSON: {exc}") from exc
    if isinstance(data, dict):
        name = str(data.get("name", name))
        entries = data.get("requests")
    else:
        entries = data
    if not isinstance(entries, list) or not entries:
        raise ValidationError("workload must contain a non-empty requests array", field="requests")
    payloads = []
    for index, entry in enumerate(entries):
        if not isinstance(entry, dict) or "messages" not in entry:
            raise ValidationError(f"request {index}: each request needs a messages array", field="messages")
        payloads.append(RequestPayload(
            messages=tuple(entry["messages"]),
            max_tokens=entry.get("max_tokens"),
            temperature=entry.get("temperature"),
        ))
    return WorkloadSpec(name=name, requests=tuple(payloads))


@dataclass(frozen=True)
class RunConfig:
    endpoint_url: str
    model_name: str
    concurrency_levels: tuple[int, ...]
    request_timeout_s: float = 120.0
    warmup_requests: int = 8
    api_key_env: str = "OPENAI_API_KEY"
    shuffle_seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "concurrency_levels", tuple(self.concurrency_levels))
        if not self.concurrency_levels:
            raise ValidationError("concurrency_levels must be non-empty", field="concurrency_levels")
        levels = self.concurrency_levels
        if any(not isinstance(c, int) or c < 1 for c in levels):
            raise ValidationError("concurrency levels must be positive integers", field="concurrency_levels")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValidationError(
                f"concurrency levels must be strictly increasing, got {list(levels)}",
                field="concurrency_levels",
            )
        if not self.request_timeout_s > 0:
            raise ValidationError("request_timeout_s must be > 0", field="request_timeout_s")
        if self.warmup_requests < 0:
            raise ValidationError("warmup_requests must be >= 0", field="warmup_requests")


@dataclass(frozen=True)
class RequestTrace:
    """Client-side record of one request.

    `status` is "ok" or an error kind (connect_error, timeout, http_<code>,
    stream_error). Monotonic timestamps, seconds.
    """

    request_index: int
    send_ts: float
    first_token_ts: float | None
    end_ts: float
    input_tokens: int
    output_tokens: int
    status: str = "ok"
    error_detail: str | None = None

    def __post_init__(self) -> None:
        if self.ok:
            if self.first_token_ts is None or not (self.send_ts <= self.first_token_ts <= self.end_ts):
                raise ValidationError(
                    "ok trace requires send_ts <= first_token_ts <= end_ts", field="first_token_ts"
                )
        if self.input_tokens < 0 or self.output_tokens < 0:
            raise ValidationError("token counts must be >= 0", field="output_tokens")

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def as_dict(self) -> dict:
        return {
            "request_index": self.request_index,
            "send_ts": self.send_ts,
            "first_token_ts": self.first_token_ts,
            "end_ts": self.end_ts,
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "status": self.status,
            "error_detail": self.error_detail,
        }


async def _one_request(session: aiohttp.ClientSession, config: RunConfig, index: int,
                       payload: RequestPayload, headers: dict) -> RequestTrace:
    send_ts = time.monotonic()
    first_ts: float | None = None
    counted_tokens = 0
    usage = None
    try:
        timeout = aiohttp.ClientTimeout(total=config.request_timeout_s)
        async with session.post(f"{config.endpoint_url.rstrip('/')}/v1/chat/completions",
                                json=payload.as_body(config.model_name),
                                headers=headers, timeout=timeout) as resp:
            if resp.status in (401, 403):
                raise EndpointError(f"authentication failed (HTTP {resp.status})")
            if resp.status != 200:
                detail = (await resp.text())[:200]
                return RequestTrace(index, send_ts, None, time.monotonic(), 0, 0,
                                    status=f"http_{resp.status}", error_detail=detail)
            async for raw_line in resp.content:
                line = raw_line.strip()
                if not line.startswith(b"data:"):
                    continue
                data = line[5:].strip()
                if data == b"[DONE]":
                    break
                try:
                    chunk = json.loads(data)
                except json.JSONDecodeError:
                    continue
                choices = chunk.get("choices") or []
                delta = choices[0].get("delta", {}) if choices else {}
                if delta.get("content"):
                    if first_ts is None:
                        first_ts = time.monotonic()
                    counted_tokens += 1
                if chunk.get("usage"):
                    usage = chunk["usage"]
    except asyncio.TimeoutError:
        return RequestTrace(index, send_ts, first_ts, time.monotonic(), 0, 0,
                            status="timeout", error_detail=f"timeout after {config.request_timeout_s}s")
    except aiohttp.ClientError as exc:
        return RequestTrace(index, send_ts, first_ts, time.monotonic(), 0, 0,
                            status="connect_error", error_detail=str(exc))
    end_ts = time.monotonic()
    if first_ts is None:
        return RequestTrace(index, send_ts, None, end_ts, 0, 0,
                            status="stream_error", error_detail="stream ended with no content token")
    input_tokens = int(usage.get("prompt_tokens", 0)) if usage else 0
    output_tokens = int(usage.get("completion_tokens", counted_tokens)) if usage else counted_tokens
    return RequestTrace(index, send_ts, first_ts, end_ts, input_tokens, output_tokens)


async def _execute_level(session: aiohttp.ClientSession, config: RunConfig,
                         payloads: list[tuple[int, RequestPayload]], concurrency: int,
                         headers: dict) -> list[RequestTrace]:
    queue: asyncio.Queue = asyncio.Queue()
    for item in payloads:
        queue.put_nowait(item)
    traces: list[RequestTrace] = []

    async def worker() -> None:
        while True:
            try:
                index, payload = queue.get_nowait()
            except asyncio.QueueEmpty:
                return
            traces.append(await _one_request(session, config, index, payload, headers))

    workers = [asyncio.create_task(worker()) for _ in range(min(concurrency, len(payloads)))]
    try:
        await asyncio.gather(*workers)
    finally:
        for task in workers:
            task.cancel()
    traces.sort(key=lambda t: t.request_index)
    return traces


def _auth_headers(config: RunConfig) -> dict:
    import os

    headers = {"Content-Type": "application/json"}
    token = os.environ.get(config.api_key_env, "")
    if token:
        headers["Authorization"] = f"Bearer {token}"
    return headers


def _ordered_payloads(config: RunConfig, workload: WorkloadSpec) -> list[tuple[int, RequestPayload]]:
    items = list(enumerate(workload.requests))
    if config.shuffle_seed is not None:
        random.Random(config.shuffle_seed).shuffle(items)
    return items


def run_level(config: RunConfig, workload: WorkloadSpec, concurrency: int) -> list[RequestTrace]:
    """Execute the workload closed-loop at one concurrency level.

    Returns one trace per request in workload order; request errors become
    error traces and the run continues. Authentication failure aborts.
    """
    if concurrency < 1:
        raise ValidationError("concurrency must be >= 1", field="concurrency")

    async def go() -> list[RequestTrace]:
        async with aiohttp.ClientSession() as session:
            return await _execute_level(session, config, _ordered_payloads(config, workload),
                                        concurrency, _auth_headers(config))

    return asyncio.run(go())


@dataclass(frozen=True)
class LevelAggregate:
    """A BenchmarkRun plus the diagnostics that do not fit its schema."""

    run: BenchmarkRun
    error_count: int
    errors_by_kind: tuple[tuple[str, int], ...]
    single_token_responses: int
    avg_throughput_e2e_tok_s: float

    def as_dict(self) -> dict:
        return {
            "run": self.run.as_dict(),
            "error_count": self.error_count,
            "errors_by_kind": dict(self.errors_by_kind),
            "single_token_responses": self.single_token_responses,
            "avg_throughput_e2e_tok_s": self.avg_throughput_e2e_tok_s,
        }


def aggregate(traces: list[RequestTrace], concurrency: int, model_id: str) -> LevelAggregate:
    """Collapse one level's traces into a BenchmarkRun.

    Total time spans min(send) to max(end) over ok traces; TTFT averages
    first_token - send; throughput averages the per-request decode rate
    output_tokens / (end - first_token), excluding single-token responses
    (no decode window) which are tallied separately. Error traces are
    counted by kind, never silently dropped.
    """
    ok = [t for t in traces if t.ok]
    if not ok:
        raise ValidationError("no successful traces to aggregate", field="traces")
    errors = [t for t in traces if not t.ok]
    kinds: dict[str, int] = {}
    for t in errors:
        kinds[t.status] = kinds.get(t.status, 0) + 1

    total_time_s = max(t.end_ts for t in ok) - min(t.send_ts for t in ok)
    avg_ttft_s = sum(t.first_token_ts - t.send_ts for t in ok) / len(ok)
    decode_rates = [t.output_tokens / (t.end_ts - t.first_token_ts) for t in ok if t.end_ts > t.first_token_ts]
    single_token = sum(1 for t in ok if t.end_ts == t.first_token_ts)
    e2e_rates = [t.output_tokens / (t.end_ts - t.send_ts) for t in ok if t.end_ts > t.send_ts]
    input_tokens = sum(t.input_tokens for t in ok)
    output_tokens = sum(t.output_tokens for t in ok)
    run = BenchmarkRun(
        model_id=model_id,
        concurrency=concurrency,
        request_count=len(ok),
        total_time_s=total_time_s,
        avg_ttft_s=avg_ttft_s,
        input_tokens=input_tokens,
        output_tokens=output_tokens,
        total_tokens=input_tokens + output_tokens,
        avg_throughput_tok_s=sum(decode_rates) / len(decode_rates) if decode_rates else 0.0,
    )
    return LevelAggregate(
        run=run,
        error_count=len(errors),
        errors_by_kind=tuple(sorted(kinds.items())),
        single_token_responses=single_token,
        avg_throughput_e2e_tok_s=sum(e2e_rates) / len(e2e_rates) if e2e_rates else 0.0,
    )


@dataclass(frozen=True)
class LevelOutcome:
    concurrency: int
    traces: tuple[RequestTrace, ...]
    aggregate: LevelAggregate | None
    in_sweep: bool
    note: str | None = None


@dataclass(frozen=True)
class SweepResult:
    """A dataset Sweep plus the full per-level trace log and diagnostics."""

    sweep: Sweep
    levels: tuple[LevelOutcome, ...]


def run_sweep(config: RunConfig, workload: WorkloadSpec) -> SweepResult:
    """Run every concurrency level in order, each preceded by warmup requests.

    Only levels where every workload request completed ok enter the Sweep
    (its request_count must be uniform); incomplete levels are kept in the
    outcome list with a note. Authentication failure aborts the sweep.
    """
    expected = len(workload.requests)

    async def go() -> list[LevelOutcome]:
        outcomes: list[LevelOutcome] = []
        headers = _auth_headers(config)
        async with aiohttp.ClientSession() as session:
            for concurrency in config.concurrency_levels:
                if config.warmup_requests:
                    warmup = [(i, workload.requests[i % expected]) for i in range(config.warmup_requests)]
                    await _execute_level(session, config, warmup, concurrency, headers)
                traces = await _execute_level(session, config, _ordered_payloads(config, workload),
                                              concurrency, headers)
                ok_count = sum(1 for t in traces if t.ok)
                if ok_count == 0:
                    outcomes.append(LevelOutcome(concurrency, tuple(traces), None, False,
                                                 note="omitted: all requests failed"))
                    continue
                level = aggregate(traces, concurrency, config.model_name)
                if ok_count < expected:
                    outcomes.append(LevelOutcome(concurrency, tuple(traces), level, False,
                                                 note=f"omitted: only {ok_count}/{expected} requests ok"))
                else:
                    outcomes.append(LevelOutcome(concurrency, tuple(traces), level, True))
        return outcomes

    outcomes = asyncio.run(go())
    sweep = Sweep(
        model_id=config.model_name,
        runs=tuple(o.aggregate.run for o in outcomes if o.in_sweep and o.aggregate is not None),
    )
    return SweepResult(sweep=sweep, levels=tuple(outcomes))


def peak_in_flight(traces) -> int:
    """Maximum number of overlapping [send_ts, end_ts) intervals in a trace list."""
    events = []
    for t in traces:
        events.append((t.send_ts, 1))
        events.append((t.end_ts, -1))
    events.sort(key=lambda e: (e[0], e[1]))  # ends before starts at the same instant
    peak = current = 0
    for _, step in events:
        current += step
        peak = max(peak, current)
    return peak


def write_trace_log(path: str | Path, levels) -> None:
    """Persist traces as line-delimited JSON, one trace per line."""
    with open(path, "w", encoding="utf-8") as handle:
        for outcome in levels:
            for trace in outcome.traces:
                record = {"concurrency": outcome.concurrency, **trace.as_dict()}
                handle.write(json.dumps(record) + "\n")
