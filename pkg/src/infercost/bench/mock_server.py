"""Deterministic OpenAI-compatible chat-completions endpoint.

Streams scripted responses with fixed first-token delay and inter-token
gaps so runner measurements can be checked against known timings. Token
accounting is exact: prompt tokens are whitespace-split words of the
message contents, completion tokens follow the configured count (capped
by the request's max_tokens), and the final chunk carries a usage object.
"""

from __future__ import annotations

import asyncio
import json
import threading
from dataclasses import dataclass

from aiohttp import web


@dataclass(frozen=True)
class MockTiming:
    first_token_delay_s: float = 0.05
    inter_token_gap_s: float = 0.01
    output_tokens: int = 10
    send_usage: bool = True  # off: clients must count streamed chunks themselves


def _count_prompt_tokens(messages) -> int:
    return sum(len(str(m.get("content", "")).split()) for m in messages)


def _chunk(model: str, delta: dict, finish_reason=None, usage=None) -> bytes:
    body = {
        "id": "chatcmpl-mock",
        "object": "chat.completion.chunk",
        "created": 0,
        "model": model,
        "choices": [{"index": 0, "delta": delta, "finish_reason": finish_reason}],
    }
    if usage is not None:
        body["usage"] = usage
    return b"data: " + json.dumps(body).encode() + b"\n\n"


def create_app(timing: MockTiming = MockTiming(), api_key: str | None = None,
               fail_with_status: int | None = None) -> web.Application:
    async def chat_completions(request: web.Request) -> web.StreamResponse:
        if api_key is not None:
            header = request.headers.get("Authorization", "")
            if header != f"Bearer {api_key}":
                return web.json_response({"error": {"message": "invalid api key"}}, status=401)
        if fail_with_status is not None:
            return web.json_response({"error": {"message": "scripted failure"}}, status=fail_with_status)
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return web.json_response({"error": {"message": "invalid JSON body"}}, status=400)
        messages = body.get("messages") or []
        if not messages:
            return web.json_response({"error": {"message": "messages must be non-empty"}}, status=400)
        model = str(body.get("model", "mock"))
        max_tokens = body.get("max_tokens")
        n_tokens = timing.output_tokens if max_tokens is None else min(int(max_tokens), timing.output_tokens)
        prompt_tokens = _count_prompt_tokens(messages)
        usage = {
            "prompt_tokens": prompt_tokens,
            "completion_tokens": n_tokens,
            "total_tokens": prompt_tokens + n_tokens,
        }

        if not body.get("stream"):
            await asyncio.sleep(timing.first_token_delay_s + max(0, n_tokens - 1) * timing.inter_token_gap_s)
            return web.json_response({
                "id": "chatcmpl-mock",
                "object": "chat.completion",
                "created": 0,
                "model": model,
                "choices": [{
                    "index": 0,
                    "message": {"role": "assistant", "content": "tok " * n_tokens},
                    "finish_reason": "stop",
                }],
                "usage": usage,
            })

        response = web.StreamResponse(headers={
            "Content-Type": "text/event-stream",
            "Cache-Control": "no-cache",
        })
        await response.prepare(request)
        await response.write(_chunk(model, {"role": "assistant"}))
        await asyncio.sleep(timing.first_token_delay_s)
        for i in range(n_tokens):
            if i > 0:
                await asyncio.sleep(timing.inter_token_gap_s)
            await response.write(_chunk(model, {"content": f"tok{i} "}))
        await response.write(_chunk(model, {}, finish_reason="stop",
                                    usage=usage if timing.send_usage else None))
        await response.write(b"data: [DONE]\n\n")
        await response.write_eof()
        return response

    app = web.Application()
    app.router.add_post("/v1/chat/completions", chat_completions)
    return app


class MockServer:
    """Runs the mock endpoint on a background thread; usable as a context manager.

    Binds 127.0.0.1 on an ephemeral port by default so tests can run in
    parallel without port coordination.
    """

    def __init__(self, timing: MockTiming = MockTiming(), api_key: str | None = None,
                 fail_with_status: int | None = None, port: int = 0):
        self._timing = timing
        self._api_key = api_key
        self._fail_with_status = fail_with_status
        self._requested_port = port
        self._loop: asyncio.AbstractEventLoop | None = None
        self._thread: threading.Thread | None = None
        self._started = threading.Event()
        self.port: int | None = None

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "MockServer":
        self._loop = asyncio.new_event_loop()

        async def serve() -> web.AppRunner:
            runner = web.AppRunner(create_app(self._timing, self._api_key, self._fail_with_status))
            await runner.setup()
            site = web.TCPSite(runner, "127.0.0.1", self._requested_port)
            await site.start()
            self.port = site._server.sockets[0].getsockname()[1]
            return runner

        def run() -> None:
            asyncio.set_event_loop(self._loop)
            self._runner = self._loop.run_until_complete(serve())
            self._started.set()
            self._loop.run_forever()

        self._thread = threading.Thread(target=run, name="mock-endpoint", daemon=True)
        self._thread.start()
        self._started.wait(timeout=10)
        if self.port is None:
            raise RuntimeError("mock server failed to start")
        return self

    def stop(self) -> None:
        if self._loop is None:
            return
        async def shutdown():
            await self._runner.cleanup()
        asyncio.run_coroutine_threadsafe(shutdown(), self._loop).result(timeout=10)
        self._loop.call_soon_threadsafe(self._loop.stop)
        self._thread.join(timeout=10)
        self._loop.close()
        self._loop = None

    def __enter__(self) -> "MockServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()


def main(listen: str = "127.0.0.1:8080", timing: MockTiming = MockTiming(),
         api_key: str | None = None) -> None:
    """Run the mock endpoint in the foreground (used by the CLI)."""
    host, _, port = listen.rpartition(":")
    web.run_app(create_app(timing, api_key), host=host or "127.0.0.1", port=int(port), print=None)
