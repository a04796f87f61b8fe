"""FastAPI service: REST catalog/status plus the JSON-over-WebSocket UI
protocol (announce, throttled values, mapping edit commands)."""

from __future__ import annotations

import asyncio
from typing import Any, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, ValidationError

from . import __version__
from .errors import SonomapError
from .runner import LiveRunner
from .session import session_to_dict

UI_THROTTLE_HZ = 30.0
PROTOCOL_VERSION = 1
COMMAND_TIMEOUT_S = 5.0


class Envelope(BaseModel):
    kind: str
    seq: Optional[int] = None
    payload: dict[str, Any] = {}


class AddMapPayload(BaseModel):
    sources: list[str]
    destination: str
    expression: str
    smoothing_ms: float = 0.0


class RemoveMapPayload(BaseModel):
    id: int


class SetExprPayload(BaseModel):
    id: int
    expression: str


class SetAutoPayload(BaseModel):
    id: str
    value: float


def _announce(runner: LiveRunner) -> dict:
    return {
        "kind": "announce",
        "payload": {
            "protocol_version": PROTOCOL_VERSION,
            "engine_version": __version__,
            "signals": runner.engine.catalog(),
            "mappings": [s.to_dict() for s in runner.engine.table.specs()],
            "revision": runner.engine.table.revision,
        },
    }


def _apply_command(runner: LiveRunner, env: Envelope) -> dict:
    """Validate and enqueue one client command; returns the ack payload."""
    engine = runner.engine
    if env.kind == "add_map":
        p = AddMapPayload(**env.payload)
        fut = runner.submit(lambda: engine.table.add(
            p.sources, p.destination, p.expression, smoothing_ms=p.smoothing_ms))
        mapping_id = fut.result(timeout=COMMAND_TIMEOUT_S)
        return {"id": mapping_id, "revision": engine.table.revision}
    if env.kind == "remove_map":
        p = RemoveMapPayload(**env.payload)
        runner.submit(lambda: engine.table.remove(p.id)).result(timeout=COMMAND_TIMEOUT_S)
        return {"revision": engine.table.revision}
    if env.kind == "set_expr":
        p = SetExprPayload(**env.payload)
        runner.submit(lambda: engine.table.set_expression(p.id, p.expression)) \
            .result(timeout=COMMAND_TIMEOUT_S)
        return {"revision": engine.table.revision}
    if env.kind == "set_auto":
        p = SetAutoPayload(**env.payload)
        accepted = runner.submit(lambda: engine.registry.set_automatable(p.id, p.value)) \
            .result(timeout=COMMAND_TIMEOUT_S)
        return {"id": p.id, "value": accepted, "revision": engine.table.revision}
    raise SonomapError(f"unknown command kind {env.kind!r}")


def create_app(runner: LiveRunner) -> FastAPI:
    app = FastAPI(title="sonomap", version=__version__)
    app.state.runner = runner

    @app.get("/catalog")
    def catalog():
        return {"signals": runner.engine.catalog()}

    @app.get("/session")
    def session():
        return session_to_dict(runner.config)

    @app.get("/status")
    def status():
        snap = runner.latest
        return {
            "frames_processed": runner.frames_processed,
            "frame_index": snap.frame_index if snap else -1,
            "revision": runner.engine.table.revision,
        }

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        await ws.send_json(_announce(runner))
        send_lock = asyncio.Lock()
        pusher = asyncio.ensure_future(_push_values(runner, ws, send_lock))
        try:
            while True:
                raw = await ws.receive_json()
                response = await _handle(runner, raw)
                async with send_lock:
                    await ws.send_json(response)
        except WebSocketDisconnect:
            pass
        finally:
            pusher.cancel()

    return app


async def _handle(runner: LiveRunner, raw: dict) -> dict:
    seq = raw.get("seq") if isinstance(raw, dict) else None
    try:
        env = Envelope(**raw)
        payload = await asyncio.get_event_loop().run_in_executor(
            None, _apply_command, runner, env)
        return {"kind": "ack", "seq": env.seq, "payload": payload}
    except (SonomapError, ValidationError, TypeError) as exc:
        return {"kind": "error", "seq": seq, "payload": {"message": str(exc)}}


async def _push_values(runner: LiveRunner, ws: WebSocket, send_lock: asyncio.Lock):
    period = 1.0 / UI_THROTTLE_HZ
    last_frame = -1
    while True:
        await asyncio.sleep(period)
        snap = runner.latest
        if snap is None or snap.frame_index == last_frame:
            continue
        last_frame = snap.frame_index
        async with send_lock:
            await ws.send_json({
                "kind": "values",
                "payload": {
                    "frame_index": snap.frame_index,
                    "timestamp": snap.timestamp,
                    "revision": snap.revision,
                    "values": snap.values,
                },
            })
