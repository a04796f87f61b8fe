"""Session configuration: versioned JSON load/save with schema validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .audio_io import StreamConfig, VALID_FRAME_SIZES
from .errors import SchemaError, UnknownFeatureName
from .subbands import SLOT_FEATURES, SubBandConfig

SESSION_VERSION = 1

DEFAULT_AUTOMATABLES = [f"auto/fader{i}" for i in range(1, 5)]


@dataclass(frozen=True)
class AutomatableConfig:
    id: str
    range_min: float = 0.0
    range_max: float = 1.0
    value: float = 0.0


@dataclass(frozen=True)
class MappingConfig:
    sources: tuple
    destination: str
    expression: str
    smoothing_ms: float = 0.0
    enabled: bool = True


@dataclass(frozen=True)
class TransportConfig:
    osc_host: str = "127.0.0.1"
    osc_port: int = 9000
    ui_port: int = 8765


@dataclass(frozen=True)
class SessionConfig:
    stream: StreamConfig = field(default_factory=StreamConfig)
    subbands: SubBandConfig = field(default_factory=SubBandConfig)
    automatables: tuple = tuple(AutomatableConfig(i) for i in DEFAULT_AUTOMATABLES)
    mappings: tuple = ()
    transports: TransportConfig = field(default_factory=TransportConfig)
    device: str = "backend0"


def _require(obj, key, kind, pointer):
    if key not in obj:
        raise SchemaError(f"{pointer}/{key}", "missing required field")
    value = obj[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise SchemaError(f"{pointer}/{key}", f"expected {kind.__name__}")
    return value


def _optional(obj, key, kind, default, pointer):
    if key not in obj:
        return default
    return _require(obj, key, kind, pointer)


def session_from_dict(doc: dict, pointer: str = "") -> SessionConfig:
    if not isinstance(doc, dict):
        raise SchemaError(pointer or "/", "expected object")
    version = _require(doc, "version", int, pointer)
    if version != SESSION_VERSION:
        raise SchemaError(f"{pointer}/version", f"unsupported version {version}")

    stream_doc = _optional(doc, "stream", dict, {}, pointer)
    p = f"{pointer}/stream"
    try:
        stream = StreamConfig(
            sample_rate=_optional(stream_doc, "sample_rate", int, 44100, p),
            frame_size=_optional(stream_doc, "frame_size", int, 2048, p),
            hop_size=_optional(stream_doc, "hop_size", int, 512, p),
        )
    except ValueError as exc:
        raise SchemaError(p, str(exc)) from None

    sub_doc = _optional(doc, "subbands", dict, {}, pointer)
    p = f"{pointer}/subbands"
    slots_doc = _optional(sub_doc, "slots", dict, {}, p)
    slots = {}
    for band, names in slots_doc.items():
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaError(f"{p}/slots/{band}", "expected list of strings")
        slots[band] = list(names)
    try:
        subbands = SubBandConfig(
            n_bands=_optional(sub_doc, "n_bands", int, 1, p),
            crossover_lo=_optional(sub_doc, "crossover_lo", float, 200.0, p),
            crossover_hi=_optional(sub_doc, "crossover_hi", float, 2000.0, p),
            slots=slots,
        )
    except UnknownFeatureName as exc:
        raise SchemaError(f"{p}/slots", f"unknown feature {exc} (valid: {', '.join(SLOT_FEATURES)})") from None
    except ValueError as exc:
        raise SchemaError(p, str(exc)) from None

    autos = []
    autos_doc = _optional(doc, "automatables", list, None, pointer)
    if autos_doc is None:
        autos = [AutomatableConfig(i) for i in DEFAULT_AUTOMATABLES]
    else:
        for i, a in enumerate(autos_doc):
            p = f"{pointer}/automatables/{i}"
            if not isinstance(a, dict):
                raise SchemaError(p, "expected object")
            autos.append(AutomatableConfig(
                id=_require(a, "id", str, p),
                range_min=_optional(a, "range_min", float, 0.0, p),
                range_max=_optional(a, "range_max", float, 1.0, p),
                value=_optional(a, "value", float, 0.0, p),
            ))

    maps = []
    maps_doc = _optional(doc, "mappings", list, [], pointer)
    for i, m in enumerate(maps_doc):
        p = f"{pointer}/mappings/{i}"
        if not isinstance(m, dict):
            raise SchemaError(p, "expected object")
        sources = _require(m, "sources", list, p)
        if not sources or not all(isinstance(s, str) for s in sources):
            raise SchemaError(f"{p}/sources", "expected nonempty list of signal ids")
        maps.append(MappingConfig(
            sources=tuple(sources),
            destination=_require(m, "destination", str, p),
            expression=_require(m, "expression", str, p),
            smoothing_ms=_optional(m, "smoothing_ms", float, 0.0, p),
            enabled=_optional(m, "enabled", bool, True, p),
        ))

    trans_doc = _optional(doc, "transports", dict, {}, pointer)
    p = f"{pointer}/transports"
    transports = TransportConfig(
        osc_host=_optional(trans_doc, "osc_host", str, "127.0.0.1", p),
        osc_port=_optional(trans_doc, "osc_port", int, 9000, p),
        ui_port=_optional(trans_doc, "ui_port", int, 8765, p),
    )

    device = _optional(doc, "device", str, "backend0", pointer)
    return SessionConfig(stream=stream, subbands=subbands, automatables=tuple(autos),
                         mappings=tuple(maps), transports=transports, device=device)


def session_to_dict(config: SessionConfig) -> dict:
    return {
        "version": SESSION_VERSION,
        "device": config.device,
        "stream": {
            "sample_rate": config.stream.sample_rate,
            "frame_size": config.stream.frame_size,
            "hop_size": config.stream.hop_size,
        },
        "subbands": {
            "n_bands": config.subbands.n_bands,
            "crossover_lo": config.subbands.crossover_lo,
            "crossover_hi": config.subbands.crossover_hi,
            "slots": {k: list(v) for k, v in config.subbands.slots.items()},
        },
        "automatables": [
            {"id": a.id, "range_min": a.range_min, "range_max": a.range_max, "value": a.value}
            for a in config.automatables
        ],
        "mappings": [
            {"sources": list(m.sources), "destination": m.destination,
             "expression": m.expression, "smoothing_ms": m.smoothing_ms,
             "enabled": m.enabled}
            for m in config.mappings
        ],
        "transports": {
            "osc_host": config.transports.osc_host,
            "osc_port": config.transports.osc_port,
            "ui_port": config.transports.ui_port,
        },
    }


def load_session(path) -> SessionConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("/", f"invalid JSON: {exc}") from None
    config = session_from_dict(doc)
    # full validation (signals resolvable, expressions parse) needs the
    # engine's registry; done in engine.validate_session
    from .engine import validate_session
    validate_session(config)
    return config


def save_session(config: SessionConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(session_to_dict(config), fh, indent=2)
        fh.write("\n")
