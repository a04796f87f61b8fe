"""Signal namespace: descriptors, registry, automatables and the scene catalog.

Signal ids are hierarchical slash-separated paths like
``backend0/global/loudness`` or ``scene/particles.size``; the scheme mirrors
OSC addressing so transports can use ids verbatim.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import DuplicateId, MalformedPath, NotAnAutomatable, UnknownSignal

_SEGMENT_RE = re.compile(r"^[a-z0-9_.]+$")

SOURCE = "source"
DESTINATION = "destination"
CONTINUOUS = "continuous"
PULSE = "pulse"


def validate_path(path: str) -> str:
    """Check the path grammar; returns the path unchanged on success."""
    if not isinstance(path, str) or not path:
        raise MalformedPath(f"empty signal path: {path!r}")
    segments = path.split("/")
    for seg in segments:
        if not seg or not _SEGMENT_RE.match(seg):
            raise MalformedPath(f"bad segment {seg!r} in path {path!r}")
    return path


def clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


@dataclass(frozen=True)
class SignalDescriptor:
    id: str
    direction: str = SOURCE
    value_kind: str = CONTINUOUS
    range_min: float = 0.0
    range_max: float = 1.0
    unit: str = ""

    def __post_init__(self):
        validate_path(self.id)
        if self.direction not in (SOURCE, DESTINATION):
            raise ValueError(f"bad direction {self.direction!r}")
        if self.value_kind == PULSE:
            object.__setattr__(self, "range_min", 0.0)
            object.__setattr__(self, "range_max", 1.0)
        elif not self.range_min < self.range_max:
            raise ValueError(
                f"range_min must be < range_max for {self.id}: "
                f"[{self.range_min}, {self.range_max}]"
            )


@dataclass(frozen=True)
class Snapshot:
    """Immutable view of all signal values for a single frame."""

    frame_index: int
    timestamp: float
    values: dict
    revision: int


# Destination signals every session exposes, with idle defaults.
SCENE_DEFAULTS = {
    "scene/particles.size": 0.5,
    "scene/particles.emission_rate": 0.3,
    "scene/camera.orbit_speed": 0.1,
    "scene/camera.fov": 0.5,
    "scene/light.intensity": 0.4,
    "scene/light.hue": 0.6,
    "scene/stars.drift_speed": 0.1,
    "scene/fog.density": 0.2,
}


def scene_catalog() -> list[tuple[SignalDescriptor, float]]:
    return [
        (SignalDescriptor(sid, direction=DESTINATION, unit="normalized"), default)
        for sid, default in SCENE_DEFAULTS.items()
    ]


class SignalRegistry:
    """Single-writer store of the current value of every signal.

    Non-finite writes never escape: they are replaced by the signal's last
    finite value (or range_min if it never had one).
    """

    def __init__(self):
        self._descriptors: dict[str, SignalDescriptor] = {}
        self._values: dict[str, float] = {}
        self._automatables: set[str] = set()
        self._frame_indices: dict[str, int] = {}

    def register(self, descriptor: SignalDescriptor, initial: float | None = None) -> SignalDescriptor:
        if descriptor.id in self._descriptors:
            raise DuplicateId(descriptor.id)
        self._descriptors[descriptor.id] = descriptor
        if initial is None or not math.isfinite(initial):
            initial = descriptor.range_min
        self._values[descriptor.id] = clamp(initial, descriptor.range_min, descriptor.range_max)
        self._frame_indices[descriptor.id] = -1
        return descriptor

    def register_automatable(self, descriptor: SignalDescriptor, initial: float = 0.0) -> SignalDescriptor:
        if descriptor.direction != SOURCE:
            raise ValueError("automatables must be sources")
        self.register(descriptor, initial)
        self._automatables.add(descriptor.id)
        return descriptor

    def descriptor(self, signal_id: str) -> SignalDescriptor:
        try:
            return self._descriptors[signal_id]
        except KeyError:
            raise UnknownSignal(signal_id) from None

    def __contains__(self, signal_id: str) -> bool:
        return signal_id in self._descriptors

    def ids(self, direction: str | None = None) -> list[str]:
        if direction is None:
            return list(self._descriptors)
        return [i for i, d in self._descriptors.items() if d.direction == direction]

    def is_automatable(self, signal_id: str) -> bool:
        return signal_id in self._automatables

    def value(self, signal_id: str) -> float:
        try:
            return self._values[signal_id]
        except KeyError:
            raise UnknownSignal(signal_id) from None

    def set_value(self, signal_id: str, value: float, frame_index: int = -1) -> float:
        """Write a signal value, masking non-finite inputs with last-known-good."""
        desc = self.descriptor(signal_id)
        if not math.isfinite(value):
            return self._values[signal_id]
        value = clamp(float(value), desc.range_min, desc.range_max) \
            if desc.direction == DESTINATION or signal_id in self._automatables else float(value)
        self._values[signal_id] = value
        if frame_index >= 0:
            self._frame_indices[signal_id] = max(self._frame_indices[signal_id], frame_index)
        return value

    def set_automatable(self, signal_id: str, value: float) -> float:
        desc = self.descriptor(signal_id)
        if signal_id not in self._automatables:
            raise NotAnAutomatable(signal_id)
        if not math.isfinite(value):
            return self._values[signal_id]
        accepted = clamp(float(value), desc.range_min, desc.range_max)
        self._values[signal_id] = accepted
        return accepted

    def snapshot(self, frame_index: int, timestamp: float, revision: int = 0) -> Snapshot:
        return Snapshot(frame_index, timestamp, dict(self._values), revision)
