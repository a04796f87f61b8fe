"""Runtime-editable mapping table: sources -> expression -> destination."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import expressions
from .errors import DestinationBusy, UnknownMapping, UnknownSignal
from .signals import DESTINATION, SOURCE, SignalRegistry, clamp


@dataclass
class MappingSpec:
    id: int
    sources: list[str]
    destination: str
    expression_text: str
    ast: object
    enabled: bool = True
    smoothing_ms: float = 0.0
    _smoothed: float | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "sources": list(self.sources),
            "destination": self.destination,
            "expression": self.expression_text,
            "enabled": self.enabled,
            "smoothing_ms": self.smoothing_ms,
        }


class MappingTable:
    """All active mappings; revision increments on every edit.

    At most one enabled mapping may write a given destination; convergent
    behaviour is expressed inside one multi-source mapping (x0, x1, ...).
    """

    def __init__(self, registry: SignalRegistry):
        self._registry = registry
        self._specs: dict[int, MappingSpec] = {}
        self._next_id = 1
        self.revision = 0

    def specs(self) -> list[MappingSpec]:
        return [self._specs[k] for k in sorted(self._specs)]

    def get(self, mapping_id: int) -> MappingSpec:
        try:
            return self._specs[mapping_id]
        except KeyError:
            raise UnknownMapping(str(mapping_id)) from None

    def _check_destination_free(self, destination: str, ignore_id: int | None = None):
        for spec in self._specs.values():
            if spec.enabled and spec.destination == destination and spec.id != ignore_id:
                raise DestinationBusy(destination)

    def add(self, sources: list[str], destination: str, expression_text: str,
            smoothing_ms: float = 0.0, enabled: bool = True) -> int:
        if not sources:
            raise ValueError("at least one source required")
        for sid in sources:
            if sid not in self._registry or self._registry.descriptor(sid).direction != SOURCE:
                raise UnknownSignal(sid)
        if destination not in self._registry or \
                self._registry.descriptor(destination).direction != DESTINATION:
            raise UnknownSignal(destination)
        if enabled:
            self._check_destination_free(destination)
        ast = expressions.parse_expression(expression_text, n_sources=len(sources))
        spec = MappingSpec(self._next_id, list(sources), destination,
                           expression_text, ast, enabled, smoothing_ms)
        self._specs[spec.id] = spec
        self._next_id += 1
        self.revision += 1
        return spec.id

    def remove(self, mapping_id: int):
        self.get(mapping_id)
        del self._specs[mapping_id]
        self.revision += 1

    def set_enabled(self, mapping_id: int, enabled: bool):
        spec = self.get(mapping_id)
        if enabled and not spec.enabled:
            self._check_destination_free(spec.destination, ignore_id=mapping_id)
        spec.enabled = enabled
        self.revision += 1

    def set_expression(self, mapping_id: int, expression_text: str):
        spec = self.get(mapping_id)
        spec.ast = expressions.parse_expression(expression_text, n_sources=len(spec.sources))
        spec.expression_text = expression_text
        spec._smoothed = None
        self.revision += 1

    def evaluate_frame(self, values: dict, hop_seconds: float) -> dict[str, float]:
        """Evaluate every enabled mapping once; returns destination updates
        clamped to the destination's declared range.

        Disabled mappings produce no update, leaving destinations at their
        last value.
        """
        updates: dict[str, float] = {}
        for mapping_id in sorted(self._specs):
            spec = self._specs[mapping_id]
            if not spec.enabled:
                continue
            inputs = [values[sid] for sid in spec.sources]
            out = expressions.evaluate(spec.ast, inputs)
            if not math.isfinite(out):
                continue  # masked; registry keeps last finite value
            if spec.smoothing_ms > 0.0:
                tau = spec.smoothing_ms / 1000.0
                alpha = 1.0 - math.exp(-hop_seconds / tau)
                if spec._smoothed is None:
                    spec._smoothed = out
                else:
                    spec._smoothed += alpha * (out - spec._smoothed)
                out = spec._smoothed
            desc = self._registry.descriptor(spec.destination)
            updates[spec.destination] = clamp(out, desc.range_min, desc.range_max)
        return updates
