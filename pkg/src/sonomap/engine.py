"""The per-frame processing pipeline composing features, bands and mappings."""

from __future__ import annotations

import queue
from concurrent.futures import Future

import numpy as np

from . import features
from .audio_io import AudioFrame, StreamConfig, decode_wav, frame_stream
from .errors import SchemaError, SonomapError
from .mappings import MappingTable
from .session import SessionConfig
from .signals import (DESTINATION, PULSE, SOURCE, SignalDescriptor,
                      SignalRegistry, Snapshot, clamp, scene_catalog)
from .subbands import BandSplitter

GLOBAL_FEATURES = ("loudness", "pitch", "pitch_confidence", "centroid",
                   "onset", "odf", "dissonance")


def _feature_descriptor(signal_id: str, name: str, stream: StreamConfig) -> SignalDescriptor:
    nyquist = stream.sample_rate / 2.0
    if name == "loudness":
        return SignalDescriptor(signal_id, SOURCE, range_max=float(stream.frame_size) ** features.LOUDNESS_EXPONENT)
    if name == "pitch":
        return SignalDescriptor(signal_id, SOURCE, range_max=nyquist / 2.0, unit="Hz")
    if name == "centroid":
        return SignalDescriptor(signal_id, SOURCE, range_max=nyquist, unit="Hz")
    if name == "onset":
        return SignalDescriptor(signal_id, SOURCE, value_kind=PULSE)
    # pitch_confidence, odf, dissonance: normalized [0, 1]
    return SignalDescriptor(signal_id, SOURCE, unit="normalized")


class Engine:
    """Single-writer pipeline: drains queued commands at each frame boundary,
    extracts features, evaluates mappings and snapshots the registry."""

    def __init__(self, config: SessionConfig, sample_rate: int | None = None):
        if sample_rate is not None and sample_rate != config.stream.sample_rate:
            config = SessionConfig(
                stream=StreamConfig(sample_rate, config.stream.frame_size, config.stream.hop_size),
                subbands=config.subbands, automatables=config.automatables,
                mappings=config.mappings, transports=config.transports,
                device=config.device)
        self.config = config
        self.registry = SignalRegistry()
        self._commands: queue.Queue = queue.Queue()
        self._frame_index = -1

        stream = config.stream
        dev = config.device
        for name in GLOBAL_FEATURES:
            self.registry.register(_feature_descriptor(f"{dev}/global/{name}", name, stream))

        self._band_slots: list[tuple[str, list[str]]] = []
        try:
            self.splitter = BandSplitter(config.subbands, stream.sample_rate)
        except SonomapError as exc:
            raise SchemaError("/subbands", str(exc)) from None
        self._band_onsets = {}
        for band in config.subbands.band_names():
            slots = list(config.subbands.slots.get(band, []))
            self._band_slots.append((band, slots))
            for slot in slots:
                self.registry.register(_feature_descriptor(f"{dev}/{band}/{slot}", slot, stream))
                if slot == "pitch":
                    self.registry.register(_feature_descriptor(
                        f"{dev}/{band}/pitch_confidence", "pitch_confidence", stream))
                if slot == "onset":
                    self.registry.register(_feature_descriptor(f"{dev}/{band}/odf", "odf", stream))
                    self._band_onsets[band] = features.OnsetDetector(stream.frame_rate)
        for i, a in enumerate(config.automatables):
            try:
                self.registry.register_automatable(
                    SignalDescriptor(a.id, SOURCE, range_min=a.range_min, range_max=a.range_max),
                    initial=a.value)
            except (SonomapError, ValueError) as exc:
                raise SchemaError(f"/automatables/{i}", str(exc)) from None

        for desc, default in scene_catalog():
            self.registry.register(desc, initial=default)

        self._onset = features.OnsetDetector(stream.frame_rate)
        self.table = MappingTable(self.registry)
        for i, m in enumerate(config.mappings):
            try:
                self.table.add(list(m.sources), m.destination, m.expression,
                               smoothing_ms=m.smoothing_ms, enabled=m.enabled)
            except SonomapError as exc:
                raise SchemaError(f"/mappings/{i}", str(exc)) from None

    # -- command queue ----------------------------------------------------

    def submit(self, fn) -> Future:
        """Enqueue an edit; it runs atomically at the next frame boundary."""
        fut: Future = Future()
        self._commands.put((fn, fut))
        return fut

    def drain_commands(self):
        while True:
            try:
                fn, fut = self._commands.get_nowait()
            except queue.Empty:
                return
            try:
                fut.set_result(fn())
            except BaseException as exc:  # propagate to the caller, keep running
                fut.set_exception(exc)

    # -- catalog ----------------------------------------------------------

    def source_ids(self) -> list[str]:
        return self.registry.ids(SOURCE)

    def destination_ids(self) -> list[str]:
        return self.registry.ids(DESTINATION)

    def catalog(self) -> list[dict]:
        out = []
        for sid in self.registry.ids():
            d = self.registry.descriptor(sid)
            out.append({
                "id": d.id, "direction": d.direction, "value_kind": d.value_kind,
                "range_min": d.range_min, "range_max": d.range_max, "unit": d.unit,
                "automatable": self.registry.is_automatable(sid),
            })
        return out

    # -- processing -------------------------------------------------------

    def _publish(self, signal_id: str, value: float, frame_index: int):
        desc = self.registry.descriptor(signal_id)
        if np.isfinite(value):
            value = clamp(float(value), desc.range_min, desc.range_max)
        self.registry.set_value(signal_id, value, frame_index)

    def _compute_slot(self, band: str, slot: str, samples: np.ndarray, frame_index: int):
        dev = self.config.device
        fs = self.config.stream.sample_rate
        prefix = f"{dev}/{band}"
        if slot == "loudness":
            self._publish(f"{prefix}/loudness", features.loudness(samples), frame_index)
        elif slot == "pitch":
            pitch, conf = features.yin_pitch(samples, fs)
            self._publish(f"{prefix}/pitch", pitch, frame_index)
            self._publish(f"{prefix}/pitch_confidence", conf, frame_index)
        elif slot == "centroid":
            spec = features.window_fft(samples, fs)
            self._publish(f"{prefix}/centroid", features.spectral_centroid(spec), frame_index)
        elif slot == "onset":
            spec = features.window_fft(samples, fs)
            pulse, odf = self._band_onsets[band].process(features.hfc(spec))
            self._publish(f"{prefix}/onset", float(pulse), frame_index)
            self._publish(f"{prefix}/odf", odf, frame_index)
        elif slot == "dissonance":
            spec = features.window_fft(samples, fs)
            peaks = features.pick_peaks(spec)
            self._publish(f"{prefix}/dissonance", features.sensory_dissonance(peaks), frame_index)

    def process_frame(self, frame: AudioFrame) -> Snapshot:
        self.drain_commands()
        i = frame.frame_index
        self._frame_index = i
        dev = self.config.device
        fs = self.config.stream.sample_rate

        spec = features.window_fft(frame.samples, fs)
        self._publish(f"{dev}/global/loudness", features.loudness(frame.samples), i)
        pitch, conf = features.yin_pitch(frame.samples, fs)
        self._publish(f"{dev}/global/pitch", pitch, i)
        self._publish(f"{dev}/global/pitch_confidence", conf, i)
        self._publish(f"{dev}/global/centroid", features.spectral_centroid(spec), i)
        pulse, odf = self._onset.process(features.hfc(spec))
        self._publish(f"{dev}/global/onset", float(pulse), i)
        self._publish(f"{dev}/global/odf", odf, i)
        peaks = features.pick_peaks(spec)
        self._publish(f"{dev}/global/dissonance", features.sensory_dissonance(peaks), i)

        bands = self.splitter.split(frame.samples)
        for (band, slots), band_samples in zip(self._band_slots, bands):
            for slot in slots:
                self._compute_slot(band, slot, band_samples, i)

        values = {sid: self.registry.value(sid) for sid in self.registry.ids()}
        updates = self.table.evaluate_frame(values, self.config.stream.hop_seconds)
        for sid, value in updates.items():
            self.registry.set_value(sid, value, i)

        return self.registry.snapshot(i, frame.start_time, revision=self.table.revision)


def validate_session(config: SessionConfig):
    """Full semantic validation: builds the signal namespace and mapping
    table exactly as a run would; raises SchemaError on any problem."""
    Engine(config)


def run_headless(config: SessionConfig, wav_path, csv_path) -> int:
    """Process a WAV file as fast as possible, writing one CSV row per frame.

    Uses the file's sample rate (no resampling). Deterministic: output is a
    pure function of the input file and config.
    """
    with open(wav_path, "rb") as fh:
        sample_rate, samples = decode_wav(fh.read())
    engine = Engine(config, sample_rate=sample_rate)
    columns = engine.source_ids() + engine.destination_ids()
    with open(csv_path, "w", encoding="utf-8", newline="\n") as out:
        out.write(",".join(["frame_index", "time_s"] + columns) + "\n")
        for frame in frame_stream(samples, engine.config.stream):
            snap = engine.process_frame(frame)
            row = [str(snap.frame_index), "%.6g" % snap.timestamp]
            row += ["%.6g" % snap.values[c] for c in columns]
            out.write(",".join(row) + "\n")
    return 0
