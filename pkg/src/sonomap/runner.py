"""Live runner: drives the engine on its own thread with optional pacing,
OSC publishing and a shared latest-snapshot slot for transports."""

from __future__ import annotations

import threading
from concurrent.futures import Future

import numpy as np

from .audio_io import AudioFrame, decode_wav, frame_stream, run_clock
from .engine import Engine
from .osc import OscPublisher
from .session import SessionConfig


class LiveRunner:
    """Owns the engine thread; all edits go through submit() and are applied
    between frames. Consumers read .latest (immutable snapshot, latest-wins)."""

    def __init__(self, config: SessionConfig, samples: np.ndarray | None = None,
                 paced: bool = True, loop: bool = False, osc: bool = True,
                 max_frames: int | None = None):
        self.engine = Engine(config)
        self.config = self.engine.config
        self._samples = samples
        self._paced = paced
        self._loop = loop
        self._max_frames = max_frames
        self._latest = None
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self.publisher = OscPublisher(
            config.transports.osc_host, config.transports.osc_port,
            self.engine.destination_ids()) if osc else None
        self.frames_processed = 0

    @classmethod
    def from_wav(cls, config: SessionConfig, wav_path, **kwargs) -> "LiveRunner":
        with open(wav_path, "rb") as fh:
            sample_rate, samples = decode_wav(fh.read())
        engine_config = Engine(config, sample_rate=sample_rate).config
        return cls(engine_config, samples=samples, **kwargs)

    @property
    def latest(self):
        return self._latest

    def submit(self, fn) -> Future:
        return self.engine.submit(fn)

    def _frame_samples(self, index: int) -> np.ndarray:
        stream = self.config.stream
        if self._samples is None or len(self._samples) == 0:
            return np.zeros(stream.frame_size)
        n = len(self._samples)
        start = index * stream.hop_size
        if self._loop:
            start %= max(1, n)
        chunk = self._samples[start:start + stream.frame_size]
        if len(chunk) < stream.frame_size:
            pad = np.zeros(stream.frame_size - len(chunk))
            chunk = np.concatenate([chunk, pad])
        return chunk

    def _run(self):
        stream = self.config.stream
        mode = "realtime" if self._paced else "headless"
        n_ticks = self._max_frames if self._max_frames is not None else 1 << 62
        for i in run_clock(stream, n_ticks, mode=mode):
            if self._stop.is_set():
                break
            frame = AudioFrame(self._frame_samples(i), i, i * stream.hop_seconds)
            snap = self.engine.process_frame(frame)
            self._latest = snap
            self.frames_processed = i + 1
            if self.publisher is not None:
                self.publisher.publish(snap)
        # drain any remaining queued edits so callers never hang
        self.engine.drain_commands()

    def start(self):
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def join(self, timeout: float | None = None):
        if self._thread is not None:
            self._thread.join(timeout)

    def stop(self, timeout: float = 2.0):
        self._stop.set()
        self.join(timeout)
        if self.publisher is not None:
            self.publisher.close()
