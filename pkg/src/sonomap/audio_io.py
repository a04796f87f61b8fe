"""WAV decoding, frame cutting and the processing clock."""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CorruptHeader, EmptyInput, UnsupportedFormat

VALID_FRAME_SIZES = (512, 1024, 2048, 4096)


@dataclass(frozen=True)
class StreamConfig:
    sample_rate: int = 44100
    frame_size: int = 2048
    hop_size: int = 512

    def __post_init__(self):
        if self.frame_size not in VALID_FRAME_SIZES:
            raise ValueError(f"frame_size must be one of {VALID_FRAME_SIZES}")
        if not 0 < self.hop_size <= self.frame_size:
            raise ValueError("hop_size must be in (0, frame_size]")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def frame_rate(self) -> float:
        return self.sample_rate / self.hop_size

    @property
    def hop_seconds(self) -> float:
        return self.hop_size / self.sample_rate


@dataclass(frozen=True)
class AudioFrame:
    samples: np.ndarray
    frame_index: int
    start_time: float


def decode_wav(data: bytes) -> tuple[int, np.ndarray]:
    """Decode a RIFF/WAVE blob to (sample_rate, mono float samples in [-1, 1]).

    Supports PCM16 (format 1) and IEEE float32 (format 3), 1-2 channels;
    stereo is downmixed by averaging.
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeader("not a RIFF/WAVE file")
    pos = 12
    fmt = None
    payload = None
    while pos + 8 <= len(data):
        chunk_id = data[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise CorruptHeader("fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            payload = body
        pos += 8 + chunk_size + (chunk_size & 1)
    if fmt is None or payload is None:
        raise CorruptHeader("missing fmt or data chunk")
    format_code, channels, sample_rate, _, _, bits = fmt
    if format_code not in (1, 3):
        raise UnsupportedFormat(f"format code {format_code}")
    if channels not in (1, 2):
        raise UnsupportedFormat(f"{channels} channels")
    if format_code == 1:
        if bits != 16:
            raise UnsupportedFormat(f"PCM with {bits} bits")
        samples = np.frombuffer(payload[:len(payload) // 2 * 2], dtype="<i2")
        samples = samples.astype(np.float64) / 32768.0
    else:
        if bits != 32:
            raise UnsupportedFormat(f"float with {bits} bits")
        samples = np.frombuffer(payload[:len(payload) // 4 * 4], dtype="<f4")
        samples = samples.astype(np.float64)
    if channels == 2:
        samples = samples[:len(samples) // 2 * 2].reshape(-1, 2).mean(axis=1)
    return sample_rate, np.clip(samples, -1.0, 1.0)


def encode_wav(sample_rate: int, samples: np.ndarray, float32: bool = False) -> bytes:
    """Inverse of decode_wav for test fixtures and bundled assets."""
    samples = np.asarray(samples, dtype=np.float64)
    if float32:
        payload = samples.astype("<f4").tobytes()
        fmt = struct.pack("<HHIIHH", 3, 1, sample_rate, sample_rate * 4, 4, 32)
    else:
        pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
        payload = pcm.tobytes()
        fmt = struct.pack("<HHIIHH", 1, 1, sample_rate, sample_rate * 2, 2, 16)
    chunks = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt \
        + b"data" + struct.pack("<I", len(payload)) + payload
    return b"RIFF" + struct.pack("<I", len(chunks)) + chunks


def frame_count(n_samples: int, config: StreamConfig) -> int:
    if n_samples <= 0:
        raise EmptyInput("no samples")
    if n_samples < config.frame_size:
        return 1
    return (n_samples - config.frame_size) // config.hop_size + 1


def frame_stream(samples: np.ndarray, config: StreamConfig) -> Iterator[AudioFrame]:
    """Cut samples into overlapping frames at offsets 0, hop, 2*hop, ...

    Input shorter than one frame yields a single zero-padded frame.
    """
    samples = np.asarray(samples, dtype=np.float64)
    n = frame_count(len(samples), config)
    for i in range(n):
        start = i * config.hop_size
        chunk = samples[start:start + config.frame_size]
        if len(chunk) < config.frame_size:
            chunk = np.concatenate([chunk, np.zeros(config.frame_size - len(chunk))])
        yield AudioFrame(chunk, i, start / config.sample_rate)


def run_clock(config: StreamConfig, n_ticks: int, mode: str = "headless") -> Iterator[int]:
    """Emit frame tick indices; realtime mode paces them at hop/fs seconds."""
    if mode == "headless":
        yield from range(n_ticks)
        return
    period = config.hop_seconds
    start = time.monotonic()
    for i in range(n_ticks):
        target = start + i * period
        while True:
            now = time.monotonic()
            remaining = target - now
            if remaining <= 0:
                break
            # sleep coarsely, then spin the last millisecond for low jitter
            if remaining > 0.0015:
                time.sleep(remaining - 0.001)
            else:
                pass
        yield i
