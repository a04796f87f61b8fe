"""Crossover filtering into up to three bands and per-band feature slots.

Filters are second-order Butterworth biquads from the audio-EQ cookbook
formulas (Q = 1/sqrt(2)), applied with persistent state so streaming
frame-by-frame matches one-pass filtering exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidCutoff, UnknownFeatureName

BUTTERWORTH_Q = 1.0 / math.sqrt(2.0)
SLOT_FEATURES = ("loudness", "pitch", "centroid", "onset", "dissonance")


@dataclass(frozen=True)
class BiquadCoeffs:
    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    @property
    def b(self) -> np.ndarray:
        return np.array([self.b0, self.b1, self.b2])

    @property
    def a(self) -> np.ndarray:
        return np.array([1.0, self.a1, self.a2])

    def pole_magnitudes(self) -> np.ndarray:
        return np.abs(np.roots([1.0, self.a1, self.a2]))

    def is_stable(self) -> bool:
        return bool(np.all(self.pole_magnitudes() < 1.0))

    def response_at(self, freq_hz: float, sample_rate: float) -> float:
        """|H(e^{j w})| evaluated from the coefficients."""
        z = np.exp(-1j * 2.0 * np.pi * freq_hz / sample_rate)
        num = self.b0 + self.b1 * z + self.b2 * z ** 2
        den = 1.0 + self.a1 * z + self.a2 * z ** 2
        return float(abs(num / den))


def _design(fc: float, fs: float, highpass: bool) -> BiquadCoeffs:
    if not 0.0 < fc < fs / 2.0:
        raise InvalidCutoff(f"cutoff {fc} Hz out of (0, {fs / 2}) at fs={fs}")
    w0 = 2.0 * math.pi * fc / fs
    cw = math.cos(w0)
    alpha = math.sin(w0) / (2.0 * BUTTERWORTH_Q)
    if highpass:
        b0 = (1.0 + cw) / 2.0
        b1 = -(1.0 + cw)
    else:
        b0 = (1.0 - cw) / 2.0
        b1 = 1.0 - cw
    b2 = b0
    a0 = 1.0 + alpha
    coeffs = BiquadCoeffs(b0 / a0, b1 / a0, b2 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0)
    assert coeffs.is_stable()
    return coeffs


def design_lowpass(fc: float, fs: float) -> BiquadCoeffs:
    return _design(fc, fs, highpass=False)


def design_highpass(fc: float, fs: float) -> BiquadCoeffs:
    return _design(fc, fs, highpass=True)


class BiquadFilter:
    """Streaming biquad; state persists across blocks."""

    def __init__(self, coeffs: BiquadCoeffs):
        self.coeffs = coeffs
        self._zi = np.zeros(2)

    def process(self, samples: np.ndarray) -> np.ndarray:
        out, self._zi = lfilter(self.coeffs.b, self.coeffs.a, samples, zi=self._zi)
        return out

    def reset(self):
        self._zi = np.zeros(2)


@dataclass(frozen=True)
class SubBandConfig:
    n_bands: int = 1
    crossover_lo: float = 200.0
    crossover_hi: float = 2000.0
    slots: dict = field(default_factory=dict)  # {"band1": ["loudness", ...]}

    def __post_init__(self):
        if self.n_bands not in (1, 2, 3):
            raise ValueError("n_bands must be 1..3")
        if self.n_bands >= 2 and self.crossover_lo < 20.0:
            raise ValueError("crossover_lo must be >= 20 Hz")
        if self.n_bands == 3 and not self.crossover_lo < self.crossover_hi:
            raise ValueError("crossover_lo must be < crossover_hi")
        for band, names in self.slots.items():
            for name in names:
                if name not in SLOT_FEATURES:
                    raise UnknownFeatureName(f"{band}: {name}")

    def validate_for_rate(self, sample_rate: float):
        limit = sample_rate / 2.0 * 0.95
        if self.n_bands >= 2 and self.crossover_lo > limit:
            raise InvalidCutoff(f"crossover_lo {self.crossover_lo} > {limit}")
        if self.n_bands == 3 and self.crossover_hi > limit:
            raise InvalidCutoff(f"crossover_hi {self.crossover_hi} > {limit}")

    def band_names(self) -> list[str]:
        return [f"band{i + 1}" for i in range(self.n_bands)]


class BandSplitter:
    """Splits frames into sub-band frames with persistent filter state."""

    def __init__(self, config: SubBandConfig, sample_rate: float):
        config.validate_for_rate(sample_rate)
        self.config = config
        self.sample_rate = sample_rate
        self._chains: list[list[BiquadFilter]] = []
        if config.n_bands == 1:
            self._chains = [[]]
        elif config.n_bands == 2:
            self._chains = [
                [BiquadFilter(design_lowpass(config.crossover_lo, sample_rate))],
                [BiquadFilter(design_highpass(config.crossover_lo, sample_rate))],
            ]
        else:
            self._chains = [
                [BiquadFilter(design_lowpass(config.crossover_lo, sample_rate))],
                [BiquadFilter(design_highpass(config.crossover_lo, sample_rate)),
                 BiquadFilter(design_lowpass(config.crossover_hi, sample_rate))],
                [BiquadFilter(design_highpass(config.crossover_hi, sample_rate))],
            ]

    def split(self, samples: np.ndarray) -> list[np.ndarray]:
        out = []
        for chain in self._chains:
            band = samples
            for filt in chain:
                band = filt.process(band)
            out.append(band)
        return out

    def reset(self):
        for chain in self._chains:
            for filt in chain:
                filt.reset()
