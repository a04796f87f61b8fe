"""Per-frame audio feature extractors.

All extractors are pure functions of the frame except OnsetDetector, which
owns the sliding detection-function history.
"""

from __future__ import annotations

import math
import statistics
from collections import deque
from dataclasses import dataclass

import numpy as np

LOUDNESS_EXPONENT = 0.67
YIN_THRESHOLD = 0.15


@dataclass(frozen=True)
class Spectrum:
    magnitudes: np.ndarray
    bin_hz: float


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float
    amplitude: float


_window_cache: dict[int, np.ndarray] = {}


def _hann(n: int) -> np.ndarray:
    w = _window_cache.get(n)
    if w is None:
        w = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
        _window_cache[n] = w
    return w


def window_fft(samples: np.ndarray, sample_rate: float) -> Spectrum:
    """Hann-windowed magnitude spectrum; length N/2 + 1 bins."""
    n = len(samples)
    mags = np.abs(np.fft.rfft(samples * _hann(n)))
    return Spectrum(mags, sample_rate / n)


def loudness(samples: np.ndarray) -> float:
    """Stevens power-law estimate of perceived intensity: (sum x^2)^0.67."""
    energy = float(np.dot(samples, samples))
    return energy ** LOUDNESS_EXPONENT if energy > 0.0 else 0.0


def _difference_function(x: np.ndarray, tau_max: int) -> np.ndarray:
    """d(tau) = sum_j (x_j - x_{j+tau})^2 for tau in [0, tau_max), via FFT."""
    n = len(x)
    cumsq = np.concatenate(([0.0], np.cumsum(x * x)))
    size = n + tau_max
    fft_size = 1 << (size - 1).bit_length()
    fc = np.fft.rfft(x, fft_size)
    acf = np.fft.irfft(fc * fc.conjugate())[:tau_max]
    return cumsq[n:n - tau_max:-1] + cumsq[n] - cumsq[:tau_max] - 2.0 * acf


def _cmndf(d: np.ndarray) -> np.ndarray:
    out = np.ones_like(d)
    running = np.cumsum(d[1:])
    with np.errstate(divide="ignore", invalid="ignore"):
        out[1:] = d[1:] * np.arange(1, len(d)) / running
    out[~np.isfinite(out)] = 1.0
    return out


def yin_pitch(samples: np.ndarray, sample_rate: float, fmin: float = 60.0,
              fmax: float = 1600.0, threshold: float = YIN_THRESHOLD) -> tuple[float, float]:
    """YIN fundamental-frequency estimate.

    Returns (pitch_hz, confidence); (0, 0) when no lag's cumulative mean
    normalized difference drops below the absolute threshold (unvoiced).
    """
    n = len(samples)
    tau_min = max(2, int(sample_rate / fmax))
    tau_max = min(n - 1, int(sample_rate / fmin) + 1)
    if tau_max <= tau_min:
        return 0.0, 0.0
    d = _difference_function(np.asarray(samples, dtype=np.float64), tau_max + 1)
    c = _cmndf(d)
    tau = tau_min
    found = -1
    while tau <= tau_max:
        if c[tau] < threshold:
            # descend to the local minimum of this dip
            while tau + 1 <= tau_max and c[tau + 1] < c[tau]:
                tau += 1
            found = tau
            break
        tau += 1
    if found < 0:
        return 0.0, 0.0
    # parabolic interpolation of the minimum
    if 0 < found < tau_max:
        a, b, g = c[found - 1], c[found], c[found + 1]
        denom = a - 2.0 * b + g
        shift = 0.5 * (a - g) / denom if denom != 0.0 else 0.0
        cmin = b - 0.25 * (a - g) * shift
    else:
        shift, cmin = 0.0, c[found]
    period = found + shift
    confidence = min(1.0, max(0.0, 1.0 - float(cmin)))
    return float(sample_rate / period), confidence


def spectral_centroid(spectrum: Spectrum) -> float:
    """Amplitude-weighted mean frequency; 0 for an empty spectrum."""
    total = float(np.sum(spectrum.magnitudes))
    if total <= 0.0:
        return 0.0
    freqs = np.arange(len(spectrum.magnitudes)) * spectrum.bin_hz
    return float(np.dot(freqs, spectrum.magnitudes) / total)


def hfc(spectrum: Spectrum) -> float:
    """High-frequency content: sum_k k * |X_k|^2."""
    m = spectrum.magnitudes
    return float(np.dot(np.arange(len(m)), m * m))


def pick_peaks(spectrum: Spectrum, max_peaks: int = 20,
               threshold: float = 0.005) -> list[SpectralPeak]:
    """Local spectral maxima above threshold*max, parabolically interpolated.

    Returns up to max_peaks peaks sorted by frequency.
    """
    m = spectrum.magnitudes
    if len(m) < 3:
        return []
    peak_floor = threshold * float(np.max(m))
    if peak_floor <= 0.0:
        return []
    interior = m[1:-1]
    idx = np.nonzero((interior > m[:-2]) & (interior >= m[2:]) & (interior > peak_floor))[0] + 1
    if idx.size == 0:
        return []
    a, b, g = m[idx - 1], m[idx], m[idx + 1]
    denom = a - 2.0 * b + g
    shift = np.where(denom != 0.0, 0.5 * (a - g) / np.where(denom != 0.0, denom, 1.0), 0.0)
    freq = (idx + shift) * spectrum.bin_hz
    amp = b - 0.25 * (a - g) * shift
    keep = (freq > 0.0) & (amp > 0.0)
    peaks = [SpectralPeak(float(f), float(v)) for f, v in zip(freq[keep], amp[keep])]
    peaks.sort(key=lambda p: p.amplitude, reverse=True)
    peaks = peaks[:max_peaks]
    peaks.sort(key=lambda p: p.frequency)
    return peaks


# Plomp-Levelt roughness curve, Sethares parameterization.
_DISS_B1 = 3.5
_DISS_B2 = 5.75
# analytic maximum of e^(-b1*x) - e^(-b2*x) over x >= 0
_DISS_X_MAX = math.log(_DISS_B2 / _DISS_B1) / (_DISS_B2 - _DISS_B1)
_DISS_MAX = math.exp(-_DISS_B1 * _DISS_X_MAX) - math.exp(-_DISS_B2 * _DISS_X_MAX)


def dissonance_pair(f1: float, f2: float) -> float:
    """Normalized roughness of two unit-amplitude partials, in [0, 1]."""
    f_low = min(f1, f2)
    s = 0.24 / (0.021 * f_low + 19.0)
    x = s * abs(f2 - f1)
    return (math.exp(-_DISS_B1 * x) - math.exp(-_DISS_B2 * x)) / _DISS_MAX


def sensory_dissonance(peaks: list[SpectralPeak]) -> float:
    """Total pairwise roughness, amplitude-weighted and normalized to [0, 1]."""
    if len(peaks) < 2:
        return 0.0
    f = np.array([p.frequency for p in peaks])
    a = np.array([p.amplitude for p in peaks])
    i, j = np.triu_indices(len(f), k=1)
    s = 0.24 / (0.021 * np.minimum(f[i], f[j]) + 19.0)
    x = s * np.abs(f[j] - f[i])
    d = (np.exp(-_DISS_B1 * x) - np.exp(-_DISS_B2 * x)) / _DISS_MAX
    w = a[i] * a[j]
    weight = float(w.sum())
    return float(np.dot(w, d) / weight) if weight > 0.0 else 0.0


class OnsetDetector:
    """HFC-difference onset detector with adaptive median threshold.

    The detection function is max(0, HFC(n) - HFC(n-1)) normalized by its
    running maximum; an onset fires when it exceeds delta + ratio * median of
    the recent detection-function history, outside the refractory window.
    """

    def __init__(self, frame_rate: float, delta: float = 0.01, ratio: float = 1.5,
                 median_window: int = 21, refractory_ms: float = 50.0):
        self.delta = delta
        self.ratio = ratio
        self.refractory_frames = max(1, int(round(refractory_ms / 1000.0 * frame_rate)))
        self._history: deque[float] = deque(maxlen=median_window)
        self._prev_hfc: float | None = None
        self._running_max = 0.0
        self._last_onset_frame = -10 ** 9
        self._frame = -1

    def process(self, hfc_value: float) -> tuple[int, float]:
        """Feed one HFC value; returns (onset pulse 0/1, normalized ODF)."""
        self._frame += 1
        if self._prev_hfc is None:
            self._prev_hfc = hfc_value
            self._history.append(0.0)
            return 0, 0.0
        raw = max(0.0, hfc_value - self._prev_hfc)
        self._prev_hfc = hfc_value
        self._running_max = max(self._running_max, raw)
        odf = raw / self._running_max if self._running_max > 0.0 else 0.0
        gate = self.delta + self.ratio * statistics.median(self._history) if self._history else self.delta
        self._history.append(odf)
        if odf > gate and self._frame - self._last_onset_frame >= self.refractory_frames:
            self._last_onset_frame = self._frame
            return 1, odf
        return 0, odf
