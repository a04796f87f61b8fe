import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.signal import lfilter

from sonomap.errors import InvalidCutoff, UnknownFeatureName
from sonomap.subbands import (BandSplitter, BiquadFilter, SubBandConfig,
                              design_highpass, design_lowpass)

from conftest import FS, sine


def biquad_reference(coeffs, x):
    """Sample-by-sample transposed direct form II; independent of scipy."""
    y = np.zeros_like(x)
    z1 = z2 = 0.0
    for i, xi in enumerate(x):
        yi = coeffs.b0 * xi + z1
        z1 = coeffs.b1 * xi - coeffs.a1 * yi + z2
        z2 = coeffs.b2 * xi - coeffs.a2 * yi
        y[i] = yi
    return y


class TestDesign:
    def test_lowpass_dc_gain(self):
        lp = design_lowpass(200, FS)
        assert lp.response_at(0.0, FS) == pytest.approx(1.0, abs=1e-9)

    def test_lowpass_cutoff_gain(self):
        lp = design_lowpass(200, FS)
        db = 20 * np.log10(lp.response_at(200, FS))
        assert db == pytest.approx(-3.01, abs=0.1)

    def test_highpass_cutoff_gain(self):
        hp = design_highpass(1000, FS)
        db = 20 * np.log10(hp.response_at(1000, FS))
        assert db == pytest.approx(-3.01, abs=0.1)
        assert hp.response_at(0.0, FS) == pytest.approx(0.0, abs=1e-9)

    def test_rolloff(self):
        lp = design_lowpass(500, FS)
        drop = 20 * np.log10(lp.response_at(1000, FS) / lp.response_at(2000, FS))
        assert drop == pytest.approx(12.0, abs=1.0)

    def test_invalid_cutoff(self):
        with pytest.raises(InvalidCutoff):
            design_lowpass(30000, FS)
        with pytest.raises(InvalidCutoff):
            design_highpass(0, FS)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=21.0, max_value=0.45 * FS))
    def test_stability_over_cutoffs(self, fc):
        for coeffs in (design_lowpass(fc, FS), design_highpass(fc, FS)):
            assert np.all(coeffs.pole_magnitudes() < 1.0)


class TestStreaming:
    def test_matches_reference_loop(self, rng):
        coeffs = design_lowpass(300, FS)
        x = rng.standard_normal(2000)
        filt = BiquadFilter(coeffs)
        np.testing.assert_allclose(filt.process(x), biquad_reference(coeffs, x), atol=1e-10)

    def test_streaming_equals_one_pass(self, rng):
        coeffs = design_highpass(700, FS)
        x = rng.standard_normal(4096)
        one_pass = BiquadFilter(coeffs).process(x)
        filt = BiquadFilter(coeffs)
        chunked = np.concatenate([filt.process(c) for c in np.split(x, 8)])
        np.testing.assert_array_equal(chunked, one_pass)


class TestSplit:
    def make_splitter(self):
        cfg = SubBandConfig(n_bands=3, crossover_lo=200, crossover_hi=2000)
        return BandSplitter(cfg, FS)

    def _steady_rms(self, band):
        tail = band[len(band) // 2:]
        return np.sqrt(np.mean(tail ** 2))

    def test_low_sine_in_band1(self):
        sp = self.make_splitter()
        sig = sine(50, 1.0)
        bands = sp.split(sig)
        in_rms = self._steady_rms(sig)
        assert self._steady_rms(bands[0]) == pytest.approx(in_rms, rel=0.05)
        assert self._steady_rms(bands[2]) < 0.05 * in_rms

    def test_high_sine_in_band3(self):
        sp = self.make_splitter()
        sig = sine(8000, 1.0)
        bands = sp.split(sig)
        in_rms = self._steady_rms(sig)
        assert self._steady_rms(bands[2]) == pytest.approx(in_rms, rel=0.05)
        assert self._steady_rms(bands[0]) < 0.05 * in_rms

    def test_single_band_passthrough(self):
        sp = BandSplitter(SubBandConfig(n_bands=1), FS)
        sig = sine(440, 0.1)
        np.testing.assert_array_equal(sp.split(sig)[0], sig)

    def test_band_monotonicity(self):
        """Band1 energy non-increasing, band3 non-decreasing with frequency."""
        b1, b3 = [], []
        for freq in (50, 100, 400, 1000, 3000, 8000, 15000):
            sp = self.make_splitter()
            bands = sp.split(sine(freq, 0.5))
            b1.append(self._steady_rms(bands[0]))
            b3.append(self._steady_rms(bands[2]))
        tol = 0.01
        assert all(b1[i + 1] <= b1[i] * (1 + tol) for i in range(len(b1) - 1))
        assert all(b3[i + 1] >= b3[i] * (1 - tol) for i in range(len(b3) - 1))


class TestConfig:
    def test_unknown_feature_name(self):
        with pytest.raises(UnknownFeatureName):
            SubBandConfig(slots={"band1": ["tempo"]})

    def test_crossover_ordering(self):
        with pytest.raises(ValueError):
            SubBandConfig(n_bands=3, crossover_lo=2000, crossover_hi=200)

    def test_crossover_above_limit(self):
        cfg = SubBandConfig(n_bands=3, crossover_lo=200, crossover_hi=21500)
        with pytest.raises(InvalidCutoff):
            BandSplitter(cfg, FS)
