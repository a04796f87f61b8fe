import random

import numpy as np
import pytest

from sonomap.expressions import Bin, Call, FUNCTIONS, Neg, Num, Var

FS = 44100


def sine(freq, seconds=1.0, fs=FS, amp=1.0, phase=0.0):
    t = np.arange(int(seconds * fs)) / fs
    return amp * np.sin(2 * np.pi * freq * t + phase)


def harmonic_tone(f0, seconds=1.0, fs=FS, n_harmonics=6):
    t = np.arange(int(seconds * fs)) / fs
    out = np.zeros_like(t)
    for h in range(1, n_harmonics + 1):
        out += np.sin(2 * np.pi * f0 * h * t) / h
    return out / np.max(np.abs(out))


def click_track(rate_hz=4.0, seconds=5.0, fs=FS, noise_db=-30.0, seed=42):
    """Synthetic click track over a noise floor; returns (signal, click samples)."""
    rng = np.random.default_rng(seed)
    n = int(seconds * fs)
    sig = rng.standard_normal(n) * (10.0 ** (noise_db / 20.0)) * 0.1
    clicks = []
    period = 1.0 / rate_hz
    k = 0
    while True:
        s = int((k * period + 0.05) * fs)
        if s + 64 > n:
            break
        clicks.append(s)
        sig[s:s + 64] += 0.9 * np.sign(rng.standard_normal(64))
        k += 1
    return np.clip(sig, -1, 1), clicks


def random_expression(rng: random.Random, n_sources: int, depth: int = 3):
    """Generate a random AST for round-trip testing."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            # literals are nonnegative; negation is a distinct AST node
            return Num(round(rng.uniform(0, 10), 4))
        return Var(rng.randrange(n_sources))
    kind = rng.random()
    if kind < 0.5:
        op = rng.choice("+-*/")
        return Bin(op, random_expression(rng, n_sources, depth - 1),
                   random_expression(rng, n_sources, depth - 1))
    if kind < 0.7:
        return Neg(random_expression(rng, n_sources, depth - 1))
    name = rng.choice(list(FUNCTIONS))
    args = tuple(random_expression(rng, n_sources, depth - 1)
                 for _ in range(FUNCTIONS[name]))
    return Call(name, args)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
