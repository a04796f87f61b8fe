"""Regenerates the bundled test assets: a 10 s synthetic WAV, a demo session
and the golden render CSV. Run from the repo root:

    python3 scripts/make_assets.py
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from sonomap.audio_io import encode_wav  # noqa: E402
from sonomap.engine import run_headless  # noqa: E402
from sonomap.session import load_session  # noqa: E402

ROOT = pathlib.Path(__file__).resolve().parents[1]
ASSETS = ROOT / "assets"

FS = 44100
SECONDS = 10


def synth() -> np.ndarray:
    rng = np.random.default_rng(20210501)
    n = SECONDS * FS
    t = np.arange(n) / FS
    sig = 0.25 * np.sin(2 * np.pi * 110 * t)                      # bass
    sig += 0.2 * np.sin(2 * np.pi * 440 * t) * (0.6 + 0.4 * np.sin(2 * np.pi * 0.5 * t))
    sweep = np.sin(2 * np.pi * (1000 + 300 * t) * t) * 0.1        # moving centroid
    sig += sweep
    for k in range(SECONDS * 2):                                  # clicks at 2 Hz
        s = int((k * 0.5 + 0.1) * FS)
        sig[s:s + 128] += 0.5 * np.sign(rng.standard_normal(128))
    sig += rng.standard_normal(n) * 1e-4
    return np.clip(sig, -0.99, 0.99)


SESSION = {
    "version": 1,
    "stream": {"sample_rate": 44100, "frame_size": 2048, "hop_size": 512},
    "subbands": {
        "n_bands": 3, "crossover_lo": 200.0, "crossover_hi": 2000.0,
        "slots": {
            "band1": ["loudness"],
            "band2": ["centroid", "dissonance"],
            "band3": ["onset", "loudness"],
        },
    },
    "automatables": [
        {"id": "auto/fader1", "value": 0.5},
        {"id": "auto/fader2", "value": 0.0},
        {"id": "auto/fader3", "value": 0.0},
        {"id": "auto/fader4", "value": 1.0},
    ],
    "mappings": [
        {"sources": ["backend0/global/loudness"],
         "destination": "scene/particles.size", "expression": "y=0.01*x"},
        {"sources": ["backend0/global/onset"],
         "destination": "scene/camera.orbit_speed", "expression": "y=x"},
        {"sources": ["backend0/global/centroid"],
         "destination": "scene/light.hue", "expression": "y=x/8000"},
        {"sources": ["backend0/band1/loudness", "auto/fader1"],
         "destination": "scene/light.intensity", "expression": "y=0.02*x0*x1"},
        {"sources": ["backend0/global/odf"],
         "destination": "scene/stars.drift_speed", "expression": "y=clamp(x,0,1)",
         "smoothing_ms": 80.0},
        {"sources": ["backend0/band2/dissonance"],
         "destination": "scene/fog.density", "expression": "y=0.5*x+0.1"},
    ],
    "transports": {"osc_host": "127.0.0.1", "osc_port": 9000, "ui_port": 8765},
}


def main():
    ASSETS.mkdir(exist_ok=True)
    wav_path = ASSETS / "test_tone.wav"
    wav_path.write_bytes(encode_wav(FS, synth()))
    session_path = ASSETS / "demo_session.json"
    session_path.write_text(json.dumps(SESSION, indent=2) + "\n")
    config = load_session(session_path)
    run_headless(config, wav_path, ASSETS / "golden_render.csv")
    print("assets written to", ASSETS)


if __name__ == "__main__":
    main()
