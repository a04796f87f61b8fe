"""Audio feature extraction and signal mapping engine for live visuals."""

__version__ = "0.1.0"
