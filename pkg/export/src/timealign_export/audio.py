"""Minimal WAV I/O: 16-bit PCM, mono (multi-channel input is averaged)."""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np


class UnsupportedAudio(Exception):
    pass


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Returns (float64 mono samples in [-1, 1], sample_rate)."""
    with wave.open(str(path), "rb") as wav:
        if wav.getsampwidth() != 2:
            raise UnsupportedAudio(
                f"{path}: only 16-bit PCM supported, got "
                f"{wav.getsampwidth() * 8}-bit"
            )
        rate = wav.getframerate()
        n_channels = wav.getnchannels()
        raw = wav.readframes(wav.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    if n_channels > 1:
        samples = samples.reshape(-1, n_channels).mean(axis=1)
    return samples, rate


def write_wav(path: str | Path, samples: np.ndarray, rate: int) -> None:
    clipped = np.clip(samples, -1.0, 1.0)
    pcm = (clipped * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(pcm.tobytes())


def slice_span(
    samples: np.ndarray, rate: int, start: float, end: float
) -> np.ndarray:
    a = max(0, round(start * rate))
    b = min(len(samples), round(end * rate))
    return samples[a:b]
