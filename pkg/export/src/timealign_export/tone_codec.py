"""A toy acoustic code for hermetic end-to-end runs without neural models.

Each letter maps to a pure tone at a distinct frequency on a 50 Hz grid;
silence separates characters (one frame) and words (several frames). The
"recognizer" computes per-frame band energies with an FFT, which yields a
genuine audio-derived logits matrix over letter classes plus blank, and the
"transcriber" greedily decodes those logits. Both therefore exercise the
real pipeline contracts (score files, logits files, alignment) end to end
on actual waveforms.
"""

from __future__ import annotations

import numpy as np

SAMPLE_RATE = 16000
FRAME_PERIOD = 0.02
FRAME_SAMPLES = round(SAMPLE_RATE * FRAME_PERIOD)  # 320 -> 50 Hz bins

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
LABELS = ("<blank>",) + tuple(ALPHABET)
BLANK_INDEX = 0
BASE_FREQ = 500.0
FREQ_STEP = 100.0  # two FFT bins apart, well separated

CHAR_SECONDS = 0.10
CHAR_GAP_SECONDS = 0.02  # one blank frame: lets repeated letters survive CTC
WORD_GAP_SECONDS = 0.12
AMPLITUDE = 0.3

# blank pseudo-energy: above silence noise, far below an active tone band
_BLANK_SCORE = 0.5
_LOGIT_SCALE = 10.0


def char_frequency(ch: str) -> float:
    return BASE_FREQ + FREQ_STEP * ALPHABET.index(ch)


def synthesize_phrase(
    text: str,
    lead_silence: float = 0.5,
    total_duration: float | None = None,
    rate: int = SAMPLE_RATE,
) -> np.ndarray:
    """Render a lowercase phrase as tone speech; pads or truncates tail
    silence to ``total_duration`` when given."""
    ramp = np.hanning(2 * round(0.005 * rate))
    half = len(ramp) // 2

    def tone(freq: float, seconds: float) -> np.ndarray:
        t = np.arange(round(seconds * rate)) / rate
        wave = AMPLITUDE * np.sin(2 * np.pi * freq * t)
        wave[:half] *= ramp[:half]
        wave[-half:] *= ramp[half : 2 * half]
        return wave

    def silence(seconds: float) -> np.ndarray:
        return np.zeros(round(seconds * rate))

    parts = [silence(lead_silence)]
    words = text.lower().split()
    for wi, word in enumerate(words):
        if wi:
            parts.append(silence(WORD_GAP_SECONDS))
        for ch in word:
            if ch not in ALPHABET:
                raise ValueError(f"cannot synthesize character {ch!r}")
            parts.append(tone(char_frequency(ch), CHAR_SECONDS))
            parts.append(silence(CHAR_GAP_SECONDS))
    samples = np.concatenate(parts)
    if total_duration is not None:
        want = round(total_duration * rate)
        if len(samples) > want:
            raise ValueError(
                f"phrase needs {len(samples) / rate:.2f}s > {total_duration}s"
            )
        samples = np.pad(samples, (0, want - len(samples)))
    return samples


def _frames(samples: np.ndarray) -> np.ndarray:
    n = len(samples) // FRAME_SAMPLES
    return samples[: n * FRAME_SAMPLES].reshape(n, FRAME_SAMPLES)


def vad_scores(samples: np.ndarray) -> np.ndarray:
    """Frame RMS squashed into [0, 1); silence maps to ~0, speech to ~1."""
    rms = np.sqrt((_frames(samples) ** 2).mean(axis=1))
    return rms / (rms + 0.01)


def band_energies(samples: np.ndarray) -> np.ndarray:
    """Per-frame spectral power at each letter's tone frequency."""
    spectrum = np.fft.rfft(_frames(samples), axis=1)
    bins = [round(char_frequency(c) * FRAME_SAMPLES / SAMPLE_RATE) for c in ALPHABET]
    power = np.abs(spectrum[:, bins]) ** 2
    return power / (FRAME_SAMPLES**2)


def logits_from_audio(samples: np.ndarray) -> np.ndarray:
    """T x K raw scores over LABELS (blank first), derived from band power."""
    power = band_energies(samples)
    share = power / (power.sum(axis=1, keepdims=True) + 1e-6)
    logits = np.empty((len(share), len(LABELS)))
    logits[:, BLANK_INDEX] = _LOGIT_SCALE * _BLANK_SCORE
    logits[:, 1:] = _LOGIT_SCALE * share
    return logits


def greedy_decode(logits: np.ndarray, word_gap_frames: int = 3) -> str:
    """Frame-wise argmax, CTC collapse, blank runs >= word_gap_frames
    become word boundaries."""
    best = logits.argmax(axis=1)
    words: list[str] = []
    current: list[str] = []
    blanks = 0
    prev = BLANK_INDEX
    for cls in best:
        if cls == BLANK_INDEX:
            blanks += 1
            if blanks == word_gap_frames and current:
                words.append("".join(current))
                current = []
            prev = BLANK_INDEX
            continue
        if cls != prev:
            current.append(LABELS[cls])
        blanks = 0
        prev = cls
    if current:
        words.append("".join(current))
    return " ".join(words)
