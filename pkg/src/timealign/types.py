"""Shared domain types for the segmentation/transcription/alignment pipeline.

All times are absolute seconds from the start of the recording, stored as
64-bit floats. Frame indices are always derived from
``(time - origin) / frame_period`` and never stored, so tracks produced by
models with different frame periods cannot drift against each other.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PipelineError):
    """Invalid pipeline configuration."""


class OrderError(PipelineError):
    """Segment list is not sorted ascending by start time."""


class OverlapError(PipelineError):
    """Two segments overlap in their interior."""

    def __init__(self, first: int, second: int, message: str = ""):
        self.first = first
        self.second = second
        super().__init__(message or f"segments {first} and {second} overlap")


class EmptySegmentError(PipelineError):
    """A segment has start >= end."""


@dataclass(frozen=True)
class SpeechSegment:
    """Active-speech interval [start, end) in seconds."""

    start: float
    end: float

    def __post_init__(self):
        if not self.start < self.end:
            raise EmptySegmentError(
                f"segment start {self.start} must be < end {self.end}"
            )

    @property
    def duration(self) -> float:
        return self.end - self.start


def validate_segments(segs: Sequence[SpeechSegment]) -> None:
    """Check that a segment list is sorted and pairwise non-overlapping.

    Touching segments (end == next start) are legal; overlap means strict
    interior intersection. Raises OrderError or OverlapError otherwise.
    Segment construction already rejects start >= end.
    """
    for i in range(len(segs) - 1):
        a, b = segs[i], segs[i + 1]
        if b.start < a.start:
            raise OrderError(
                f"segment {i + 1} starts at {b.start} before segment {i} at {a.start}"
            )
        if b.start < a.end:
            raise OverlapError(i, i + 1)


@dataclass(frozen=True)
class ScoreTrack:
    """Per-frame VAD activation scores in [0, 1] on a uniform time grid.

    ``origin`` is the absolute time of score index 0; score i covers
    [origin + i * frame_period, origin + (i + 1) * frame_period).
    """

    scores: np.ndarray
    frame_period: float
    origin: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.scores, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "scores", arr)
        if self.frame_period <= 0:
            raise ValueError(f"frame_period must be > 0, got {self.frame_period}")
        if arr.ndim != 1:
            raise ValueError("scores must be one-dimensional")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("scores must lie in [0, 1]")

    def __len__(self) -> int:
        return int(self.scores.size)

    def time_at(self, frame: int) -> float:
        return self.origin + frame * self.frame_period


@dataclass(frozen=True)
class TranscriptSegment:
    """Transcribed text for one audio chunk."""

    segment: SpeechSegment
    text: str

    def __post_init__(self):
        object.__setattr__(self, "text", self.text.strip())

    @property
    def words(self) -> list[str]:
        # whitespace tokenization; punctuation stays attached to the word
        return self.text.split()


@dataclass(frozen=True)
class LogitsMatrix:
    """T x K emission scores, row = time frame, column = class."""

    values: np.ndarray
    labels: tuple[str, ...]
    blank_index: int
    frame_period: float
    origin: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "labels", tuple(self.labels))
        if arr.ndim != 2:
            raise ValueError("values must be a T x K matrix")
        t, k = arr.shape
        if t < 1 or k < 2:
            raise ValueError(f"need T >= 1 and K >= 2, got T={t} K={k}")
        if len(self.labels) != k:
            raise ValueError(f"{len(self.labels)} labels for K={k} columns")
        if len(set(self.labels)) != k:
            raise ValueError("labels must be unique")
        if not 0 <= self.blank_index < k:
            raise ValueError(f"blank_index {self.blank_index} out of range")
        if self.frame_period <= 0:
            raise ValueError(f"frame_period must be > 0, got {self.frame_period}")

    @property
    def num_frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.values.shape[1])

    @property
    def end(self) -> float:
        return self.origin + self.num_frames * self.frame_period


@dataclass(frozen=True)
class AlignedWord:
    """A word with its aligned time span.

    ``score`` is the mean per-frame emission probability along the word's
    alignment path; ``inferred`` is set when the timestamps came from the
    out-of-vocabulary fallback rule instead of the aligner.
    """

    word: str
    start: float
    end: float
    score: float = 0.0
    inferred: bool = False

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"word start {self.start} > end {self.end}")


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable knobs for the whole pipeline, with the stock defaults."""

    onset_threshold: float = 0.767
    offset_threshold: float = 0.377
    min_duration_on: float = 0.136
    min_duration_off: float = 0.067
    max_chunk: float = 30.0
    merge_threshold: float = 30.0
    batch_size: int = 8
    collar: float = 0.2

    def __post_init__(self):
        if not 0.0 <= self.offset_threshold <= self.onset_threshold <= 1.0:
            raise ConfigError(
                "need 0 <= offset_threshold <= onset_threshold <= 1, got "
                f"offset={self.offset_threshold} onset={self.onset_threshold}"
            )
        if not 0.0 < self.merge_threshold <= self.max_chunk:
            raise ConfigError(
                f"need 0 < merge_threshold <= max_chunk, got "
                f"merge_threshold={self.merge_threshold} max_chunk={self.max_chunk}"
            )
        if self.min_duration_on < 0 or self.min_duration_off < 0:
            raise ConfigError("minimum durations must be >= 0")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.collar < 0:
            raise ConfigError(f"collar must be >= 0, got {self.collar}")
