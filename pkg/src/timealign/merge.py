"""Greedy merge of neighbouring speech segments into transcription chunks.

A chunk's span is the wall-clock interval from its first constituent's start
to its last constituent's end, silence included, because the chunk is
transcribed as one contiguous audio window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import SpeechSegment, validate_segments


@dataclass(frozen=True)
class MergedChunk:
    """A contiguous audio window covering one or more speech segments."""

    segments: tuple[SpeechSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a chunk needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def start(self) -> float:
        return self.segments[0].start

    @property
    def end(self) -> float:
        return self.segments[-1].end

    @property
    def span(self) -> SpeechSegment:
        return SpeechSegment(self.start, self.end)

    @property
    def duration(self) -> float:
        return self.end - self.start


def merge_segments(segs: list[SpeechSegment], tau: float) -> list[MergedChunk]:
    """Greedy left-to-right grouping under a wall-span cap of ``tau``.

    A chunk keeps absorbing the next segment while (segment.end -
    chunk.start) <= tau. Greedy first-fit minimizes chunk count because
    constituents must stay contiguous in time. A single segment longer than
    tau becomes its own chunk unchanged; upstream min-cut prevents that case
    in-pipeline.
    """
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    validate_segments(segs)
    chunks: list[MergedChunk] = []
    current: list[SpeechSegment] = []
    for seg in segs:
        if current and seg.end - current[0].start > tau:
            chunks.append(MergedChunk(tuple(current)))
            current = []
        current.append(seg)
    if current:
        chunks.append(MergedChunk(tuple(current)))
    return chunks
