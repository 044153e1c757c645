"""VAD score post-processing: hysteresis binarization with min-cut, plus
minimum-duration smoothing.

Binarization is a two-threshold state machine (onset/offset hysteresis).
The min-cut modification bounds segment length: when an active run reaches
the maximum duration without an offset crossing, it is split at the frame
of minimum score inside the second half of the run, so every emitted chunk
fits the downstream ASR model's input window while keeping at least half a
window of context.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import PipelineError, ScoreTrack, SpeechSegment, validate_segments


class InvalidParams(PipelineError):
    """Binarization parameters violate their invariants."""


class EmptyTrack(PipelineError):
    """Binarization requires at least one score."""


@dataclass(frozen=True)
class BinarizeParams:
    onset: float
    offset: float
    max_duration: float
    min_duration_on: float = 0.0
    min_duration_off: float = 0.0

    def __post_init__(self):
        if self.offset > self.onset:
            raise InvalidParams(
                f"offset {self.offset} must be <= onset {self.onset}"
            )
        if self.max_duration <= 0:
            raise InvalidParams(f"max_duration must be > 0, got {self.max_duration}")
        if self.min_duration_on < 0 or self.min_duration_off < 0:
            raise InvalidParams("minimum durations must be >= 0")
        if self.min_duration_on >= self.max_duration / 2:
            raise InvalidParams(
                f"min_duration_on {self.min_duration_on} must be < "
                f"max_duration/2 = {self.max_duration / 2}"
            )


def _binarize_cut_frames(
    scores: np.ndarray, onset: float, offset: float, max_len: int
) -> list[tuple[int, int, bool]]:
    """Run the hysteresis + min-cut state machine on raw frame indices.

    Returns half-open frame intervals (start, end, ended_by_cut). The cut
    frame belongs to the right-hand segment. Ties in the cut window break
    toward the earliest frame.
    """
    if max_len < 2:
        raise InvalidParams(
            f"max_duration spans {max_len} frame(s); need at least 2 for a cut"
        )
    sl = scores.tolist()
    segs: list[tuple[int, int, bool]] = []
    start = 0
    active = False
    for i, sc in enumerate(sl):
        if active:
            if i - start >= max_len:
                lo = start + max_len // 2
                cut = lo + int(np.argmin(scores[lo : start + max_len]))
                segs.append((start, cut, True))
                start = cut
            if sc < offset:
                segs.append((start, i, False))
                active = False
        elif sc > onset:
            start = i
            active = True
    if active:
        segs.append((start, len(sl), False))
    return [s for s in segs if s[1] > s[0]]


def binarize_cut(track: ScoreTrack, p: BinarizeParams) -> list[SpeechSegment]:
    """Convert a score track into bounded-length speech segments.

    State machine: inactive -> active when score > onset; active -> inactive
    when score < offset. An active run that reaches ``p.max_duration`` is cut
    at the minimum-score frame within [run_start + max_len/2, run_start +
    max_len) and continues from the cut, so cut-produced segments span
    between half and one full ``max_duration``.
    """
    if len(track) == 0:
        raise EmptyTrack("cannot binarize an empty score track")
    max_len = round(p.max_duration / track.frame_period)
    frames = _binarize_cut_frames(track.scores, p.onset, p.offset, max_len)
    segs = [
        SpeechSegment(track.time_at(a), track.time_at(b)) for a, b, _ in frames
    ]
    validate_segments(segs)
    return segs


def apply_min_durations(
    segs: list[SpeechSegment], min_on: float, min_off: float
) -> list[SpeechSegment]:
    """Bridge gaps shorter than ``min_off``, then drop segments shorter
    than ``min_on``. Bridging runs first so two sub-minimum fragments can
    jointly survive the drop."""
    validate_segments(segs)
    if not segs:
        return []
    fused: list[SpeechSegment] = [segs[0]]
    for seg in segs[1:]:
        prev = fused[-1]
        if seg.start - prev.end < min_off:
            fused[-1] = SpeechSegment(prev.start, seg.end)
        else:
            fused.append(seg)
    return [s for s in fused if s.duration >= min_on]
