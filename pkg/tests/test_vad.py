import numpy as np
import pytest

from timealign.types import ScoreTrack, SpeechSegment
from timealign.vad import (
    BinarizeParams,
    EmptyTrack,
    InvalidParams,
    apply_min_durations,
    binarize_cut,
)

from oracles import binarize_cut_reference

FP = 0.02


def track(scores, origin=0.0):
    return ScoreTrack(np.asarray(scores, dtype=float), FP, origin)


def params(max_duration=1.0, **kw):
    kw.setdefault("onset", 0.767)
    kw.setdefault("offset", 0.377)
    return BinarizeParams(max_duration=max_duration, **kw)


class TestBinarizeParams:
    def test_offset_above_onset_rejected(self):
        with pytest.raises(InvalidParams):
            BinarizeParams(onset=0.3, offset=0.4, max_duration=1.0)

    def test_min_on_must_leave_room_for_cuts(self):
        with pytest.raises(InvalidParams):
            BinarizeParams(onset=0.7, offset=0.3, max_duration=1.0,
                           min_duration_on=0.5)


class TestBinarizeCut:
    def test_never_crossing_onset_gives_nothing(self):
        assert binarize_cut(track([0.1] * 100), params()) == []

    def test_single_short_run(self):
        segs = binarize_cut(track([0.9] * 40), params(max_duration=1.0))
        assert [(s.start, s.end) for s in segs] == [(0.0, pytest.approx(0.8))]

    def test_cut_at_minimum_score_in_window(self):
        # 60 active frames, max_len 50: cut window is frames [25, 50),
        # argmin there is the dip at frame 35
        scores = [0.9] * 60
        scores[35] = 0.5
        segs = binarize_cut(track(scores), params(max_duration=1.0))
        assert len(segs) == 2
        assert segs[0].start == pytest.approx(0.0)
        assert segs[0].end == pytest.approx(0.70)
        assert segs[1].start == pytest.approx(0.70)
        assert segs[1].end == pytest.approx(1.20)

    def test_dip_outside_window_is_ignored(self):
        scores = [0.9] * 60
        scores[10] = 0.5  # below the cut window, still above offset
        segs = binarize_cut(track(scores), params(max_duration=1.0))
        # earliest-frame tie-break inside the flat window
        assert segs[0].end == pytest.approx(25 * FP)

    def test_hysteresis_between_thresholds_stays_inactive(self):
        segs = binarize_cut(track([0.5] * 200), params())
        assert segs == []

    def test_offset_crossing_ends_segment(self):
        scores = [0.9] * 10 + [0.1] * 10 + [0.9] * 10
        segs = binarize_cut(track(scores), params())
        assert [(s.start, s.end) for s in segs] == [
            (0.0, pytest.approx(0.2)),
            (pytest.approx(0.4), pytest.approx(0.6)),
        ]

    def test_origin_offsets_times(self):
        segs = binarize_cut(track([0.9] * 10, origin=5.0), params())
        assert segs[0].start == pytest.approx(5.0)

    def test_empty_track_rejected(self):
        with pytest.raises(EmptyTrack):
            binarize_cut(ScoreTrack(np.empty(0), FP), params())

    def test_max_duration_below_two_frames_rejected(self):
        with pytest.raises(InvalidParams):
            binarize_cut(track([0.9] * 10), params(max_duration=0.02))

    def test_matches_reference_on_random_tracks(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = int(rng.integers(1, 400))
            kind = rng.integers(0, 3)
            if kind == 0:
                scores = rng.uniform(0, 1, n)
            elif kind == 1:
                scores = rng.uniform(0.5, 1.0, n)
            else:
                scores = np.clip(
                    0.5 + np.cumsum(rng.normal(0, 0.1, n)), 0.0, 1.0
                )
            max_dur = float(rng.choice([0.3, 1.0, 2.0]))
            got = binarize_cut(track(scores), params(max_duration=max_dur))
            expect = binarize_cut_reference(
                scores.tolist(), 0.767, 0.377, round(max_dur / FP)
            )
            assert [(s.start, s.end) for s in got] == pytest.approx(
                [(a * FP, b * FP) for a, b in expect]
            )


class TestApplyMinDurations:
    def test_noop(self):
        segs = [SpeechSegment(0, 5)]
        assert apply_min_durations(segs, 0.136, 0.067) == segs

    def test_short_gap_is_bridged(self):
        segs = [SpeechSegment(0.0, 1.0), SpeechSegment(1.05, 2.0)]
        assert apply_min_durations(segs, 0.0, 0.067) == [SpeechSegment(0.0, 2.0)]

    def test_short_segment_is_dropped(self):
        segs = [SpeechSegment(0.0, 0.1), SpeechSegment(1.0, 2.0)]
        assert apply_min_durations(segs, 0.136, 0.0) == [SpeechSegment(1.0, 2.0)]

    def test_bridging_runs_before_dropping(self):
        # two sub-minimum fragments jointly survive thanks to bridging
        segs = [SpeechSegment(0.0, 0.1), SpeechSegment(0.12, 0.2)]
        assert apply_min_durations(segs, 0.136, 0.067) == [SpeechSegment(0.0, 0.2)]

    def test_empty_input(self):
        assert apply_min_durations([], 0.136, 0.067) == []
