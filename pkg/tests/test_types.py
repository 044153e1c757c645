import numpy as np
import pytest

from timealign.types import (
    AlignedWord,
    ConfigError,
    EmptySegmentError,
    LogitsMatrix,
    OrderError,
    OverlapError,
    PipelineConfig,
    ScoreTrack,
    SpeechSegment,
    TranscriptSegment,
    validate_segments,
)


def seg(a, b):
    return SpeechSegment(a, b)


class TestValidateSegments:
    def test_empty_list_ok(self):
        validate_segments([])

    def test_touching_is_legal(self):
        validate_segments([seg(0, 1), seg(1, 2)])

    def test_overlap_reports_pair(self):
        with pytest.raises(OverlapError) as exc:
            validate_segments([seg(0, 2), seg(1, 3)])
        assert (exc.value.first, exc.value.second) == (0, 1)

    def test_out_of_order(self):
        with pytest.raises(OrderError):
            validate_segments([seg(5, 6), seg(0, 1)])

    def test_empty_segment_rejected_at_construction(self):
        with pytest.raises(EmptySegmentError):
            seg(1.0, 1.0)


class TestScoreTrack:
    def test_rejects_out_of_range_scores(self):
        with pytest.raises(ValueError):
            ScoreTrack(np.array([0.5, 1.5]), 0.02)

    def test_rejects_nonpositive_frame_period(self):
        with pytest.raises(ValueError):
            ScoreTrack(np.array([0.5]), 0.0)

    def test_scores_are_read_only(self):
        track = ScoreTrack(np.array([0.1, 0.2]), 0.02)
        with pytest.raises(ValueError):
            track.scores[0] = 0.9

    def test_time_at_uses_origin(self):
        track = ScoreTrack(np.array([0.1]), 0.02, origin=3.0)
        assert track.time_at(5) == pytest.approx(3.1)


class TestTranscriptSegment:
    def test_words_are_whitespace_split(self):
        t = TranscriptSegment(seg(0, 1), "  the cat   sat ")
        assert t.words == ["the", "cat", "sat"]

    def test_empty_text_gives_empty_words(self):
        assert TranscriptSegment(seg(0, 1), "   ").words == []


class TestLogitsMatrix:
    def test_shape_and_labels_must_agree(self):
        with pytest.raises(ValueError):
            LogitsMatrix(np.zeros((3, 2)), ("a",), 0, 0.02)

    def test_labels_must_be_unique(self):
        with pytest.raises(ValueError):
            LogitsMatrix(np.zeros((3, 2)), ("a", "a"), 0, 0.02)

    def test_needs_at_least_two_classes(self):
        with pytest.raises(ValueError):
            LogitsMatrix(np.zeros((3, 1)), ("a",), 0, 0.02)

    def test_end_time(self):
        m = LogitsMatrix(np.zeros((10, 2)), ("-", "a"), 0, 0.02, origin=1.0)
        assert m.end == pytest.approx(1.2)


class TestAlignedWord:
    def test_start_must_not_exceed_end(self):
        with pytest.raises(ValueError):
            AlignedWord("x", 2.0, 1.0)


class TestPipelineConfig:
    def test_defaults_match_stock_configuration(self):
        c = PipelineConfig()
        assert (c.onset_threshold, c.offset_threshold) == (0.767, 0.377)
        assert (c.min_duration_on, c.min_duration_off) == (0.136, 0.067)
        assert (c.max_chunk, c.merge_threshold, c.collar) == (30.0, 30.0, 0.2)

    def test_merge_threshold_cannot_exceed_max_chunk(self):
        with pytest.raises(ConfigError):
            PipelineConfig(merge_threshold=31.0, max_chunk=30.0)

    def test_offset_cannot_exceed_onset(self):
        with pytest.raises(ConfigError):
            PipelineConfig(onset_threshold=0.3, offset_threshold=0.4)
