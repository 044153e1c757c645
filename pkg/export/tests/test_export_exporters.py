"""Exported files must validate under the pipeline package's readers: that
file-format contract is the only interface between the two packages."""

import json

import numpy as np
import pytest

from timealign.bundle_io import read_bundle, read_logits_file, read_score_file

from timealign_export import formats
from timealign_export.audio import write_wav
from timealign_export.engines import (
    ModelLoadError,
    get_asr_engine,
    get_phoneme_engine,
    get_vad_engine,
)
from timealign_export.exporters import export_asr, export_logits, export_vad
from timealign_export.tone_codec import FRAME_PERIOD, synthesize_phrase


@pytest.fixture
def wav(tmp_path):
    samples = synthesize_phrase("hi there", lead_silence=0.5, total_duration=6.0)
    path = tmp_path / "rec.wav"
    write_wav(path, samples, 16000)
    return path


# layout: "hi" tones at 0.50-0.72, "there" at 0.86-1.44 (see tone_codec)
SPANS = [(0.5, 0.8), (0.84, 1.6)]


class TestEngines:
    def test_tone_engines_resolve(self):
        assert get_vad_engine("tone").frame_period == FRAME_PERIOD
        assert get_asr_engine("tone").decode_flags["strategy"] == "greedy"
        assert get_phoneme_engine("tone").blank_index == 0

    def test_unknown_engine_is_model_load_error(self):
        with pytest.raises(ModelLoadError):
            get_vad_engine("nonesuch")


class TestExportVad:
    def test_score_file_validates_and_counts_frames(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_vad(wav, manifest, get_vad_engine("tone"))
        payload = json.loads(manifest.read_text())
        track = read_score_file(tmp_path / payload["vad"])
        assert len(track) == round(6.0 / FRAME_PERIOD)
        assert track.frame_period == FRAME_PERIOD
        assert track.origin == 0.0

    def test_manifest_round_trips_through_read_bundle(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_vad(wav, manifest, get_vad_engine("tone"))
        bundle = read_bundle(manifest)
        assert bundle.recording_id == "rec"
        assert bundle.audio_duration_s == 6.0
        assert bundle.chunks == ()


class TestExportAsr:
    def test_transcripts_and_decode_flags_recorded(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_vad(wav, manifest, get_vad_engine("tone"))
        export_asr(wav, manifest, SPANS, get_asr_engine("tone"))
        payload = json.loads(manifest.read_text())
        assert payload["asr"] == {
            "engine": "tone",
            "strategy": "greedy",
            "timestamps": False,
            "condition_on_previous": False,
        }
        transcripts = [c["transcript"] for c in payload["chunks"]]
        assert transcripts == ["hi", "there"]

    def test_empty_span_yields_empty_transcript(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_vad(wav, manifest, get_vad_engine("tone"))
        export_asr(wav, manifest, [(5.0, 5.01)], get_asr_engine("tone"))
        payload = json.loads(manifest.read_text())
        assert payload["chunks"][0]["transcript"] == ""

    def test_overlong_span_rejected(self, wav, tmp_path):
        with pytest.raises(ValueError):
            export_asr(wav, tmp_path / "b.json", [(0.0, 31.0)], get_asr_engine("tone"))


class TestExportLogits:
    def test_files_validate_with_expected_shape(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_vad(wav, manifest, get_vad_engine("tone"))
        export_logits(wav, manifest, [(0.5, 2.5)], get_phoneme_engine("tone"))
        payload = json.loads(manifest.read_text())
        logits = read_logits_file(tmp_path / payload["chunks"][0]["logits"])
        assert logits.num_frames == round(2.0 / FRAME_PERIOD)
        assert logits.labels.count("<blank>") == 1
        assert logits.blank_index == 0
        assert logits.origin == 0.5

    def test_raw_not_normalized(self, wav, tmp_path):
        manifest = tmp_path / "bundle.json"
        export_logits(wav, manifest, [(0.5, 1.0)], get_phoneme_engine("tone"))
        payload = json.loads(manifest.read_text())
        logits = read_logits_file(tmp_path / payload["chunks"][0]["logits"])
        sums = np.exp(logits.values).sum(axis=1)
        assert not np.allclose(sums, 1.0)


class TestUpsert:
    def test_fields_merge_by_span(self):
        manifest = formats.new_manifest("r", 1.0)
        formats.upsert_chunk(manifest, (0.5, 1.0), transcript="hi")
        formats.upsert_chunk(manifest, (0.1, 0.4), transcript="oh")
        formats.upsert_chunk(manifest, (0.5, 1.0), logits="x.bin")
        assert manifest["chunks"] == [
            {"span": [0.1, 0.4], "transcript": "oh"},
            {"span": [0.5, 1.0], "transcript": "hi", "logits": "x.bin"},
        ]
