"""Long-form speech transcription pipeline with word-level timestamps.

Segments VAD activation scores into bounded chunks (hysteresis + min-cut +
merge), drives batched transcription through a pluggable ASR backend, and
force-aligns each transcript against phoneme-recognition logits to emit
word-level timestamps, plus the evaluation metrics for the whole pipeline.
"""

__version__ = "0.1.0"

from .align import (
    AlignmentPath,
    SegmentAlignment,
    TokenizedTranscript,
    align,
    align_segment,
    align_segments_batched,
    tokenize_transcript,
    words_from_path,
)
from .bundle_io import (
    InterchangeBundle,
    read_bundle,
    read_logits_file,
    read_score_file,
    write_logits_file,
    write_manifest,
    write_score_file,
)
from .merge import MergedChunk, merge_segments
from .metrics import (
    ngram_duplicates,
    normalize_text,
    segmentation_pr,
    word_error_rate,
)
from .orchestrate import AsrBackend, FixtureBackend, transcribe_chunks
from .pipeline import PipelineResult, run_pipeline, segment_bundle
from .types import (
    AlignedWord,
    LogitsMatrix,
    PipelineConfig,
    ScoreTrack,
    SpeechSegment,
    TranscriptSegment,
    validate_segments,
)
from .vad import BinarizeParams, apply_min_durations, binarize_cut
from .writers import read_ctm, read_words_json, write_outputs

__all__ = [
    "AlignedWord",
    "AlignmentPath",
    "AsrBackend",
    "BinarizeParams",
    "FixtureBackend",
    "InterchangeBundle",
    "LogitsMatrix",
    "MergedChunk",
    "PipelineConfig",
    "PipelineResult",
    "ScoreTrack",
    "SegmentAlignment",
    "SpeechSegment",
    "TokenizedTranscript",
    "TranscriptSegment",
    "align",
    "align_segment",
    "align_segments_batched",
    "apply_min_durations",
    "binarize_cut",
    "merge_segments",
    "ngram_duplicates",
    "normalize_text",
    "read_bundle",
    "read_ctm",
    "read_logits_file",
    "read_score_file",
    "read_words_json",
    "run_pipeline",
    "segment_bundle",
    "segmentation_pr",
    "tokenize_transcript",
    "transcribe_chunks",
    "validate_segments",
    "word_error_rate",
    "words_from_path",
    "write_logits_file",
    "write_manifest",
    "write_outputs",
    "write_score_file",
]
