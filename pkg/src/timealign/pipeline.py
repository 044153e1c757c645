"""End-to-end composition: VAD post-processing -> merge -> transcription ->
forced alignment, over an interchange bundle."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .align import SegmentAlignment, align_segment
from .bundle_io import InterchangeBundle
from .merge import MergedChunk, merge_segments
from .orchestrate import FixtureBackend, transcribe_chunks
from .types import AlignedWord, PipelineConfig, SpeechSegment, TranscriptSegment
from .vad import BinarizeParams, apply_min_durations, binarize_cut

log = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    segments: list[SpeechSegment] = field(default_factory=list)
    chunks: list[MergedChunk] = field(default_factory=list)
    transcripts: list[TranscriptSegment] = field(default_factory=list)
    alignments: list[SegmentAlignment] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def words(self) -> list[AlignedWord]:
        return [w for a in self.alignments for w in a.words]


def segment_bundle(
    bundle: InterchangeBundle, config: PipelineConfig
) -> list[MergedChunk]:
    """VAD binarize + min-duration smoothing + merge, from bundle scores."""
    params = BinarizeParams(
        onset=config.onset_threshold,
        offset=config.offset_threshold,
        max_duration=config.max_chunk,
        min_duration_on=config.min_duration_on,
        min_duration_off=config.min_duration_off,
    )
    segs = binarize_cut(bundle.scores, params)
    segs = apply_min_durations(segs, config.min_duration_on, config.min_duration_off)
    return merge_segments(segs, config.merge_threshold)


def run_pipeline(
    bundle: InterchangeBundle,
    config: PipelineConfig,
    skip_failed: bool = False,
) -> PipelineResult:
    """Run the full pipeline using the bundle's fixture transcripts/logits
    as the ASR and phoneme-recognition backends."""
    result = PipelineResult()
    chunks = segment_bundle(bundle, config)
    result.chunks = chunks
    result.segments = [s for c in chunks for s in c.segments]

    backend = FixtureBackend(
        {c.span: c.transcript or "" for c in bundle.chunks}
    )
    result.transcripts = transcribe_chunks(
        chunks,
        backend,
        config.batch_size,
        max_chunk=config.max_chunk,
        skip_failed=skip_failed,
    )

    logits_by_span = {
        (round(c.span[0], 6), round(c.span[1], 6)): c.logits for c in bundle.chunks
    }
    for i, transcript in enumerate(result.transcripts):
        key = (round(transcript.segment.start, 6), round(transcript.segment.end, 6))
        logits = logits_by_span.get(key)
        if logits is None:
            result.alignments.append(SegmentAlignment())
            result.warnings.append(
                f"chunk {i} span {key} has no logits; skipping alignment"
            )
            continue
        alignment = align_segment(transcript, logits)
        if alignment.error is not None:
            result.warnings.append(f"chunk {i}: {alignment.error}")
        result.warnings.extend(f"chunk {i}: {w}" for w in alignment.warnings)
        result.alignments.append(alignment)
    return result
