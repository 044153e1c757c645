"""Export operations: run an engine over audio and update a bundle manifest.

The manifest plus its sidecar files are the only contract with the pipeline
package; each exporter leaves the manifest loadable by the pipeline's
`timealign run` at every step.
"""

from __future__ import annotations

import logging
from pathlib import Path

from . import formats
from .audio import read_wav, slice_span
from .engines import ModelLoadError  # re-exported for callers

__all__ = [
    "ModelLoadError",
    "export_vad",
    "export_asr",
    "export_logits",
    "load_spans",
]

log = logging.getLogger("timealign_export")


def _load_or_new_manifest(manifest_path: Path, audio_path: Path, duration: float) -> dict:
    if manifest_path.exists():
        manifest = formats.load_manifest(manifest_path)
    else:
        manifest = formats.new_manifest(audio_path.stem, duration)
    manifest["audio_duration_s"] = duration
    return manifest


def load_spans(chunks_path: str | Path) -> list[tuple[float, float]]:
    """Read chunk spans from `timealign segment` output."""
    payload = formats.load_manifest(chunks_path)
    return [(float(c["span"][0]), float(c["span"][1])) for c in payload["chunks"]]


def export_vad(audio_path: str | Path, manifest_path: str | Path, engine) -> Path:
    """Run VAD over the whole file; write the score sidecar, update manifest."""
    audio_path, manifest_path = Path(audio_path), Path(manifest_path)
    samples, rate = read_wav(audio_path)
    duration = len(samples) / rate
    scores = engine.scores(samples, rate)
    score_ref = f"{audio_path.stem}.vad.bin"
    formats.write_score_file(
        manifest_path.parent / score_ref, scores, engine.frame_period
    )
    manifest = _load_or_new_manifest(manifest_path, audio_path, duration)
    manifest["vad"] = score_ref
    formats.save_manifest(manifest_path, manifest)
    log.info("vad: %d scores at %.3fs -> %s", len(scores), engine.frame_period, score_ref)
    return manifest_path


def export_asr(
    audio_path: str | Path,
    manifest_path: str | Path,
    spans: list[tuple[float, float]],
    engine,
    max_span: float = 30.0,
) -> Path:
    """Transcribe each chunk span; record transcripts (and failures) in the
    manifest along with the decoding flags used."""
    audio_path, manifest_path = Path(audio_path), Path(manifest_path)
    samples, rate = read_wav(audio_path)
    manifest = _load_or_new_manifest(manifest_path, audio_path, len(samples) / rate)
    manifest["asr"] = {"engine": engine.name, **engine.decode_flags}
    for span in spans:
        if span[1] - span[0] > max_span:
            raise ValueError(f"span {span} exceeds {max_span}s")
        try:
            text = engine.transcribe(slice_span(samples, rate, *span), rate)
            formats.upsert_chunk(manifest, span, transcript=text)
        except Exception as exc:
            log.error("asr failed on span %s: %s", span, exc)
            formats.upsert_chunk(manifest, span, transcript=None, error=str(exc))
    formats.save_manifest(manifest_path, manifest)
    return manifest_path


def export_logits(
    audio_path: str | Path,
    manifest_path: str | Path,
    spans: list[tuple[float, float]],
    engine,
    max_span: float = 30.0,
) -> Path:
    """Extract raw (pre-softmax) logits per chunk span into sidecar files."""
    audio_path, manifest_path = Path(audio_path), Path(manifest_path)
    samples, rate = read_wav(audio_path)
    manifest = _load_or_new_manifest(manifest_path, audio_path, len(samples) / rate)
    for i, span in enumerate(spans):
        if span[1] - span[0] > max_span:
            raise ValueError(f"span {span} exceeds {max_span}s")
        try:
            values = engine.logits(slice_span(samples, rate, *span), rate)
        except Exception as exc:
            log.error("logits failed on span %s: %s", span, exc)
            formats.upsert_chunk(manifest, span, logits=None, error=str(exc))
            continue
        ref = f"{audio_path.stem}.logits{i}.bin"
        formats.write_logits_file(
            manifest_path.parent / ref,
            values,
            list(engine.labels),
            engine.blank_index,
            engine.frame_period,
            origin=span[0],
        )
        formats.upsert_chunk(manifest, span, logits=ref)
    formats.save_manifest(manifest_path, manifest)
    return manifest_path
