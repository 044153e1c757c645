"""Interchange bundle: a JSON manifest plus sidecar binary score/logits
files, so fixtures stay inspectable while payloads stay compact.

Binary layout, shared by scores and logits:
    line 1: JSON header terminated by a single \\n
    rest:   little-endian float32 payload

Score header:  {"version": 1, "kind": "scores", "frame_period": ...,
                "origin": ..., "count": N}
Logits header: {"version": 1, "kind": "logits", "frame_period": ...,
                "origin": ..., "T": ..., "K": ..., "labels": [...],
                "blank_index": ...}  (payload row-major, T rows x K cols)

Manifest: {"version": 1, "recording_id": ..., "audio_duration_s": ...,
           "vad": "scores-file", "chunks": [{"span": [a, b],
           "transcript": "...", "logits": "logits-file"}]}

File references are relative to the manifest's directory. Readers reject
unknown major versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .types import LogitsMatrix, PipelineError, ScoreTrack

FORMAT_VERSION = 1


class MalformedHeader(PipelineError):
    """A header is missing or has an invalid field; names the field."""


class PayloadLengthMismatch(PipelineError):
    """Binary payload length disagrees with the header."""


class UnsupportedVersion(PipelineError):
    """Header declares a major version this reader does not know."""


@dataclass(frozen=True)
class BundleChunk:
    span: tuple[float, float]
    transcript: Optional[str] = None
    logits: Optional[LogitsMatrix] = None


@dataclass(frozen=True)
class InterchangeBundle:
    recording_id: str
    audio_duration_s: float
    scores: ScoreTrack
    chunks: tuple[BundleChunk, ...]


def _check_version(header: dict, path: Path) -> None:
    version = header.get("version")
    if not isinstance(version, int):
        raise MalformedHeader(f"{path}: field 'version' missing or not an integer")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"{path}: version {version} not supported (expected {FORMAT_VERSION})"
        )


def _read_header_and_payload(path: Path) -> tuple[dict, bytes]:
    raw = path.read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise MalformedHeader(f"{path}: no header line")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"{path}: header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict):
        raise MalformedHeader(f"{path}: header must be a JSON object")
    return header, raw[newline + 1 :]


def _require_number(header: dict, field: str, path: Path) -> float:
    value = header.get(field)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise MalformedHeader(f"{path}: field {field!r} missing or not a number")
    return float(value)


def read_score_file(path: str | Path) -> ScoreTrack:
    path = Path(path)
    header, payload = _read_header_and_payload(path)
    _check_version(header, path)
    if header.get("kind") != "scores":
        raise MalformedHeader(f"{path}: field 'kind' is not 'scores'")
    count = header.get("count")
    if not isinstance(count, int) or count < 0:
        raise MalformedHeader(f"{path}: field 'count' missing or invalid")
    if len(payload) != count * 4:
        raise PayloadLengthMismatch(
            f"{path}: payload is {len(payload)} bytes, header count {count} "
            f"needs {count * 4}"
        )
    scores = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    try:
        return ScoreTrack(
            scores=scores,
            frame_period=_require_number(header, "frame_period", path),
            origin=_require_number(header, "origin", path),
        )
    except ValueError as exc:
        raise MalformedHeader(f"{path}: {exc}") from exc


def read_logits_file(path: str | Path) -> LogitsMatrix:
    path = Path(path)
    header, payload = _read_header_and_payload(path)
    _check_version(header, path)
    if header.get("kind") != "logits":
        raise MalformedHeader(f"{path}: field 'kind' is not 'logits'")
    t, k = header.get("T"), header.get("K")
    if not isinstance(t, int) or t < 1:
        raise MalformedHeader(f"{path}: field 'T' missing or invalid")
    if not isinstance(k, int) or k < 2:
        raise MalformedHeader(f"{path}: field 'K' missing or invalid")
    labels = header.get("labels")
    if not isinstance(labels, list) or len(labels) != k or not all(
        isinstance(l, str) for l in labels
    ):
        raise MalformedHeader(f"{path}: field 'labels' must list K strings")
    blank_index = header.get("blank_index")
    if not isinstance(blank_index, int) or not 0 <= blank_index < k:
        raise MalformedHeader(f"{path}: field 'blank_index' missing or out of range")
    if len(payload) != t * k * 4:
        raise PayloadLengthMismatch(
            f"{path}: payload is {len(payload)} bytes, header T*K={t * k} "
            f"needs {t * k * 4}"
        )
    values = np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(t, k)
    try:
        return LogitsMatrix(
            values=values,
            labels=tuple(labels),
            blank_index=blank_index,
            frame_period=_require_number(header, "frame_period", path),
            origin=_require_number(header, "origin", path),
        )
    except ValueError as exc:
        raise MalformedHeader(f"{path}: {exc}") from exc


def read_bundle(path: str | Path) -> InterchangeBundle:
    """Read and fully validate a bundle manifest and its sidecar files."""
    path = Path(path)
    try:
        manifest = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"{path}: cannot parse manifest: {exc}") from exc
    if not isinstance(manifest, dict):
        raise MalformedHeader(f"{path}: manifest must be a JSON object")
    _check_version(manifest, path)
    recording_id = manifest.get("recording_id")
    if not isinstance(recording_id, str):
        raise MalformedHeader(f"{path}: field 'recording_id' missing or not a string")
    duration = _require_number(manifest, "audio_duration_s", path)
    vad_ref = manifest.get("vad")
    if not isinstance(vad_ref, str):
        raise MalformedHeader(f"{path}: field 'vad' missing or not a string")
    base = path.parent
    scores = read_score_file(base / vad_ref)

    chunks = []
    raw_chunks = manifest.get("chunks", [])
    if not isinstance(raw_chunks, list):
        raise MalformedHeader(f"{path}: field 'chunks' must be a list")
    for i, entry in enumerate(raw_chunks):
        if not isinstance(entry, dict):
            raise MalformedHeader(f"{path}: chunks[{i}] must be an object")
        span = entry.get("span")
        if (
            not isinstance(span, list)
            or len(span) != 2
            or not all(isinstance(v, (int, float)) for v in span)
            or not span[0] < span[1]
        ):
            raise MalformedHeader(f"{path}: chunks[{i}].span must be [start, end]")
        transcript = entry.get("transcript")
        if transcript is not None and not isinstance(transcript, str):
            raise MalformedHeader(f"{path}: chunks[{i}].transcript must be a string")
        logits_ref = entry.get("logits")
        logits = None
        if logits_ref is not None:
            if not isinstance(logits_ref, str):
                raise MalformedHeader(f"{path}: chunks[{i}].logits must be a string")
            logits = read_logits_file(base / logits_ref)
        chunks.append(
            BundleChunk(
                span=(float(span[0]), float(span[1])),
                transcript=transcript,
                logits=logits,
            )
        )
    return InterchangeBundle(
        recording_id=recording_id,
        audio_duration_s=duration,
        scores=scores,
        chunks=tuple(chunks),
    )


def write_score_file(path: str | Path, track: ScoreTrack) -> None:
    header = {
        "version": FORMAT_VERSION,
        "kind": "scores",
        "frame_period": track.frame_period,
        "origin": track.origin,
        "count": len(track),
    }
    payload = np.asarray(track.scores, dtype="<f4").tobytes()
    Path(path).write_bytes(
        json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + payload
    )


def write_logits_file(path: str | Path, logits: LogitsMatrix) -> None:
    header = {
        "version": FORMAT_VERSION,
        "kind": "logits",
        "frame_period": logits.frame_period,
        "origin": logits.origin,
        "T": logits.num_frames,
        "K": logits.num_classes,
        "labels": list(logits.labels),
        "blank_index": logits.blank_index,
    }
    payload = np.asarray(logits.values, dtype="<f4").tobytes()
    Path(path).write_bytes(
        json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + payload
    )


def write_manifest(
    path: str | Path,
    recording_id: str,
    audio_duration_s: float,
    vad_ref: str,
    chunks: list[dict],
) -> None:
    """Write a manifest; ``chunks`` entries carry span/transcript/logits keys."""
    manifest = {
        "version": FORMAT_VERSION,
        "recording_id": recording_id,
        "audio_duration_s": audio_duration_s,
        "vad": vad_ref,
        "chunks": chunks,
    }
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8"
    )
