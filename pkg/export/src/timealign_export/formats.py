"""Writers for the interchange bundle consumed by the pipeline CLI.

Kept self-contained on purpose: this package talks to the pipeline through
its file formats and CLI only, so the byte layout is reproduced here.

Binary files: one JSON header line terminated by \\n, then little-endian
float32 payload. Manifest: plain JSON with relative sidecar references.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1


def write_score_file(
    path: str | Path, scores: np.ndarray, frame_period: float, origin: float = 0.0
) -> None:
    header = {
        "version": FORMAT_VERSION,
        "kind": "scores",
        "frame_period": frame_period,
        "origin": origin,
        "count": int(len(scores)),
    }
    payload = np.asarray(scores, dtype="<f4").tobytes()
    Path(path).write_bytes(
        json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + payload
    )


def write_logits_file(
    path: str | Path,
    values: np.ndarray,
    labels: list[str],
    blank_index: int,
    frame_period: float,
    origin: float,
) -> None:
    values = np.asarray(values)
    t, k = values.shape
    if len(labels) != k:
        raise ValueError(f"{len(labels)} labels for {k} columns")
    header = {
        "version": FORMAT_VERSION,
        "kind": "logits",
        "frame_period": frame_period,
        "origin": origin,
        "T": int(t),
        "K": int(k),
        "labels": list(labels),
        "blank_index": int(blank_index),
    }
    payload = values.astype("<f4").tobytes()
    Path(path).write_bytes(
        json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + payload
    )


def load_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text("utf-8"))


def save_manifest(path: str | Path, manifest: dict) -> None:
    manifest.setdefault("version", FORMAT_VERSION)
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8"
    )


def new_manifest(recording_id: str, audio_duration_s: float) -> dict:
    return {
        "version": FORMAT_VERSION,
        "recording_id": recording_id,
        "audio_duration_s": audio_duration_s,
        "vad": None,
        "chunks": [],
    }


def span_key(span) -> tuple[float, float]:
    return (round(float(span[0]), 6), round(float(span[1]), 6))


def upsert_chunk(manifest: dict, span, **fields) -> dict:
    """Find (or create) the chunk entry for ``span`` and merge fields."""
    key = span_key(span)
    for entry in manifest.setdefault("chunks", []):
        if span_key(entry["span"]) == key:
            entry.update(fields)
            return entry
    entry = {"span": [float(span[0]), float(span[1])], **fields}
    manifest["chunks"].append(entry)
    manifest["chunks"].sort(key=lambda e: e["span"][0])
    return entry
