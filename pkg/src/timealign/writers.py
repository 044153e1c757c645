"""Output writers for aligned words: SRT, VTT, JSON, TSV.

All writers are byte-deterministic for identical input. Subtitle formats
emit one cue per word; JSON preserves full float precision so a written
file reads back structurally equal.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .types import AlignedWord

FORMATS = ("srt", "vtt", "json", "tsv")


def format_timestamp(seconds: float, decimal_sep: str) -> str:
    """HH:MM:SS<sep>mmm with millisecond rounding."""
    total_ms = round(seconds * 1000)
    ms = total_ms % 1000
    total_s = total_ms // 1000
    h, rem = divmod(total_s, 3600)
    m, s = divmod(rem, 60)
    return f"{h:02d}:{m:02d}:{s:02d}{decimal_sep}{ms:03d}"


def render_srt(words: Sequence[AlignedWord]) -> str:
    cues = []
    for i, w in enumerate(words, start=1):
        start = format_timestamp(w.start, ",")
        end = format_timestamp(w.end, ",")
        cues.append(f"{i}\n{start} --> {end}\n{w.word}\n")
    return "\n".join(cues)


def render_vtt(words: Sequence[AlignedWord]) -> str:
    lines = ["WEBVTT", ""]
    for w in words:
        start = format_timestamp(w.start, ".")
        end = format_timestamp(w.end, ".")
        lines.append(f"{start} --> {end}\n{w.word}\n")
    return "\n".join(lines)


def render_json(words: Sequence[AlignedWord]) -> str:
    payload = {
        "words": [
            {
                "word": w.word,
                "start": w.start,
                "end": w.end,
                "score": w.score,
                "inferred": w.inferred,
            }
            for w in words
        ]
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_tsv(words: Sequence[AlignedWord]) -> str:
    lines = ["word\tstart\tend\tscore\tinferred"]
    for w in words:
        lines.append(
            f"{w.word}\t{w.start!r}\t{w.end!r}\t{w.score!r}\t{int(w.inferred)}"
        )
    return "\n".join(lines) + "\n"


_RENDERERS = {
    "srt": render_srt,
    "vtt": render_vtt,
    "json": render_json,
    "tsv": render_tsv,
}


def write_outputs(
    words: Sequence[AlignedWord], fmt: str, path: str | Path
) -> None:
    if fmt not in _RENDERERS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    Path(path).write_text(_RENDERERS[fmt](list(words)), "utf-8", newline="\n")


def read_words_json(path: str | Path) -> list[AlignedWord]:
    """Inverse of the JSON writer."""
    payload = json.loads(Path(path).read_text("utf-8"))
    return [
        AlignedWord(
            word=e["word"],
            start=e["start"],
            end=e["end"],
            score=e.get("score", 0.0),
            inferred=e.get("inferred", False),
        )
        for e in payload["words"]
    ]


def read_ctm(path: str | Path) -> list[AlignedWord]:
    """Reference alignments as `word start_sec end_sec` lines."""
    words = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(
                f"{path}:{lineno}: expected 'word start end', got {line!r}"
            )
        words.append(
            AlignedWord(word=parts[0], start=float(parts[1]), end=float(parts[2]))
        )
    return words
