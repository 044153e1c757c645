"""Batched, order-preserving transcription of merged chunks through a
pluggable ASR backend.

Backends transcribe a batch of audio windows positionally; they must be
stateless across calls (no conditioning on previous text) so that results
are independent of batch composition. The orchestrator may dispatch batches
concurrently but always presents results in input order.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .merge import MergedChunk
from .types import PipelineError, SpeechSegment, TranscriptSegment

log = logging.getLogger(__name__)


class BackendError(PipelineError):
    """A backend failed for a chunk; carries the chunk index."""

    def __init__(self, chunk_index: int, cause: Exception):
        self.chunk_index = chunk_index
        self.cause = cause
        super().__init__(f"backend failed on chunk {chunk_index}: {cause}")


class ChunkTooLong(PipelineError):
    """A chunk span exceeds the backend's maximum input duration."""


class MissingFixtureEntry(PipelineError):
    """Fixture backend was queried with a span absent from its manifest."""


class AsrBackend(ABC):
    """Contract for batch transcription backends.

    Implementations must be stateless across calls: the text for a chunk may
    not depend on the other chunks in the batch or on call order, and
    decoding must run without previous-text conditioning and without
    timestamp tokens. ``concurrency_safe`` declares whether the orchestrator
    may invoke the backend from multiple threads at once.
    """

    concurrency_safe: bool = False

    @abstractmethod
    def transcribe_batch(self, chunks: Sequence[MergedChunk]) -> list[str]:
        """Return one text per chunk, positionally aligned."""


def _span_key(start: float, end: float) -> tuple[float, float]:
    # tolerate float noise between computed spans and JSON-parsed spans
    return (round(start, 6), round(end, 6))


class FixtureBackend(AsrBackend):
    """Deterministic backend backed by a span -> text manifest."""

    concurrency_safe = True

    def __init__(self, entries: dict[tuple[float, float], str]):
        self._entries = {_span_key(a, b): t for (a, b), t in entries.items()}

    def transcribe_batch(self, chunks: Sequence[MergedChunk]) -> list[str]:
        out = []
        for chunk in chunks:
            key = _span_key(chunk.start, chunk.end)
            if key not in self._entries:
                raise MissingFixtureEntry(
                    f"no fixture transcript for span ({chunk.start}, {chunk.end})"
                )
            out.append(self._entries[key])
        return out


def transcribe_chunks(
    chunks: Sequence[MergedChunk],
    backend: AsrBackend,
    batch_size: int,
    max_chunk: float | None = None,
    skip_failed: bool = False,
    parallelism: int = 1,
) -> list[TranscriptSegment]:
    """Transcribe chunks in batches of ``batch_size``, preserving order.

    Invokes the backend exactly ceil(N / batch_size) times. On a batch
    failure: raises BackendError by default; with ``skip_failed`` the
    failing chunks get empty transcripts instead (retried one by one first,
    so one bad chunk does not blank its whole batch).
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if max_chunk is not None:
        for i, chunk in enumerate(chunks):
            if chunk.duration > max_chunk:
                raise ChunkTooLong(
                    f"chunk {i} spans {chunk.duration:.3f}s > max {max_chunk}s"
                )

    batches = [
        list(chunks[i : i + batch_size]) for i in range(0, len(chunks), batch_size)
    ]
    assert len(batches) == math.ceil(len(chunks) / batch_size) if chunks else not batches

    def run_batch(batch_index: int, batch: list[MergedChunk]) -> list[str]:
        try:
            texts = backend.transcribe_batch(batch)
        except Exception as exc:
            first = batch_index * batch_size
            if not skip_failed:
                raise BackendError(first, exc) from exc
            # isolate the failures; BackendError already counts as the batch call
            texts = []
            for j, chunk in enumerate(batch):
                try:
                    texts.extend(backend.transcribe_batch([chunk]))
                except Exception as exc2:
                    log.warning("chunk %d failed, emitting empty text: %s",
                                first + j, exc2)
                    texts.append("")
        if len(texts) != len(batch):
            raise BackendError(
                batch_index * batch_size,
                RuntimeError(
                    f"backend returned {len(texts)} texts for {len(batch)} chunks"
                ),
            )
        return texts

    if parallelism > 1 and backend.concurrency_safe and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(run_batch, i, b) for i, b in enumerate(batches)]
            results = [f.result() for f in futures]
    else:
        results = [run_batch(i, b) for i, b in enumerate(batches)]

    out: list[TranscriptSegment] = []
    for batch, texts in zip(batches, results):
        for chunk, text in zip(batch, texts):
            out.append(TranscriptSegment(SpeechSegment(chunk.start, chunk.end), text))
    return out
