"""Forced alignment of a transcript against phoneme-recognition logits.

The transcript is tokenized against the recognizer's label set, softmax is
restricted to the classes that actually occur in the transcript (plus
blank), and a blank-aware Viterbi search over the blank-expanded token
sequence finds the optimal monotone path: a dynamic-time-warp with
{stay, advance} moves on log-softmax emissions. Word timestamps come from
the first and last frame assigned to each word's tokens.

Determinism: among maximum-score paths the search prefers (a) the most
token-emitting frames, then (b) the latest possible transitions. Rule (a)
keeps a word on its token instead of drifting onto blank when emissions tie;
rule (b) pins the remaining ties.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .types import AlignedWord, LogitsMatrix, PipelineError, TranscriptSegment

log = logging.getLogger(__name__)

# labels that separate words in character-level models; consumed between
# words, assigned to none
WORD_DELIMITER_LABELS = {"|", " ", "<sep>"}


class UnalignableError(PipelineError):
    """More mandatory tokens than frames, or nothing to align."""


class DegenerateLogits(PipelineError):
    """Logits contain non-finite values."""


@dataclass(frozen=True)
class TokenizedTranscript:
    """Transcript mapped to recognizer class indices.

    ``word_spans[i]`` is the [first, last] token-index range of word i, or
    None when every character of the word is out of vocabulary.
    ``oov_chars`` records skipped characters as (word_index, char).
    """

    tokens: tuple[int, ...]
    word_spans: tuple[Optional[tuple[int, int]], ...]
    words: tuple[str, ...]
    oov_chars: tuple[tuple[int, str], ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.tokens


@dataclass(frozen=True)
class AlignmentPath:
    """Optimal monotone assignment of frames to transcript tokens.

    ``path`` pairs every frame with the current token position (blank frames
    carry the most recent token, or 0 before the first). ``emitting`` marks
    frames where the token itself is emitted rather than blank; ``probs`` is
    the emission probability of the path symbol at each frame. ``states``
    keeps the raw blank-expanded trellis states for diagnostics.
    """

    path: tuple[tuple[int, int], ...]
    emitting: tuple[bool, ...]
    probs: tuple[float, ...]
    states: tuple[int, ...]
    score: float


def tokenize_transcript(
    t: TranscriptSegment, labels: Sequence[str], blank_index: int
) -> TokenizedTranscript:
    """Map transcript words onto recognizer classes, case-folded.

    Characters with no matching label become recorded OOV positions rather
    than being dropped silently; a word whose every character is OOV gets a
    None span. Word-delimiter labels never produce tokens.
    """
    label_map: dict[str, int] = {}
    for idx, label in enumerate(labels):
        if idx == blank_index or label in WORD_DELIMITER_LABELS:
            continue
        label_map.setdefault(label.lower(), idx)

    tokens: list[int] = []
    spans: list[Optional[tuple[int, int]]] = []
    oov: list[tuple[int, str]] = []
    words = tuple(t.words)
    for wi, word in enumerate(words):
        first = len(tokens)
        for ch in word:
            idx = label_map.get(ch.lower())
            if idx is None:
                oov.append((wi, ch))
            else:
                tokens.append(idx)
        spans.append((first, len(tokens) - 1) if len(tokens) > first else None)
    return TokenizedTranscript(tuple(tokens), tuple(spans), words, tuple(oov))


def restricted_log_softmax(
    logits: LogitsMatrix, classes: Sequence[int]
) -> np.ndarray:
    """Log-softmax over a column subset, per frame.

    Returns a T x len(classes) matrix; each row exponentiates and sums to 1.
    Adding a constant to all logits of a frame leaves the result unchanged.
    """
    cols = logits.values[:, list(classes)]
    shifted = cols - cols.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _expanded(tokens: Sequence[int], blank: int) -> list[int]:
    out = [blank]
    for tok in tokens:
        out.extend((tok, blank))
    return out


def min_frames_required(tokens: Sequence[int]) -> int:
    """Tokens plus one mandatory blank between each repeated pair."""
    return len(tokens) + sum(
        1 for a, b in zip(tokens, tokens[1:]) if a == b
    )


def align(tok: TokenizedTranscript, logits: LogitsMatrix) -> AlignmentPath:
    """Blank-aware Viterbi over the restricted log-softmax emissions."""
    if tok.is_empty:
        raise UnalignableError("transcript has no in-vocabulary tokens")
    if not np.isfinite(logits.values).all():
        raise DegenerateLogits("logits contain non-finite values")
    num_frames = logits.num_frames
    if num_frames < min_frames_required(tok.tokens):
        raise UnalignableError(
            f"{len(tok.tokens)} tokens need >= {min_frames_required(tok.tokens)} "
            f"frames, got {num_frames}"
        )

    blank = logits.blank_index
    classes = sorted(set(tok.tokens)) + [blank]
    col_of = {c: i for i, c in enumerate(classes)}
    emissions = restricted_log_softmax(logits, classes)

    states = _expanded(tok.tokens, blank)
    n_states = len(states)
    sym_col = [col_of[s] for s in states]
    is_token = [j % 2 == 1 for j in range(n_states)]
    successors: list[tuple[int, ...]] = []
    for j in range(n_states):
        succ = [j]
        if j + 1 < n_states:
            succ.append(j + 1)
        if j + 2 < n_states and is_token[j] and states[j + 2] != states[j]:
            succ.append(j + 2)
        successors.append(tuple(succ))
    end_states = {n_states - 1, n_states - 2}

    neg = (-np.inf, -1)
    # value[j] = best (log-prob, emitting-frame count) from this frame at
    # state j to a valid end state
    value = [neg] * n_states
    for j in range(n_states):
        if j in end_states:
            value[j] = (emissions[num_frames - 1, sym_col[j]], int(is_token[j]))
    suffix = [value]
    for f in range(num_frames - 2, -1, -1):
        prev = suffix[-1]
        cur = [neg] * n_states
        for j in range(n_states):
            best = max(prev[s] for s in successors[j])
            if best[0] > -np.inf:
                cur[j] = (
                    emissions[f, sym_col[j]] + best[0],
                    int(is_token[j]) + best[1],
                )
        suffix.append(cur)
    suffix.reverse()

    start_options = [j for j in (0, 1) if j < n_states]
    best_start = max(suffix[0][j] for j in start_options)
    if best_start[0] == -np.inf:
        raise UnalignableError("no feasible alignment path")
    j = min(s for s in start_options if suffix[0][s] == best_start)

    state_seq = [j]
    for f in range(num_frames - 1):
        target = max(suffix[f + 1][s] for s in successors[j])
        j = min(s for s in successors[j] if suffix[f + 1][s] == target)
        state_seq.append(j)

    num_tokens = len(tok.tokens)
    pairs = []
    emitting = []
    probs = []
    for f, s in enumerate(state_seq):
        tp = min(max((s - 1) // 2, 0), num_tokens - 1)
        pairs.append((tp, f))
        emitting.append(bool(is_token[s]))
        probs.append(float(np.exp(emissions[f, sym_col[s]])))
    return AlignmentPath(
        path=tuple(pairs),
        emitting=tuple(emitting),
        probs=tuple(probs),
        states=tuple(state_seq),
        score=float(best_start[0]),
    )


def words_from_path(
    tok: TokenizedTranscript, path: AlignmentPath, logits: LogitsMatrix
) -> list[AlignedWord]:
    """Word timestamps from the first/last frame of each word's tokens.

    OOV words inherit (previous aligned word's end, next aligned word's
    start), falling back to the segment bounds at the edges, and are marked
    ``inferred``.
    """
    fp = logits.frame_period
    origin = logits.origin

    # emitting frames (and their emission probs) grouped per word
    frames_per_word: dict[int, list[tuple[int, float]]] = {}
    word_of_token: dict[int, int] = {}
    for wi, span in enumerate(tok.word_spans):
        if span is not None:
            for ti in range(span[0], span[1] + 1):
                word_of_token[ti] = wi
    for (tp, f), emit, prob in zip(path.path, path.emitting, path.probs):
        if emit:
            frames_per_word.setdefault(word_of_token[tp], []).append((f, prob))

    aligned: list[Optional[AlignedWord]] = []
    for wi, word in enumerate(tok.words):
        frames = frames_per_word.get(wi)
        if tok.word_spans[wi] is None or not frames:
            aligned.append(None)
            continue
        aligned.append(
            AlignedWord(
                word=word,
                start=origin + frames[0][0] * fp,
                end=origin + (frames[-1][0] + 1) * fp,
                score=float(np.mean([p for _, p in frames])),
            )
        )

    out: list[AlignedWord] = []
    for wi, word in enumerate(aligned):
        if word is not None:
            out.append(word)
            continue
        prev_end = origin
        for w in reversed(aligned[:wi]):
            if w is not None:
                prev_end = w.end
                break
        next_start = logits.end
        for w in aligned[wi + 1 :]:
            if w is not None:
                next_start = w.start
                break
        out.append(
            AlignedWord(
                word=tok.words[wi],
                start=min(prev_end, next_start),
                end=max(prev_end, next_start),
                score=0.0,
                inferred=True,
            )
        )
    return out


@dataclass
class SegmentAlignment:
    """Per-segment alignment result with collected, non-fatal diagnostics."""

    words: list[AlignedWord] = field(default_factory=list)
    error: Optional[Exception] = None
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None


def align_segment(
    transcript: TranscriptSegment, logits: LogitsMatrix
) -> SegmentAlignment:
    """Tokenize + align + extract words for one (transcript, logits) pair."""
    result = SegmentAlignment()
    tok = tokenize_transcript(transcript, logits.labels, logits.blank_index)
    for wi, ch in tok.oov_chars:
        result.warnings.append(
            f"character {ch!r} of word {tok.words[wi]!r} not in label set"
        )
    if tok.is_empty:
        if tok.words:
            result.warnings.append(
                "transcript is entirely out of vocabulary; no words aligned"
            )
        return result
    try:
        path = align(tok, logits)
    except PipelineError as exc:
        result.error = exc
        return result
    result.words = words_from_path(tok, path, logits)
    return result


def align_segments_batched(
    pairs: Sequence[tuple[TranscriptSegment, LogitsMatrix]],
    parallelism: int = 1,
) -> list[SegmentAlignment]:
    """Align many segments, in parallel, preserving input order.

    Per-pair failures are collected on the result, never raised, so one bad
    segment does not lose the rest.
    """
    if parallelism > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(align_segment, t, l) for t, l in pairs]
            return [f.result() for f in futures]
    return [align_segment(t, l) for t, l in pairs]
