"""Transcription and word-segmentation evaluation.

Covers word error rate (with its insertion component), 5-gram duplicate
counting as a repetition proxy, and collar-based word segmentation
precision/recall against reference word timings.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Sequence

from .types import AlignedWord, PipelineError

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


class EmptyReference(PipelineError):
    """WER is undefined for an empty reference against a non-empty hypothesis."""


@dataclass(frozen=True)
class WerResult:
    substitutions: int
    insertions: int
    deletions: int
    num_reference: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def wer(self) -> float:
        return self.errors / self.num_reference if self.num_reference else 0.0

    @property
    def ier(self) -> float:
        return self.insertions / self.num_reference if self.num_reference else 0.0


@dataclass(frozen=True)
class PrResult:
    precision: float
    recall: float
    matches: int


def normalize_text(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace.

    Applied to transcripts before WER when normalization is enabled; never
    applied to segmentation matching, which is exact-string by definition.
    """
    text = text.lower().translate(_PUNCT_TABLE)
    return re.sub(r"\s+", " ", text).strip()


def word_error_rate(ref: Sequence[str], hyp: Sequence[str]) -> WerResult:
    """Word-level Levenshtein alignment with uniform costs.

    wer = (S + I + D) / |ref|. Empty reference with empty hypothesis is a
    perfect score; empty reference with a non-empty hypothesis is an error.
    """
    if not ref:
        if hyp:
            raise EmptyReference("reference is empty but hypothesis is not")
        return WerResult(0, 0, 0, 0)
    n, m = len(ref), len(hyp)
    # dist[i][j] = edit distance between ref[:i] and hyp[:j]
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        ri = ref[i - 1]
        row, prev = dist[i], dist[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ri != hyp[j - 1])
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)

    # backtrace, preferring matches/substitutions for determinism
    s = i_ = d = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + (
            ref[i - 1] != hyp[j - 1]
        ):
            s += ref[i - 1] != hyp[j - 1]
            i, j = i - 1, j - 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            d += 1
            i -= 1
        else:
            i_ += 1
            j -= 1
    return WerResult(s, i_, d, n)


def ngram_duplicates(words: Sequence[str], n: int = 5) -> int:
    """Number of n-gram instances beyond each gram's first occurrence."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(words) < n:
        return 0
    grams = [tuple(words[i : i + n]) for i in range(len(words) - n + 1)]
    return len(grams) - len(set(grams))


def segmentation_pr(
    ref: Sequence[AlignedWord],
    hyp: Sequence[AlignedWord],
    collar: float,
) -> PrResult:
    """Collar-based one-to-one word matching precision/recall.

    A candidate match requires exact string equality and intersection of
    [hyp.start, hyp.end] with [ref.start - collar, ref.end + collar].
    Candidates are committed greedily by increasing |hyp.start - ref.start|,
    each word matched at most once.
    """
    if collar < 0:
        raise ValueError(f"collar must be >= 0, got {collar}")
    candidates = []
    for ri, r in enumerate(ref):
        for hi, h in enumerate(hyp):
            if r.word != h.word:
                continue
            if h.start <= r.end + collar and r.start - collar <= h.end:
                candidates.append((abs(h.start - r.start), ri, hi))
    candidates.sort()
    ref_used: set[int] = set()
    hyp_used: set[int] = set()
    matches = 0
    for _, ri, hi in candidates:
        if ri in ref_used or hi in hyp_used:
            continue
        ref_used.add(ri)
        hyp_used.add(hi)
        matches += 1
    precision = matches / len(hyp) if hyp else 1.0
    recall = matches / len(ref) if ref else 1.0
    return PrResult(precision, recall, matches)
