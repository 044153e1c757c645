import numpy as np
import pytest

from timealign.metrics import (
    EmptyReference,
    ngram_duplicates,
    normalize_text,
    segmentation_pr,
    word_error_rate,
)
from timealign.types import AlignedWord

from oracles import wer_reference


def word(w, a, b):
    return AlignedWord(w, a, b)


class TestWordErrorRate:
    def test_identity(self):
        r = word_error_rate("the cat sat".split(), "the cat sat".split())
        assert r.wer == 0.0
        assert (r.substitutions, r.insertions, r.deletions) == (0, 0, 0)

    def test_single_substitution(self):
        r = word_error_rate("the cat sat".split(), "the mat sat".split())
        assert r.wer == pytest.approx(1 / 3)
        assert r.substitutions == 1

    def test_insertion_and_ier(self):
        r = word_error_rate("a b".split(), "a x b".split())
        assert r.wer == pytest.approx(0.5)
        assert r.insertions == 1
        assert r.ier == pytest.approx(0.5)

    def test_deletion(self):
        r = word_error_rate("a b c".split(), "a c".split())
        assert r.deletions == 1

    def test_empty_ref_empty_hyp(self):
        assert word_error_rate([], []).wer == 0.0

    def test_empty_ref_nonempty_hyp(self):
        with pytest.raises(EmptyReference):
            word_error_rate([], ["x"])

    def test_counts_sum_to_edit_distance_vs_reference(self):
        rng = np.random.default_rng(41)
        vocab = list("abcdef")
        for _ in range(300):
            ref = [str(w) for w in rng.choice(vocab, size=rng.integers(1, 21))]
            hyp = [str(w) for w in rng.choice(vocab, size=rng.integers(0, 21))]
            r = word_error_rate(ref, hyp)
            assert r.errors == wer_reference(ref, hyp)


class TestNgramDuplicates:
    def test_five_unique_words(self):
        assert ngram_duplicates("a b c d e".split(), 5) == 0

    def test_repeated_phrase(self):
        # 15 words give 11 sliding 5-grams over 5 distinct grams:
        # (a,b,c,d,e) occurs 3x (2 repeats), the other four occur 2x each
        words = "a b c d e".split() * 3
        assert ngram_duplicates(words, 5) == 6

    def test_empty(self):
        assert ngram_duplicates([], 5) == 0

    def test_shorter_than_n(self):
        assert ngram_duplicates(["a", "b"], 5) == 0

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            ngram_duplicates(["a"], 0)

    def test_matches_brute_force_sliding_count(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            words = [str(w) for w in rng.choice(list("ab"), size=rng.integers(0, 30))]
            n = int(rng.integers(1, 6))
            grams = [tuple(words[i : i + n]) for i in range(len(words) - n + 1)]
            seen = set()
            dup = 0
            for g in grams:
                if g in seen:
                    dup += 1
                seen.add(g)
            assert ngram_duplicates(words, n) == dup


class TestSegmentationPr:
    def test_identical_lists(self):
        words = [word("a", 0.0, 0.5), word("b", 1.0, 1.5)]
        r = segmentation_pr(words, words, 0.2)
        assert (r.precision, r.recall, r.matches) == (1.0, 1.0, 2)

    def test_collar_expands_reference_interval(self):
        hyp = [word("cat", 1.00, 1.30)]
        ref = [word("cat", 1.45, 1.80)]
        assert segmentation_pr(ref, hyp, 0.2).matches == 1
        assert segmentation_pr(ref, hyp, 0.1).matches == 0

    def test_exact_string_match_required(self):
        hyp = [word("Cat", 1.0, 1.5)]
        ref = [word("cat", 1.0, 1.5)]
        assert segmentation_pr(ref, hyp, 0.2).matches == 0

    def test_one_to_one_matching(self):
        ref = [word("a", 0.0, 1.0)]
        hyp = [word("a", 0.0, 1.0), word("a", 0.1, 1.1)]
        r = segmentation_pr(ref, hyp, 0.2)
        assert r.matches == 1
        assert r.precision == 0.5
        assert r.recall == 1.0

    def test_greedy_prefers_nearest_start(self):
        ref = [word("a", 1.0, 2.0), word("a", 5.0, 6.0)]
        hyp = [word("a", 5.1, 6.1), word("a", 0.9, 1.9)]
        assert segmentation_pr(ref, hyp, 0.2).matches == 2

    def test_empty_hyp_has_unit_precision(self):
        r = segmentation_pr([word("a", 0, 1)], [], 0.2)
        assert (r.precision, r.recall, r.matches) == (1.0, 0.0, 0)

    def test_empty_ref_has_unit_recall(self):
        r = segmentation_pr([], [word("a", 0, 1)], 0.2)
        assert (r.precision, r.recall, r.matches) == (0.0, 1.0, 0)

    def test_collar_monotonicity(self):
        rng = np.random.default_rng(47)
        for _ in range(100):
            ref = _random_words(rng)
            hyp = _random_words(rng)
            c1 = float(rng.uniform(0, 0.5))
            c2 = c1 + float(rng.uniform(0, 0.5))
            r1 = segmentation_pr(ref, hyp, c1)
            r2 = segmentation_pr(ref, hyp, c2)
            assert r2.precision >= r1.precision
            assert r2.recall >= r1.recall


def _random_words(rng, vocab=("a", "b", "c")):
    t = 0.0
    out = []
    for _ in range(int(rng.integers(0, 12))):
        t += float(rng.uniform(0.0, 0.5))
        dur = float(rng.uniform(0.05, 0.6))
        out.append(AlignedWord(str(rng.choice(vocab)), t, t + dur))
        t += dur
    return out


class TestNormalizeText:
    def test_lowercase_strip_punct_collapse(self):
        assert normalize_text("  The CAT, sat!  down ") == "the cat sat down"

    def test_empty(self):
        assert normalize_text("") == ""
