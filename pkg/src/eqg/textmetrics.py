"""Sequence-overlap metrics: LCS, ROUGE-L, and corpus-level BLEU.

All metrics operate on pre-tokenized, lowercase token lists and return
fractions in [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter

ROUGE_BETA_SQ = 1.44  # conventional ROUGE-L beta^2


def lcs_length(a, b):
    """Length of the longest common subsequence of two token lists."""
    if not a or not b:
        return 0
    # single-row DP, O(|a| * |b|) time, O(|b|) space
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_recall(candidate, answer):
    """LCS(candidate, answer) / |answer|; the key-sentence selection score."""
    if not answer:
        raise ValueError("rouge_l_recall undefined for an empty answer")
    return lcs_length(candidate, answer) / len(answer)


def rouge_l_f(candidate, reference, beta_sq=ROUGE_BETA_SQ):
    """ROUGE-L F-measure for one pair."""
    if not candidate or not reference:
        raise ValueError("rouge_l_f requires non-empty candidate and reference")
    lcs = lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    p = lcs / len(candidate)
    r = lcs / len(reference)
    return (1.0 + beta_sq) * p * r / (r + beta_sq * p)


def corpus_rouge_l(candidates, references):
    """Mean per-pair ROUGE-L F over the corpus."""
    if len(candidates) != len(references):
        raise ValueError(f"corpus_rouge_l: {len(candidates)} candidates vs "
                         f"{len(references)} references")
    if not candidates:
        raise ValueError("corpus_rouge_l: empty corpus")
    return sum(rouge_l_f(c, r) for c, r in zip(candidates, references)) / len(candidates)


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(candidates, references, max_n=4):
    """Corpus-level BLEU with clipped n-gram precisions and brevity penalty.

    Counts are pooled over the whole corpus before taking the geometric
    mean over n = 1..max_n. No smoothing: a zero precision at any order
    zeroes the score.
    """
    if len(candidates) != len(references):
        raise ValueError(f"corpus_bleu: {len(candidates)} candidates vs "
                         f"{len(references)} references")
    if not candidates:
        raise ValueError("corpus_bleu: empty corpus")
    if not 1 <= max_n <= 4:
        raise ValueError(f"corpus_bleu: max_n must be in 1..4, got {max_n}")

    matched = [0] * max_n
    total = [0] * max_n
    cand_len = 0
    ref_len = 0
    for cand, ref in zip(candidates, references):
        cand_len += len(cand)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            cand_counts = _ngrams(cand, n)
            ref_counts = _ngrams(ref, n)
            total[n - 1] += max(len(cand) - n + 1, 0)
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in cand_counts.items())

    if any(t == 0 or m == 0 for m, t in zip(matched, total)):
        return 0.0
    log_prec = sum(math.log(m / t) for m, t in zip(matched, total)) / max_n
    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / max(cand_len, 1))
    return bp * math.exp(log_prec)
