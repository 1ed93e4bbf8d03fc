"""Brute-force reference implementations used to check the metric code.

Everything here is written the slow, obvious way (explicit loops,
list.count, recursive LCS) and stays independent of viscorpus.metrics.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def tokens_of(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def ngrams_of(tokens: list[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def brute_bleu(candidate: str, reference: str, n: int) -> float:
    cand = tokens_of(candidate)
    ref = tokens_of(reference)
    if not cand:
        return 0.0
    log_sum = 0.0
    for k in range(1, n + 1):
        cand_grams = ngrams_of(cand, k)
        ref_grams = ngrams_of(ref, k)
        if not cand_grams:
            return 0.0
        matched = 0
        for gram in set(cand_grams):
            matched += min(cand_grams.count(gram), ref_grams.count(gram))
        if matched == 0:
            return 0.0
        log_sum += math.log(matched / len(cand_grams))
    bp = 1.0 if len(cand) >= len(ref) else math.exp(1 - len(ref) / len(cand))
    return bp * math.exp(log_sum / n)


def brute_rouge_n(candidate: str, reference: str, n: int) -> float:
    cand_grams = ngrams_of(tokens_of(candidate), n)
    ref_grams = ngrams_of(tokens_of(reference), n)
    if not cand_grams or not ref_grams:
        return 0.0
    overlap = 0
    for gram in set(cand_grams):
        overlap += min(cand_grams.count(gram), ref_grams.count(gram))
    precision = overlap / len(cand_grams)
    recall = overlap / len(ref_grams)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def brute_rouge_l(candidate: str, reference: str) -> float:
    cand = tuple(tokens_of(candidate))
    ref = tuple(tokens_of(reference))
    if not cand or not ref:
        return 0.0

    @lru_cache(maxsize=None)
    def lcs(i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        if cand[i - 1] == ref[j - 1]:
            return lcs(i - 1, j - 1) + 1
        return max(lcs(i - 1, j), lcs(i, j - 1))

    length = lcs(len(cand), len(ref))
    precision = length / len(cand)
    recall = length / len(ref)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def brute_ngram_overlap(question: str, name: str, max_n: int) -> bool:
    """Schema-filtration oracle: any shared n-gram between a question and
    an identifier, built with nested loops."""

    def split_words(text: str) -> list[str]:
        words = []
        current = ""
        for ch in text.lower():
            if ch.isalnum():
                current += ch
            elif current:
                words.append(current)
                current = ""
        if current:
            words.append(current)
        return words

    q_words = split_words(question)
    n_words = split_words(name)
    for n in range(1, max_n + 1):
        for i in range(len(q_words) - n + 1):
            for j in range(len(n_words) - n + 1):
                if q_words[i : i + n] == n_words[j : j + n]:
                    return True
    return False
