"""BLEU, ROUGE (1/2/L), and METEOR for generated text.

Tokenization for all three: lowercase, split at whitespace and
punctuation boundaries (punctuation marks become their own tokens).
METEOR aligns unigrams by exact match first, then by Porter stem;
the WordNet synonym stage is deliberately not implemented so scores stay
deterministic and dependency-free.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .stemmer import stem

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


# -- BLEU -----------------------------------------------------------------


def bleu_n(candidate: str, references: list[str], n: int = 4) -> float:
    """Sentence-level BLEU-n: geometric mean of clipped k-gram precisions
    for k=1..n, times the brevity penalty exp(1 - r/c) when c < r."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not references:
        raise ValueError("need at least one reference")
    cand = tokenize(candidate)
    refs = [tokenize(r) for r in references]
    if not cand:
        return 0.0
    product = 1.0
    for k in range(1, n + 1):
        matched, total = _clipped_counts(cand, refs, k)
        if matched == 0 or total == 0:
            return 0.0
        product *= matched / total
    geo_mean = product ** (1.0 / n)
    return _brevity_penalty(len(cand), _effective_ref_length(len(cand), refs)) * geo_mean


def corpus_bleu(candidates: list[str], references_list: list[list[str]], n: int = 4) -> float:
    """Corpus-level BLEU-n: clipped counts and lengths summed across samples."""
    if len(candidates) != len(references_list):
        raise ValueError("candidates and references differ in length")
    matched = [0] * n
    total = [0] * n
    cand_len = 0
    ref_len = 0
    for candidate, references in zip(candidates, references_list):
        cand = tokenize(candidate)
        refs = [tokenize(r) for r in references]
        cand_len += len(cand)
        ref_len += _effective_ref_length(len(cand), refs)
        for k in range(1, n + 1):
            m, t = _clipped_counts(cand, refs, k)
            matched[k - 1] += m
            total[k - 1] += t
    product = 1.0
    for k in range(n):
        if matched[k] == 0 or total[k] == 0:
            return 0.0
        product *= matched[k] / total[k]
    return _brevity_penalty(cand_len, ref_len) * product ** (1.0 / n)


def _clipped_counts(cand: list[str], refs: list[list[str]], k: int) -> tuple[int, int]:
    cand_counts = ngram_counts(cand, k)
    max_ref: Counter = Counter()
    for ref in refs:
        for gram, count in ngram_counts(ref, k).items():
            if count > max_ref[gram]:
                max_ref[gram] = count
    matched = sum(min(count, max_ref[gram]) for gram, count in cand_counts.items())
    return matched, sum(cand_counts.values())


def _effective_ref_length(cand_len: int, refs: list[list[str]]) -> int:
    # Closest reference length; ties favor the shorter reference.
    return min((abs(len(r) - cand_len), len(r)) for r in refs)[1]


def _brevity_penalty(c: int, r: int) -> float:
    if c == 0:
        return 0.0
    return math.exp(1 - r / c) if c < r else 1.0


# -- ROUGE ----------------------------------------------------------------


def rouge(candidate: str, reference: str, variant: str | int) -> float:
    """ROUGE F1. Variants: 1, 2 (n-gram overlap) or "L" (longest common
    subsequence). Returns 0 when both sides are empty."""
    key = str(variant).lower()
    if key == "l":
        return rouge_l(candidate, reference)
    if key in ("1", "2"):
        return rouge_ngram(candidate, reference, int(key))
    raise ValueError(f"unknown ROUGE variant {variant!r}")


def rouge_ngram(candidate: str, reference: str, n: int) -> float:
    cand = ngram_counts(tokenize(candidate), n)
    ref = ngram_counts(tokenize(reference), n)
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    if cand_total == 0 or ref_total == 0:
        return 0.0
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return _f1(overlap / cand_total, overlap / ref_total)


def rouge_l(candidate: str, reference: str) -> float:
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0
    lcs = _lcs_length(cand, ref)
    return _f1(lcs / len(cand), lcs / len(ref))


def _lcs_length(a: list[str], b: list[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


# -- METEOR ---------------------------------------------------------------


def meteor(candidate: str, reference: str) -> float:
    """Unigram alignment by exact match then Porter stem; harmonic mean
    weighted 9:1 toward recall; fragmentation penalty
    0.5 * (chunks / matches)^3."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0
    pairs = _align(cand, ref)
    matches = len(pairs)
    if matches == 0:
        return 0.0
    precision = matches / len(cand)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    chunks = _chunk_count(pairs)
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1 - penalty)


def _align(cand: list[str], ref: list[str]) -> list[tuple[int, int]]:
    aligned: list[int | None] = [None] * len(cand)
    used = [False] * len(ref)
    for ci, token in enumerate(cand):
        for ri, ref_token in enumerate(ref):
            if not used[ri] and ref_token == token:
                aligned[ci] = ri
                used[ri] = True
                break
    cand_stems = [stem(t) for t in cand]
    ref_stems = [stem(t) for t in ref]
    for ci in range(len(cand)):
        if aligned[ci] is not None:
            continue
        for ri in range(len(ref)):
            if not used[ri] and ref_stems[ri] == cand_stems[ci]:
                aligned[ci] = ri
                used[ri] = True
                break
    return [(ci, ri) for ci, ri in enumerate(aligned) if ri is not None]


def _chunk_count(pairs: list[tuple[int, int]]) -> int:
    chunks = 0
    prev: tuple[int, int] | None = None
    for ci, ri in pairs:
        if prev is None or ci != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (ci, ri)
    return chunks


# -- aggregated report ----------------------------------------------------


@dataclass(frozen=True)
class TextGenReport:
    n: int
    bleu_1: float
    bleu_2: float
    bleu_4: float
    rouge_1: float
    rouge_2: float
    rouge_l: float
    meteor: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "bleu_1": self.bleu_1,
            "bleu_2": self.bleu_2,
            "bleu_4": self.bleu_4,
            "rouge_1": self.rouge_1,
            "rouge_2": self.rouge_2,
            "rouge_l": self.rouge_l,
            "meteor": self.meteor,
        }


def text_gen_report(candidates: list[str], references: list[str]) -> TextGenReport:
    """BLEU at corpus level (summed counts); ROUGE and METEOR averaged
    per sample. All inputs are single-reference."""
    if len(candidates) != len(references):
        raise ValueError("candidates and references differ in length")
    n = len(candidates)
    refs_list = [[r] for r in references]

    def mean(values: list[float]) -> float:
        return sum(values) / n if n else 0.0

    return TextGenReport(
        n=n,
        bleu_1=corpus_bleu(candidates, refs_list, 1) if n else 0.0,
        bleu_2=corpus_bleu(candidates, refs_list, 2) if n else 0.0,
        bleu_4=corpus_bleu(candidates, refs_list, 4) if n else 0.0,
        rouge_1=mean([rouge_ngram(c, r, 1) for c, r in zip(candidates, references)]),
        rouge_2=mean([rouge_ngram(c, r, 2) for c, r in zip(candidates, references)]),
        rouge_l=mean([rouge_l(c, r) for c, r in zip(candidates, references)]),
        meteor=mean([meteor(c, r) for c, r in zip(candidates, references)]),
    )
