"""Evaluation metrics: EM family over DV queries, BLEU/ROUGE/METEOR over text."""

from .em import EmReport, SampleMatch, em_suite
from .stemmer import stem
from .textgen import (
    TextGenReport,
    bleu_n,
    corpus_bleu,
    meteor,
    rouge,
    rouge_l,
    rouge_ngram,
    text_gen_report,
    tokenize,
)

__all__ = [
    "EmReport",
    "SampleMatch",
    "TextGenReport",
    "bleu_n",
    "corpus_bleu",
    "em_suite",
    "meteor",
    "rouge",
    "rouge_l",
    "rouge_ngram",
    "stem",
    "text_gen_report",
    "tokenize",
]
