"""Scalar scores of a trained table on development data.

Four objectives are available, selected by name:

======================  =========  =========================================
name                    direction  score
======================  =========  =========================================
ml-unannotated          maximize   log-likelihood of bare dev sentence pairs
ml-annotated            maximize   log-likelihood of dev pairs with their
                                   gold restricted alignments
error-count             minimize   positions where the Viterbi link differs
                                   from gold
smoothed-error-count    minimize   continuous surrogate of error-count using
                                   alpha-powered posteriors
======================  =========  =========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import NULL_ID, ParallelCorpus, AnnotationSet, SentencePair, adapt_annotation
from .model import TranslationTable, link_posterior, pair_log_likelihood, viterbi_align

OBJECTIVE_NAMES = ("ml-unannotated", "ml-annotated", "error-count", "smoothed-error-count")
_MAXIMIZING = frozenset({"ml-unannotated", "ml-annotated"})


@dataclass(frozen=True)
class DevSet:
    """Development pairs, optionally with gold restricted alignments."""

    pairs: tuple[SentencePair, ...]
    alignments: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("development set must be non-empty")
        if self.alignments is not None:
            if len(self.alignments) != len(self.pairs):
                raise ValueError("one gold alignment per pair is required")
            for pair, alignment in zip(self.pairs, self.alignments):
                if len(alignment) != pair.target_length:
                    raise ValueError("gold alignment length must match target length")
                if any(not 0 <= i <= pair.source_length for i in alignment):
                    raise ValueError("gold alignment positions must lie in 0..l")

    @property
    def annotated(self) -> bool:
        return self.alignments is not None

    @classmethod
    def unannotated(cls, pairs) -> "DevSet":
        return cls(tuple(pairs))

    @classmethod
    def from_annotations(cls, corpus: ParallelCorpus, annotation: AnnotationSet) -> "DevSet":
        """Annotated dev set over every pair the annotation covers."""
        indices = annotation.pair_indices()
        pairs = tuple(corpus.pairs[i] for i in indices)
        alignments = tuple(
            adapt_annotation(i, annotation, corpus.pairs[i].target_length) for i in indices
        )
        return cls(pairs, alignments)


def _require_annotated(dev: DevSet) -> None:
    if not dev.annotated:
        raise ValueError("this objective requires an annotated development set")


def dev_log_likelihood(dev: DevSet, table: TranslationTable) -> float:
    """Summed sentence-pair log-likelihood; -inf propagates."""
    return sum(pair_log_likelihood(pair, table) for pair in dev.pairs)


def aligned_log_likelihood(dev: DevSet, table: TranslationTable) -> float:
    """Log-likelihood of dev pairs jointly with their gold links."""
    _require_annotated(dev)
    total = 0.0
    for pair, alignment in zip(dev.pairs, dev.alignments):
        sources = (NULL_ID,) + pair.source
        for f, i in zip(pair.target, alignment):
            t = table.prob(sources[i], f)
            if t <= 0.0:
                return float("-inf")
            total += math.log(t)
    return total


def alignment_error_count(dev: DevSet, table: TranslationTable) -> int:
    """Number of target positions whose Viterbi link differs from gold."""
    _require_annotated(dev)
    errors = 0
    for pair, alignment in zip(dev.pairs, dev.alignments):
        deduced = viterbi_align(pair, table)
        errors += sum(1 for gold, got in zip(alignment, deduced) if gold != got)
    return errors


def smoothed_error_count(dev: DevSet, table: TranslationTable, alpha: float = 10.0) -> float:
    """Continuous relaxation of the error count.

    Each position contributes 1 - p(gold)^alpha / sum_i p(i)^alpha, which
    approaches the 0/1 error indicator as alpha grows.  Powers are taken
    in the log domain and rescaled by the row maximum so large alpha stays
    numerically safe.
    """
    _require_annotated(dev)
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    total = 0.0
    for pair, alignment in zip(dev.pairs, dev.alignments):
        posterior = link_posterior(pair, table)
        for row, gold in zip(posterior, alignment):
            logs = [alpha * math.log(p) if p > 0.0 else None for p in row]
            top = max(x for x in logs if x is not None)
            weights = [math.exp(x - top) if x is not None else 0.0 for x in logs]
            total += 1.0 - weights[gold] / sum(weights)
    return total


@dataclass(frozen=True)
class Objective:
    """A named objective plus its sharpness parameter."""

    name: str
    alpha: float = 10.0

    def __post_init__(self):
        if self.name not in OBJECTIVE_NAMES:
            raise ValueError(f"unknown objective {self.name!r} (choose from {OBJECTIVE_NAMES})")
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")

    @property
    def maximize(self) -> bool:
        return self.name in _MAXIMIZING

    @property
    def requires_annotation(self) -> bool:
        return self.name != "ml-unannotated"

    def evaluate(self, dev: DevSet, table: TranslationTable) -> float:
        if self.name == "ml-unannotated":
            return dev_log_likelihood(dev, table)
        if self.name == "ml-annotated":
            return aligned_log_likelihood(dev, table)
        if self.name == "error-count":
            return float(alignment_error_count(dev, table))
        return smoothed_error_count(dev, table, self.alpha)
