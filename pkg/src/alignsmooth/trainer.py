"""EM training with a smoothed maximization step.

Every iteration re-estimates the table as

    t(f|e) = (count(e,f) + lambda * g(e,f)) / (count(e) + lambda * row_sum(e))

where g comes from the configured adding strategy.  With lambda = 0 this
is the plain relative-frequency step and the strategy is ignored, so the
unsmoothed baseline falls out of the same code path bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import NULL_ID, ParallelCorpus, Vocabulary
from .errors import UnknownTokenError
from .model import TranslationTable, uniform_init
from .smoothing import AddingStrategy

_EMPTY: dict[int, float] = {}


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 10
    lam: float = 0.0
    strategy: AddingStrategy | None = None
    epsilon: float = 1.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass
class CountTable:
    """Expected link counts from one E-step, with per-source totals."""

    counts: dict[int, dict[int, float]]
    totals: dict[int, float]
    source_vocab: Vocabulary
    target_vocab: Vocabulary

    def count(self, e: int, f: int) -> float:
        return self.counts.get(e, _EMPTY).get(f, 0.0)

    def total(self, e: int) -> float:
        return self.totals.get(e, 0.0)


@dataclass(frozen=True)
class TrainResult:
    table: TranslationTable
    log_likelihood_trace: tuple[float, ...]


def _estep(corpus: ParallelCorpus, table: TranslationTable, epsilon: float) -> tuple[CountTable, float]:
    """Accumulate expected counts and the log-likelihood of the current table."""
    if len(table.source_vocab) < len(corpus.source_vocab) or len(
        table.target_vocab
    ) < len(corpus.target_vocab):
        raise UnknownTokenError("table vocabularies do not cover this corpus")
    counts: dict[int, dict[int, float]] = {}
    totals: dict[int, float] = {}
    log_eps = math.log(epsilon)
    log_likelihood = 0.0
    for pair in corpus.pairs:
        sources = (NULL_ID,) + pair.source
        width = len(sources)
        cached = [
            (table.rows.get(e, _EMPTY), table.row_defaults.get(e, 0.0)) for e in sources
        ]
        pair_ll = log_eps - pair.target_length * math.log(width)
        degenerate = False
        for f in pair.target:
            values = [row.get(f, default) for row, default in cached]
            denom = sum(values)
            if denom > 0.0:
                pair_ll += math.log(denom)
                inv = 1.0 / denom
                for e, v in zip(sources, values):
                    if v:
                        share = v * inv
                        counts.setdefault(e, {})
                        counts[e][f] = counts[e].get(f, 0.0) + share
                        totals[e] = totals.get(e, 0.0) + share
            else:
                degenerate = True
                share = 1.0 / width
                for e in sources:
                    counts.setdefault(e, {})
                    counts[e][f] = counts[e].get(f, 0.0) + share
                    totals[e] = totals.get(e, 0.0) + share
        log_likelihood += float("-inf") if degenerate else pair_ll
    return CountTable(counts, totals, corpus.source_vocab, corpus.target_vocab), log_likelihood


def expectation_counts(corpus: ParallelCorpus, table: TranslationTable) -> CountTable:
    """Expected number of times each source word aligns to each target word."""
    counts, _ = _estep(corpus, table, table.epsilon)
    return counts


def maximize_smoothed(
    counts: CountTable,
    strategy: AddingStrategy | None,
    lam: float,
    epsilon: float = 1.0,
) -> TranslationTable:
    """Re-estimate the table from counts plus lambda-scaled pseudo-counts.

    Rows whose denominator is zero get the degenerate uniform row so the
    result is always a full set of distributions.
    """
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    source_size = len(counts.source_vocab)
    target_size = len(counts.target_vocab)
    uniform = 1.0 / target_size
    plain = lam == 0.0 or strategy is None
    rows: dict[int, dict[int, float]] = {}
    defaults: dict[int, float] = {}
    for e in range(source_size):
        crow = counts.counts.get(e, _EMPTY)
        total = counts.totals.get(e, 0.0)
        if plain:
            if total > 0.0:
                rows[e] = {f: c / total for f, c in crow.items()}
            else:
                defaults[e] = uniform
            continue
        extras = strategy.extra_weights(e)
        denom = total + lam * strategy.row_sum(e)
        if denom <= 0.0:
            defaults[e] = uniform
            continue
        added = lam * strategy.base_weight(e)
        row = {f: (c + added + lam * extras.get(f, 0.0)) / denom for f, c in crow.items()}
        for f, g in extras.items():
            if f not in row:
                row[f] = (added + lam * g) / denom
        rows[e] = row
        if added > 0.0:
            defaults[e] = added / denom
    return TranslationTable(rows, defaults, counts.source_vocab, counts.target_vocab, epsilon)


def train(corpus: ParallelCorpus, config: TrainConfig | None = None) -> TrainResult:
    """Run EM from the uniform table, smoothing every maximization step.

    The trace holds one training log-likelihood per iteration, evaluated
    under the table that iteration started from.
    """
    config = config or TrainConfig()
    table = uniform_init(corpus.source_vocab, corpus.target_vocab, config.epsilon)
    trace = []
    for _ in range(config.iterations):
        counts, log_likelihood = _estep(corpus, table, config.epsilon)
        trace.append(log_likelihood)
        table = maximize_smoothed(counts, config.strategy, config.lam, config.epsilon)
    return TrainResult(table, tuple(trace))
