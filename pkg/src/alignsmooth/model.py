"""The word-translation table t(f|e) and the inference built on it.

The table is stored sparsely: each source word has a dict of explicit
probabilities plus a per-row default shared by every other target word
(non-zero only for smoothed tables, where one value covers the whole
residual row).  An absent row behaves as all zeros.

Model file format: UTF-8 TSV with one ``e<TAB>f<TAB>prob`` line per
nonzero entry, preceded by ``#``-prefixed ``key: value`` metadata lines
(vocabulary sizes, epsilon, iteration count, strategy, lambda).
Probabilities are written with full precision so reloading reproduces
them exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import NULL_ID, UNKNOWN_ID, SentencePair, Vocabulary
from .errors import DataFormatError, UnknownTokenError

_EMPTY: dict[int, float] = {}


@dataclass
class TranslationTable:
    """Per-source-word distributions over the target vocabulary.

    Immutable by convention once built; the trainer replaces whole tables
    instead of editing them.
    """

    rows: dict[int, dict[int, float]]
    row_defaults: dict[int, float]
    source_vocab: Vocabulary
    target_vocab: Vocabulary
    epsilon: float = 1.0

    def prob(self, e: int, f: int) -> float:
        """t(f|e); unknown-token sentinels score zero, bad ids raise."""
        if e == UNKNOWN_ID or f == UNKNOWN_ID:
            return 0.0
        if not 0 <= e < len(self.source_vocab):
            raise UnknownTokenError(f"source token id {e} out of range")
        if not 0 <= f < len(self.target_vocab):
            raise UnknownTokenError(f"target token id {f} out of range")
        row = self.rows.get(e)
        if row is not None:
            value = row.get(f)
            if value is not None:
                return value
        return self.row_defaults.get(e, 0.0)

    def row_total(self, e: int) -> float:
        """Sum of t(f|e) over the full target vocabulary."""
        row = self.rows.get(e, _EMPTY)
        default = self.row_defaults.get(e, 0.0)
        return sum(row.values()) + (len(self.target_vocab) - len(row)) * default


def uniform_init(source_vocab: Vocabulary, target_vocab: Vocabulary, epsilon: float = 1.0) -> TranslationTable:
    """t(f|e) = 1/|F| for every source word, the standard starting point."""
    if len(source_vocab) == 0 or len(target_vocab) == 0:
        raise ValueError("vocabularies must be non-empty")
    share = 1.0 / len(target_vocab)
    defaults = {e: share for e in range(len(source_vocab))}
    return TranslationTable({}, defaults, source_vocab, target_vocab, epsilon)


def _source_ids(pair: SentencePair) -> tuple[int, ...]:
    # position 0 is the implicit NULL word
    return (NULL_ID,) + pair.source


def link_posterior(pair: SentencePair, table: TranslationTable) -> list[list[float]]:
    """p(a_j = i) for every target position j and source position i in 0..l.

    A target word scoring zero against every source position gets the
    uniform distribution over 0..l, so downstream objectives stay finite.
    """
    sources = _source_ids(pair)
    width = len(sources)
    posterior = []
    for f in pair.target:
        values = [table.prob(e, f) for e in sources]
        denom = sum(values)
        if denom > 0.0:
            posterior.append([v / denom for v in values])
        else:
            posterior.append([1.0 / width] * width)
    return posterior


def viterbi_align(pair: SentencePair, table: TranslationTable) -> tuple[int, ...]:
    """Most likely source position for each target position; ties pick the smallest."""
    sources = _source_ids(pair)
    alignment = []
    for f in pair.target:
        best_i = 0
        best_v = table.prob(sources[0], f)
        for i in range(1, len(sources)):
            v = table.prob(sources[i], f)
            if v > best_v:
                best_i, best_v = i, v
        alignment.append(best_i)
    return tuple(alignment)


def pair_log_likelihood(pair: SentencePair, table: TranslationTable) -> float:
    """log of the pair's probability summed over all alignments.

    Equals log(eps) - m*log(l+1) + sum_j log sum_i t(f_j|e_i); any target
    word with an all-zero score yields -inf.
    """
    sources = _source_ids(pair)
    total = math.log(table.epsilon) - pair.target_length * math.log(len(sources))
    for f in pair.target:
        denom = sum(table.prob(e, f) for e in sources)
        if denom <= 0.0:
            return float("-inf")
        total += math.log(denom)
    return total


def write_table(table: TranslationTable, path, iterations=None, strategy=None, lam=None) -> None:
    """Write every nonzero entry as word<TAB>word<TAB>prob, metadata first."""
    meta = [
        ("source_vocab_size", len(table.source_vocab)),
        ("target_vocab_size", len(table.target_vocab)),
        ("epsilon", repr(table.epsilon)),
    ]
    if iterations is not None:
        meta.append(("iterations", iterations))
    if strategy is not None:
        meta.append(("strategy", strategy))
    if lam is not None:
        meta.append(("lambda", repr(float(lam))))
    with open(path, "w", encoding="utf-8") as handle:
        for key, value in meta:
            handle.write(f"# {key}: {value}\n")
        target_size = len(table.target_vocab)
        touched = set(table.rows) | {e for e, d in table.row_defaults.items() if d > 0.0}
        for e in sorted(touched):
            e_word = table.source_vocab.word(e)
            row = table.rows.get(e, _EMPTY)
            default = table.row_defaults.get(e, 0.0)
            if default > 0.0:
                f_ids = range(target_size)
            else:
                f_ids = sorted(row)
            for f in f_ids:
                p = row.get(f, default)
                if p > 0.0:
                    handle.write(f"{e_word}\t{table.target_vocab.word(f)}\t{p!r}\n")


def read_table(path) -> tuple[TranslationTable, dict]:
    """Load a model file; returns the table and its metadata dict."""
    source_vocab = Vocabulary.with_null()
    target_vocab = Vocabulary()
    rows: dict[int, dict[int, float]] = {}
    metadata: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    metadata[key.strip()] = value.strip()
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DataFormatError(
                    f"{path}: line {number}: expected e<TAB>f<TAB>prob, got {line!r}"
                )
            try:
                p = float(fields[2])
            except ValueError:
                raise DataFormatError(
                    f"{path}: line {number}: bad probability {fields[2]!r}"
                ) from None
            if p < 0.0:
                raise DataFormatError(f"{path}: line {number}: negative probability")
            e = source_vocab.add(fields[0])
            f = target_vocab.add(fields[1])
            rows.setdefault(e, {})[f] = p
    epsilon = float(metadata.get("epsilon", "1.0"))
    table = TranslationTable(rows, {}, source_vocab, target_vocab, epsilon)
    return table, metadata
