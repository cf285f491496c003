"""Parallel corpora, gold annotations, and corpus statistics.

File formats
------------
Parallel corpus: two UTF-8 text files with one sentence per line and
whitespace-separated tokens.  Line k of the source file is paired with
line k of the target file; the files must have equal line counts and no
empty lines.

Annotation file: UTF-8 text with one record per line::

    pair_index  src_pos  tgt_pos  flag

``pair_index``, ``src_pos`` and ``tgt_pos`` are 1-based, except that
``src_pos = 0`` denotes the NULL word.  ``flag`` is ``S`` (sure) or ``P``
(possible); every sure link is also treated as possible.  Lines starting
with ``#`` are comments.

In memory, pairs and annotation entries are keyed by 0-based corpus
index; link positions keep the 1-based convention with 0 = NULL.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import DataFormatError, UnknownTokenError

NULL_TOKEN = "<NULL>"
NULL_ID = 0
UNKNOWN_ID = -1


class Vocabulary:
    """Bidirectional map between word strings and dense integer ids."""

    __slots__ = ("_word_to_id", "_id_to_word")

    def __init__(self, words=()):
        self._word_to_id: dict[str, int] = {}
        self._id_to_word: list[str] = []
        for word in words:
            self.add(word)

    @classmethod
    def with_null(cls) -> "Vocabulary":
        """A source-side vocabulary with the NULL word reserved at id 0."""
        vocab = cls()
        vocab.add(NULL_TOKEN)
        return vocab

    def add(self, word: str) -> int:
        wid = self._word_to_id.get(word)
        if wid is None:
            wid = len(self._id_to_word)
            self._word_to_id[word] = wid
            self._id_to_word.append(word)
        return wid

    def id(self, word: str) -> int:
        try:
            return self._word_to_id[word]
        except KeyError:
            raise UnknownTokenError(f"unknown token {word!r}") from None

    def get(self, word: str, default: int = UNKNOWN_ID) -> int:
        return self._word_to_id.get(word, default)

    def word(self, wid: int) -> str:
        if 0 <= wid < len(self._id_to_word):
            return self._id_to_word[wid]
        raise UnknownTokenError(f"no token with id {wid}")

    def __contains__(self, word: str) -> bool:
        return word in self._word_to_id

    def __len__(self) -> int:
        return len(self._id_to_word)

    @property
    def words(self) -> tuple[str, ...]:
        """All words in id order."""
        return tuple(self._id_to_word)


@dataclass(frozen=True)
class SentencePair:
    """One aligned sentence pair as token ids.

    Source positions run 1..l with the implicit NULL word at position 0;
    NULL itself is never stored.  Target positions run 1..m.
    """

    source: tuple[int, ...]
    target: tuple[int, ...]

    @property
    def source_length(self) -> int:
        return len(self.source)

    @property
    def target_length(self) -> int:
        return len(self.target)


@dataclass
class ParallelCorpus:
    pairs: list[SentencePair]
    source_vocab: Vocabulary
    target_vocab: Vocabulary

    def __len__(self) -> int:
        return len(self.pairs)

    def subset(self, indices) -> "ParallelCorpus":
        """A corpus over the given pair indices, sharing both vocabularies."""
        picked = [self.pairs[i] for i in indices]
        return ParallelCorpus(picked, self.source_vocab, self.target_vocab)

    def source_tokens(self, pair: SentencePair) -> list[str]:
        return [self.source_vocab.word(i) for i in pair.source]

    def target_tokens(self, pair: SentencePair) -> list[str]:
        return [self.target_vocab.word(i) for i in pair.target]


def read_token_lines(path, lowercase: bool = False) -> list[list[str]]:
    """Read one whitespace-tokenized sentence per line; reject empty lines."""
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    sentences = []
    for number, line in enumerate(lines, start=1):
        if lowercase:
            line = line.lower()
        tokens = line.split()
        if not tokens:
            raise DataFormatError(f"{path}: line {number} is empty")
        sentences.append(tokens)
    return sentences


def corpus_from_tokens(source_sentences, target_sentences) -> ParallelCorpus:
    """Build an indexed corpus from pre-tokenized sentence lists."""
    if len(source_sentences) != len(target_sentences):
        raise DataFormatError(
            "line count mismatch: source has "
            f"{len(source_sentences)} lines, target has {len(target_sentences)}"
        )
    if not source_sentences:
        raise DataFormatError("corpus is empty")
    source_vocab = Vocabulary.with_null()
    target_vocab = Vocabulary()
    pairs = []
    for src, tgt in zip(source_sentences, target_sentences):
        if not src or not tgt:
            raise DataFormatError("sentences must contain at least one token")
        pairs.append(
            SentencePair(
                tuple(source_vocab.add(w) for w in src),
                tuple(target_vocab.add(w) for w in tgt),
            )
        )
    return ParallelCorpus(pairs, source_vocab, target_vocab)


def load_parallel_corpus(source_path, target_path, lowercase: bool = False) -> ParallelCorpus:
    source_sentences = read_token_lines(source_path, lowercase)
    target_sentences = read_token_lines(target_path, lowercase)
    if len(source_sentences) != len(target_sentences):
        raise DataFormatError(
            f"line count mismatch: {source_path} has {len(source_sentences)} lines, "
            f"{target_path} has {len(target_sentences)}"
        )
    return corpus_from_tokens(source_sentences, target_sentences)


@dataclass
class OccurrenceStats:
    """Token occurrence counts plus presence-based pair co-occurrence.

    ``source_counts[NULL_ID]`` is the number of sentence pairs, since the
    NULL word occurs once in every source sentence by convention; the same
    convention makes NULL co-occur with every target word of every pair.
    Co-occurrence is presence-based: a pair contributes at most 1 to
    ``cooc(e, f)`` no matter how often either word repeats inside it.
    """

    source_counts: list[int]
    target_counts: list[int]
    cooc: dict[int, dict[int, int]]
    pair_count: int

    def source_count(self, e: int) -> int:
        if not 0 <= e < len(self.source_counts):
            raise UnknownTokenError(f"no source token with id {e}")
        return self.source_counts[e]

    def target_count(self, f: int) -> int:
        if not 0 <= f < len(self.target_counts):
            raise UnknownTokenError(f"no target token with id {f}")
        return self.target_counts[f]

    def cooc_count(self, e: int, f: int) -> int:
        self.source_count(e)
        self.target_count(f)
        return self.cooc.get(e, {}).get(f, 0)

    def cooc_row(self, e: int) -> dict[int, int]:
        self.source_count(e)
        return self.cooc.get(e, {})


def occurrence_stats(corpus: ParallelCorpus) -> OccurrenceStats:
    source_counts = [0] * len(corpus.source_vocab)
    target_counts = [0] * len(corpus.target_vocab)
    cooc: dict[int, dict[int, int]] = {}
    for pair in corpus.pairs:
        for e in pair.source:
            source_counts[e] += 1
        for f in pair.target:
            target_counts[f] += 1
        target_set = set(pair.target)
        for e in set(pair.source) | {NULL_ID}:
            row = cooc.setdefault(e, {})
            for f in target_set:
                row[f] = row.get(f, 0) + 1
    source_counts[NULL_ID] = len(corpus.pairs)
    return OccurrenceStats(source_counts, target_counts, cooc, len(corpus.pairs))


@dataclass(frozen=True)
class AnnotationEntry:
    sure: frozenset[tuple[int, int]]
    possible: frozenset[tuple[int, int]]


@dataclass
class AnnotationSet:
    """Gold sure/possible link sets keyed by 0-based pair index."""

    entries: dict[int, AnnotationEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, pair_index: int) -> bool:
        return pair_index in self.entries

    def pair_indices(self) -> list[int]:
        return sorted(self.entries)

    def entry(self, pair_index: int) -> AnnotationEntry:
        try:
            return self.entries[pair_index]
        except KeyError:
            raise ValueError(f"pair {pair_index} is not annotated") from None


def load_annotations(path, corpus: ParallelCorpus) -> AnnotationSet:
    sure: dict[int, set[tuple[int, int]]] = {}
    possible: dict[int, set[tuple[int, int]]] = {}
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 4:
                raise DataFormatError(
                    f"{path}: record {number}: expected 'pair src tgt flag', got {line!r}"
                )
            try:
                pair_no, src_pos, tgt_pos = (int(x) for x in fields[:3])
            except ValueError:
                raise DataFormatError(
                    f"{path}: record {number}: non-integer position in {line!r}"
                ) from None
            flag = fields[3]
            if flag not in ("S", "P"):
                raise DataFormatError(
                    f"{path}: record {number}: unknown flag {flag!r} (expected S or P)"
                )
            if not 1 <= pair_no <= len(corpus.pairs):
                raise DataFormatError(
                    f"{path}: record {number}: pair index {pair_no} out of range "
                    f"(corpus has {len(corpus.pairs)} pairs)"
                )
            pair = corpus.pairs[pair_no - 1]
            if not 0 <= src_pos <= pair.source_length:
                raise DataFormatError(
                    f"{path}: record {number}: source position {src_pos} out of range "
                    f"(source length {pair.source_length})"
                )
            if not 1 <= tgt_pos <= pair.target_length:
                raise DataFormatError(
                    f"{path}: record {number}: target position {tgt_pos} out of range "
                    f"(target length {pair.target_length})"
                )
            key = pair_no - 1
            link = (src_pos, tgt_pos)
            possible.setdefault(key, set()).add(link)
            if flag == "S":
                sure.setdefault(key, set()).add(link)
    entries = {
        key: AnnotationEntry(frozenset(sure.get(key, ())), frozenset(links))
        for key, links in possible.items()
    }
    return AnnotationSet(entries)


def adapt_annotation(pair_index: int, annotation: AnnotationSet, m: int) -> tuple[int, ...]:
    """Restrict gold links to one source position per target position.

    Only sure links are considered.  A target position with no sure link
    maps to NULL; with several sure links, the smallest source position
    wins so the choice is reproducible.
    """
    entry = annotation.entry(pair_index)
    chosen: dict[int, int] = {}
    for i, j in sorted(entry.sure, key=lambda link: (link[1], link[0])):
        chosen.setdefault(j, i)
    return tuple(chosen.get(j, 0) for j in range(1, m + 1))


def split_annotated(annotation: AnnotationSet, k: int, seed: int) -> tuple[AnnotationSet, AnnotationSet]:
    """Split annotated pairs into a k-pair dev set and the remaining test set."""
    indices = annotation.pair_indices()
    if not 0 < k < len(indices):
        raise ValueError(f"dev size must be in 1..{len(indices) - 1}, got {k}")
    shuffled = list(indices)
    random.Random(seed).shuffle(shuffled)
    dev_keys = set(shuffled[:k])
    dev = AnnotationSet({i: annotation.entries[i] for i in indices if i in dev_keys})
    test = AnnotationSet({i: annotation.entries[i] for i in indices if i not in dev_keys})
    return dev, test


def split_unannotated(corpus: ParallelCorpus, fraction: float, seed: int) -> tuple[ParallelCorpus, ParallelCorpus]:
    """Split a corpus into (train, dev) with dev holding floor(n * fraction) pairs."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie strictly between 0 and 1, got {fraction}")
    n = len(corpus.pairs)
    dev_n = int(n * fraction)
    if dev_n < 1 or n - dev_n < 1:
        raise ValueError(
            f"fraction {fraction} leaves an empty side for a corpus of {n} pairs"
        )
    order = list(range(n))
    random.Random(seed).shuffle(order)
    dev_indices = sorted(order[:dev_n])
    train_indices = sorted(order[dev_n:])
    return corpus.subset(train_indices), corpus.subset(dev_indices)
