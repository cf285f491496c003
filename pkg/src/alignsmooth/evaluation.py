"""Scoring predicted alignments against sure/possible gold links.

Precision is |P & A| / |A|, recall is |S & A| / |S|, and the alignment
error rate is 1 - (|P & A| + |S & A|) / (|A| + |S|); lower is better.
Corpus-level numbers are micro-averaged: link counts are summed over all
pairs before the ratios are taken.  Empty sets follow explicit vacuous
conventions (empty A: precision 1; empty S: recall 1; both empty: AER 0)
so every report is total.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import AnnotationSet, ParallelCorpus, SentencePair, adapt_annotation
from .model import TranslationTable, viterbi_align

Link = tuple[int, int]


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    aer: float
    error_count: int
    pair_count: int
    link_count: int
    sure_count: int

    def to_tsv_lines(self) -> list[str]:
        return [
            f"precision\t{self.precision!r}",
            f"recall\t{self.recall!r}",
            f"aer\t{self.aer!r}",
            f"error_count\t{self.error_count}",
            f"pair_count\t{self.pair_count}",
            f"link_count\t{self.link_count}",
            f"sure_count\t{self.sure_count}",
        ]

    def pretty(self) -> str:
        return (
            f"pairs evaluated   {self.pair_count}\n"
            f"predicted links   {self.link_count}\n"
            f"sure gold links   {self.sure_count}\n"
            f"precision         {self.precision:.6f}\n"
            f"recall            {self.recall:.6f}\n"
            f"AER               {self.aer:.6f}\n"
            f"error count       {self.error_count}"
        )


def links_from_alignment(alignment, emit_null: bool = False) -> set[Link]:
    """Turn a restricted alignment vector into a set of (i, j) links."""
    return {
        (i, j)
        for j, i in enumerate(alignment, start=1)
        if i != 0 or emit_null
    }


def predicted_links(pair: SentencePair, table: TranslationTable, emit_null: bool = False) -> set[Link]:
    """Viterbi links of a pair; NULL links are excluded unless requested."""
    return links_from_alignment(viterbi_align(pair, table), emit_null)


def precision(links: set[Link], possible: frozenset[Link] | set[Link]) -> float:
    if not links:
        return 1.0
    return len(links & possible) / len(links)


def recall(links: set[Link], sure: frozenset[Link] | set[Link]) -> float:
    if not sure:
        return 1.0
    return len(links & sure) / len(sure)


def aer(links: set[Link], sure, possible) -> float:
    denom = len(links) + len(sure)
    if denom == 0:
        return 0.0
    return 1.0 - (len(links & possible) + len(links & sure)) / denom


def evaluate_corpus(
    table: TranslationTable,
    corpus: ParallelCorpus,
    annotation: AnnotationSet,
    pair_subset=None,
    emit_null: bool = False,
) -> EvalReport:
    """Micro-averaged report over annotated pairs (or an explicit subset).

    The error count compares Viterbi links against the sure-only
    restricted adaptation of the gold annotation.
    """
    indices = sorted(pair_subset) if pair_subset is not None else annotation.pair_indices()
    if not indices:
        raise ValueError("no pairs to evaluate")
    total_links = total_sure = hit_possible = hit_sure = 0
    errors = 0
    for k in indices:
        entry = annotation.entry(k)
        pair = corpus.pairs[k]
        deduced = viterbi_align(pair, table)
        links = links_from_alignment(deduced, emit_null)
        total_links += len(links)
        total_sure += len(entry.sure)
        hit_possible += len(links & entry.possible)
        hit_sure += len(links & entry.sure)
        gold = adapt_annotation(k, annotation, pair.target_length)
        errors += sum(1 for g, h in zip(gold, deduced) if g != h)
    denom = total_links + total_sure
    return EvalReport(
        precision=hit_possible / total_links if total_links else 1.0,
        recall=hit_sure / total_sure if total_sure else 1.0,
        aer=1.0 - (hit_possible + hit_sure) / denom if denom else 0.0,
        error_count=errors,
        pair_count=len(indices),
        link_count=total_links,
        sure_count=total_sure,
    )
