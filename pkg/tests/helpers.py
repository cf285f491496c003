"""Shared fixtures: tiny corpora, random corpora, and independent EM oracles."""

import random

from alignsmooth import corpus_from_tokens

NULL = "<NULL>"


def t1_corpus():
    """The two-pair hand-oracle corpus (das haus / das buch)."""
    return corpus_from_tokens(
        [["das", "haus"], ["das", "buch"]],
        [["the", "house"], ["the", "book"]],
    )


def random_corpus(seed, max_pairs=50, max_len=6, source_types=8, target_types=9):
    rng = random.Random(seed)
    n = rng.randint(2, max_pairs)
    src, tgt = [], []
    for _ in range(n):
        src.append([f"s{rng.randrange(source_types)}" for _ in range(rng.randint(1, max_len))])
        tgt.append([f"t{rng.randrange(target_types)}" for _ in range(rng.randint(1, max_len))])
    return corpus_from_tokens(src, tgt)


def reference_em(src_sentences, tgt_sentences, iterations, add=0.0):
    """Dense string-keyed EM oracle, independent of the library code paths.

    With add > 0 every re-estimation uses the closed additive form
    (count(e,f) + add) / (count(e) + add * |F|).
    """
    f_vocab = sorted({w for s in tgt_sentences for w in s})
    e_vocab = sorted({w for s in src_sentences for w in s} | {NULL})
    big_f = len(f_vocab)
    t = {(e, f): 1.0 / big_f for e in e_vocab for f in f_vocab}
    for _ in range(iterations):
        counts = {k: 0.0 for k in t}
        totals = {e: 0.0 for e in e_vocab}
        for src, tgt in zip(src_sentences, tgt_sentences):
            full_src = [NULL] + list(src)
            for f in tgt:
                den = sum(t[(e, f)] for e in full_src)
                for e in full_src:
                    share = t[(e, f)] / den
                    counts[(e, f)] += share
                    totals[e] += share
        t = {
            (e, f): (counts[(e, f)] + add) / (totals[e] + add * big_f)
            if totals[e] + add * big_f > 0
            else 1.0 / big_f
            for e in e_vocab
            for f in f_vocab
        }
    return t


def table_prob(corpus, table, e_word, f_word):
    """t(f|e) looked up by word strings; e_word may be the NULL token."""
    e = 0 if e_word == NULL else corpus.source_vocab.id(e_word)
    return table.prob(e, corpus.target_vocab.id(f_word))


def garbage_collector_corpus():
    """200 pairs with one singleton source word amid frequent words.

    Five frequent source words each have a dominant translation plus a
    secondary one used in every fifth pair.  The last pair embeds the
    singleton 'estar' in a sentence whose other targets are secondary
    translations, so unsmoothed training lets 'estar' capture them.
    One-off filler word pairs keep the target vocabulary large.
    """
    src, tgt = [], []
    mains = [f"m{i}" for i in range(5)]
    doms = [f"d{i}" for i in range(5)]
    rares = [f"r{i}" for i in range(5)]
    for n in range(199):
        if n % 5 == 0:
            a = (n // 5) % 5
            b = (a + 2) % 5
            src.append([mains[a], mains[b]])
            tgt.append([rares[a], doms[b]])
        else:
            a = n % 5
            b = (n + 2) % 5
            src.append([mains[a], mains[b], f"u{n}"])
            tgt.append([doms[a], doms[b], f"v{n}"])
    src.append(["m0", "m1", "m2", "estar"])
    tgt.append(["r0", "r1", "r2", "gstar"])
    return corpus_from_tokens(src, tgt)
