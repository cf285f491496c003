import math
import random

import pytest

from alignsmooth import (
    TrainConfig,
    TranslationTable,
    UnknownTokenError,
    Vocabulary,
    corpus_from_tokens,
    link_posterior,
    pair_log_likelihood,
    read_table,
    train,
    uniform_init,
    viterbi_align,
    write_table,
)
from alignsmooth.corpus import NULL_TOKEN, SentencePair

from helpers import random_corpus, t1_corpus


def vocabs(n_source, n_target):
    source = Vocabulary.with_null()
    for i in range(n_source):
        source.add(f"s{i}")
    target = Vocabulary([f"t{i}" for i in range(n_target)])
    return source, target


def random_table(seed, corpus):
    """Random positive rows over each pair's own targets, unnormalized."""
    rng = random.Random(seed)
    rows = {}
    for pair in corpus.pairs:
        for e in (0,) + pair.source:
            row = rows.setdefault(e, {})
            for f in pair.target:
                row[f] = rng.uniform(0.01, 1.0)
    return TranslationTable(rows, {}, corpus.source_vocab, corpus.target_vocab)


class TestUniformInit:
    def test_entries_are_one_over_f(self):
        source, target = vocabs(2, 3)
        table = uniform_init(source, target)
        assert table.prob(1, 0) == pytest.approx(1 / 3, abs=0)
        assert table.prob(0, 2) == pytest.approx(1 / 3, abs=0)

    def test_single_target_word(self):
        source, target = vocabs(2, 1)
        table = uniform_init(source, target)
        assert table.prob(1, 0) == 1.0

    def test_rows_sum_to_one(self):
        source, target = vocabs(4, 7)
        table = uniform_init(source, target)
        for e in range(len(source)):
            assert table.row_total(e) == pytest.approx(1.0, abs=1e-12)

    def test_empty_vocab_rejected(self):
        source, _ = vocabs(2, 3)
        with pytest.raises(ValueError):
            uniform_init(source, Vocabulary())


class TestLinkPosterior:
    def test_uniform_table_is_uniform(self):
        corpus = t1_corpus()
        table = uniform_init(corpus.source_vocab, corpus.target_vocab)
        posterior = link_posterior(corpus.pairs[0], table)
        for row in posterior:
            assert row == pytest.approx([1 / 3, 1 / 3, 1 / 3])

    def test_hand_example(self):
        # t(house|haus)=1/2, t(house|das)=1/4, t(house|NULL)=1/4
        corpus = t1_corpus()
        sv, tv = corpus.source_vocab, corpus.target_vocab
        house = tv.id("house")
        rows = {0: {house: 0.25}, sv.id("das"): {house: 0.25}, sv.id("haus"): {house: 0.5}}
        table = TranslationTable(rows, {}, sv, tv)
        pair = SentencePair((sv.id("das"), sv.id("haus")), (house,))
        assert link_posterior(pair, table)[0] == pytest.approx([0.25, 0.25, 0.5])

    def test_all_zero_column_goes_uniform(self):
        corpus = t1_corpus()
        table = TranslationTable({}, {}, corpus.source_vocab, corpus.target_vocab)
        posterior = link_posterior(corpus.pairs[0], table)
        assert posterior[0] == pytest.approx([1 / 3, 1 / 3, 1 / 3])

    def test_unknown_id_raises(self):
        corpus = t1_corpus()
        table = uniform_init(corpus.source_vocab, corpus.target_vocab)
        bad = SentencePair((99,), (0,))
        with pytest.raises(UnknownTokenError):
            link_posterior(bad, table)

    @pytest.mark.parametrize("seed", range(5))
    def test_rows_sum_to_one(self, seed):
        corpus = random_corpus(seed, max_pairs=10)
        table = random_table(seed, corpus)
        for pair in corpus.pairs:
            for row in link_posterior(pair, table):
                assert sum(row) == pytest.approx(1.0, abs=1e-9)


class TestViterbi:
    def test_after_one_iteration_house(self):
        corpus = t1_corpus()
        table = train(corpus, TrainConfig(iterations=1)).table
        alignment = viterbi_align(corpus.pairs[0], table)
        assert alignment[1] == 2  # house -> haus

    def test_after_one_iteration_the_breaks_tie_to_null(self):
        corpus = t1_corpus()
        table = train(corpus, TrainConfig(iterations=1)).table
        alignment = viterbi_align(corpus.pairs[0], table)
        assert alignment[0] == 0  # three-way tie at 1/2; smallest index wins

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_posterior_argmax(self, seed):
        corpus = random_corpus(seed, max_pairs=8)
        table = random_table(seed + 100, corpus)
        for pair in corpus.pairs:
            alignment = viterbi_align(pair, table)
            for j, row in enumerate(link_posterior(pair, table)):
                assert row[alignment[j]] == max(row)

    @pytest.mark.parametrize("seed", range(3))
    def test_column_scaling_invariance(self, seed):
        # scaling all t(f|.) of a fixed f by one positive constant keeps the argmax
        corpus = random_corpus(seed, max_pairs=6)
        table = random_table(seed, corpus)
        rng = random.Random(seed + 7)
        factor = {f: rng.uniform(0.5, 5.0) for f in range(len(corpus.target_vocab))}
        scaled_rows = {
            e: {f: factor[f] * v for f, v in row.items()} for e, row in table.rows.items()
        }
        scaled = TranslationTable(scaled_rows, {}, corpus.source_vocab, corpus.target_vocab)
        for pair in corpus.pairs:
            assert viterbi_align(pair, table) == viterbi_align(pair, scaled)


class TestPairLogLikelihood:
    def test_uniform_t1(self):
        corpus = t1_corpus()
        table = uniform_init(corpus.source_vocab, corpus.target_vocab)
        value = pair_log_likelihood(corpus.pairs[0], table)
        assert value == pytest.approx(-2 * math.log(3), abs=1e-12)

    def test_minimal_pair(self):
        corpus = corpus_from_tokens([["a"]], [["b"]])
        rows = {corpus.source_vocab.id("a"): {corpus.target_vocab.id("b"): 1.0}}
        table = TranslationTable(rows, {}, corpus.source_vocab, corpus.target_vocab)
        assert pair_log_likelihood(corpus.pairs[0], table) == pytest.approx(-math.log(2))

    def test_zero_column_gives_minus_inf(self):
        corpus = t1_corpus()
        table = TranslationTable({}, {}, corpus.source_vocab, corpus.target_vocab)
        assert pair_log_likelihood(corpus.pairs[0], table) == float("-inf")

    def test_monotone_in_single_entry(self):
        corpus = t1_corpus()
        sv, tv = corpus.source_vocab, corpus.target_vocab
        base = train(corpus, TrainConfig(iterations=1)).table
        reference = pair_log_likelihood(corpus.pairs[0], base)
        bumped_rows = {e: dict(row) for e, row in base.rows.items()}
        bumped_rows[sv.id("haus")][tv.id("house")] += 0.2
        bumped = TranslationTable(bumped_rows, dict(base.row_defaults), sv, tv)
        assert pair_log_likelihood(corpus.pairs[0], bumped) >= reference


class TestModelFile:
    def test_round_trip_exact(self, tmp_path):
        corpus = t1_corpus()
        table = train(corpus, TrainConfig(iterations=3)).table
        path = tmp_path / "model.tsv"
        write_table(table, path, iterations=3, strategy="none", lam=0.0)
        loaded, metadata = read_table(path)
        assert metadata["iterations"] == "3"
        assert int(metadata["source_vocab_size"]) == 4
        for e_word in corpus.source_vocab.words:
            for f_word in corpus.target_vocab.words:
                original = table.prob(corpus.source_vocab.id(e_word), corpus.target_vocab.id(f_word))
                got = loaded.prob(loaded.source_vocab.get(e_word), loaded.target_vocab.get(f_word))
                assert got == original

    def test_smoothed_round_trip_expands_defaults(self, tmp_path):
        from alignsmooth import AddOne

        corpus = t1_corpus()
        table = train(corpus, TrainConfig(2, 1.0, AddOne(3))).table
        path = tmp_path / "model.tsv"
        write_table(table, path)
        loaded, _ = read_table(path)
        # every pair had nonzero probability, so the reload covers all of them
        for e in range(len(corpus.source_vocab)):
            assert loaded.row_total(e) == pytest.approx(1.0, abs=1e-9)

    def test_null_token_reserved_after_reload(self, tmp_path):
        corpus = t1_corpus()
        table = train(corpus, TrainConfig(iterations=1)).table
        path = tmp_path / "model.tsv"
        write_table(table, path)
        loaded, _ = read_table(path)
        assert loaded.source_vocab.word(0) == NULL_TOKEN
