import math
import random

import pytest

from chemsearch.corpus import ChemEntity, Passage, ReactionRecord
from chemsearch.textindex import (
    EmptyCorpus,
    K1,
    B,
    build_text_index,
    search_text,
    tokenize_text,
)


def passage(pid, text, kind="general", reaction_id=None):
    return Passage(pid, "doc", kind, text, 1, [], [], reaction_id)


class TestTokenize:
    def test_plain_words(self):
        assert tokenize_text("Suzuki coupling at 80") == ["suzuki", "coupling", "at", "80"]

    def test_chemical_name_expansion(self):
        tokens = tokenize_text("we prepared N-((E)-2-bromo-2-phenylvinyl)-cinnamamide today")
        for expected in ("bromo", "phenyl", "vinyl", "cinnamamide"):
            assert expected in tokens

    def test_empty(self):
        assert tokenize_text("") == []

    def test_identifier_tokens_survive(self):
        assert "4b" in tokenize_text("compound 4b crystallized")

    def test_sentence_punctuation_stripped(self):
        assert tokenize_text("ethanol, then water.") == ["ethanol", "then", "water"]


class TestBuildIndex:
    def test_statistics(self):
        idx = build_text_index([passage("a", "a b"), passage("b", "a"), passage("c", "c a b")])
        assert idx.n == 3
        assert idx.avgdl == pytest.approx((2 + 1 + 3) / 3)
        assert idx.lengths == [2, 1, 3]

    def test_term_frequency(self):
        idx = build_text_index([passage("x", "a b a")])
        assert idx.postings["a"] == [(0, 2)]
        assert idx.postings["b"] == [(0, 1)]

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            build_text_index([])

    def test_reaction_entity_names_indexed(self):
        reaction = ReactionRecord(
            "r1", "p1",
            reactants=[ChemEntity(name="phenylzinc bromide")],
            products=[ChemEntity(name="biarylphosphine")],
        )
        idx = build_text_index(
            [passage("p1", "coupling proceeded", kind="reaction", reaction_id="r1")],
            reactions={"r1": reaction},
        )
        assert "phenylzinc" in idx.postings
        assert "biarylphosphine" in idx.postings


class TestSearch:
    def test_hand_computed_score(self):
        idx = build_text_index([passage("d1", "a b"), passage("d2", "a")])
        results = search_text(idx, "b", k=10)
        assert len(results) == 1
        ordinal, score = results[0]
        assert ordinal == 0
        assert score == pytest.approx(0.6100, abs=1e-4)

    def test_absent_term(self):
        idx = build_text_index([passage("d1", "a b"), passage("d2", "a")])
        assert search_text(idx, "zzz", k=5) == []

    def test_shorter_doc_ranks_higher(self):
        idx = build_text_index([passage("d1", "a b"), passage("d2", "a")])
        results = search_text(idx, "a", k=5)
        assert [o for o, _ in results] == [1, 0]

    def test_zero_match_passages_excluded(self):
        idx = build_text_index([passage("d1", "x y"), passage("d2", "a")])
        results = search_text(idx, "a", k=5)
        assert [o for o, _ in results] == [1]

    def test_k_limits_results(self):
        idx = build_text_index([passage(str(i), "common") for i in range(8)])
        assert len(search_text(idx, "common", k=3)) == 3

    def test_tie_broken_by_ordinal(self):
        idx = build_text_index([passage("d1", "a"), passage("d2", "a")])
        assert [o for o, _ in search_text(idx, "a", k=5)] == [0, 1]

    def test_tf_monotonicity_synthetic(self):
        # adding one query-term occurrence (length fixed) never lowers the score
        rng = random.Random(5)
        for _ in range(200):
            tf = rng.randint(1, 30)
            dl = rng.randint(tf + 1, 200)
            avgdl = rng.uniform(5, 150)
            n, df = 100, rng.randint(1, 99)
            idf = math.log(1 + (n - df + 0.5) / (df + 0.5))

            def bm25(tf_):
                return idf * tf_ * (K1 + 1) / (tf_ + K1 * (1 - B + B * dl / avgdl))

            assert bm25(tf + 1) >= bm25(tf)
