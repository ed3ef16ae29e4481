"""Tokenization and BM25 retrieval over passage text.

No stemming and no stop words: chemical text is token-sensitive ("4b",
"Pd").  Words shaped like chemical names (hyphen or bracket plus a letter
and a digit) are expanded through the chemical-name tokenizer so queries
can hit constituent groups.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from chemsearch.corpus import Passage, ReactionRecord
from chemsearch.querylang import tokenize_iupac

K1 = 1.2
B = 0.75

_WORD = re.compile(r"[a-z0-9]+")
_EDGE_PUNCT = ".,;:!?\"'`"


class EmptyCorpus(ValueError):
    """Attempt to build a text index over zero passages."""


def _is_chemical_name(word: str) -> bool:
    if not any(c in "-[]()" for c in word):
        return False
    return any(c.isalpha() for c in word) and any(c.isdigit() for c in word)


def tokenize_text(s: str) -> list[str]:
    """Lowercase word tokens; chemical-name words expand into fragments."""
    tokens: list[str] = []
    for raw in s.split():
        word = raw.strip(_EDGE_PUNCT)
        if word and _is_chemical_name(word):
            tokens.extend(t.lower() for t in tokenize_iupac(word))
        else:
            tokens.extend(_WORD.findall(raw.lower()))
    return tokens


@dataclass
class TextIndex:
    n: int
    avgdl: float
    lengths: list[int]
    postings: dict[str, list[tuple[int, int]]]  # term -> [(ordinal, tf)]
    passage_ids: list[str] = field(default_factory=list)


def build_text_index(
    passages: list[Passage],
    reactions: dict[str, ReactionRecord] | None = None,
) -> TextIndex:
    """Index passage text; reaction passages also index their entity names."""
    if not passages:
        raise EmptyCorpus("no passages to index")
    postings: dict[str, dict[int, int]] = {}
    lengths: list[int] = []
    for ordinal, passage in enumerate(passages):
        tokens = tokenize_text(passage.text)
        if reactions and passage.reaction_id in reactions:
            for entity in reactions[passage.reaction_id].all_entities():
                if entity.name:
                    tokens.extend(tokenize_text(entity.name))
        lengths.append(len(tokens))
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, {})[ordinal] = tf
    return TextIndex(
        n=len(passages),
        avgdl=sum(lengths) / len(lengths),
        lengths=lengths,
        postings={term: sorted(by_doc.items()) for term, by_doc in postings.items()},
        passage_ids=[p.passage_id for p in passages],
    )


def search_text(index: TextIndex, query: str, k: int) -> list[tuple[int, float]]:
    """BM25-ranked (passage ordinal, score); passages with no matching term
    are excluded, ties broken by ordinal."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores: dict[int, float] = {}
    for term, qtf in Counter(tokenize_text(query)).items():
        plist = index.postings.get(term)
        if not plist:
            continue
        df = len(plist)
        idf = math.log(1 + (index.n - df + 0.5) / (df + 0.5))
        for ordinal, tf in plist:
            norm = K1 * (1 - B + B * index.lengths[ordinal] / index.avgdl)
            scores[ordinal] = scores.get(ordinal, 0.0) + qtf * idf * tf * (K1 + 1) / (tf + norm)
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]
