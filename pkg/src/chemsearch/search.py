"""Structure search, multimodal fusion, and reaction navigation.

The engine precomputes, from an immutable corpus plus resolved links:

* the deduplicated compound table (canonical SMILES with their sources),
* per-passage compound annotations (linked diagrams, reaction entities,
  dictionary-resolved names),
* fingerprints and parsed graphs for every unique compound.

Multimodal ranking is lexicographic: more matched query compounds always
beats a better text score; the BM25 score (min-max normalized within the
candidate set) breaks ties, then the passage id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from chemsearch.corpus import (
    BoundingBox,
    Corpus,
    Passage,
    ReactionRecord,
    unique_compounds,
)
from chemsearch.fingerprint import Fingerprint, morgan_fingerprint, tanimoto
from chemsearch.linker import CompoundLink
from chemsearch.molgraph import MolecularGraph, canonical_smiles, parse_smiles
from chemsearch.querylang import MultimodalQuery
from chemsearch.substruct import has_substructure
from chemsearch.textindex import TextIndex, search_text, tokenize_text

MODE_EXACT = "exact"
MODE_SIMILARITY = "similarity"
MODE_SUBSTRUCTURE = "substructure"

SOURCE_DIAGRAM = "diagram"
SOURCE_REACTION_ENTITY = "reaction_entity"
SOURCE_NAME = "name"


class UnknownDocument(KeyError):
    """Reaction navigation for a document id that is not in the corpus."""


@dataclass(frozen=True)
class StructureHit:
    canonical: str
    score: float
    mode: str  # exact | similarity | substructure
    sources: tuple[tuple[str, str], ...]  # (kind, id), kind in {diagram, reaction_entity, name}


@dataclass
class SearchResult:
    passage_id: str
    doc_id: str
    text_score: float
    matched_smiles: list[str]  # query-compound canonical forms found here
    reactions: list[str]
    highlights: list[tuple[int, int]]
    rank: int


class Engine:
    """Read-only search engine over a corpus snapshot."""

    def __init__(self, corpus: Corpus, links: list[CompoundLink], text_index: TextIndex):
        self.corpus = corpus
        self.links = links
        self.text_index = text_index

        self.compounds: list[str] = unique_compounds(corpus)
        self._graphs: dict[str, MolecularGraph] = {c: parse_smiles(c) for c in self.compounds}
        self._fps: dict[str, Fingerprint] = {
            c: morgan_fingerprint(g) for c, g in self._graphs.items()
        }

        self._sources: dict[str, set[tuple[str, str]]] = {c: set() for c in self.compounds}
        for diagram in corpus.diagrams.values():
            self._sources[diagram.canonical].add((SOURCE_DIAGRAM, diagram.diagram_id))
        for reaction in corpus.reactions.values():
            for entity in reaction.all_entities():
                if entity.canonical:
                    self._sources[entity.canonical].add((SOURCE_REACTION_ENTITY, reaction.reaction_id))
        for passage in corpus.passages.values():
            for name in passage.compound_names:
                canonical = corpus.name_canonical.get(name)
                if canonical:
                    self._sources[canonical].add((SOURCE_NAME, name))

        # passage -> compound annotations and their mention spans
        self.passage_compounds: dict[str, set[str]] = {
            pid: set() for pid in corpus.passages
        }
        self.passage_diagram_links: dict[str, list[tuple[str, str]]] = {
            pid: [] for pid in corpus.passages
        }  # (diagram_id, canonical)
        self._mention_spans: dict[str, dict[str, list[tuple[int, int]]]] = {
            pid: {} for pid in corpus.passages
        }
        for link in links:
            pid = link.mention.passage_id
            canonical = corpus.diagrams[link.diagram_id].canonical
            self.passage_compounds[pid].add(canonical)
            self.passage_diagram_links[pid].append((link.diagram_id, canonical))
            self._mention_spans[pid].setdefault(canonical, []).append(
                (link.mention.start, link.mention.end)
            )
        for passage in corpus.passages.values():
            if passage.reaction_id in corpus.reactions:
                for entity in corpus.reactions[passage.reaction_id].all_entities():
                    if entity.canonical:
                        self.passage_compounds[passage.passage_id].add(entity.canonical)
            for name in passage.compound_names:
                canonical = corpus.name_canonical.get(name)
                if canonical:
                    self.passage_compounds[passage.passage_id].add(canonical)

        self._candidates_cached = lru_cache(maxsize=256)(self._substructure_candidates)

    # -- structure search ---------------------------------------------------

    def search_similarity(self, query_smiles: str, k: int = 10) -> list[StructureHit]:
        """All unique compounds ranked by Tanimoto against the query."""
        query_canonical = canonical_smiles(parse_smiles(query_smiles))
        query_fp = morgan_fingerprint(self._graphs.get(query_canonical) or parse_smiles(query_canonical))
        scored = []
        for compound in self.compounds:
            score = tanimoto(query_fp, self._fps[compound])
            scored.append((-score, compound, score))
        scored.sort()
        hits = []
        for _neg, compound, score in scored[:k]:
            mode = MODE_EXACT if compound == query_canonical else MODE_SIMILARITY
            hits.append(StructureHit(compound, score, mode, self._sorted_sources(compound)))
        return hits

    def search_substructure(self, query_smiles: str) -> list[StructureHit]:
        """Unique compounds containing the query as a subgraph."""
        pattern = parse_smiles(query_smiles)
        hits = []
        for compound in self.compounds:
            if has_substructure(pattern, self._graphs[compound]):
                hits.append(StructureHit(compound, 1.0, MODE_SUBSTRUCTURE, self._sorted_sources(compound)))
        return hits

    def _sorted_sources(self, compound: str) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self._sources[compound]))

    def _substructure_candidates(self, query_canonical: str) -> frozenset[str]:
        pattern = parse_smiles(query_canonical)
        return frozenset(
            c for c in self.compounds if has_substructure(pattern, self._graphs[c])
        )

    def substructure_candidates(self, query_smiles: str) -> frozenset[str]:
        """Indexed compounds that contain the query compound (cached)."""
        return self._candidates_cached(canonical_smiles(parse_smiles(query_smiles)))

    # -- multimodal search --------------------------------------------------

    def search_multimodal(self, query: MultimodalQuery) -> list[SearchResult]:
        """Fuse BM25 hits with compound-annotation matches.

        Candidates are the union of BM25 hits and passages annotated with a
        substructure superset of any query compound; ranking is
        (matched-compound count desc, normalized text score desc, passage id).
        """
        query_compounds = []
        for smiles in query.all_smiles():
            canonical = canonical_smiles(parse_smiles(smiles))
            if canonical not in query_compounds:
                query_compounds.append(canonical)

        candidates_by_compound = {
            qc: self._candidates_cached(qc) for qc in query_compounds
        }

        bm25: dict[str, float] = {}
        if query.text:
            for ordinal, score in search_text(self.text_index, query.text, self.text_index.n):
                bm25[self.text_index.passage_ids[ordinal]] = score

        indexed = set(self.text_index.passage_ids)
        candidate_ids = set(bm25)
        for qc in query_compounds:
            hits = candidates_by_compound[qc]
            for pid, annotated in self.passage_compounds.items():
                if pid in indexed and annotated & hits:
                    candidate_ids.add(pid)

        matched: dict[str, list[str]] = {}
        for pid in candidate_ids:
            annotated = self.passage_compounds[pid]
            matched[pid] = [
                qc for qc in query_compounds if annotated & candidates_by_compound[qc]
            ]

        lo = min(bm25.values(), default=0.0)
        hi = max(bm25.values(), default=0.0)
        span = hi - lo

        def norm(pid: str) -> float:
            if pid not in bm25 or span == 0:
                return 1.0 if pid in bm25 and hi > 0 else 0.0
            return (bm25[pid] - lo) / span

        ranked = sorted(
            candidate_ids,
            key=lambda pid: (-len(matched[pid]), -norm(pid), pid),
        )[: query.k]

        results = []
        for rank, pid in enumerate(ranked, start=1):
            passage = self.corpus.passages[pid]
            results.append(SearchResult(
                passage_id=pid,
                doc_id=passage.doc_id,
                text_score=bm25.get(pid, 0.0),
                matched_smiles=sorted(matched[pid]),
                reactions=[passage.reaction_id] if passage.reaction_id else [],
                highlights=self._highlights(passage, matched[pid], candidates_by_compound, query.text),
                rank=rank,
            ))
        return results

    def _highlights(
        self,
        passage: Passage,
        matched_compounds: list[str],
        candidates_by_compound: dict[str, frozenset[str]],
        text_query: str | None,
    ) -> list[tuple[int, int]]:
        spans: set[tuple[int, int]] = set()
        span_map = self._mention_spans[passage.passage_id]
        for qc in matched_compounds:
            for annotated in candidates_by_compound[qc]:
                for span in span_map.get(annotated, ()):
                    spans.add(span)
        if text_query:
            for token in set(tokenize_text(text_query)):
                for match in re.finditer(rf"\b{re.escape(token)}\b", passage.text, re.IGNORECASE):
                    spans.add(match.span())
        return sorted(spans)

    # -- navigation ---------------------------------------------------------

    def list_reactions(self, doc_id: str) -> list[tuple[ReactionRecord, int, list[BoundingBox]]]:
        """All reactions of a document with their passage page and boxes,
        in (page, box top, reaction id) order."""
        if doc_id not in self.corpus.documents:
            raise UnknownDocument(doc_id)
        entries = []
        for reaction in self.corpus.reactions.values():
            passage = self.corpus.passages[reaction.passage_id]
            if passage.doc_id != doc_id:
                continue
            top = passage.boxes[0].y0 if passage.boxes else 0.0
            entries.append((passage.page, top, reaction.reaction_id, reaction, passage))
        entries.sort(key=lambda e: (e[0], e[1], e[2]))
        return [(reaction, passage.page, passage.boxes) for _, _, _, reaction, passage in entries]

    def matched_diagram_ids(self, passage_id: str, query_smiles: str) -> list[str]:
        """Diagram ids linked from a passage whose compound contains the query."""
        hits = self.substructure_candidates(query_smiles)
        return sorted({
            diagram_id
            for diagram_id, canonical in self.passage_diagram_links[passage_id]
            if canonical in hits
        })
