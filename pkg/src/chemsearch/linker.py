"""Compound-passage-diagram linking.

Two strategies, mirroring how mentions arise in text:

* text: a diagram-label mention ("compound 5") is matched to the closest
  diagram label by normalized Levenshtein ratio;
* structure: a mention resolved to a SMILES (entity or dictionary name) is
  matched to the diagram with the highest fingerprint Tanimoto score.

When both strategies produce a candidate for one mention, the higher score
wins; exact ties keep the text link.  Reaction passages only link their
reactant and product entities.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import hypot, inf

from chemsearch.corpus import Corpus, Diagram, Passage
from chemsearch.fingerprint import Fingerprint, morgan_fingerprint, tanimoto
from chemsearch.molgraph import parse_smiles

DEFAULT_TEXT_THRESHOLD = 0.5
DEFAULT_STRUCTURE_THRESHOLD = 0.5

# Identifier-shaped tokens ("5", "4b") double as label mentions.
LABEL_SHAPE = re.compile(r"\d{1,3}[a-z]?", re.IGNORECASE)

# Identifiers chained after a matched mention: "compounds 4b and 7".
_CONTINUATION = re.compile(r"(?:\s*,\s*(?:and\s+|or\s+)?|\s+(?:and|or)\s+|\s*&\s*)(\d{1,3}[a-z]?)\b")

METHOD_TEXT = "text"
METHOD_STRUCTURE = "structure"


@dataclass(frozen=True)
class Mention:
    """A compound mention in passage text; span is [start, end)."""

    passage_id: str
    start: int
    end: int
    surface: str
    label_token: str | None = None
    resolved_smiles: str | None = None


@dataclass(frozen=True)
class CompoundLink:
    mention: Mention
    diagram_id: str
    method: str  # text | structure
    score: float


@dataclass
class LinkerConfig:
    patterns: list[re.Pattern]
    text_threshold: float = DEFAULT_TEXT_THRESHOLD
    structure_threshold: float = DEFAULT_STRUCTURE_THRESHOLD

    @classmethod
    def default(cls) -> "LinkerConfig":
        return cls(patterns=list(_default_patterns()))


def load_mention_patterns(path: str) -> list[re.Pattern]:
    """One regular expression per line; '#' comments and blank lines skipped."""
    with open(path, encoding="utf-8") as fh:
        return _parse_patterns(fh.read())


@lru_cache(maxsize=1)
def _default_patterns() -> tuple[re.Pattern, ...]:
    text = resources.files("chemsearch.data").joinpath("mention_patterns.txt").read_text("utf-8")
    return tuple(_parse_patterns(text))


def _parse_patterns(text: str) -> list[re.Pattern]:
    patterns = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        patterns.append(re.compile(line))
    return patterns


# ---------------------------------------------------------------------------
# Mention detection
# ---------------------------------------------------------------------------

def detect_label_mentions(passage: Passage, patterns: list[re.Pattern] | None = None) -> list[Mention]:
    """Find diagram-label mentions in passage text, left to right.

    Each pattern match yields one mention for its label group; identifiers
    chained with commas/conjunctions right after the match are also picked
    up.  Overlapping hits keep the leftmost mention.
    """
    if patterns is None:
        patterns = list(_default_patterns())
    text = passage.text
    found: list[tuple[int, int, str]] = []
    for pattern in patterns:
        for match in pattern.finditer(text):
            groups = match.groupdict()
            if "label" in groups and groups["label"] is not None:
                token = groups["label"]
                start, end = match.span("label")
            elif match.groups():
                token = match.group(1)
                start, end = match.span(1)
            else:
                token = match.group(0)
                start, end = match.span(0)
            found.append((start, end, token))
            pos = end
            while True:
                cont = _CONTINUATION.match(text, pos)
                if not cont:
                    break
                found.append((cont.start(1), cont.end(1), cont.group(1)))
                pos = cont.end(1)

    found.sort(key=lambda t: (t[0], -(t[1] - t[0])))
    mentions: list[Mention] = []
    last_end = -1
    for start, end, token in found:
        if start < last_end:
            continue
        mentions.append(Mention(passage.passage_id, start, end, text[start:end], label_token=token))
        last_end = end
    return mentions


def levenshtein_ratio(a: str, b: str) -> float:
    """Normalized similarity (|a|+|b|-d) / (|a|+|b|) with edit costs
    insert=1, delete=1, substitute=2; 1.0 when both strings are empty."""
    if not a and not b:
        return 1.0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (0 if ca == cb else 2),
            ))
        prev = cur
    total = len(a) + len(b)
    return (total - prev[-1]) / total


# ---------------------------------------------------------------------------
# Linking strategies
# ---------------------------------------------------------------------------

def link_by_label(
    mention: Mention,
    diagrams: list[Diagram],
    passage_geom: Passage,
    threshold: float = DEFAULT_TEXT_THRESHOLD,
) -> CompoundLink | None:
    """Best label match by ratio; spatial proximity only breaks score ties."""
    if mention.label_token is None:
        return None
    anchor = passage_geom.boxes[0].center() if passage_geom.boxes else None

    def distance(d: Diagram) -> float:
        if anchor is None:
            return inf
        cx, cy = d.box.center()
        return hypot(cx - anchor[0], cy - anchor[1])

    candidates = []
    for d in diagrams:
        if d.label is None:
            continue
        ratio = levenshtein_ratio(mention.label_token.lower(), d.label.lower())
        if ratio < threshold:
            continue
        same_page = 0 if d.page == passage_geom.page else 1
        candidates.append((-ratio, same_page, distance(d), d.diagram_id, ratio))
    if not candidates:
        return None
    candidates.sort()
    _, _, _, diagram_id, ratio = candidates[0]
    return CompoundLink(mention, diagram_id, METHOD_TEXT, ratio)


def link_by_structure(
    mention: Mention,
    diagrams: list[Diagram],
    threshold: float = DEFAULT_STRUCTURE_THRESHOLD,
    fingerprints: dict[str, Fingerprint] | None = None,
) -> CompoundLink | None:
    """Diagram with the highest Tanimoto score against the resolved SMILES."""
    if mention.resolved_smiles is None:
        return None
    cache = fingerprints if fingerprints is not None else {}

    def fp_for(smiles: str) -> Fingerprint:
        if smiles not in cache:
            cache[smiles] = morgan_fingerprint(parse_smiles(smiles))
        return cache[smiles]

    query_fp = fp_for(mention.resolved_smiles)
    candidates = []
    for d in diagrams:
        score = tanimoto(query_fp, fp_for(d.canonical))
        if score >= threshold:
            candidates.append((-score, d.diagram_id, score))
    if not candidates:
        return None
    candidates.sort()
    _, diagram_id, score = candidates[0]
    return CompoundLink(mention, diagram_id, METHOD_STRUCTURE, score)


# ---------------------------------------------------------------------------
# Corpus-wide resolution
# ---------------------------------------------------------------------------

def _name_occurrences(text: str, name: str) -> list[tuple[int, int]]:
    pattern = re.escape(name)
    if name[:1].isalnum():
        pattern = r"\b" + pattern
    if name[-1:].isalnum():
        pattern = pattern + r"\b"
    return [m.span() for m in re.finditer(pattern, text, re.IGNORECASE)]


def _passage_mentions(corpus: Corpus, passage: Passage, config: LinkerConfig) -> list[Mention]:
    """Label mentions plus name mentions, merged and non-overlapping."""
    by_span: dict[tuple[int, int], dict] = {}

    for m in detect_label_mentions(passage, config.patterns):
        by_span[(m.start, m.end)] = {"label": m.label_token, "smiles": None}

    # Which names carry structure evidence depends on the passage kind:
    # reaction passages link their reactant/product entities, general
    # passages link dictionary-resolved compound names.
    names: dict[str, str | None] = {}
    if passage.kind == "reaction" and passage.reaction_id in corpus.reactions:
        record = corpus.reactions[passage.reaction_id]
        for entity in record.reactants + record.products:
            if entity.name:
                names[entity.name] = entity.canonical or corpus.name_canonical.get(entity.name)
    else:
        for name in passage.compound_names:
            names[name] = corpus.name_canonical.get(name)

    for name, smiles in sorted(names.items()):
        label = name if LABEL_SHAPE.fullmatch(name) else None
        if smiles is None and label is None:
            continue
        for span in _name_occurrences(passage.text, name):
            entry = by_span.setdefault(span, {"label": None, "smiles": None})
            if entry["label"] is None:
                entry["label"] = label
            if entry["smiles"] is None:
                entry["smiles"] = smiles

    mentions = [
        Mention(passage.passage_id, start, end, passage.text[start:end],
                label_token=entry["label"], resolved_smiles=entry["smiles"])
        for (start, end), entry in by_span.items()
    ]
    mentions.sort(key=lambda m: (m.start, -(m.end - m.start)))
    kept: list[Mention] = []
    last_end = -1
    for m in mentions:
        if m.start < last_end:
            continue
        kept.append(m)
        last_end = m.end
    return kept


def resolve_links(corpus: Corpus, config: LinkerConfig | None = None) -> list[CompoundLink]:
    """Link every mention in the corpus; at most one link per mention.

    Pure function of the corpus: repeated runs produce identical output,
    sorted by (passage, span).
    """
    if config is None:
        config = LinkerConfig.default()
    fingerprints: dict[str, Fingerprint] = {}
    links: list[CompoundLink] = []

    diagrams_by_doc: dict[str, list[Diagram]] = {}
    for diagram in corpus.diagrams.values():
        diagrams_by_doc.setdefault(diagram.doc_id, []).append(diagram)
    for doc_diagrams in diagrams_by_doc.values():
        doc_diagrams.sort(key=lambda d: d.diagram_id)

    for passage_id in sorted(corpus.passages):
        passage = corpus.passages[passage_id]
        diagrams = diagrams_by_doc.get(passage.doc_id, [])
        if not diagrams:
            continue
        for mention in _passage_mentions(corpus, passage, config):
            text_link = link_by_label(mention, diagrams, passage, config.text_threshold)
            structure_link = link_by_structure(
                mention, diagrams, config.structure_threshold, fingerprints
            )
            if text_link and structure_link:
                chosen = structure_link if structure_link.score > text_link.score else text_link
            else:
                chosen = text_link or structure_link
            if chosen is not None:
                links.append(chosen)

    links.sort(key=lambda l: (l.mention.passage_id, l.mention.start, l.mention.end))
    return links
