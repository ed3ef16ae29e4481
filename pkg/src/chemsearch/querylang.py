"""Query parsing: reaction strings, chemical-name tokenization, multimodal queries.

A reaction query is ``reactants>agents>products`` with ``.`` separating the
compounds of each section; every compound is a plain SMILES string.  Chemical
names are tokenized into locants and vocabulary fragments so that searches
can hit constituent groups ("bromo", "phenyl") instead of whole names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from chemsearch.molgraph import SmilesParseError, parse_smiles

_SECTIONS = ("reactants", "agents", "products")


class EmptyQuery(ValueError):
    """No query modality supplied."""


class WrongSeparatorCount(ValueError):
    """Reaction string does not contain exactly two '>' separators."""


class ComponentParseError(ValueError):
    """A compound inside a reaction or SMILES list failed to parse."""

    def __init__(self, component: str, section: str, index: int, cause: Exception):
        self.component = component
        self.section = section
        self.index = index
        self.cause = cause
        super().__init__(
            f"bad SMILES {component!r} ({section}[{index}]): {cause}"
        )


@dataclass
class ReactionQuery:
    reactants: list[str]
    agents: list[str]
    products: list[str]

    def all_components(self) -> list[str]:
        return self.reactants + self.agents + self.products


@dataclass
class MultimodalQuery:
    text: str | None = None
    smiles: list[str] = field(default_factory=list)
    reaction: ReactionQuery | None = None
    k: int = 10

    def all_smiles(self) -> list[str]:
        out = list(self.smiles)
        if self.reaction is not None:
            out.extend(self.reaction.all_components())
        return out


def parse_reaction_smarts(s: str) -> ReactionQuery:
    """Split ``reactants>agents>products`` and validate every compound.

    Empty sections give empty lists; empty components (doubled dots) are
    skipped.  Raises :class:`WrongSeparatorCount` unless exactly two ``>``
    are present, and :class:`ComponentParseError` for a bad compound.
    """
    parts = s.split(">")
    if len(parts) != 3:
        raise WrongSeparatorCount(
            f"expected exactly two '>' separators, found {len(parts) - 1}"
        )
    sections = []
    for name, chunk in zip(_SECTIONS, parts):
        components = [c.strip() for c in chunk.split(".")]
        components = [c for c in components if c]
        for idx, comp in enumerate(components):
            try:
                parse_smiles(comp)
            except SmilesParseError as exc:
                raise ComponentParseError(comp, name, idx, exc) from exc
        sections.append(components)
    return ReactionQuery(*sections)


# ---------------------------------------------------------------------------
# Chemical-name tokenization
# ---------------------------------------------------------------------------

_PUNCT = re.compile(r"[\s\-\(\)\[\]\{\},;'’]+")
_RUNS = re.compile(r"[A-Za-z]+|\d+")


def load_fragment_vocabulary(path: str | None = None) -> frozenset[str]:
    """Load the fragment vocabulary (one token per line, '#' comments)."""
    if path is None:
        return _default_vocabulary()
    with open(path, encoding="utf-8") as fh:
        return _parse_vocabulary(fh.read())


@lru_cache(maxsize=1)
def _default_vocabulary() -> frozenset[str]:
    text = resources.files("chemsearch.data").joinpath("iupac_fragments.txt").read_text("utf-8")
    return _parse_vocabulary(text)


def _parse_vocabulary(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def _greedy_segment(run: str, vocabulary: frozenset[str]) -> list[str] | None:
    """Cover ``run`` with vocabulary fragments, longest match first.

    Returns None when the run cannot be fully covered.
    """
    parts = []
    pos = 0
    while pos < len(run):
        match = None
        for end in range(len(run), pos, -1):
            if run[pos:end] in vocabulary:
                match = run[pos:end]
                break
        if match is None:
            return None
        parts.append(match)
        pos += len(match)
    return parts


def tokenize_iupac(name: str, vocabulary: frozenset[str] | None = None) -> list[str]:
    """Split a chemical name into locants and constituent group fragments.

    Punctuation becomes separators, digits split from letters, and alphabetic
    runs are segmented against the vocabulary; single-letter locants keep
    their case, everything else is lowercased.
    """
    if vocabulary is None:
        vocabulary = _default_vocabulary()
    tokens: list[str] = []
    for word in _PUNCT.split(name):
        if not word:
            continue
        for run in _RUNS.findall(word):
            if run.isdigit() or len(run) == 1:
                tokens.append(run)
                continue
            low = run.lower()
            segments = _greedy_segment(low, vocabulary)
            tokens.extend(segments if segments else [low])
    return tokens


# ---------------------------------------------------------------------------
# Multimodal query assembly
# ---------------------------------------------------------------------------

def parse_query(
    text: str | None = None,
    smiles_csv: str | None = None,
    reaction: str | None = None,
    k: int = 10,
) -> MultimodalQuery:
    """Build a multimodal query from raw request fields.

    ``smiles_csv`` is comma-separated; every SMILES is validated so bad input
    fails here rather than deep inside a search.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    text = text.strip() if text and text.strip() else None

    smiles: list[str] = []
    if smiles_csv and smiles_csv.strip():
        components = [c.strip() for c in smiles_csv.split(",")]
        components = [c for c in components if c]
        for idx, comp in enumerate(components):
            try:
                parse_smiles(comp)
            except SmilesParseError as exc:
                raise ComponentParseError(comp, "smiles", idx, exc) from exc
        smiles = components

    parsed_reaction = None
    if reaction and reaction.strip():
        parsed_reaction = parse_reaction_smarts(reaction.strip())

    if text is None and not smiles and parsed_reaction is None:
        raise EmptyQuery("query needs text, SMILES, or a reaction string")
    return MultimodalQuery(text=text, smiles=smiles, reaction=parsed_reaction, k=k)
