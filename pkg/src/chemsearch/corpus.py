"""Corpus data model: ingestion, validation, and compound deduplication.

A corpus directory holds five UTF-8 files -- ``documents.jsonl``,
``passages.jsonl``, ``reactions.jsonl``, ``diagrams.jsonl`` (one JSON record
per line) and ``names.json`` (flat name -> SMILES object).  Records carry
exactly the documented fields; unknown fields are rejected.  Loading is
all-or-nothing: any schema violation, dangling reference, or unparseable
SMILES aborts the load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from chemsearch.molgraph import SmilesParseError, canonical_smiles, parse_smiles

INGESTION_FILES = (
    "documents.jsonl",
    "passages.jsonl",
    "reactions.jsonl",
    "diagrams.jsonl",
    "names.json",
)

PASSAGE_KINDS = ("reaction", "general")


class CorpusError(Exception):
    """Base error for corpus ingestion problems."""


class MissingFile(CorpusError):
    pass


class SchemaViolation(CorpusError):
    def __init__(self, file: str, line: int, field_name: str, message: str):
        self.file = file
        self.line = line
        self.field = field_name
        super().__init__(f"{file}:{line}: field {field_name!r}: {message}")


class DanglingReference(CorpusError):
    pass


class SmilesParseFailure(CorpusError):
    def __init__(self, record_id: str, smiles: str, cause: Exception):
        self.record_id = record_id
        self.smiles = smiles
        super().__init__(f"record {record_id!r}: bad SMILES {smiles!r}: {cause}")


@dataclass
class BoundingBox:
    """Page rectangle in PDF points, origin top-left."""

    x0: float
    y0: float
    x1: float
    y1: float

    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)


@dataclass
class Document:
    doc_id: str
    title: str
    num_pages: int
    source_path: str | None = None


@dataclass
class Passage:
    passage_id: str
    doc_id: str
    kind: str  # reaction | general
    text: str
    page: int
    boxes: list[BoundingBox] = field(default_factory=list)
    compound_names: list[str] = field(default_factory=list)
    reaction_id: str | None = None


@dataclass
class ChemEntity:
    name: str | None = None
    smiles: str | None = None
    canonical: str | None = None  # computed at load


@dataclass
class ReactionRecord:
    reaction_id: str
    passage_id: str
    reactants: list[ChemEntity] = field(default_factory=list)
    products: list[ChemEntity] = field(default_factory=list)
    catalysts: list[ChemEntity] = field(default_factory=list)
    solvents: list[ChemEntity] = field(default_factory=list)
    temperature: str | None = None
    yield_pct: float | None = None

    def all_entities(self) -> list[ChemEntity]:
        return self.reactants + self.products + self.catalysts + self.solvents


@dataclass
class Diagram:
    diagram_id: str
    doc_id: str
    page: int
    box: BoundingBox
    smiles: str
    canonical: str = ""  # computed at load
    label: str | None = None


@dataclass
class Corpus:
    documents: dict[str, Document]
    passages: dict[str, Passage]
    reactions: dict[str, ReactionRecord]
    diagrams: dict[str, Diagram]
    name_dictionary: dict[str, str]
    name_canonical: dict[str, str] = field(default_factory=dict)  # computed


# ---------------------------------------------------------------------------
# Record validation helpers
# ---------------------------------------------------------------------------

def _check_fields(record: dict, required: dict, optional: dict, file: str, line: int):
    for key in record:
        if key not in required and key not in optional:
            raise SchemaViolation(file, line, key, "unknown field")
    for key, types in required.items():
        if key not in record or record[key] is None:
            raise SchemaViolation(file, line, key, "missing required field")
        if not isinstance(record[key], types):
            raise SchemaViolation(file, line, key, f"expected {types}, got {type(record[key]).__name__}")
    for key, types in optional.items():
        if key in record and record[key] is not None and not isinstance(record[key], types):
            raise SchemaViolation(file, line, key, f"expected {types}, got {type(record[key]).__name__}")


def _parse_box(raw, file: str, line: int) -> BoundingBox:
    if not isinstance(raw, dict):
        raise SchemaViolation(file, line, "box", "expected an object with x0/y0/x1/y1")
    _check_fields(
        raw,
        {k: (int, float) for k in ("x0", "y0", "x1", "y1")},
        {},
        file,
        line,
    )
    box = BoundingBox(float(raw["x0"]), float(raw["y0"]), float(raw["x1"]), float(raw["y1"]))
    if box.x0 < 0 or box.y0 < 0 or box.x0 >= box.x1 or box.y0 >= box.y1:
        raise SchemaViolation(file, line, "box", "coordinates must satisfy 0 <= x0 < x1, 0 <= y0 < y1")
    return box


def _parse_entity(raw, file: str, line: int, owner: str) -> ChemEntity:
    if not isinstance(raw, dict):
        raise SchemaViolation(file, line, "entity", "expected an object")
    _check_fields(raw, {}, {"name": str, "smiles": str}, file, line)
    name = raw.get("name")
    smiles = raw.get("smiles")
    if not name and not smiles:
        raise SchemaViolation(file, line, "entity", "needs a name or a smiles")
    canonical = None
    if smiles:
        try:
            canonical = canonical_smiles(parse_smiles(smiles))
        except SmilesParseError as exc:
            raise SmilesParseFailure(owner, smiles, exc) from exc
    return ChemEntity(name=name, smiles=smiles, canonical=canonical)


def _read_jsonl(directory: Path, name: str) -> list[tuple[int, dict]]:
    path = directory / name
    records = []
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(name, lineno, "-", f"invalid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise SchemaViolation(name, lineno, "-", "expected a JSON object")
        records.append((lineno, record))
    return records


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_corpus(directory: str | Path) -> Corpus:
    """Load and validate an ingestion directory; all-or-nothing."""
    directory = Path(directory)
    for name in INGESTION_FILES:
        if not (directory / name).is_file():
            raise MissingFile(f"{name} not found in {directory}")

    raw = {
        "documents": _read_jsonl(directory, "documents.jsonl"),
        "passages": _read_jsonl(directory, "passages.jsonl"),
        "reactions": _read_jsonl(directory, "reactions.jsonl"),
        "diagrams": _read_jsonl(directory, "diagrams.jsonl"),
    }
    try:
        names = json.loads((directory / "names.json").read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation("names.json", 1, "-", f"invalid JSON: {exc}") from exc
    if not isinstance(names, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in names.items()
    ):
        raise SchemaViolation("names.json", 1, "-", "expected a flat name -> SMILES object")
    return build_corpus(raw, names)


def build_corpus(raw: dict[str, list[tuple[int, dict]]], names: dict[str, str]) -> Corpus:
    """Validate raw record dicts into a Corpus (shared by loader and snapshots)."""
    documents: dict[str, Document] = {}
    for line, rec in raw["documents"]:
        _check_fields(
            rec,
            {"doc_id": str, "title": str, "num_pages": int},
            {"source_path": str},
            "documents.jsonl",
            line,
        )
        if rec["num_pages"] < 1:
            raise SchemaViolation("documents.jsonl", line, "num_pages", "must be >= 1")
        if rec["doc_id"] in documents:
            raise SchemaViolation("documents.jsonl", line, "doc_id", f"duplicate {rec['doc_id']!r}")
        documents[rec["doc_id"]] = Document(
            rec["doc_id"], rec["title"], rec["num_pages"], rec.get("source_path")
        )

    passages: dict[str, Passage] = {}
    for line, rec in raw["passages"]:
        _check_fields(
            rec,
            {"passage_id": str, "doc_id": str, "kind": str, "text": str, "page": int, "boxes": list},
            {"compound_names": list, "reaction_id": str},
            "passages.jsonl",
            line,
        )
        if rec["kind"] not in PASSAGE_KINDS:
            raise SchemaViolation("passages.jsonl", line, "kind", f"must be one of {PASSAGE_KINDS}")
        if not rec["text"].strip():
            raise SchemaViolation("passages.jsonl", line, "text", "must be non-empty")
        if rec["passage_id"] in passages:
            raise SchemaViolation("passages.jsonl", line, "passage_id", f"duplicate {rec['passage_id']!r}")
        if rec["doc_id"] not in documents:
            raise DanglingReference(
                f"passages.jsonl:{line}: passage {rec['passage_id']!r} references unknown doc_id {rec['doc_id']!r}"
            )
        doc = documents[rec["doc_id"]]
        if not 1 <= rec["page"] <= doc.num_pages:
            raise SchemaViolation(
                "passages.jsonl", line, "page", f"page {rec['page']} outside 1..{doc.num_pages}"
            )
        if rec["kind"] == "reaction" and not rec.get("reaction_id"):
            raise SchemaViolation("passages.jsonl", line, "reaction_id", "required for reaction passages")
        compound_names = rec.get("compound_names") or []
        if not all(isinstance(n, str) and n for n in compound_names):
            raise SchemaViolation("passages.jsonl", line, "compound_names", "must be non-empty strings")
        boxes = [_parse_box(b, "passages.jsonl", line) for b in rec["boxes"]]
        passages[rec["passage_id"]] = Passage(
            rec["passage_id"], rec["doc_id"], rec["kind"], rec["text"], rec["page"],
            boxes, list(compound_names), rec.get("reaction_id"),
        )

    reactions: dict[str, ReactionRecord] = {}
    for line, rec in raw["reactions"]:
        _check_fields(
            rec,
            {"reaction_id": str, "passage_id": str},
            {
                "reactants": list, "products": list, "catalysts": list, "solvents": list,
                "temperature": str, "yield_pct": (int, float),
            },
            "reactions.jsonl",
            line,
        )
        if rec["reaction_id"] in reactions:
            raise SchemaViolation("reactions.jsonl", line, "reaction_id", f"duplicate {rec['reaction_id']!r}")
        if rec["passage_id"] not in passages:
            raise DanglingReference(
                f"reactions.jsonl:{line}: reaction {rec['reaction_id']!r} references unknown passage_id {rec['passage_id']!r}"
            )
        entities = {
            role: [_parse_entity(e, "reactions.jsonl", line, rec["reaction_id"]) for e in rec.get(role) or []]
            for role in ("reactants", "products", "catalysts", "solvents")
        }
        if not entities["reactants"] and not entities["products"]:
            raise SchemaViolation("reactions.jsonl", line, "reactants", "reactants or products must be non-empty")
        yield_pct = rec.get("yield_pct")
        if yield_pct is not None:
            yield_pct = float(yield_pct)
            if not 0 <= yield_pct <= 100:
                raise SchemaViolation("reactions.jsonl", line, "yield_pct", "must be in [0, 100]")
        reactions[rec["reaction_id"]] = ReactionRecord(
            rec["reaction_id"], rec["passage_id"],
            entities["reactants"], entities["products"], entities["catalysts"], entities["solvents"],
            rec.get("temperature"), yield_pct,
        )

    # reaction passages must point at real reactions
    for passage in passages.values():
        if passage.reaction_id is not None and passage.reaction_id not in reactions:
            raise DanglingReference(
                f"passage {passage.passage_id!r} references unknown reaction_id {passage.reaction_id!r}"
            )

    diagrams: dict[str, Diagram] = {}
    for line, rec in raw["diagrams"]:
        _check_fields(
            rec,
            {"diagram_id": str, "doc_id": str, "page": int, "box": dict, "smiles": str},
            {"label": str},
            "diagrams.jsonl",
            line,
        )
        if rec["diagram_id"] in diagrams:
            raise SchemaViolation("diagrams.jsonl", line, "diagram_id", f"duplicate {rec['diagram_id']!r}")
        if rec["doc_id"] not in documents:
            raise DanglingReference(
                f"diagrams.jsonl:{line}: diagram {rec['diagram_id']!r} references unknown doc_id {rec['doc_id']!r}"
            )
        doc = documents[rec["doc_id"]]
        if not 1 <= rec["page"] <= doc.num_pages:
            raise SchemaViolation(
                "diagrams.jsonl", line, "page", f"page {rec['page']} outside 1..{doc.num_pages}"
            )
        label = rec.get("label")
        if label is not None and not label.strip():
            raise SchemaViolation("diagrams.jsonl", line, "label", "must be a non-empty token when present")
        try:
            canonical = canonical_smiles(parse_smiles(rec["smiles"]))
        except SmilesParseError as exc:
            raise SmilesParseFailure(rec["diagram_id"], rec["smiles"], exc) from exc
        diagrams[rec["diagram_id"]] = Diagram(
            rec["diagram_id"], rec["doc_id"], rec["page"],
            _parse_box(rec["box"], "diagrams.jsonl", line), rec["smiles"], canonical, label,
        )

    name_canonical: dict[str, str] = {}
    for name, smiles in names.items():
        try:
            name_canonical[name] = canonical_smiles(parse_smiles(smiles))
        except SmilesParseError as exc:
            raise SmilesParseFailure(name, smiles, exc) from exc

    return Corpus(documents, passages, reactions, diagrams, dict(names), name_canonical)


# ---------------------------------------------------------------------------
# Derived views
# ---------------------------------------------------------------------------

def unique_compounds(corpus: Corpus) -> list[str]:
    """Sorted, deduplicated canonical SMILES across diagrams, reaction
    entities, and dictionary-resolved passage compound names."""
    seen: set[str] = set()
    for diagram in corpus.diagrams.values():
        seen.add(diagram.canonical)
    for reaction in corpus.reactions.values():
        for entity in reaction.all_entities():
            if entity.canonical:
                seen.add(entity.canonical)
    for passage in corpus.passages.values():
        for name in passage.compound_names:
            canonical = corpus.name_canonical.get(name)
            if canonical:
                seen.add(canonical)
    return sorted(seen)


def indexable_passages(corpus: Corpus, links) -> list[Passage]:
    """Passages that stay in the index: those with a reaction, a compound
    name, or at least one resolved compound link."""
    linked = {link.mention.passage_id for link in links}
    return [
        p for p in corpus.passages.values()
        if p.reaction_id is not None or p.compound_names or p.passage_id in linked
    ]


def corpus_to_records(corpus: Corpus) -> dict:
    """Serializable record form (inverse of :func:`build_corpus`)."""

    def box(b: BoundingBox) -> dict:
        return {"x0": b.x0, "y0": b.y0, "x1": b.x1, "y1": b.y1}

    def entity(e: ChemEntity) -> dict:
        out = {}
        if e.name is not None:
            out["name"] = e.name
        if e.smiles is not None:
            out["smiles"] = e.smiles
        return out

    documents = []
    for d in corpus.documents.values():
        rec = {"doc_id": d.doc_id, "title": d.title, "num_pages": d.num_pages}
        if d.source_path is not None:
            rec["source_path"] = d.source_path
        documents.append(rec)

    passages = []
    for p in corpus.passages.values():
        rec = {
            "passage_id": p.passage_id, "doc_id": p.doc_id, "kind": p.kind,
            "text": p.text, "page": p.page, "boxes": [box(b) for b in p.boxes],
        }
        if p.compound_names:
            rec["compound_names"] = list(p.compound_names)
        if p.reaction_id is not None:
            rec["reaction_id"] = p.reaction_id
        passages.append(rec)

    reactions = []
    for r in corpus.reactions.values():
        rec = {"reaction_id": r.reaction_id, "passage_id": r.passage_id}
        for role in ("reactants", "products", "catalysts", "solvents"):
            entities = getattr(r, role)
            if entities:
                rec[role] = [entity(e) for e in entities]
        if r.temperature is not None:
            rec["temperature"] = r.temperature
        if r.yield_pct is not None:
            rec["yield_pct"] = r.yield_pct
        reactions.append(rec)

    diagrams = []
    for d in corpus.diagrams.values():
        rec = {
            "diagram_id": d.diagram_id, "doc_id": d.doc_id, "page": d.page,
            "box": box(d.box), "smiles": d.smiles,
        }
        if d.label is not None:
            rec["label"] = d.label
        diagrams.append(rec)

    return {
        "documents": documents,
        "passages": passages,
        "reactions": reactions,
        "diagrams": diagrams,
        "names": dict(corpus.name_dictionary),
    }


def corpus_from_records(payload: dict) -> Corpus:
    """Rebuild a corpus from :func:`corpus_to_records` output."""
    raw = {
        key: [(i + 1, rec) for i, rec in enumerate(payload[key])]
        for key in ("documents", "passages", "reactions", "diagrams")
    }
    return build_corpus(raw, payload["names"])
