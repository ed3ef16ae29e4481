"""HTTP API over a loaded index snapshot.

All handlers read one immutable engine; requests are independent and safe to
serve concurrently.  Responses are snake_case JSON with a stable ``code``
field on errors (EmptyQuery, InvalidSmiles, WrongSeparatorCount,
UnknownDocument, UnknownPassage).
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from chemsearch.corpus import BoundingBox, ChemEntity, ReactionRecord, unique_compounds
from chemsearch.molgraph import SmilesParseError
from chemsearch.querylang import (
    ComponentParseError,
    EmptyQuery,
    MultimodalQuery,
    WrongSeparatorCount,
    parse_query,
)
from chemsearch.search import Engine
from chemsearch.snapshot import Snapshot

API_VERSION = 1


def _box(b: BoundingBox) -> dict:
    return {"x0": b.x0, "y0": b.y0, "x1": b.x1, "y1": b.y1}


def _entity(e: ChemEntity) -> dict:
    return {"name": e.name, "smiles": e.smiles, "canonical": e.canonical}


def _reaction(r: ReactionRecord) -> dict:
    return {
        "reaction_id": r.reaction_id,
        "passage_id": r.passage_id,
        "reactants": [_entity(e) for e in r.reactants],
        "products": [_entity(e) for e in r.products],
        "catalysts": [_entity(e) for e in r.catalysts],
        "solvents": [_entity(e) for e in r.solvents],
        "temperature": r.temperature,
        "yield_pct": r.yield_pct,
    }


def build_search_response(engine: Engine, query: MultimodalQuery) -> dict:
    """Grouped search response shared by the HTTP API and the CLI."""
    results = engine.search_multimodal(query)

    compounds = []
    if query.all_smiles():
        seen = set()
        for smiles in query.all_smiles():
            for hit in engine.search_similarity(smiles, k=query.k):
                if hit.canonical in seen:
                    continue
                seen.add(hit.canonical)
                compounds.append({
                    "canonical": hit.canonical,
                    "score": hit.score,
                    "mode": hit.mode,
                    "sources": [{"kind": kind, "id": ident} for kind, ident in hit.sources],
                })
        compounds.sort(key=lambda c: (-c["score"], c["canonical"]))
        compounds = compounds[: query.k]

    doc_order: list[str] = []
    grouped: dict[str, list[dict]] = {}
    for result in results:
        passage = engine.corpus.passages[result.passage_id]
        matched = [
            {
                "canonical": qc,
                "diagram_ids": engine.matched_diagram_ids(result.passage_id, qc),
            }
            for qc in result.matched_smiles
        ]
        entry = {
            "rank": result.rank,
            "passage_id": result.passage_id,
            "kind": passage.kind,
            "page": passage.page,
            "boxes": [_box(b) for b in passage.boxes],
            "text": passage.text,
            "text_score": result.text_score,
            "matched_smiles": result.matched_smiles,
            "matched_compounds": matched,
            "highlights": [[start, end] for start, end in result.highlights],
            "reactions": [_reaction(engine.corpus.reactions[rid]) for rid in result.reactions],
        }
        if result.doc_id not in grouped:
            grouped[result.doc_id] = []
            doc_order.append(result.doc_id)
        grouped[result.doc_id].append(entry)

    return {
        "api_version": API_VERSION,
        "query": {
            "text": query.text,
            "smiles": query.smiles,
            "reaction": (
                {
                    "reactants": query.reaction.reactants,
                    "agents": query.reaction.agents,
                    "products": query.reaction.products,
                }
                if query.reaction
                else None
            ),
            "k": query.k,
        },
        "compounds": compounds,
        "documents": [
            {
                "doc_id": doc_id,
                "title": engine.corpus.documents[doc_id].title,
                "results": grouped[doc_id],
            }
            for doc_id in doc_order
        ],
        "total_results": len(results),
    }


def corpus_stats(engine: Engine) -> dict:
    return {
        "documents": len(engine.corpus.documents),
        "passages_extracted": len(engine.corpus.passages),
        "passages_indexed": engine.text_index.n,
        "unique_compounds": len(unique_compounds(engine.corpus)),
        "reactions": len(engine.corpus.reactions),
    }


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(snapshot: Snapshot, ui_dir: str | None = None) -> FastAPI:
    engine = Engine(snapshot.corpus, snapshot.links, snapshot.text_index)
    app = FastAPI(title="chemsearch", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def bad_parameter(_request: Request, exc: RequestValidationError):
        return _error(400, "BadParameter", str(exc.errors()))

    @app.exception_handler(Exception)
    async def internal_error(_request: Request, exc: Exception):
        return _error(500, "InternalError", f"{type(exc).__name__}: {exc}")

    @app.get("/api/search")
    def api_search(
        text: str | None = None,
        smiles: str | None = None,
        reaction_smarts: str | None = None,
        k: int = 10,
    ):
        try:
            query = parse_query(text=text, smiles_csv=smiles, reaction=reaction_smarts, k=k)
        except EmptyQuery as exc:
            return _error(400, "EmptyQuery", str(exc))
        except WrongSeparatorCount as exc:
            return _error(400, "WrongSeparatorCount", str(exc))
        except ComponentParseError as exc:
            return _error(400, "InvalidSmiles", str(exc))
        except SmilesParseError as exc:
            return _error(400, "InvalidSmiles", str(exc))
        except ValueError as exc:
            return _error(400, "BadParameter", str(exc))
        return build_search_response(engine, query)

    @app.get("/api/documents/{doc_id}/reactions")
    def api_document_reactions(doc_id: str):
        if doc_id not in engine.corpus.documents:
            return _error(404, "UnknownDocument", f"no document {doc_id!r}")
        return [
            {**_reaction(record), "page": page, "boxes": [_box(b) for b in boxes]}
            for record, page, boxes in engine.list_reactions(doc_id)
        ]

    @app.get("/api/passages/{passage_id}")
    def api_passage(passage_id: str):
        passage = engine.corpus.passages.get(passage_id)
        if passage is None:
            return _error(404, "UnknownPassage", f"no passage {passage_id!r}")
        links = [
            {
                "diagram_id": link.diagram_id,
                "method": link.method,
                "score": link.score,
                "start": link.mention.start,
                "end": link.mention.end,
                "surface": link.mention.surface,
            }
            for link in snapshot.links
            if link.mention.passage_id == passage_id
        ]
        detail = {
            "passage_id": passage.passage_id,
            "doc_id": passage.doc_id,
            "kind": passage.kind,
            "text": passage.text,
            "page": passage.page,
            "boxes": [_box(b) for b in passage.boxes],
            "compound_names": passage.compound_names,
            "links": links,
        }
        if passage.reaction_id:
            detail["reaction"] = _reaction(engine.corpus.reactions[passage.reaction_id])
        return detail

    @app.get("/api/stats")
    def api_stats():
        return corpus_stats(engine)

    if ui_dir:
        app.mount("/assets", StaticFiles(directory=Path(ui_dir), html=True), name="assets")

    return app
