"""Command-line interface: build an index snapshot, query it, serve the API.

Exit codes: 0 success, 1 query/validation error, 2 corpus or snapshot error.
"""

from __future__ import annotations

import json
import sys

import click

from chemsearch.corpus import CorpusError, load_corpus
from chemsearch.molgraph import SmilesParseError
from chemsearch.querylang import (
    ComponentParseError,
    EmptyQuery,
    WrongSeparatorCount,
    parse_query,
)
from chemsearch.search import Engine
from chemsearch.service import build_search_response, corpus_stats, create_app
from chemsearch.snapshot import SnapshotError, build_snapshot, load_snapshot, save_snapshot

QUERY_ERRORS = (EmptyQuery, WrongSeparatorCount, ComponentParseError, SmilesParseError)


def _load_engine(snapshot_path: str) -> tuple[Engine, object]:
    try:
        snapshot = load_snapshot(snapshot_path)
    except (SnapshotError, CorpusError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    return Engine(snapshot.corpus, snapshot.links, snapshot.text_index), snapshot


@click.group()
def main():
    """Multimodal chemical search over extracted document passages."""


@main.group()
def index():
    """Index building commands."""


@index.command("build")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def index_build(corpus_dir: str, out_path: str):
    """Load a corpus directory, resolve links, and write a snapshot."""
    try:
        corpus = load_corpus(corpus_dir)
        snapshot = build_snapshot(corpus)
    except CorpusError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    save_snapshot(snapshot, out_path)
    click.echo(
        f"indexed {snapshot.text_index.n} of {len(corpus.passages)} passages, "
        f"{len(snapshot.links)} links, {len(corpus.reactions)} reactions -> {out_path}"
    )


@main.command()
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--text", default=None, help="Text query terms.")
@click.option("--smiles", default=None, help="Comma-separated SMILES queries.")
@click.option("--reaction", default=None, help="reactants>agents>products reaction query.")
@click.option("-k", "k", default=10, show_default=True, help="Result budget.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
def search(snapshot_path: str, text: str | None, smiles: str | None, reaction: str | None, k: int, fmt: str):
    """Run a multimodal query against a snapshot."""
    engine, _ = _load_engine(snapshot_path)
    try:
        query = parse_query(text=text, smiles_csv=smiles, reaction=reaction, k=k)
    except QUERY_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    response = build_search_response(engine, query)
    if fmt == "json":
        click.echo(json.dumps(response, indent=2, sort_keys=True))
        return
    click.echo(f"{'rank':<5} {'passage':<10} {'doc':<8} {'matched':<8} {'text score':<10}")
    for doc in response["documents"]:
        for result in doc["results"]:
            click.echo(
                f"{result['rank']:<5} {result['passage_id']:<10} {doc['doc_id']:<8} "
                f"{len(result['matched_smiles']):<8} {result['text_score']:<10.4f}"
            )
    if not response["documents"]:
        click.echo("(no results)")


@main.command()
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(exists=True, dir_okay=False))
def stats(snapshot_path: str):
    """Print corpus counters for a snapshot."""
    engine, _ = _load_engine(snapshot_path)
    click.echo(json.dumps(corpus_stats(engine), indent=2, sort_keys=True))


@main.command()
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True, file_okay=False))
def serve(snapshot_path: str, port: int, host: str, ui_dir: str | None):
    """Serve the HTTP API (and optionally a UI bundle under /assets)."""
    import uvicorn

    try:
        snapshot = load_snapshot(snapshot_path)
    except (SnapshotError, CorpusError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    app = create_app(snapshot, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
