"""Versioned index snapshots.

Wire format: one version byte (currently ``0x01``) followed by a
zlib-compressed UTF-8 JSON document holding the corpus records, the resolved
compound links, and the BM25 text index.  Loading a snapshot rebuilds the
corpus through the same validation path as directory ingestion, so a
save/load round trip is exact.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

from chemsearch.corpus import Corpus, corpus_from_records, corpus_to_records, indexable_passages
from chemsearch.linker import CompoundLink, LinkerConfig, Mention, resolve_links
from chemsearch.textindex import TextIndex, build_text_index

SNAPSHOT_VERSION = 1


class SnapshotError(Exception):
    pass


class SnapshotVersionError(SnapshotError):
    pass


@dataclass
class Snapshot:
    corpus: Corpus
    links: list[CompoundLink]
    text_index: TextIndex


def build_snapshot(corpus: Corpus, linker_config: LinkerConfig | None = None) -> Snapshot:
    """Resolve links, drop unlinkable passages, and build the text index."""
    links = resolve_links(corpus, linker_config)
    passages = indexable_passages(corpus, links)
    text_index = build_text_index(passages, corpus.reactions)
    return Snapshot(corpus=corpus, links=links, text_index=text_index)


def _link_to_record(link: CompoundLink) -> dict:
    m = link.mention
    return {
        "passage_id": m.passage_id,
        "start": m.start,
        "end": m.end,
        "surface": m.surface,
        "label_token": m.label_token,
        "resolved_smiles": m.resolved_smiles,
        "diagram_id": link.diagram_id,
        "method": link.method,
        "score": link.score,
    }


def _link_from_record(rec: dict) -> CompoundLink:
    mention = Mention(
        rec["passage_id"], rec["start"], rec["end"], rec["surface"],
        rec.get("label_token"), rec.get("resolved_smiles"),
    )
    return CompoundLink(mention, rec["diagram_id"], rec["method"], rec["score"])


def save_snapshot(snapshot: Snapshot, path: str | Path) -> None:
    payload = {
        "corpus": corpus_to_records(snapshot.corpus),
        "links": [_link_to_record(l) for l in snapshot.links],
        "text_index": {
            "n": snapshot.text_index.n,
            "avgdl": snapshot.text_index.avgdl,
            "lengths": snapshot.text_index.lengths,
            "passage_ids": snapshot.text_index.passage_ids,
            "postings": {
                term: [[ordinal, tf] for ordinal, tf in plist]
                for term, plist in snapshot.text_index.postings.items()
            },
        },
    }
    blob = zlib.compress(json.dumps(payload, sort_keys=True).encode("utf-8"))
    Path(path).write_bytes(bytes([SNAPSHOT_VERSION]) + blob)


def load_snapshot(path: str | Path) -> Snapshot:
    data = Path(path).read_bytes()
    if not data:
        raise SnapshotError(f"{path}: empty snapshot file")
    version = data[0]
    if version != SNAPSHOT_VERSION:
        raise SnapshotVersionError(
            f"{path}: snapshot version {version} unsupported (expected {SNAPSHOT_VERSION})"
        )
    try:
        payload = json.loads(zlib.decompress(data[1:]).decode("utf-8"))
    except (zlib.error, json.JSONDecodeError) as exc:
        raise SnapshotError(f"{path}: corrupt snapshot: {exc}") from exc

    corpus = corpus_from_records(payload["corpus"])
    links = [_link_from_record(rec) for rec in payload["links"]]
    ti = payload["text_index"]
    text_index = TextIndex(
        n=ti["n"],
        avgdl=ti["avgdl"],
        lengths=list(ti["lengths"]),
        postings={
            term: [(int(o), int(tf)) for o, tf in plist]
            for term, plist in ti["postings"].items()
        },
        passage_ids=list(ti["passage_ids"]),
    )
    return Snapshot(corpus=corpus, links=links, text_index=text_index)
