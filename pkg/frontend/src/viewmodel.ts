// Pure form/result state helpers, kept free of DOM so they unit-test in node.

import type { QueryParams, SearchResponse } from "./api.js";

export interface QueryFormState {
  text: string;
  smiles: string;
  reactionSmarts: string;
  k: number;
}

export const EMPTY_FORM: QueryFormState = { text: "", smiles: "", reactionSmarts: "", k: 10 };

/** Submit stays disabled until at least one modality is filled in. */
export function canSubmit(form: QueryFormState): boolean {
  return Boolean(form.text.trim() || form.smiles.trim() || form.reactionSmarts.trim());
}

export function toQueryParams(form: QueryFormState): QueryParams {
  const params: QueryParams = {};
  if (form.text.trim()) params.text = form.text.trim();
  if (form.smiles.trim()) params.smiles = form.smiles.trim();
  if (form.reactionSmarts.trim()) params.reaction_smarts = form.reactionSmarts.trim();
  if (form.k && form.k !== 10) params.k = form.k;
  return params;
}

export interface SectionFilters {
  reactions: boolean;
  molecules: boolean;
  text: boolean;
}

export const ALL_SECTIONS: SectionFilters = { reactions: true, molecules: true, text: true };

export interface HighlightSegment {
  text: string;
  highlighted: boolean;
}

/** Split text into segments exactly on the API's character spans. */
export function splitHighlights(
  text: string,
  spans: [number, number][],
): HighlightSegment[] {
  const sorted = [...spans]
    .filter(([start, end]) => start < end && start < text.length)
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const merged: [number, number][] = [];
  for (const [start, end] of sorted) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, Math.min(end, text.length)]);
    }
  }
  const segments: HighlightSegment[] = [];
  let cursor = 0;
  for (const [start, end] of merged) {
    if (cursor < start) segments.push({ text: text.slice(cursor, start), highlighted: false });
    segments.push({ text: text.slice(start, end), highlighted: true });
    cursor = end;
  }
  if (cursor < text.length) segments.push({ text: text.slice(cursor), highlighted: false });
  return segments;
}

/** Flattened (doc, result) pairs in exactly the API's rank order. */
export function rankedOrder(response: SearchResponse): { docId: string; passageId: string; rank: number }[] {
  const rows = response.documents.flatMap((doc) =>
    doc.results.map((result) => ({ docId: doc.doc_id, passageId: result.passage_id, rank: result.rank })),
  );
  return rows.sort((a, b) => a.rank - b.rank);
}
