// Typed client for the search service HTTP API.

export interface Box {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface EntityView {
  name: string | null;
  smiles: string | null;
  canonical: string | null;
}

export interface ReactionView {
  reaction_id: string;
  passage_id: string;
  reactants: EntityView[];
  products: EntityView[];
  catalysts: EntityView[];
  solvents: EntityView[];
  temperature: string | null;
  yield_pct: number | null;
}

export interface ReactionEntry extends ReactionView {
  page: number;
  boxes: Box[];
}

export interface MatchedCompound {
  canonical: string;
  diagram_ids: string[];
}

export interface ResultEntry {
  rank: number;
  passage_id: string;
  kind: string;
  page: number;
  boxes: Box[];
  text: string;
  text_score: number;
  matched_smiles: string[];
  matched_compounds: MatchedCompound[];
  highlights: [number, number][];
  reactions: ReactionView[];
}

export interface DocumentGroup {
  doc_id: string;
  title: string;
  results: ResultEntry[];
}

export interface CompoundCard {
  canonical: string;
  score: number;
  mode: string;
  sources: { kind: string; id: string }[];
}

export interface SearchResponse {
  api_version: number;
  query: unknown;
  compounds: CompoundCard[];
  documents: DocumentGroup[];
  total_results: number;
}

export interface QueryParams {
  text?: string;
  smiles?: string;
  reaction_smarts?: string;
  k?: number;
}

/** Error carrying the stable machine code from the API body. */
export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function requestJson<T>(
  url: string,
  fetchImpl: FetchLike,
  signal?: AbortSignal,
): Promise<T> {
  const response = await fetchImpl(url, { signal });
  const body = await response.json();
  if (!response.ok) {
    const code = typeof body?.code === "string" ? body.code : "UnknownError";
    const message = typeof body?.message === "string" ? body.message : response.statusText;
    throw new ApiError(code, message, response.status);
  }
  return body as T;
}

export function searchUrl(params: QueryParams): string {
  const query = new URLSearchParams();
  if (params.text) query.set("text", params.text);
  if (params.smiles) query.set("smiles", params.smiles);
  if (params.reaction_smarts) query.set("reaction_smarts", params.reaction_smarts);
  if (params.k) query.set("k", String(params.k));
  return `/api/search?${query.toString()}`;
}

export function searchPassages(
  params: QueryParams,
  fetchImpl: FetchLike = fetch,
  signal?: AbortSignal,
): Promise<SearchResponse> {
  return requestJson<SearchResponse>(searchUrl(params), fetchImpl, signal);
}

export function fetchDocumentReactions(
  docId: string,
  fetchImpl: FetchLike = fetch,
  signal?: AbortSignal,
): Promise<ReactionEntry[]> {
  return requestJson<ReactionEntry[]>(
    `/api/documents/${encodeURIComponent(docId)}/reactions`,
    fetchImpl,
    signal,
  );
}
