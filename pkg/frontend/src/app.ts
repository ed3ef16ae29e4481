// Controller: form submission with in-flight cancellation, error surfacing,
// and the per-document reaction panel.  Rendering goes through render.ts so
// the controller can be exercised with a fake fetch in tests.

import {
  ApiError,
  FetchLike,
  ReactionEntry,
  SearchResponse,
  fetchDocumentReactions,
  searchPassages,
} from "./api.js";
import {
  renderErrorBanner,
  renderReactionPanel,
  renderSearchResults,
  renderUnavailableDocument,
} from "./render.js";
import { QueryFormState, SectionFilters, ALL_SECTIONS, canSubmit, toQueryParams } from "./viewmodel.js";

export interface SearchOutcome {
  html: string;
  response: SearchResponse | null;
  error: { code: string; message: string } | null;
  aborted?: boolean;
}

export class SearchController {
  private inflight: AbortController | null = null;
  lastResponse: SearchResponse | null = null;
  filters: SectionFilters = { ...ALL_SECTIONS };

  constructor(private readonly fetchImpl: FetchLike = fetch) {}

  /** At most one in-flight search: a new submit cancels the previous one. */
  async submit(form: QueryFormState): Promise<SearchOutcome> {
    if (!canSubmit(form)) {
      return { html: "", response: null, error: null };
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await searchPassages(toQueryParams(form), this.fetchImpl, controller.signal);
      this.lastResponse = response;
      return { html: renderSearchResults(response, this.filters), response, error: null };
    } catch (err) {
      if (controller.signal.aborted) {
        return { html: "", response: null, error: null, aborted: true };
      }
      if (err instanceof ApiError) {
        return {
          html: renderErrorBanner(err.code, err.message),
          response: null,
          error: { code: err.code, message: err.message },
        };
      }
      const message = err instanceof Error ? err.message : String(err);
      return {
        html: renderErrorBanner("RequestFailed", message),
        response: null,
        error: { code: "RequestFailed", message },
      };
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  setFilters(filters: Partial<SectionFilters>): string {
    this.filters = { ...this.filters, ...filters };
    return this.lastResponse ? renderSearchResults(this.lastResponse, this.filters) : "";
  }

  async openReactionPanel(docId: string): Promise<string> {
    try {
      const entries: ReactionEntry[] = await fetchDocumentReactions(docId, this.fetchImpl);
      return renderReactionPanel(entries);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        return renderUnavailableDocument();
      }
      const message = err instanceof Error ? err.message : String(err);
      return renderErrorBanner("RequestFailed", message);
    }
  }
}
