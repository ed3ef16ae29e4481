import { describe, expect, it } from "vitest";

import type { FetchLike, SearchResponse } from "../src/api.js";
import { SearchController } from "../src/app.js";
import { EMPTY_FORM } from "../src/viewmodel.js";

import multimodalGolden from "../../tests/golden/query_multimodal.json";

const golden = multimodalGolden as unknown as SearchResponse;

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("SearchController.submit", () => {
  it("renders grouped results for the multimodal canned query", async () => {
    const fetchImpl: FetchLike = async (url) => {
      expect(url).toContain("/api/search?");
      expect(url).toContain("text=Burke+group");
      return jsonResponse(golden);
    };
    const controller = new SearchController(fetchImpl);
    const outcome = await controller.submit({
      ...EMPTY_FORM,
      text: "Burke group",
      reactionSmarts: "Brc1ccccc1.OB(O)C1=CC2=CC=CC=C2S1>>Cc1ccccc1",
    });
    expect(outcome.error).toBeNull();
    expect(outcome.html).toContain('data-doc-id="doc1"');
    expect(outcome.html).toContain('data-reaction-id="rxn1"');
  });

  it("surfaces the API error code inline for invalid SMILES", async () => {
    const fetchImpl: FetchLike = async () =>
      jsonResponse({ code: "InvalidSmiles", message: "bad SMILES 'C1CC' (smiles[0])" }, 400);
    const controller = new SearchController(fetchImpl);
    const outcome = await controller.submit({ ...EMPTY_FORM, smiles: "C1CC" });
    expect(outcome.error).toEqual({
      code: "InvalidSmiles",
      message: "bad SMILES 'C1CC' (smiles[0])",
    });
    expect(outcome.html).toContain('<span class="error-code">InvalidSmiles</span>');
  });

  it("refuses to submit an empty form", async () => {
    const controller = new SearchController(async () => {
      throw new Error("must not fetch");
    });
    const outcome = await controller.submit(EMPTY_FORM);
    expect(outcome.html).toBe("");
    expect(outcome.response).toBeNull();
  });

  it("cancels the in-flight request when a new one is submitted", async () => {
    let firstSignal: AbortSignal | undefined;
    let calls = 0;
    const fetchImpl: FetchLike = (_url, init) => {
      calls += 1;
      if (calls === 1) {
        firstSignal = init?.signal ?? undefined;
        return new Promise<Response>((_resolve, reject) => {
          init?.signal?.addEventListener("abort", () =>
            reject(new DOMException("aborted", "AbortError")),
          );
        });
      }
      return Promise.resolve(jsonResponse(golden));
    };
    const controller = new SearchController(fetchImpl);
    const first = controller.submit({ ...EMPTY_FORM, text: "slow query" });
    const second = await controller.submit({ ...EMPTY_FORM, text: "fast query" });
    const firstOutcome = await first;
    expect(firstSignal?.aborted).toBe(true);
    expect(firstOutcome.aborted).toBe(true);
    expect(second.response).not.toBeNull();
  });

  it("re-renders with section filters applied", async () => {
    const controller = new SearchController(async () => jsonResponse(golden));
    await controller.submit({ ...EMPTY_FORM, text: "Burke group" });
    const withoutReactions = controller.setFilters({ reactions: false });
    expect(withoutReactions).not.toContain('class="reaction-card"');
    const restored = controller.setFilters({ reactions: true });
    expect(restored).toContain('class="reaction-card"');
  });
});

describe("SearchController.openReactionPanel", () => {
  it("renders the document unavailable message on 404", async () => {
    const controller = new SearchController(async () =>
      jsonResponse({ code: "UnknownDocument", message: "no document 'doc99'" }, 404),
    );
    expect(await controller.openReactionPanel("doc99")).toContain("document unavailable");
  });

  it("renders reaction entries from the API", async () => {
    const entries = [
      {
        reaction_id: "rxn2", passage_id: "p06", page: 1, boxes: [],
        reactants: [], products: [{ name: "ethyl acetate", smiles: null, canonical: null }],
        catalysts: [], solvents: [], temperature: null, yield_pct: null,
      },
    ];
    const controller = new SearchController(async (url) => {
      expect(url).toBe("/api/documents/doc2/reactions");
      return jsonResponse(entries);
    });
    const html = await controller.openReactionPanel("doc2");
    expect(html).toContain("rxn2");
    expect(html).toContain('data-page="1"');
  });
});
