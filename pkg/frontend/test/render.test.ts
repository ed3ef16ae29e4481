import { describe, expect, it } from "vitest";

import type { ReactionEntry, SearchResponse } from "../src/api.js";
import {
  renderErrorBanner,
  renderHighlightedText,
  renderReactionPanel,
  renderSearchResults,
  renderUnavailableDocument,
} from "../src/render.js";
import { ALL_SECTIONS } from "../src/viewmodel.js";

import multimodalGolden from "../../tests/golden/query_multimodal.json";

const golden = multimodalGolden as unknown as SearchResponse;

function attributeValues(html: string, attribute: string): string[] {
  return [...html.matchAll(new RegExp(`${attribute}="([^"]*)"`, "g"))].map((m) => m[1]);
}

describe("renderSearchResults with the multimodal canned query", () => {
  const html = renderSearchResults(golden);

  it("renders document groups in API rank order", () => {
    const docIds = attributeValues(html, '<section class="document-group" data-doc-id');
    expect(docIds.length).toBe(golden.documents.length);
    expect(docIds).toEqual(golden.documents.map((d) => d.doc_id));
    const ranks = attributeValues(html, "data-rank").map(Number);
    expect(ranks).toEqual([...ranks].sort((a, b) => a - b));
  });

  it("shows the top passage first with its reaction card", () => {
    const firstCard = html.indexOf('data-passage-id="p02"');
    expect(firstCard).toBeGreaterThan(-1);
    expect(html.indexOf('data-reaction-id="rxn1"')).toBeGreaterThan(firstCard);
    expect(html).toContain("bromobenzene");
    expect(html).toContain("92%");
  });

  it("renders molecule cards for the query compounds", () => {
    expect(html).toContain('class="molecule-card"');
    expect(html).toContain("Brc1ccccc1");
  });

  it("marks highlighted text spans", () => {
    expect(html).toContain("<mark>");
  });

  it("hides sections the filters exclude", () => {
    const noReactions = renderSearchResults(golden, { ...ALL_SECTIONS, reactions: false });
    expect(noReactions).not.toContain('class="reaction-card"');
    const noMolecules = renderSearchResults(golden, { ...ALL_SECTIONS, molecules: false });
    expect(noMolecules).not.toContain('class="molecule-card"');
    const noText = renderSearchResults(golden, { ...ALL_SECTIONS, text: false });
    expect(noText).not.toContain('class="passage-text"');
  });

  it("renders an empty state when nothing matches", () => {
    const empty = renderSearchResults({ ...golden, documents: [], compounds: [] });
    expect(empty).toContain("No passages matched");
  });
});

describe("renderHighlightedText", () => {
  it("wraps exactly the returned ranges in <mark>", () => {
    expect(renderHighlightedText("compound 5 reacted", [[9, 10]])).toBe(
      "compound <mark>5</mark> reacted",
    );
  });

  it("escapes markup inside and outside highlights", () => {
    expect(renderHighlightedText("<b> & 5", [[6, 7]])).toBe("&lt;b&gt; &amp; <mark>5</mark>");
  });
});

describe("renderErrorBanner", () => {
  it("shows the API error code inline", () => {
    const html = renderErrorBanner("InvalidSmiles", "bad SMILES 'C1CC' (smiles[0])");
    expect(html).toContain('<span class="error-code">InvalidSmiles</span>');
    expect(html).toContain("C1CC");
  });
});

describe("renderReactionPanel", () => {
  const entries: ReactionEntry[] = [
    {
      reaction_id: "rxn2", passage_id: "p06", page: 1, boxes: [],
      reactants: [{ name: "acetic acid", smiles: "CC(=O)O", canonical: "CC(=O)O" }],
      products: [{ name: "ethyl acetate", smiles: "CC(=O)OCC", canonical: "CCOC(C)=O" }],
      catalysts: [], solvents: [], temperature: "78 C", yield_pct: 85,
    },
    {
      reaction_id: "rxn3", passage_id: "p07", page: 2, boxes: [],
      reactants: [], products: [{ name: "ethanol", smiles: "CCO", canonical: "CCO" }],
      catalysts: [], solvents: [], temperature: null, yield_pct: null,
    },
    {
      reaction_id: "rxn4", passage_id: "p09", page: 3, boxes: [],
      reactants: [], products: [{ name: "ethanol", smiles: "CCO", canonical: "CCO" }],
      catalysts: [], solvents: [], temperature: null, yield_pct: null,
    },
  ];

  it("lists reactions in the order the API returns (page order)", () => {
    const html = renderReactionPanel(entries);
    const pages = attributeValues(html, '<div class="reaction-entry" data-page').map(Number);
    expect(pages).toEqual([1, 2, 3]);
    const ids = ["rxn2", "rxn3", "rxn4"].map((id) => html.indexOf(id));
    expect(ids).toEqual([...ids].sort((a, b) => a - b));
  });

  it("renders an empty state for documents without reactions", () => {
    expect(renderReactionPanel([])).toContain("No reactions extracted");
  });

  it("renders the unavailable-document message", () => {
    expect(renderUnavailableDocument()).toContain("document unavailable");
  });
});
