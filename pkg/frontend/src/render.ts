// HTML-string renderers.  The app assigns the output to container.innerHTML;
// keeping them string-based lets tests assert markup without a DOM.

import type {
  CompoundCard,
  ReactionEntry,
  ReactionView,
  ResultEntry,
  SearchResponse,
} from "./api.js";
import { ALL_SECTIONS, SectionFilters, splitHighlights } from "./viewmodel.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderErrorBanner(code: string, message: string): string {
  return (
    `<div class="error-banner" role="alert">` +
    `<span class="error-code">${escapeHtml(code)}</span> ` +
    `<span class="error-message">${escapeHtml(message)}</span></div>`
  );
}

export function renderHighlightedText(text: string, spans: [number, number][]): string {
  return splitHighlights(text, spans)
    .map((segment) =>
      segment.highlighted
        ? `<mark>${escapeHtml(segment.text)}</mark>`
        : escapeHtml(segment.text),
    )
    .join("");
}

function entityLine(entities: { name: string | null; canonical: string | null }[]): string {
  return entities
    .map((e) => escapeHtml(e.name ?? e.canonical ?? "?"))
    .join(", ");
}

export function renderReactionCard(reaction: ReactionView): string {
  const rows = [
    `<div class="rxn-row"><span>reactants</span> ${entityLine(reaction.reactants)}</div>`,
    `<div class="rxn-row"><span>products</span> ${entityLine(reaction.products)}</div>`,
  ];
  if (reaction.catalysts.length) {
    rows.push(`<div class="rxn-row"><span>catalysts</span> ${entityLine(reaction.catalysts)}</div>`);
  }
  if (reaction.solvents.length) {
    rows.push(`<div class="rxn-row"><span>solvents</span> ${entityLine(reaction.solvents)}</div>`);
  }
  if (reaction.temperature) {
    rows.push(`<div class="rxn-row"><span>temperature</span> ${escapeHtml(reaction.temperature)}</div>`);
  }
  if (reaction.yield_pct !== null && reaction.yield_pct !== undefined) {
    rows.push(`<div class="rxn-row"><span>yield</span> ${reaction.yield_pct}%</div>`);
  }
  return (
    `<div class="reaction-card" data-reaction-id="${escapeHtml(reaction.reaction_id)}">` +
    `<h4>${escapeHtml(reaction.reaction_id)}</h4>${rows.join("")}</div>`
  );
}

export function renderMoleculeCard(card: CompoundCard): string {
  const sources = card.sources
    .map((s) => `<a class="source" data-kind="${escapeHtml(s.kind)}" data-id="${escapeHtml(s.id)}">${escapeHtml(s.id)}</a>`)
    .join(" ");
  return (
    `<div class="molecule-card" data-canonical="${escapeHtml(card.canonical)}">` +
    `<code class="smiles">${escapeHtml(card.canonical)}</code>` +
    `<span class="score">${card.score.toFixed(3)}</span>` +
    `<span class="mode">${escapeHtml(card.mode)}</span>` +
    `<span class="sources">${sources}</span></div>`
  );
}

export function renderPassageCard(result: ResultEntry, filters: SectionFilters): string {
  const parts = [
    `<div class="passage-card" data-passage-id="${escapeHtml(result.passage_id)}" data-rank="${result.rank}">`,
    `<div class="passage-meta">#${result.rank} &middot; ${escapeHtml(result.passage_id)} &middot; page ${result.page}</div>`,
  ];
  if (filters.text) {
    parts.push(`<p class="passage-text">${renderHighlightedText(result.text, result.highlights)}</p>`);
  }
  if (filters.molecules && result.matched_compounds.length) {
    const matches = result.matched_compounds
      .map(
        (m) =>
          `<li><code>${escapeHtml(m.canonical)}</code>` +
          (m.diagram_ids.length
            ? ` <span class="diagram-links">${m.diagram_ids.map((d) => `<a data-diagram-id="${escapeHtml(d)}">${escapeHtml(d)}</a>`).join(" ")}</span>`
            : "") +
          `</li>`,
      )
      .join("");
    parts.push(`<ul class="matched-compounds">${matches}</ul>`);
  }
  if (filters.reactions && result.reactions.length) {
    parts.push(result.reactions.map(renderReactionCard).join(""));
  }
  parts.push(`</div>`);
  return parts.join("");
}

export function renderSearchResults(
  response: SearchResponse,
  filters: SectionFilters = ALL_SECTIONS,
): string {
  if (!response.documents.length) {
    return `<div class="empty-state">No passages matched this query.</div>`;
  }
  const groups = response.documents
    .map((doc) => {
      const results = doc.results.map((r) => renderPassageCard(r, filters)).join("");
      return (
        `<section class="document-group" data-doc-id="${escapeHtml(doc.doc_id)}">` +
        `<h3>${escapeHtml(doc.title)}</h3>` +
        `<button class="reaction-panel-toggle" data-doc-id="${escapeHtml(doc.doc_id)}">reactions</button>` +
        `<div class="reaction-panel" data-doc-id="${escapeHtml(doc.doc_id)}" hidden></div>` +
        results +
        `</section>`
      );
    })
    .join("");
  const molecules =
    filters.molecules && response.compounds.length
      ? `<section class="molecule-cards"><h3>Molecules</h3>${response.compounds.map(renderMoleculeCard).join("")}</section>`
      : "";
  return molecules + groups;
}

export function renderReactionPanel(entries: ReactionEntry[]): string {
  if (!entries.length) {
    return `<div class="empty-state">No reactions extracted for this document.</div>`;
  }
  return entries
    .map(
      (entry) =>
        `<div class="reaction-entry" data-page="${entry.page}">` +
        `<a class="reaction-anchor" data-passage-id="${escapeHtml(entry.passage_id)}" data-page="${entry.page}">page ${entry.page}</a>` +
        renderReactionCard(entry) +
        `</div>`,
    )
    .join("");
}

export function renderUnavailableDocument(): string {
  return `<div class="empty-state">document unavailable</div>`;
}
