// Browser bootstrap: binds the query form and result pane to the controller.

import { SearchController } from "./app.js";
import { QueryFormState, canSubmit } from "./viewmodel.js";

function formState(root: Document): QueryFormState {
  return {
    text: (root.getElementById("query-text") as HTMLInputElement).value,
    smiles: (root.getElementById("query-smiles") as HTMLInputElement).value,
    reactionSmarts: (root.getElementById("query-reaction") as HTMLInputElement).value,
    k: Number((root.getElementById("query-k") as HTMLSelectElement).value) || 10,
  };
}

export function wireUp(root: Document, controller = new SearchController()): void {
  const form = root.getElementById("query-form") as HTMLFormElement;
  const submit = root.getElementById("query-submit") as HTMLButtonElement;
  const results = root.getElementById("results") as HTMLElement;

  const refreshSubmit = () => {
    submit.disabled = !canSubmit(formState(root));
  };
  for (const id of ["query-text", "query-smiles", "query-reaction"]) {
    root.getElementById(id)?.addEventListener("input", refreshSubmit);
  }
  refreshSubmit();

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const outcome = await controller.submit(formState(root));
    if (!outcome.aborted) {
      results.innerHTML = outcome.html;
    }
  });

  for (const section of ["reactions", "molecules", "text"] as const) {
    root.getElementById(`filter-${section}`)?.addEventListener("change", (event) => {
      const checked = (event.target as HTMLInputElement).checked;
      const html = controller.setFilters({ [section]: checked });
      if (controller.lastResponse) results.innerHTML = html;
    });
  }

  results.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("reaction-panel-toggle")) {
      const docId = target.dataset.docId!;
      const panel = results.querySelector<HTMLElement>(
        `.reaction-panel[data-doc-id="${CSS.escape(docId)}"]`,
      );
      if (!panel) return;
      if (panel.hidden) {
        panel.innerHTML = await controller.openReactionPanel(docId);
        panel.hidden = false;
      } else {
        panel.hidden = true;
      }
    }
    const anchor = target.closest<HTMLElement>(".reaction-anchor, .passage-card");
    if (anchor?.dataset.passageId) {
      const card = results.querySelector<HTMLElement>(
        `.passage-card[data-passage-id="${CSS.escape(anchor.dataset.passageId)}"]`,
      );
      card?.scrollIntoView({ behavior: "smooth", block: "center" });
    }
  });
}

if (typeof document !== "undefined") {
  wireUp(document);
}
