/** The query card: current vs previous trial, verdict buttons, coactive controls. */

import { coactiveLabel, describeAction } from "./format";
import type { DraftState } from "./draft";
import type { SessionView, Verdict } from "./types";

export const QUERY_HEADER = "Did you like this trial more or less than the last trial?";

export interface CardCallbacks {
  onVerdict(verdict: Verdict): void;
  onCoactive(dimension: number, level: number): void;
  onSubmit(): void;
}

function verdictButton(id: Verdict, label: string, active: boolean): string {
  return `<button type="button" data-verdict="${id}" class="${active ? "active" : ""}">${label}</button>`;
}

export function renderQueryCard(
  container: HTMLElement,
  view: SessionView,
  draft: DraftState,
  submittable: boolean,
  callbacks: CardCallbacks,
): void {
  container.innerHTML = "";
  if (view.status === "closed") {
    container.insertAdjacentHTML(
      "beforeend",
      `<div class="banner" data-role="closed-banner">This session is closed; the record below is read-only.</div>`,
    );
    return;
  }
  const dims = view.action_space.dims;
  const current = view.current[0];
  const previous = view.previous.length
    ? view.previous[view.previous.length - 1]
    : null;

  const compare = previous
    ? `<h2>${QUERY_HEADER}</h2>
       <div class="pair">
         <div class="trial" data-role="current">
           <h3>Current trial #${view.iteration + 1}</h3>
           <p>${describeAction(current.coordinates, dims)}</p>
         </div>
         <div class="trial" data-role="previous">
           <h3>Previous trial</h3>
           <p>${describeAction(previous.coordinates, dims)}</p>
         </div>
       </div>
       <div class="verdicts">
         ${verdictButton("prefer_current", "More", draft.verdict === "prefer_current")}
         ${verdictButton("prefer_previous", "Less", draft.verdict === "prefer_previous")}
         ${verdictButton("no_preference", "No preference", draft.verdict === "no_preference")}
       </div>`
    : `<h2>Record this trial</h2>
       <div class="trial" data-role="current">
         <h3>Current trial #${view.iteration + 1}</h3>
         <p>${describeAction(current.coordinates, dims)}</p>
       </div>
       <p class="hint">No previous trial to compare against yet.</p>`;

  const coactiveRows = dims
    .map((dim, d) => {
      const steps = view.coactive_steps[d];
      const buttons = [-2, -1, 1, 2]
        .map((level) => {
          const active =
            draft.coactive?.dimension === d && draft.coactive?.level === level;
          return `<button type="button" data-dim="${d}" data-level="${level}" class="${active ? "active" : ""}">${coactiveLabel(dim, level, steps)}</button>`;
        })
        .join("");
      return `<div class="coactive-row" data-dim-row="${d}"><span>${dim.name}</span>${buttons}</div>`;
    })
    .join("");

  container.insertAdjacentHTML(
    "beforeend",
    `${compare}
     <section class="coactive">
       <h3>Suggest an improvement (optional)</h3>
       ${coactiveRows}
     </section>
     <button type="button" data-role="submit" ${submittable ? "" : "disabled"}>Submit feedback</button>
     <div data-role="notice" class="notice"></div>`,
  );

  container.querySelectorAll<HTMLButtonElement>("[data-verdict]").forEach((el) =>
    el.addEventListener("click", () => callbacks.onVerdict(el.dataset.verdict as Verdict)),
  );
  container.querySelectorAll<HTMLButtonElement>("[data-dim]").forEach((el) =>
    el.addEventListener("click", () =>
      callbacks.onCoactive(Number(el.dataset.dim), Number(el.dataset.level)),
    ),
  );
  container
    .querySelector<HTMLButtonElement>("[data-role=submit]")!
    .addEventListener("click", () => callbacks.onSubmit());
}

export function showNotice(container: HTMLElement, message: string): void {
  const notice = container.querySelector("[data-role=notice]");
  if (notice) notice.textContent = message;
}
