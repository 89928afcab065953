/** Page controller: the server is the only source of truth, the page just
 * renders the latest views and queues exactly one draft at a time. */

import { SessionClient, ServiceError, buildPayload } from "./api";
import { renderPosterior } from "./chart";
import { renderQueryCard, showNotice } from "./card";
import { DraftState, emptyDraft, isSubmittable, setVerdict, toggleCoactive } from "./draft";
import { describeAction } from "./format";
import type { HistoryEvent, PosteriorView, SessionView, Verdict } from "./types";

export interface AppElements {
  card: HTMLElement;
  chart: HTMLElement;
  history: HTMLElement;
  status: HTMLElement;
}

export class SessionApp {
  view: SessionView | null = null;
  posterior: PosteriorView | null = null;
  events: HistoryEvent[] = [];
  draft: DraftState = emptyDraft();
  private submitting = false;

  constructor(
    private client: SessionClient,
    private el: AppElements,
    private sessionId: string,
  ) {}

  /** Rebuild everything from the API (also the reload-mid-session path). */
  async refresh(): Promise<void> {
    this.view = await this.client.getSession(this.sessionId);
    this.posterior = await this.client.getPosterior(this.sessionId);
    this.events = (await this.client.getHistory(this.sessionId)).events;
    this.render();
  }

  executedIndices(): Set<number> {
    const indices = new Set<number>();
    for (const event of this.events) {
      for (const entry of event.executed) indices.add(entry.index);
    }
    return indices;
  }

  handleVerdict(verdict: Verdict): void {
    this.draft = setVerdict(this.draft, verdict);
    this.render();
  }

  handleCoactive(dimension: number, level: number): void {
    this.draft = toggleCoactive(this.draft, dimension, level);
    this.render();
  }

  /** Submit the draft; the iteration token makes double-clicks harmless. */
  async submit(): Promise<void> {
    if (!this.view || this.submitting) return;
    if (!isSubmittable(this.draft, this.view)) return;
    const payload = buildPayload(this.view, this.draft.verdict, this.draft.coactive);
    this.submitting = true;
    try {
      const result = await this.client.submitFeedback(this.sessionId, payload);
      this.view = result.session;
      this.draft = emptyDraft();
      this.posterior = await this.client.getPosterior(this.sessionId);
      this.events = (await this.client.getHistory(this.sessionId)).events;
      this.render();
      if (result.dropped_coactive.length > 0) {
        showNotice(this.el.card, "Suggestion had no effect (already at the boundary).");
      }
    } catch (error) {
      if (error instanceof ServiceError && error.status === 409) {
        // stale token (double submit or another tab advanced the session):
        // resync, keep the draft so nothing typed is lost
        const draft = this.draft;
        await this.refresh();
        this.draft = draft;
        this.render();
        showNotice(this.el.card, "The session had already advanced; your draft was kept.");
      } else if (error instanceof ServiceError) {
        this.render();
        showNotice(this.el.card, `Rejected: ${error.message}`);
      } else {
        this.render();
        showNotice(this.el.card, "Network problem; your draft is kept. Submit again to retry.");
      }
    } finally {
      this.submitting = false;
    }
  }

  render(): void {
    if (!this.view) return;
    this.el.status.textContent =
      `${this.view.label || this.view.id} | iteration ${this.view.iteration}` +
      (this.view.status === "closed" ? " | closed" : "");
    renderQueryCard(this.el.card, this.view, this.draft, isSubmittable(this.draft, this.view), {
      onVerdict: (v) => this.handleVerdict(v),
      onCoactive: (d, l) => this.handleCoactive(d, l),
      onSubmit: () => void this.submit(),
    });
    if (this.posterior) {
      renderPosterior(this.el.chart, this.view, this.posterior, this.executedIndices());
    }
    this.renderHistory();
  }

  private renderHistory(): void {
    const dims = this.view!.action_space.dims;
    const items = this.events
      .map((event) => {
        const actions = event.executed
          .map((entry) => describeAction(entry.coordinates, dims))
          .join("; ");
        const counts = `${event.recorded.pairwise} preference(s), ${event.recorded.coactive} suggestion(s)`;
        return `<li>iteration ${event.iteration + 1}: ${actions} — ${counts}</li>`;
      })
      .join("");
    this.el.history.innerHTML = `<ol data-role="history-list">${items}</ol>`;
  }
}
