// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { SessionApp, type AppElements } from "../src/app";
import { ServiceError, type FeedbackPayload, type SessionClient } from "../src/api";
import type { FeedbackResult, SessionView } from "../src/types";
import { flatPosterior, oneDimSession } from "./fixtures";

function elements(): AppElements {
  const make = () => document.createElement("div");
  return { card: make(), chart: make(), history: make(), status: make() };
}

/** Minimal scripted stand-in for the HTTP client. */
function fakeClient(view: SessionView, overrides: Partial<Record<string, unknown>> = {}) {
  const state = { view, submits: 0 };
  const client = {
    getSession: async () => state.view,
    getPosterior: async () => flatPosterior(state.view, 15),
    getHistory: async () => ({ id: state.view.id, events: [] }),
    submitFeedback: async (_id: string, _payload: FeedbackPayload): Promise<FeedbackResult> => {
      state.submits += 1;
      state.view = {
        ...state.view,
        iteration: state.view.iteration + 1,
        iteration_token: state.view.iteration + 1,
      };
      return {
        session: state.view,
        recorded: { pairwise: 0, coactive: 0 },
        dropped_coactive: [],
      };
    },
    ...overrides,
  };
  return { client: client as unknown as SessionClient, state };
}

describe("session app controller", () => {
  it("surfaces boundary-absorbed suggestions after an accepted round", async () => {
    const view = oneDimSession({ previous: [], iteration: 0, iteration_token: 0 });
    const { client } = fakeClient(view, {
      submitFeedback: async (): Promise<FeedbackResult> => ({
        session: { ...view, iteration: 1, iteration_token: 1 },
        recorded: { pairwise: 0, coactive: 0 },
        dropped_coactive: [
          { slot: 0, levels: { "0": 2 }, reason: "suggestion_snapped_to_executed_action" },
        ],
      }),
    });
    const el = elements();
    const app = new SessionApp(client, el, view.id);
    await app.refresh();
    await app.submit();
    expect(el.card.textContent).toContain("no effect");
    expect(el.card.textContent).toContain("boundary");
  });

  it("keeps the draft and resyncs when the token went stale", async () => {
    const view = oneDimSession();
    const { client } = fakeClient(view, {
      submitFeedback: async () => {
        throw new ServiceError(409, {
          code: "stale_iteration",
          message: "expected 2, got 1",
        });
      },
    });
    const el = elements();
    const app = new SessionApp(client, el, view.id);
    await app.refresh();
    app.handleVerdict("prefer_current");
    app.handleCoactive(0, 1);
    await app.submit();
    expect(app.draft.verdict).toBe("prefer_current");
    expect(app.draft.coactive).toEqual({ dimension: 0, level: 1 });
    expect(el.card.textContent).toContain("already advanced");
  });

  it("keeps the draft on a network failure and offers a retry", async () => {
    const view = oneDimSession();
    const { client } = fakeClient(view, {
      submitFeedback: async () => {
        throw new TypeError("fetch failed");
      },
    });
    const el = elements();
    const app = new SessionApp(client, el, view.id);
    await app.refresh();
    app.handleVerdict("no_preference");
    await app.submit();
    expect(app.draft.verdict).toBe("no_preference");
    expect(el.card.textContent).toContain("retry");
    expect(app.view!.iteration).toBe(view.iteration);
  });

  it("clears the draft after an accepted submission", async () => {
    const view = oneDimSession();
    const { client, state } = fakeClient(view);
    const app = new SessionApp(client, elements(), view.id);
    await app.refresh();
    app.handleVerdict("prefer_previous");
    await app.submit();
    expect(state.submits).toBe(1);
    expect(app.draft.verdict).toBeNull();
    expect(app.view!.iteration).toBe(view.iteration + 1);
  });

  it("blocks unsubmittable drafts client-side", async () => {
    const view = oneDimSession(); // previous exists, so a verdict is required
    const { client, state } = fakeClient(view);
    const app = new SessionApp(client, elements(), view.id);
    await app.refresh();
    await app.submit();
    expect(state.submits).toBe(0);
  });
});
