/** Thin typed client for the session service. */

import type {
  ApiError,
  FeedbackResult,
  HistoryEvent,
  PosteriorView,
  SessionView,
  Verdict,
} from "./types";

export class ServiceError extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body.message ?? `request failed with status ${status}`);
  }

  get code(): string {
    return this.body.code ?? "error";
  }
}

export interface FeedbackPayload {
  iteration: number;
  preferences: {
    current_index: number;
    against: { kind: "current" | "buffer"; index: number };
    verdict: "prefer_current" | "prefer_other" | "no_preference";
  }[];
  coactive: { current_index: number; dimension: number; level: number }[];
  note?: string;
}

/** Translate the card's verdict/coactive draft into the wire payload.
 *
 * "prefer_previous" targets the most recent buffered action; a chosen
 * "no_preference" is submitted as an empty preference list (an unset cell
 * server-side). */
export function buildPayload(
  view: SessionView,
  verdict: Verdict | null,
  coactive: { dimension: number; level: number } | null,
): FeedbackPayload {
  if (view.iteration_token === null) {
    throw new Error("session is closed");
  }
  const payload: FeedbackPayload = {
    iteration: view.iteration_token,
    preferences: [],
    coactive: [],
  };
  if (verdict && verdict !== "no_preference" && view.previous.length > 0) {
    payload.preferences.push({
      current_index: 0,
      against: { kind: "buffer", index: view.previous.length - 1 },
      verdict: verdict === "prefer_current" ? "prefer_current" : "prefer_other",
    });
  }
  if (coactive) {
    payload.coactive.push({
      current_index: 0,
      dimension: coactive.dimension,
      level: coactive.level,
    });
  }
  return payload;
}

export class SessionClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, body as ApiError);
    }
    return body as T;
  }

  listPresets(): Promise<{ presets: Record<string, unknown> }> {
    return this.request("/presets");
  }

  createSession(preset: string, label = "", seed?: number): Promise<SessionView> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ preset, label, seed }),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}`);
  }

  getPosterior(id: string): Promise<PosteriorView> {
    return this.request(`/sessions/${id}/posterior`);
  }

  getHistory(id: string): Promise<{ id: string; events: HistoryEvent[] }> {
    return this.request(`/sessions/${id}/history`);
  }

  submitFeedback(id: string, payload: FeedbackPayload): Promise<FeedbackResult> {
    return this.request(`/sessions/${id}/feedback`, {
      method: "POST",
      body: JSON.stringify(payload),
    });
  }

  closeSession(id: string): Promise<SessionView> {
    return this.request(`/sessions/${id}/close`, { method: "POST" });
  }
}
