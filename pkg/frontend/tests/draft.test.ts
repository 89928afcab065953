import { describe, expect, it } from "vitest";

import { emptyDraft, isSubmittable, setVerdict, toggleCoactive } from "../src/draft";
import { oneDimSession } from "./fixtures";

describe("feedback draft", () => {
  it("requires a verdict once a previous trial exists", () => {
    const view = oneDimSession();
    expect(isSubmittable(emptyDraft(), view)).toBe(false);
    expect(isSubmittable(setVerdict(emptyDraft(), "no_preference"), view)).toBe(true);
    expect(isSubmittable(setVerdict(emptyDraft(), "prefer_current"), view)).toBe(true);
  });

  it("allows bare submission when there is nothing to compare against", () => {
    const view = oneDimSession({ previous: [], iteration: 0, iteration_token: 0 });
    expect(isSubmittable(emptyDraft(), view)).toBe(true);
  });

  it("never submits on a closed session", () => {
    const view = oneDimSession({ status: "closed", iteration_token: null });
    expect(isSubmittable(setVerdict(emptyDraft(), "prefer_current"), view)).toBe(false);
  });

  it("toggles a coactive level off when clicked twice", () => {
    let draft = emptyDraft();
    draft = toggleCoactive(draft, 0, 2);
    expect(draft.coactive).toEqual({ dimension: 0, level: 2 });
    draft = toggleCoactive(draft, 0, -1);
    expect(draft.coactive).toEqual({ dimension: 0, level: -1 });
    draft = toggleCoactive(draft, 0, -1);
    expect(draft.coactive).toBeNull();
  });
});
