/** Feedback draft state: what the user has chosen but not yet submitted. */

import type { SessionView, Verdict } from "./types";

export interface DraftState {
  verdict: Verdict | null;
  coactive: { dimension: number; level: number } | null;
}

export function emptyDraft(): DraftState {
  return { verdict: null, coactive: null };
}

/** A draft is submittable once a verdict is chosen (no_preference counts);
 * when there is no previous trial to compare against, coactive-only or even
 * empty submissions are allowed ("record trial"). */
export function isSubmittable(draft: DraftState, view: SessionView): boolean {
  if (view.status === "closed") return false;
  if (view.previous.length === 0) return true;
  return draft.verdict !== null;
}

export function setVerdict(draft: DraftState, verdict: Verdict): DraftState {
  return { ...draft, verdict };
}

/** Selecting the already-active level clears it (toggle). */
export function toggleCoactive(
  draft: DraftState,
  dimension: number,
  level: number,
): DraftState {
  if (
    draft.coactive &&
    draft.coactive.dimension === dimension &&
    draft.coactive.level === level
  ) {
    return { ...draft, coactive: null };
  }
  return { ...draft, coactive: { dimension, level } };
}
