/** Wire types mirroring the session service JSON; never locally mutated. */

export interface Dimension {
  name: string;
  min: number;
  max: number;
  count: number;
}

export interface ActionEntry {
  index: number;
  coordinates: Record<string, number>;
  slot?: number;
}

export type SessionStatus = "awaiting_feedback" | "proposing" | "closed";

export interface SessionView {
  id: string;
  label: string;
  preset: string | null;
  status: SessionStatus;
  iteration: number;
  iteration_token: number | null;
  action_space: { dims: Dimension[] };
  coactive_steps: [number, number][];
  current: ActionEntry[];
  previous: ActionEntry[];
  history_length: number;
}

export interface PosteriorAction {
  index: number;
  coordinates: Record<string, number>;
  mean: number;
  std: number;
}

export interface PosteriorView {
  id: string;
  iteration: number;
  actions: PosteriorAction[];
}

export type Verdict = "prefer_current" | "prefer_previous" | "no_preference";

export interface CoactiveChoice {
  dimension: number;
  level: -2 | -1 | 1 | 2;
}

export interface FeedbackResult {
  session: SessionView;
  recorded: { pairwise: number; coactive: number };
  dropped_coactive: { slot: number; levels: Record<string, number>; reason: string }[];
}

export interface HistoryEvent {
  iteration: number;
  executed: ActionEntry[];
  recorded: { pairwise: number; coactive: number };
  note?: string;
}

export interface ApiError {
  code: string;
  message: string;
  details?: unknown;
}
