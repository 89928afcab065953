import type { PosteriorView, SessionView } from "../src/types";

export function oneDimSession(overrides: Partial<SessionView> = {}): SessionView {
  const dims = [{ name: "step_length_m", min: 0.08, max: 0.18, count: 15 }];
  const grid = (i: number) => 0.08 + (i * 0.1) / 14;
  return {
    id: "s-1",
    label: "subject",
    preset: "step-length-1d",
    status: "awaiting_feedback",
    iteration: 1,
    iteration_token: 1,
    action_space: { dims },
    coactive_steps: [[0.1, 0.2]],
    current: [{ slot: 0, index: 9, coordinates: { step_length_m: grid(9) } }],
    previous: [{ index: 4, coordinates: { step_length_m: grid(4) } }],
    history_length: 1,
    ...overrides,
  };
}

export function twoDimSession(overrides: Partial<SessionView> = {}): SessionView {
  const dims = [
    { name: "step_length_m", min: 0.08, max: 0.18, count: 15 },
    { name: "step_duration_s", min: 0.85, max: 1.15, count: 10 },
  ];
  return {
    id: "s-2",
    label: "subject",
    preset: "step-length-duration-2d",
    status: "awaiting_feedback",
    iteration: 0,
    iteration_token: 0,
    action_space: { dims },
    coactive_steps: [
      [0.1, 0.2],
      [0.1, 0.2],
    ],
    current: [
      { slot: 0, index: 0, coordinates: { step_length_m: 0.08, step_duration_s: 0.85 } },
    ],
    previous: [],
    history_length: 0,
    ...overrides,
  };
}

export function flatPosterior(view: SessionView, size: number): PosteriorView {
  const dims = view.action_space.dims;
  const actions = [];
  for (let i = 0; i < size; i++) {
    const coordinates: Record<string, number> = {};
    if (dims.length === 1) {
      coordinates[dims[0].name] =
        dims[0].min + (i * (dims[0].max - dims[0].min)) / (dims[0].count - 1);
    } else {
      const row = Math.floor(i / dims[1].count);
      const col = i % dims[1].count;
      coordinates[dims[0].name] =
        dims[0].min + (row * (dims[0].max - dims[0].min)) / (dims[0].count - 1);
      coordinates[dims[1].name] =
        dims[1].min + (col * (dims[1].max - dims[1].min)) / (dims[1].count - 1);
    }
    actions.push({ index: i, coordinates, mean: 0, std: Math.sqrt(0.005) });
  }
  return { id: view.id, iteration: view.iteration, actions };
}
