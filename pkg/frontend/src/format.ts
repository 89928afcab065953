/** Display helpers; formatting is cosmetic only, raw payloads stay in memory. */

import type { Dimension } from "./types";

/** Compact number for physical coordinates: enough digits to distinguish
 * neighbouring grid values, trailing zeros trimmed. */
export function formatCoordinate(value: number, dim: Dimension): string {
  const span = dim.max - dim.min;
  const spacing = dim.count > 1 ? span / (dim.count - 1) : Math.max(span, 1);
  const decimals = Math.max(0, Math.min(6, Math.ceil(-Math.log10(spacing)) + 2));
  return value.toFixed(decimals).replace(/\.?0+$/, (m) => (m.startsWith(".") ? "" : m));
}

/** Physical delta label for a coactive control, e.g. "+10% (+0.010 m-ish)".
 * Computed from the dimension range the server sent, never hard-coded. */
export function coactiveLabel(
  dim: Dimension,
  level: number,
  steps: [number, number],
): string {
  const fraction = Math.abs(level) === 1 ? steps[0] : steps[1];
  const delta = fraction * (dim.max - dim.min) * Math.sign(level);
  const pct = Math.round(fraction * 100);
  const sign = level > 0 ? "+" : "−";
  const magnitude = formatCoordinate(Math.abs(delta), dim);
  return `${sign}${pct}% ${dim.name} (${sign}${magnitude})`;
}

export function describeAction(
  coordinates: Record<string, number>,
  dims: Dimension[],
): string {
  return dims
    .map((d) => `${d.name} = ${formatCoordinate(coordinates[d.name], d)}`)
    .join(", ");
}
