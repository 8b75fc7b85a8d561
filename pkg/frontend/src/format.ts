/** Display rounding: targets get one decimal, deltas three. */

export function formatMean(value: number): string {
  return value.toFixed(1);
}

export function formatDelta(value: number): string {
  const text = value.toFixed(3);
  return value > 0 ? `+${text}` : text;
}

export function formatProbability(value: number): string {
  return value.toFixed(3);
}
