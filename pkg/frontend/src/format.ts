/**
 * Display formatting for values that arrive fully computed from the API.
 */

/** Minutes with one decimal, e.g. 31.6 min. */
export function minutes(value: number): string {
  return `${value.toFixed(1)} min`;
}

/** Signed minutes delta, e.g. +37.1 min. */
export function signedMinutes(value: number): string {
  const text = value.toFixed(1);
  return `${value >= 0 && !text.startsWith('-') ? '+' : ''}${text} min`;
}

/** Probability as a percentage with one decimal, e.g. 52.7%. */
export function percent(prob: number): string {
  return `${(prob * 100).toFixed(1)}%`;
}

/** Cost/probability ratio to three significant figures; null means infinite. */
export function ratio(value: number | null): string {
  if (value === null) return 'inf';
  return value >= 1000 ? value.toFixed(0) : value.toPrecision(3);
}
