/**
 * The single place service numbers become display strings (two decimals,
 * matching the published tables). Components must not format numbers any
 * other way, so a displayed figure always byte-matches the formatted
 * service value.
 */

export function fmt(value: number | null | undefined): string {
  if (value === null || value === undefined || Number.isNaN(value)) {
    return "-";
  }
  return value.toFixed(2);
}

export function fmtDelta(value: number | null | undefined): string {
  if (value === null || value === undefined || Number.isNaN(value)) {
    return "-";
  }
  const text = value.toFixed(2);
  return value >= 0 ? `+${text}` : text;
}
