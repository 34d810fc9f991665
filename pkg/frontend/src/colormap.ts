/**
 * Sequential colormap for the photon-number heatmap. Linear
 * interpolation through viridis anchor colors; perceptually close
 * enough for a diagnostic plot without shipping the full 256-entry
 * table.
 */

export type Rgb = [number, number, number];

const ANCHORS: Rgb[] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

/** Map t in [0, 1] to an RGB triple; out-of-range t is clamped. */
export function viridis(t: number): Rgb {
  if (!Number.isFinite(t)) {
    throw new Error(`colormap input must be finite, got ${t}`);
  }
  const clamped = Math.min(1, Math.max(0, t));
  const x = clamped * (ANCHORS.length - 1);
  const lo = Math.min(ANCHORS.length - 2, Math.floor(x));
  const f = x - lo;
  const a = ANCHORS[lo];
  const b = ANCHORS[lo + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

/** Precomputed 256-entry lookup table of the same scale. */
export function viridisLut(): Uint8Array {
  const lut = new Uint8Array(256 * 3);
  for (let i = 0; i < 256; i++) {
    const [r, g, b] = viridis(i / 255);
    lut[i * 3] = r;
    lut[i * 3 + 1] = g;
    lut[i * 3 + 2] = b;
  }
  return lut;
}
