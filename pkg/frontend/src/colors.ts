/**
 * Color assignments: one fixed color per dynamical class, plus a diverging
 * blue-white-red map for exponent magnitudes centered at zero (the
 * classification threshold is the scientifically meaningful boundary, so
 * heatmaps of exponents mark it explicitly).
 */

export type ClassName = "periodic" | "quasiperiodic" | "chaotic" | "hyperchaotic" | "failed";

export const CLASS_COLORS: Record<ClassName, string> = {
  periodic: "#3b6fb6",
  quasiperiodic: "#59b55f",
  chaotic: "#e8a33d",
  hyperchaotic: "#c23b3b",
  failed: "#9e9e9e",
};

export const CLASS_ORDER: ClassName[] = [
  "periodic",
  "quasiperiodic",
  "chaotic",
  "hyperchaotic",
  "failed",
];

function clamp01(x: number): number {
  return x < 0 ? 0 : x > 1 ? 1 : x;
}

function hex2(v: number): string {
  return Math.round(clamp01(v) * 255)
    .toString(16)
    .padStart(2, "0");
}

function mix(a: [number, number, number], b: [number, number, number], t: number): string {
  return (
    "#" +
    hex2(a[0] + (b[0] - a[0]) * t) +
    hex2(a[1] + (b[1] - a[1]) * t) +
    hex2(a[2] + (b[2] - a[2]) * t)
  );
}

const BLUE: [number, number, number] = [0.13, 0.3, 0.75];
const WHITE: [number, number, number] = [1, 1, 1];
const RED: [number, number, number] = [0.8, 0.15, 0.15];

/** Diverging map on [-scale, scale], white at exactly zero. */
export function diverging(value: number, scale: number): string {
  if (!Number.isFinite(value)) {
    return CLASS_COLORS.failed;
  }
  const t = clamp01(Math.abs(value) / scale);
  return value < 0 ? mix(WHITE, BLUE, t) : mix(WHITE, RED, t);
}
