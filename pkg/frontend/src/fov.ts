// View-cone math matching the engine's rule: the cone is the closed wedge
// [heading - h, heading + h] around the eye point, boundary contact counts
// as visible, and a segment through the eye point is never outside.

export const TWO_PI = Math.PI * 2;

/** Wrap an angle into (-pi, pi]. */
export function normalizeAngle(theta: number): number {
  theta = theta % TWO_PI;
  if (theta <= -Math.PI) theta += TWO_PI;
  else if (theta > Math.PI) theta -= TWO_PI;
  return theta;
}

export interface Pt {
  x: number;
  y: number;
}

export interface Eye extends Pt {
  heading: number;
}

export function segmentDistance(p: Pt, a: Pt, b: Pt): number {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const lenSq = dx * dx + dy * dy;
  if (lenSq === 0) return Math.hypot(p.x - a.x, p.y - a.y);
  let t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / lenSq;
  t = Math.min(Math.max(t, 0), 1);
  return Math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/** True iff every point of segment ab lies strictly outside the view cone. */
export function fullyOutsideFov(eye: Eye, a: Pt, b: Pt, halfAngle: number): boolean {
  if (segmentDistance(eye, a, b) < 1e-12) return false;
  let alpha = Math.atan2(a.y - eye.y, a.x - eye.x);
  let beta = Math.atan2(b.y - eye.y, b.x - eye.x);
  // Directions to segment points sweep monotonically between the endpoint
  // bearings; the swept arc is the one not exceeding pi.
  let delta = normalizeAngle(beta - alpha);
  if (delta < 0) {
    const swap = alpha;
    alpha = beta;
    beta = swap;
    delta = -delta;
  }
  const start = normalizeAngle(alpha - eye.heading);
  const end = start + delta; // may exceed pi; compare against the wedge's 2pi image too
  const hitsWedge = (start <= halfAngle && end >= -halfAngle) || end >= TWO_PI - halfAngle;
  return !hitsWedge;
}

/** Interpolate along the shortest arc between two angles. */
export function lerpAngle(from: number, to: number, t: number): number {
  return from + normalizeAngle(to - from) * t;
}
