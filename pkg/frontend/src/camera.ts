/** Orbitable camera for the 3-D projection point cloud.
 *
 * Pure math, no DOM: rotation (yaw/pitch), zoom, orthographic projection to
 * screen space, and screen-space picking with a fixed pixel radius. Points
 * are centered and scaled to a unit cube before projecting so the camera is
 * independent of the projection's raw coordinate ranges.
 */

import type { ProjectionPoint } from './types';

export const PICK_RADIUS_PX = 8;

export interface ScreenPoint {
  cod: number;
  sx: number;
  sy: number;
  /** View-space depth; larger is closer to the camera. */
  depth: number;
}

export interface CameraState {
  yaw: number;
  pitch: number;
  zoom: number;
}

export function defaultCamera(): CameraState {
  return { yaw: 0, pitch: 0, zoom: 1 };
}

export function rotated(c: CameraState, dYaw: number, dPitch: number): CameraState {
  const limit = Math.PI / 2 - 1e-3;
  return {
    yaw: c.yaw + dYaw,
    pitch: Math.max(-limit, Math.min(limit, c.pitch + dPitch)),
    zoom: c.zoom,
  };
}

export function zoomed(c: CameraState, factor: number): CameraState {
  return { yaw: c.yaw, pitch: c.pitch, zoom: Math.max(0.05, Math.min(40, c.zoom * factor)) };
}

interface Bounds {
  cx: number;
  cy: number;
  cz: number;
  scale: number;
}

function bounds(points: ProjectionPoint[]): Bounds {
  if (points.length === 0) return { cx: 0, cy: 0, cz: 0, scale: 1 };
  let minX = Infinity, maxX = -Infinity;
  let minY = Infinity, maxY = -Infinity;
  let minZ = Infinity, maxZ = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.x); maxX = Math.max(maxX, p.x);
    minY = Math.min(minY, p.y); maxY = Math.max(maxY, p.y);
    minZ = Math.min(minZ, p.z); maxZ = Math.max(maxZ, p.z);
  }
  const span = Math.max(maxX - minX, maxY - minY, maxZ - minZ);
  return {
    cx: (minX + maxX) / 2,
    cy: (minY + maxY) / 2,
    cz: (minZ + maxZ) / 2,
    scale: span > 0 ? 2 / span : 1,
  };
}

/** Project every point to screen space under the camera state. */
export function projectToScreen(
  points: ProjectionPoint[],
  camera: CameraState,
  width: number,
  height: number,
): ScreenPoint[] {
  const b = bounds(points);
  const cosY = Math.cos(camera.yaw), sinY = Math.sin(camera.yaw);
  const cosP = Math.cos(camera.pitch), sinP = Math.sin(camera.pitch);
  const half = Math.min(width, height) / 2;
  const extent = half * 0.85 * camera.zoom;
  return points.map((p) => {
    const x = (p.x - b.cx) * b.scale;
    const y = (p.y - b.cy) * b.scale;
    const z = (p.z - b.cz) * b.scale;
    // yaw about the vertical axis, then pitch about the horizontal axis
    const x1 = x * cosY + z * sinY;
    const z1 = -x * sinY + z * cosY;
    const y2 = y * cosP - z1 * sinP;
    const z2 = y * sinP + z1 * cosP;
    return {
      cod: p.cod,
      sx: width / 2 + x1 * extent,
      sy: height / 2 - y2 * extent,
      depth: z2,
    };
  });
}

/** Pick the point nearest to (sx, sy) within the pixel radius, preferring
 * the closer (larger-depth) point on ties; null when nothing is in range. */
export function pickAt(
  screen: ScreenPoint[],
  sx: number,
  sy: number,
  radiusPx: number = PICK_RADIUS_PX,
): number | null {
  let best: ScreenPoint | null = null;
  let bestDist = Infinity;
  for (const p of screen) {
    const d = Math.hypot(p.sx - sx, p.sy - sy);
    if (d > radiusPx) continue;
    if (d < bestDist || (d === bestDist && best !== null && p.depth > best.depth)) {
      best = p;
      bestDist = d;
    }
  }
  return best === null ? null : best.cod;
}
