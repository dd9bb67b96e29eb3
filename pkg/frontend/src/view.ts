// Camera state and the world <-> screen transform. World y points up,
// screen y points down, so the transform flips y. Zoom is clamped to the
// same [0.1, 100] range the avatar's world scale uses; pan and zoom never
// leave this module, they are pure view concerns.

export const ZOOM_MIN = 0.1;
export const ZOOM_MAX = 100;
export const BASE_PPM = 100; // screen pixels per world meter at zoom 1

export interface ViewState {
  cx: number; // world coords of the screen center
  cy: number;
  zoom: number;
  width: number; // canvas size in CSS pixels
  height: number;
}

export function scale(v: ViewState): number {
  return BASE_PPM * v.zoom;
}

export function worldToScreen(v: ViewState, x: number, y: number): [number, number] {
  const s = scale(v);
  return [v.width / 2 + (x - v.cx) * s, v.height / 2 - (y - v.cy) * s];
}

export function screenToWorld(v: ViewState, sx: number, sy: number): [number, number] {
  const s = scale(v);
  return [v.cx + (sx - v.width / 2) / s, v.cy - (sy - v.height / 2) / s];
}

function clampZoom(z: number): number {
  return Math.min(ZOOM_MAX, Math.max(ZOOM_MIN, z));
}

/**
 * Zoom by `factor` keeping the world point under the screen point (sx, sy)
 * fixed, so scroll-zoom works like every map application. Hitting the clamp
 * degrades gracefully: the anchor only holds exactly while unclamped.
 */
export function zoomAt(v: ViewState, factor: number, sx: number, sy: number): ViewState {
  const zoom = clampZoom(v.zoom * factor);
  const [wx, wy] = screenToWorld(v, sx, sy);
  const s = BASE_PPM * zoom;
  // solve for the center that maps (wx, wy) back to (sx, sy) at the new scale
  const cx = wx - (sx - v.width / 2) / s;
  const cy = wy + (sy - v.height / 2) / s;
  return { ...v, zoom, cx, cy };
}

/** Pan by a screen-space delta, i.e. drag the world along with the pointer. */
export function panBy(v: ViewState, dsx: number, dsy: number): ViewState {
  const s = scale(v);
  return { ...v, cx: v.cx - dsx / s, cy: v.cy + dsy / s };
}

/** Center the arena and pick the largest zoom that shows all of it. */
export function fitArena(v: ViewState, arenaW: number, arenaH: number, marginPx = 24): ViewState {
  const availW = Math.max(1, v.width - 2 * marginPx);
  const availH = Math.max(1, v.height - 2 * marginPx);
  const zoom = clampZoom(Math.min(availW / arenaW, availH / arenaH) / BASE_PPM);
  return { ...v, zoom, cx: arenaW / 2, cy: arenaH / 2 };
}
