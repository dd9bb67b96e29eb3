import { describe, expect, it } from "vitest";
import {
  BASE_PPM,
  fitArena,
  panBy,
  screenToWorld,
  worldToScreen,
  zoomAt,
  ZOOM_MAX,
  ZOOM_MIN,
  type ViewState,
} from "../src/view.js";

const base: ViewState = { cx: 1.0, cy: 2.0, zoom: 1.5, width: 800, height: 600 };

describe("world/screen transform", () => {
  it("round-trips arbitrary points", () => {
    for (const [x, y] of [[0, 0], [1.23, -4.56], [-7, 3.14], [100, 100]] as const) {
      const [sx, sy] = worldToScreen(base, x, y);
      const [wx, wy] = screenToWorld(base, sx, sy);
      expect(wx).toBeCloseTo(x, 9);
      expect(wy).toBeCloseTo(y, 9);
    }
  });

  it("flips y: increasing world y goes up the screen", () => {
    const [, syLow] = worldToScreen(base, 1.0, 0.0);
    const [, syHigh] = worldToScreen(base, 1.0, 1.0);
    expect(syHigh).toBeLessThan(syLow);
  });

  it("maps the view center to the canvas center", () => {
    expect(worldToScreen(base, base.cx, base.cy)).toEqual([400, 300]);
  });
});

describe("zoom", () => {
  it("doubling the zoom doubles apparent world size, chrome untouched", () => {
    const v2 = zoomAt(base, 2, 400, 300);
    const [ax1, ay1] = worldToScreen(base, 0.0, 0.0);
    const [bx1, by1] = worldToScreen(base, 1.0, 0.5);
    const [ax2, ay2] = worldToScreen(v2, 0.0, 0.0);
    const [bx2, by2] = worldToScreen(v2, 1.0, 0.5);
    const d1 = Math.hypot(bx1 - ax1, by1 - ay1);
    const d2 = Math.hypot(bx2 - ax2, by2 - ay2);
    expect(d2 / d1).toBeCloseTo(2, 9);
    expect(v2.width).toBe(base.width);
    expect(v2.height).toBe(base.height);
  });

  it("keeps the world point under the cursor fixed", () => {
    const anchor: [number, number] = [123, 456];
    const before = screenToWorld(base, ...anchor);
    for (const f of [0.5, 1.7, 3.0]) {
      const v = zoomAt(base, f, ...anchor);
      const after = screenToWorld(v, ...anchor);
      expect(after[0]).toBeCloseTo(before[0], 9);
      expect(after[1]).toBeCloseTo(before[1], 9);
    }
  });

  it("clamps to the avatar scale range at both ends", () => {
    let v = base;
    for (let i = 0; i < 60; i++) v = zoomAt(v, 2, 400, 300);
    expect(v.zoom).toBe(ZOOM_MAX);
    for (let i = 0; i < 120; i++) v = zoomAt(v, 0.5, 400, 300);
    expect(v.zoom).toBe(ZOOM_MIN);
  });
});

describe("pan", () => {
  it("dragging by a screen delta moves the world along with the pointer", () => {
    const grabbed = screenToWorld(base, 200, 200);
    const v = panBy(base, 50, -30);
    const after = worldToScreen(v, ...grabbed);
    expect(after[0]).toBeCloseTo(250, 9);
    expect(after[1]).toBeCloseTo(170, 9);
  });
});

describe("fitArena", () => {
  it("shows the whole arena with margin", () => {
    const v = fitArena(base, 6.4, 4.4);
    for (const [x, y] of [[0, 0], [6.4, 0], [0, 4.4], [6.4, 4.4]] as const) {
      const [sx, sy] = worldToScreen(v, x, y);
      expect(sx).toBeGreaterThanOrEqual(0);
      expect(sx).toBeLessThanOrEqual(v.width);
      expect(sy).toBeGreaterThanOrEqual(0);
      expect(sy).toBeLessThanOrEqual(v.height);
    }
    expect(v.cx).toBeCloseTo(3.2, 9);
    expect(v.cy).toBeCloseTo(2.2, 9);
  });

  it("a tiny arena zooms in, clamped to the maximum", () => {
    const v = fitArena(base, 0.01, 0.01);
    expect(v.zoom).toBeLessThanOrEqual(ZOOM_MAX);
    expect(v.zoom * BASE_PPM * 0.01).toBeLessThanOrEqual(base.width);
  });
});
