// Scene drawing. Everything goes through the small Draw2D interface so tests
// can count primitives with a recording stub instead of diffing pixels; the
// canvas adapter at the bottom is the only DOM-touching part.

import type { MissionMsg, RegionInfo, Snapshot, Vec2 } from "./protocol.js";
import type { Ghost, Store } from "./store.js";
import { scale, worldToScreen, type ViewState } from "./view.js";

export interface Style {
  fill?: string;
  stroke?: string;
  width?: number;
  dash?: number[];
  font?: string;
  align?: "left" | "center" | "right";
}

export interface Draw2D {
  clear(w: number, h: number): void;
  rect(x: number, y: number, w: number, h: number, style: Style): void;
  line(x1: number, y1: number, x2: number, y2: number, style: Style): void;
  disc(x: number, y: number, r: number, style: Style): void;
  text(s: string, x: number, y: number, style: Style): void;
}

export const ROBOT_FILL: Record<string, string> = {
  autonomous: "#4aa3ff",
  goto: "#ffc83d",
  formation: "#7ee08a",
};
export const HEADING_COLOR = "#10141c";
export const TARGET_COLOR = "#ff8a3d"; // not a robot body color, markers stay countable
export const WALL_COLOR = "#e0e4ec";
export const CUBE_COLOR = "#b07cff";
export const REGION_STROKE = "#3c9d6e";
export const REGION_FILL = "rgba(60,157,110,0.12)";
export const GHOST_COLOR = "#9aa4b2";
export const GHOST_DASH = [6, 4];
export const WALL_MODE_COLOR = "#e5484d"; // the red armed-mode sign
export const STALE_COLOR = "#e5484d";
export const HUD_COLOR = "#c8cdd6";
export const ARENA_STROKE = "#495065";

export interface DragPreview {
  kind: "robot" | "cube" | "wall";
  a: Vec2;
  b: Vec2;
}

function drawRegion(d: Draw2D, v: ViewState, region: RegionInfo, count: number | undefined): void {
  const [xmin, ymin, xmax, ymax] = region.rect;
  const [sx, sy] = worldToScreen(v, xmin, ymax); // top-left on screen
  const w = (xmax - xmin) * scale(v);
  const h = (ymax - ymin) * scale(v);
  d.rect(sx, sy, w, h, { fill: REGION_FILL, stroke: REGION_STROKE, width: 1.5 });
  const [bx, by] = worldToScreen(v, (xmin + xmax) / 2, (ymin + ymax) / 2);
  d.text(`${count ?? 0}/${region.demand}`, bx, by, {
    fill: REGION_STROKE, font: "14px sans-serif", align: "center",
  });
}

function drawRobot(d: Draw2D, v: ViewState, r: Snapshot["robots"][number]): void {
  const [sx, sy] = worldToScreen(v, r.x, r.y);
  const rPx = r.radius * scale(v);
  d.disc(sx, sy, rPx, { fill: ROBOT_FILL[r.mode] ?? ROBOT_FILL.autonomous });
  const [hx, hy] = worldToScreen(v, r.x + Math.cos(r.heading) * r.radius, r.y + Math.sin(r.heading) * r.radius);
  d.line(sx, sy, hx, hy, { stroke: HEADING_COLOR, width: Math.max(1, rPx * 0.3) });
  if (r.target !== null) {
    const [tx, ty] = worldToScreen(v, r.target[0], r.target[1]);
    d.line(sx, sy, tx, ty, { stroke: TARGET_COLOR, width: 1, dash: [3, 3] });
    d.disc(tx, ty, 3, { fill: TARGET_COLOR });
  }
}

function drawGhost(d: Draw2D, v: ViewState, g: Ghost): void {
  const s = scale(v);
  if (g.kind === "wall") {
    const [ax, ay] = worldToScreen(v, g.a[0], g.a[1]);
    const [bx, by] = worldToScreen(v, g.b[0], g.b[1]);
    d.line(ax, ay, bx, by, { stroke: GHOST_COLOR, width: 3, dash: GHOST_DASH });
    return;
  }
  const [x, y] = worldToScreen(v, g.at[0], g.at[1]);
  if (g.kind === "cube") {
    const half = 0.05 * s;
    d.rect(x - half, y - half, 2 * half, 2 * half, { stroke: GHOST_COLOR, dash: GHOST_DASH, width: 2 });
  } else {
    d.disc(x, y, 6, { stroke: GHOST_COLOR, dash: GHOST_DASH, width: 2 });
  }
}

function missionLine(m: MissionMsg): string {
  const pairs = m.counts.map((c, i) => `${c}/${m.demands[i]}`).join(", ");
  if (m.complete && m.completion_time !== null) {
    return `mission complete in ${m.completion_time.toFixed(1)} s  [${pairs}]`;
  }
  return `mission ${pairs}`;
}

export function renderScene(
  d: Draw2D,
  store: Store,
  v: ViewState,
  now: number,
  wallMode = false,
  preview: DragPreview | null = null,
): void {
  d.clear(v.width, v.height);
  const snap = store.snapshot;
  if (snap === null) {
    d.text(store.connected ? "waiting for first snapshot" : "connecting...",
      v.width / 2, v.height / 2, { fill: HUD_COLOR, font: "16px sans-serif", align: "center" });
    return;
  }

  // arena frame
  const [ax, ay] = worldToScreen(v, 0, snap.arena[1]);
  d.rect(ax, ay, snap.arena[0] * scale(v), snap.arena[1] * scale(v), { stroke: ARENA_STROKE, width: 2 });

  const regions = store.hello?.regions ?? [];
  regions.forEach((region, i) => drawRegion(d, v, region, snap.region_counts[i]));

  for (const w of snap.walls) {
    const [x1, y1] = worldToScreen(v, w.a[0], w.a[1]);
    const [x2, y2] = worldToScreen(v, w.b[0], w.b[1]);
    d.line(x1, y1, x2, y2, { stroke: WALL_COLOR, width: 4 });
  }

  if (snap.cube.status === "placed") {
    const [cx, cy] = worldToScreen(v, snap.cube.position[0], snap.cube.position[1]);
    const half = 0.05 * scale(v);
    d.rect(cx - half, cy - half, 2 * half, 2 * half, { fill: CUBE_COLOR });
  }

  for (const r of snap.robots) drawRobot(d, v, r);
  for (const g of store.ghosts()) drawGhost(d, v, g);

  if (preview !== null) {
    if (preview.kind === "wall") {
      drawGhost(d, v, { kind: "wall", a: preview.a, b: preview.b });
    } else if (preview.kind === "cube") {
      drawGhost(d, v, { kind: "cube", at: preview.b });
    } else {
      const [ax2, ay2] = worldToScreen(v, preview.a[0], preview.a[1]);
      const [bx2, by2] = worldToScreen(v, preview.b[0], preview.b[1]);
      d.line(ax2, ay2, bx2, by2, { stroke: GHOST_COLOR, width: 1, dash: GHOST_DASH });
      d.disc(bx2, by2, 6, { stroke: GHOST_COLOR, dash: GHOST_DASH, width: 2 });
    }
  }

  // HUD: fixed to the screen, unaffected by pan and zoom
  const elapsed = snap.tick * snap.dt;
  d.text(`t=${elapsed.toFixed(1)}s  interactions=${store.interactionCount}`, 10, 20,
    { fill: HUD_COLOR, font: "13px monospace", align: "left" });
  if (store.mission !== null) {
    d.text(missionLine(store.mission), 10, 38, { fill: HUD_COLOR, font: "13px monospace", align: "left" });
  }
  if (wallMode) {
    d.rect(v.width - 150, 8, 142, 26, { fill: WALL_MODE_COLOR });
    d.text("WALL MODE", v.width - 79, 26, { fill: "#ffffff", font: "bold 13px sans-serif", align: "center" });
  }
  if (store.stale(now)) {
    const age = ((now - store.receivedAt) / 1000).toFixed(1);
    d.rect(0, v.height / 2 - 22, v.width, 44, { fill: "rgba(20,22,28,0.8)" });
    d.text(`STALE: last snapshot ${age}s ago`, v.width / 2, v.height / 2 + 5,
      { fill: STALE_COLOR, font: "bold 16px sans-serif", align: "center" });
  }

  let ty = v.height - 14;
  for (const t of store.activeToasts(now)) {
    d.text(t.text, 10, ty, { fill: STALE_COLOR, font: "13px sans-serif", align: "left" });
    ty -= 18;
  }
}

/** Draw2D over a real canvas 2D context. */
export function canvasDraw(ctx: CanvasRenderingContext2D): Draw2D {
  const apply = (style: Style) => {
    ctx.setLineDash(style.dash ?? []);
    if (style.fill) ctx.fillStyle = style.fill;
    if (style.stroke) ctx.strokeStyle = style.stroke;
    ctx.lineWidth = style.width ?? 1;
  };
  return {
    clear(w, h) {
      ctx.setLineDash([]);
      ctx.fillStyle = "#10141c";
      ctx.fillRect(0, 0, w, h);
    },
    rect(x, y, w, h, style) {
      apply(style);
      if (style.fill) ctx.fillRect(x, y, w, h);
      if (style.stroke) ctx.strokeRect(x, y, w, h);
    },
    line(x1, y1, x2, y2, style) {
      apply(style);
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    },
    disc(x, y, r, style) {
      apply(style);
      ctx.beginPath();
      ctx.arc(x, y, r, 0, Math.PI * 2);
      if (style.fill) ctx.fill();
      if (style.stroke) ctx.stroke();
    },
    text(s, x, y, style) {
      apply(style);
      ctx.font = style.font ?? "13px sans-serif";
      ctx.textAlign = style.align ?? "left";
      ctx.fillText(s, x, y);
    },
  };
}
