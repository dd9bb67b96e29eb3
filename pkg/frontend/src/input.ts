// Pointer input mapped onto protocol commands, the 2D stand-in for the
// bare-hand gestures: drag a robot to pick-and-place its target, drag on
// empty canvas to draw a wall while wall mode is armed, drag the cube to
// place the formation anchor. Pan and zoom touch only the local view.
//
// This module takes plain {x, y, button} pointer calls so tests can drive it
// without a DOM; main.ts adapts real PointerEvents onto it.

import type { Command, Snapshot, Vec2 } from "./protocol.js";
import type { Ghost, Store } from "./store.js";
import { panBy, screenToWorld, worldToScreen, zoomAt, type ViewState } from "./view.js";

export const CLICK_PX = 4; // press-to-release travel below this is a click
export const MIN_WALL_M = 0.01; // shorter drags are discarded, not sent
export const GRAB_PX = 12; // minimum hit radius so small robots stay grabbable
export const WHEEL_ZOOM_RATE = 0.0015;
export const CUBE_HALF_M = 0.05;

export interface ViewHolder {
  view: ViewState;
}

/** Sends a command, returns the outbound index, or -1 when not connected. */
export type Sender = (cmd: Command) => number;

type Drag =
  | { kind: "pan"; lastX: number; lastY: number }
  | { kind: "robot"; robotId: number; startX: number; startY: number; x: number; y: number }
  | { kind: "cube"; startX: number; startY: number; x: number; y: number }
  | { kind: "wall"; ax: number; ay: number; x: number; y: number };

export class InputController {
  wallMode = false;
  private drag: Drag | null = null;

  constructor(
    private store: Store,
    private holder: ViewHolder,
    private send: Sender,
  ) {}

  private hitRobot(snap: Snapshot, sx: number, sy: number): number | null {
    const v = this.holder.view;
    let best: number | null = null;
    let bestD = Infinity;
    for (const r of snap.robots) {
      const [rx, ry] = worldToScreen(v, r.x, r.y);
      const d = Math.hypot(sx - rx, sy - ry);
      const hit = Math.max(GRAB_PX, r.radius * 100 * v.zoom);
      if (d <= hit && d < bestD) {
        best = r.id;
        bestD = d;
      }
    }
    return best;
  }

  private hitCube(snap: Snapshot, sx: number, sy: number): boolean {
    if (snap.cube.status !== "placed") return false;
    const v = this.holder.view;
    const [cx, cy] = worldToScreen(v, snap.cube.position[0], snap.cube.position[1]);
    const hit = Math.max(GRAB_PX, CUBE_HALF_M * 100 * v.zoom);
    return Math.abs(sx - cx) <= hit && Math.abs(sy - cy) <= hit;
  }

  pointerDown(x: number, y: number, button = 0): void {
    if (button === 1) {
      this.drag = { kind: "pan", lastX: x, lastY: y };
      return;
    }
    if (button !== 0) return;
    const snap = this.store.snapshot;
    if (snap !== null) {
      const robot = this.hitRobot(snap, x, y);
      if (robot !== null) {
        this.drag = { kind: "robot", robotId: robot, startX: x, startY: y, x, y };
        return;
      }
      if (this.hitCube(snap, x, y)) {
        this.drag = { kind: "cube", startX: x, startY: y, x, y };
        return;
      }
    }
    if (this.wallMode) {
      this.drag = { kind: "wall", ax: x, ay: y, x, y };
    } else {
      this.drag = { kind: "pan", lastX: x, lastY: y };
    }
  }

  pointerMove(x: number, y: number): void {
    const d = this.drag;
    if (d === null) return;
    if (d.kind === "pan") {
      this.holder.view = panBy(this.holder.view, x - d.lastX, y - d.lastY);
      d.lastX = x;
      d.lastY = y;
      return;
    }
    d.x = x;
    d.y = y;
  }

  pointerUp(x: number, y: number): void {
    const d = this.drag;
    this.drag = null;
    if (d === null || d.kind === "pan") return;
    const v = this.holder.view;
    const snap = this.store.snapshot;

    if (d.kind === "robot") {
      const moved = Math.hypot(x - d.startX, y - d.startY) > CLICK_PX;
      if (moved) {
        const at = screenToWorld(v, x, y);
        this.sendTracked({ type: "place_target", robot_id: d.robotId, position: at },
          { kind: "target", robotId: d.robotId, at });
      } else {
        // a plain click on a robot that is being steered picks its target
        // back up and returns it to autonomy
        const r = snap?.robots.find((r) => r.id === d.robotId);
        if (r && r.target !== null) this.send({ type: "pick_target", robot_id: d.robotId });
      }
      return;
    }

    if (d.kind === "cube") {
      const moved = Math.hypot(x - d.startX, y - d.startY) > CLICK_PX;
      if (moved) {
        const at = screenToWorld(v, x, y);
        this.sendTracked({ type: "place_cube", position: at }, { kind: "cube", at });
      } else {
        this.send({ type: "pick_cube" });
      }
      return;
    }

    // wall drag
    const a = screenToWorld(v, d.ax, d.ay);
    const b = screenToWorld(v, x, y);
    if (Math.hypot(b[0] - a[0], b[1] - a[1]) < MIN_WALL_M) return;
    this.sendTracked({ type: "draw_wall", a, b }, { kind: "wall", a, b });
  }

  wheel(deltaY: number, x: number, y: number): void {
    const factor = Math.exp(-deltaY * WHEEL_ZOOM_RATE);
    this.holder.view = zoomAt(this.holder.view, factor, x, y);
  }

  toggleWallMode(): void {
    this.wallMode = !this.wallMode;
    this.send({ type: "toggle_wall_mode" });
  }

  undoWall(): void {
    this.send({ type: "undo_wall" });
  }

  placeCubeAt(world: Vec2): void {
    this.sendTracked({ type: "place_cube", position: world }, { kind: "cube", at: world });
  }

  /** The in-progress drag, for the renderer to preview. */
  active(): { kind: "robot" | "cube" | "wall"; a: Vec2; b: Vec2; robotId?: number } | null {
    const d = this.drag;
    if (d === null || d.kind === "pan") return null;
    const v = this.holder.view;
    if (d.kind === "wall") {
      return { kind: "wall", a: screenToWorld(v, d.ax, d.ay), b: screenToWorld(v, d.x, d.y) };
    }
    const b = screenToWorld(v, d.x, d.y);
    if (d.kind === "robot") {
      const r = this.store.snapshot?.robots.find((r) => r.id === d.robotId);
      const a: Vec2 = r ? [r.x, r.y] : b;
      return { kind: "robot", a, b, robotId: d.robotId };
    }
    const c = this.store.snapshot?.cube;
    return { kind: "cube", a: c ? c.position : b, b };
  }

  private sendTracked(cmd: Command, ghost: Ghost): void {
    const index = this.send(cmd);
    if (index >= 0) this.store.trackGhost(index, ghost);
  }
}
