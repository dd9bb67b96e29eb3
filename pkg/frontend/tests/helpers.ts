// Shared test scaffolding: synthetic snapshots that still go through the real
// parse path, and a command sender that records what the UI tried to say.

import { parseServer, type Command, type ServerMsg } from "../src/protocol.js";
import { Store } from "../src/store.js";
import type { ViewState } from "../src/view.js";

const ROBOT_DEFAULTS = {
  id: 0, x: 0, y: 0, heading: 0, radius: 0.037, max_speed: 0.05,
  max_turn_rate: Math.PI, avoid_radius: 0.055, mode: "autonomous",
  target: null, slot: null, walk_heading: null, avoid_side: null, avoid_hold: 0,
};

export function snapshotFrame(opts: {
  robots?: Array<Record<string, unknown>>;
  walls?: Array<Record<string, unknown>>;
  cube?: Record<string, unknown>;
  arena?: [number, number];
  tick?: number;
  region_counts?: number[];
}): ServerMsg {
  return parseServer(JSON.stringify({
    type: "snapshot",
    data: {
      tick: opts.tick ?? 0,
      dt: 0.05,
      arena: opts.arena ?? [2, 2],
      robots: (opts.robots ?? []).map((r) => ({ ...ROBOT_DEFAULTS, ...r })),
      walls: opts.walls ?? [],
      cube: opts.cube ?? { status: "inactive", position: [0, 0], placed_tick: null },
      region_counts: opts.region_counts ?? [],
    },
  }));
}

export function storeWith(snapshot: ServerMsg, now = 0): Store {
  const store = new Store();
  store.connected = true;
  store.applyServer(snapshot, now);
  return store;
}

export class RecordingSender {
  sent: Command[] = [];
  connected = true;

  send = (cmd: Command): number => {
    if (!this.connected) return -1;
    this.sent.push(cmd);
    return this.sent.length - 1;
  };
}

export function testView(overrides: Partial<ViewState> = {}): ViewState {
  return { cx: 1, cy: 1, zoom: 1, width: 800, height: 600, ...overrides };
}
