// Wire protocol v1, the browser half. JSON text frames discriminated by
// "type". The server speaks hello/snapshot/ack/mission/error; this client
// answers with its own hello and then sends command frames only. Shapes here
// must stay byte-compatible with the Python codec; tests pin them against
// fixtures frozen from that side (tests/fixtures/make_fixtures.py).

export const PROTOCOL_VERSION = 1;

export type Vec2 = [number, number];

export interface RegionInfo {
  id: number;
  rect: [number, number, number, number]; // xmin, ymin, xmax, ymax
  demand: number;
}

export interface HelloMsg {
  type: "hello";
  version: number;
  scenario: string;
  config_hash: string;
  seed: number;
  dt: number;
  snapshot_hz: number;
  regions: RegionInfo[];
}

export interface RobotView {
  id: number;
  x: number;
  y: number;
  heading: number;
  radius: number;
  max_speed: number;
  max_turn_rate: number;
  avoid_radius: number;
  mode: string;
  target: Vec2 | null;
  slot: number | null;
  walk_heading: number | null;
  avoid_side: number | null;
  avoid_hold: number;
}

export interface WallView {
  id: number;
  a: Vec2;
  b: Vec2;
  ordinal: number;
}

export interface CubeView {
  status: string; // "none" | "held" | "placed"
  position: Vec2;
  placed_tick: number | null;
}

export interface Snapshot {
  tick: number;
  dt: number;
  arena: Vec2; // width, height in meters
  robots: RobotView[];
  walls: WallView[];
  cube: CubeView;
  region_counts: number[];
}

export interface SnapshotMsg {
  type: "snapshot";
  data: Snapshot;
}

export interface AckMsg {
  type: "ack";
  index: number;
  accepted: boolean;
  interaction_count: number;
  error?: string;
}

export interface MissionMsg {
  type: "mission";
  counts: number[];
  demands: number[];
  dwell: number;
  complete: boolean;
  completion_time: number | null;
  interaction_count: number;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMsg = HelloMsg | SnapshotMsg | AckMsg | MissionMsg | ErrorMsg;

export type Command =
  | { type: "place_target"; robot_id: number; position: Vec2 }
  | { type: "pick_target"; robot_id: number }
  | { type: "draw_wall"; a: Vec2; b: Vec2 }
  | { type: "undo_wall" }
  | { type: "place_cube"; position: Vec2 }
  | { type: "pick_cube" }
  | { type: "toggle_wall_mode" };

export class ProtocolError extends Error {}

function fail(why: string): never {
  throw new ProtocolError(why);
}

function num(v: unknown, what: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) fail(`${what} must be a finite number, got ${JSON.stringify(v)}`);
  return v;
}

function str(v: unknown, what: string): string {
  if (typeof v !== "string") fail(`${what} must be a string`);
  return v;
}

function vec2(v: unknown, what: string): Vec2 {
  if (!Array.isArray(v) || v.length !== 2) fail(`${what} must be [x, y]`);
  return [num(v[0], what), num(v[1], what)];
}

function obj(v: unknown, what: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) fail(`${what} must be an object`);
  return v as Record<string, unknown>;
}

function parseRobot(raw: unknown): RobotView {
  const r = obj(raw, "robot");
  return {
    id: num(r.id, "robot.id"),
    x: num(r.x, "robot.x"),
    y: num(r.y, "robot.y"),
    heading: num(r.heading, "robot.heading"),
    radius: num(r.radius, "robot.radius"),
    max_speed: num(r.max_speed, "robot.max_speed"),
    max_turn_rate: num(r.max_turn_rate, "robot.max_turn_rate"),
    avoid_radius: num(r.avoid_radius, "robot.avoid_radius"),
    mode: str(r.mode, "robot.mode"),
    target: r.target == null ? null : vec2(r.target, "robot.target"),
    slot: r.slot == null ? null : num(r.slot, "robot.slot"),
    walk_heading: r.walk_heading == null ? null : num(r.walk_heading, "robot.walk_heading"),
    avoid_side: r.avoid_side == null ? null : num(r.avoid_side, "robot.avoid_side"),
    avoid_hold: num(r.avoid_hold ?? 0, "robot.avoid_hold"),
  };
}

function parseSnapshot(raw: unknown): Snapshot {
  const d = obj(raw, "snapshot.data");
  const arena = vec2(d.arena, "snapshot.arena");
  if (!Array.isArray(d.robots)) fail("snapshot.robots must be an array");
  if (!Array.isArray(d.walls)) fail("snapshot.walls must be an array");
  if (!Array.isArray(d.region_counts)) fail("snapshot.region_counts must be an array");
  const cube = obj(d.cube, "snapshot.cube");
  return {
    tick: num(d.tick, "snapshot.tick"),
    dt: num(d.dt, "snapshot.dt"),
    arena,
    robots: d.robots.map(parseRobot),
    walls: d.walls.map((raw) => {
      const w = obj(raw, "wall");
      return {
        id: num(w.id, "wall.id"),
        a: vec2(w.a, "wall.a"),
        b: vec2(w.b, "wall.b"),
        ordinal: num(w.ordinal, "wall.ordinal"),
      };
    }),
    cube: {
      status: str(cube.status, "cube.status"),
      position: vec2(cube.position, "cube.position"),
      placed_tick: cube.placed_tick == null ? null : num(cube.placed_tick, "cube.placed_tick"),
    },
    region_counts: d.region_counts.map((c) => num(c, "region count")),
  };
}

/** Decode one server frame. Throws ProtocolError on anything malformed. */
export function parseServer(text: string): ServerMsg {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    fail(`not JSON: ${e}`);
  }
  const d = obj(raw, "message");
  switch (d.type) {
    case "hello": {
      const regions = Array.isArray(d.regions) ? d.regions : fail("hello.regions must be an array");
      return {
        type: "hello",
        version: num(d.version, "hello.version"),
        scenario: str(d.scenario, "hello.scenario"),
        config_hash: str(d.config_hash, "hello.config_hash"),
        seed: num(d.seed, "hello.seed"),
        dt: num(d.dt, "hello.dt"),
        snapshot_hz: num(d.snapshot_hz, "hello.snapshot_hz"),
        regions: regions.map((raw) => {
          const r = obj(raw, "region");
          const rect = r.rect;
          if (!Array.isArray(rect) || rect.length !== 4) fail("region.rect must be [xmin, ymin, xmax, ymax]");
          return {
            id: num(r.id, "region.id"),
            rect: [num(rect[0], "rect"), num(rect[1], "rect"), num(rect[2], "rect"), num(rect[3], "rect")],
            demand: num(r.demand, "region.demand"),
          } as RegionInfo;
        }),
      };
    }
    case "snapshot":
      return { type: "snapshot", data: parseSnapshot(d.data) };
    case "ack": {
      const out: AckMsg = {
        type: "ack",
        index: num(d.index, "ack.index"),
        accepted: d.accepted === true,
        interaction_count: num(d.interaction_count, "ack.interaction_count"),
      };
      if (typeof d.error === "string") out.error = d.error;
      return out;
    }
    case "mission":
      return {
        type: "mission",
        counts: (Array.isArray(d.counts) ? d.counts : fail("mission.counts")).map((c) => num(c, "count")),
        demands: (Array.isArray(d.demands) ? d.demands : fail("mission.demands")).map((c) => num(c, "demand")),
        dwell: num(d.dwell, "mission.dwell"),
        complete: d.complete === true,
        completion_time: d.completion_time == null ? null : num(d.completion_time, "mission.completion_time"),
        interaction_count: num(d.interaction_count, "mission.interaction_count"),
      };
    case "error":
      return { type: "error", message: str(d.message, "error.message") };
  }
  fail(`unknown message type ${JSON.stringify(d.type)}`);
}

export function encodeClientHello(): string {
  return JSON.stringify({ type: "hello", version: PROTOCOL_VERSION });
}

export function encodeCommand(cmd: Command): string {
  return JSON.stringify({ type: "command", command: cmd });
}
