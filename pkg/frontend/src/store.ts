// Client-side session state. One immutable latest-snapshot slot decouples the
// render loop from message handling; everything the renderer shows about the
// world comes from that slot, never from local edits. Optimistic ghosts live
// in a separate overlay and expire on ack or on the next snapshot.

import type { AckMsg, HelloMsg, MissionMsg, ServerMsg, Snapshot, Vec2 } from "./protocol.js";

export const STALE_AFTER_MS = 1000;
export const TOAST_TTL_MS = 4000;

export type Ghost =
  | { kind: "target"; robotId: number; at: Vec2 }
  | { kind: "cube"; at: Vec2 }
  | { kind: "wall"; a: Vec2; b: Vec2 };

export interface Toast {
  text: string;
  at: number;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export class Store {
  hello: HelloMsg | null = null;
  snapshot: Snapshot | null = null;
  receivedAt = -Infinity;
  mission: MissionMsg | null = null;
  interactionCount = 0;
  connected = false;
  lastError: string | null = null;
  toasts: Toast[] = [];

  // outbound message index -> ghost awaiting its ack
  private pending = new Map<number, Ghost>();
  // acked ghosts stay visible until a fresher snapshot shows the real state
  private settled: Ghost[] = [];

  applyServer(msg: ServerMsg, now: number): void {
    switch (msg.type) {
      case "hello":
        this.hello = msg;
        break;
      case "snapshot":
        this.snapshot = deepFreeze(msg.data);
        this.receivedAt = now;
        this.settled = [];
        break;
      case "ack":
        this.applyAck(msg, now);
        break;
      case "mission":
        this.mission = msg;
        this.interactionCount = msg.interaction_count;
        break;
      case "error":
        this.lastError = msg.message;
        this.pushToast(msg.message, now);
        break;
    }
  }

  private applyAck(ack: AckMsg, now: number): void {
    // The count in the ack is authoritative; the UI shows exactly this value.
    this.interactionCount = ack.interaction_count;
    const ghost = this.pending.get(ack.index);
    if (ghost === undefined) return;
    this.pending.delete(ack.index);
    if (ack.accepted) {
      this.settled.push(ghost);
    } else {
      this.pushToast(ack.error ?? "command rejected", now);
    }
  }

  /** Register the optimistic ghost for an outbound command by its send index. */
  trackGhost(index: number, ghost: Ghost): void {
    this.pending.set(index, ghost);
  }

  ghosts(): Ghost[] {
    return [...this.pending.values(), ...this.settled];
  }

  /** True once the latest snapshot is older than the staleness threshold. */
  stale(now: number): boolean {
    return this.snapshot !== null && now - this.receivedAt > STALE_AFTER_MS;
  }

  pushToast(text: string, now: number): void {
    this.toasts.push({ text, at: now });
    if (this.toasts.length > 5) this.toasts.shift();
  }

  activeToasts(now: number): Toast[] {
    return this.toasts.filter((t) => now - t.at < TOAST_TTL_MS);
  }

  /** Connection dropped: pending acks will never arrive, so drop their ghosts. */
  disconnected(): void {
    this.connected = false;
    this.pending.clear();
    this.settled = [];
  }
}
