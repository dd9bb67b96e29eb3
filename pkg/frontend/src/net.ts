// Socket lifecycle and the hello handshake. The server speaks first; this
// client answers with its own hello and only then may send commands. Ack
// correlation: the server numbers each well-formed post-hello frame per
// client in arrival order, and this client only ever sends well-formed
// frames, so a local outbound counter reproduces the server's index exactly.

import {
  type Command,
  encodeClientHello,
  encodeCommand,
  parseServer,
  PROTOCOL_VERSION,
} from "./protocol.js";
import type { Store } from "./store.js";

// Structural subset of the browser WebSocket, loose enough for a test fake.
export interface WebSocketLike {
  send(data: string): void;
  close(code?: number, reason?: string): void;
  onopen: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
}

export class Connection {
  ready = false;
  private nextIndex = 0;

  constructor(
    private ws: WebSocketLike,
    private store: Store,
    private clock: () => number = Date.now,
  ) {
    ws.onmessage = (ev) => this.onMessage(String(ev.data));
    ws.onclose = () => {
      this.ready = false;
      this.store.disconnected();
    };
    ws.onerror = () => {
      this.store.pushToast("connection error", this.clock());
    };
  }

  private onMessage(text: string): void {
    let msg;
    try {
      msg = parseServer(text);
    } catch (e) {
      this.store.pushToast(`unreadable frame: ${e}`, this.clock());
      return;
    }
    if (!this.ready) {
      if (msg.type !== "hello") {
        this.store.pushToast(`expected hello, got ${msg.type}`, this.clock());
        this.ws.close();
        return;
      }
      if (msg.version !== PROTOCOL_VERSION) {
        this.store.pushToast(`server speaks protocol v${msg.version}, this client v${PROTOCOL_VERSION}`, this.clock());
        this.ws.close();
        return;
      }
      this.ws.send(encodeClientHello());
      this.ready = true;
      this.store.connected = true;
      this.store.applyServer(msg, this.clock());
      return;
    }
    this.store.applyServer(msg, this.clock());
  }

  /** Send one command; returns its ack index, or -1 before the handshake. */
  send(cmd: Command): number {
    if (!this.ready) return -1;
    this.ws.send(encodeCommand(cmd));
    return this.nextIndex++;
  }

  close(): void {
    this.ws.close();
  }
}
