// Browser entry point: wires DOM events onto the input controller and runs
// the render loop off the store's latest-snapshot slot. Server address comes
// from ?server=ws://host:port, defaulting to the page's own host, which is
// the common case when the simulation server is also serving these files.

import { InputController, type ViewHolder } from "./input.js";
import { Connection } from "./net.js";
import { canvasDraw, renderScene } from "./render.js";
import { Store } from "./store.js";
import { fitArena, type ViewState } from "./view.js";

const params = new URLSearchParams(location.search);
const wsUrl = params.get("server") ?? `ws://${location.host}`;

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const wallBtn = document.getElementById("wall-btn") as HTMLButtonElement;
const undoBtn = document.getElementById("undo-btn") as HTMLButtonElement;

const store = new Store();
const holder: ViewHolder = {
  view: { cx: 0, cy: 0, zoom: 1, width: canvas.clientWidth, height: canvas.clientHeight },
};
const conn = new Connection(new WebSocket(wsUrl), store);
const input = new InputController(store, holder, (cmd) => conn.send(cmd));

let fitted = false;

function resize(): void {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  if (canvas.width !== w * dpr || canvas.height !== h * dpr) {
    canvas.width = w * dpr;
    canvas.height = h * dpr;
  }
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  holder.view = { ...holder.view, width: w, height: h };
}

function pos(ev: PointerEvent | WheelEvent): [number, number] {
  const r = canvas.getBoundingClientRect();
  return [ev.clientX - r.left, ev.clientY - r.top];
}

canvas.addEventListener("pointerdown", (ev) => {
  canvas.setPointerCapture(ev.pointerId);
  const [x, y] = pos(ev);
  input.pointerDown(x, y, ev.button);
});
canvas.addEventListener("pointermove", (ev) => {
  const [x, y] = pos(ev);
  input.pointerMove(x, y);
});
canvas.addEventListener("pointerup", (ev) => {
  const [x, y] = pos(ev);
  input.pointerUp(x, y);
});
canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const [x, y] = pos(ev);
  input.wheel(ev.deltaY, x, y);
}, { passive: false });
canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());

wallBtn.addEventListener("click", () => {
  input.toggleWallMode();
  wallBtn.classList.toggle("armed", input.wallMode);
});
undoBtn.addEventListener("click", () => input.undoWall());

window.addEventListener("resize", resize);

const draw = canvasDraw(ctx);

function frame(): void {
  resize();
  const snap = store.snapshot;
  if (snap !== null && !fitted) {
    holder.view = fitArena(holder.view, snap.arena[0], snap.arena[1]);
    fitted = true;
  }
  renderScene(draw, store, holder.view, Date.now(), input.wallMode, input.active());
  const h = store.hello;
  statusEl.textContent = h === null
    ? "connecting"
    : `${h.scenario}  seed ${h.seed}  ${store.connected ? "live" : "disconnected"}`;
  requestAnimationFrame(frame);
}

resize();
requestAnimationFrame(frame);
