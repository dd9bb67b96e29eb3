"""WebSocket front door for a live simulation.

One asyncio process owns the world. Client commands and events land in a
single inbound queue and are applied at the next tick boundary in arrival
order, so the simulation stays deterministic no matter how many operators are
connected. Outbound traffic is split per client into a reliable queue (hello,
acks, mission, errors, never dropped) and a bounded snapshot queue where a
slow consumer loses the oldest frames first; the simulation never waits for a
socket.

Every event/command message is acknowledged exactly once, carrying the
per-session interaction count after that message took effect.
"""

from __future__ import annotations

import asyncio
from collections import deque
from http import HTTPStatus
from pathlib import Path
from typing import Optional

from websockets.asyncio.server import serve

from . import wire
from .codec import snapshot_hash
from .interaction import SessionState, apply_event, record_results
from .mission import collect_metrics
from .recording import (
    command_log_writer,
    snapshot_log_writer,
    write_command_entry,
    write_manifest,
    write_snapshot,
    write_summary,
)

_MIME = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class _Client:
    _next_id = 0

    def __init__(self, ws, queue_limit: int):
        self.ws = ws
        self.id = _Client._next_id
        _Client._next_id += 1
        self.session = SessionState()
        self.next_index = 0
        self.reliable: deque = deque()
        self.snap_box: deque = deque(maxlen=queue_limit)
        self.mission_box: Optional[str] = None  # latest-only, like snapshots
        self.wake = asyncio.Event()
        self.closed = False

    def send_reliable(self, msg: dict) -> None:
        self.reliable.append(wire.encode(msg))
        self.wake.set()

    def send_snapshot(self, text: str) -> None:
        # Bounded: drop-oldest is the deque's maxlen behavior.
        self.snap_box.append(text)
        self.wake.set()

    def send_mission(self, msg: dict) -> None:
        # Only the newest progress report matters; a slow consumer must not
        # grow an unbounded backlog of stale ones.
        self.mission_box = wire.encode(msg)
        self.wake.set()


class SwarmServer:
    def __init__(self, scenario, *, snapshot_every: int = 1, real_time: bool = True,
                 speed: float = 1.0, queue_limit: int = 8,
                 record_dir=None, ui_dir=None, max_ticks: Optional[int] = None):
        self.scenario = scenario
        self.world, self.mission = scenario.build()
        self.config_hash = scenario.config_hash()
        self.snapshot_every = max(1, int(snapshot_every))
        self.real_time = real_time
        self.speed = float(speed)
        self.queue_limit = int(queue_limit)
        self.record_dir = Path(record_dir) if record_dir else None
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.max_ticks = max_ticks

        self.clients: set[_Client] = set()
        self.inbound: asyncio.Queue = asyncio.Queue()
        self.global_session = SessionState()  # server-wide counting + merged log
        self.last_snapshot = self.world.snapshot()
        self._stopping = asyncio.Event()
        self._cmd_writer = None
        self._snap_writer = None

    # -- recording ----------------------------------------------------------

    def _open_recorders(self):
        if self.record_dir is None:
            return
        self.record_dir.mkdir(parents=True, exist_ok=True)
        write_manifest(self.record_dir, self.scenario)
        self._cmd_writer = command_log_writer(
            self.record_dir / "commands.jsonl", self.config_hash, self.scenario.name)
        self._snap_writer = snapshot_log_writer(
            self.record_dir / "snapshots.jsonl", self.config_hash, self.scenario.name)
        write_snapshot(self._snap_writer, self.last_snapshot)

    def _close_recorders(self):
        if self.record_dir is None:
            return
        metrics = None
        if self.mission is not None:
            metrics = collect_metrics(self.mission, self.global_session, self.world.dt,
                                      timed_out=not self.mission.complete).to_dict()
        write_summary(self.record_dir, {
            "ticks": self.world.tick,
            "config_hash": self.config_hash,
            "final_snapshot_hash": snapshot_hash(self.last_snapshot),
            "interaction_count": self.global_session.interaction_count,
            "metrics": metrics,
        })
        if self._cmd_writer:
            self._cmd_writer.close()
        if self._snap_writer:
            self._snap_writer.close()

    # -- sim loop -------------------------------------------------------------

    async def _sim_loop(self):
        loop = asyncio.get_running_loop()
        dt_wall = self.world.dt / self.speed
        next_deadline = loop.time() + dt_wall
        log_mark = len(self.global_session.command_log)
        while not self._stopping.is_set():
            if self.max_ticks is not None and self.world.tick >= self.max_ticks:
                break

            batch = []
            while True:
                try:
                    batch.append(self.inbound.get_nowait())
                except asyncio.QueueEmpty:
                    break

            cmds = []
            tags = []  # (client, msg index) per command, aligned with cmds
            for client, index, kind, payload in batch:
                if kind == "event":
                    mapped = apply_event(client.session, payload, self.last_snapshot)
                else:
                    mapped = [payload]
                if not mapped:
                    client.send_reliable(wire.ack_msg(index, True, client.session.interaction_count))
                    continue
                for c in mapped:
                    cmds.append(c)
                    tags.append((client, index))

            tick_applied = self.world.tick
            results = self.world.step(tuple(cmds))
            record_results(self.global_session, tick_applied, results)

            # Per-client logs and one ack per inbound message.
            per_msg: dict[tuple[int, int], list] = {}
            per_client: dict[int, tuple[_Client, list]] = {}
            for (client, index), res in zip(tags, results):
                per_msg.setdefault((client.id, index), []).append(res)
                per_client.setdefault(client.id, (client, []))[1].append(res)
            for client, res_list in per_client.values():
                record_results(client.session, tick_applied, res_list)
            acked = set()
            for (client, index) in tags:
                key = (client.id, index)
                if key in acked:
                    continue
                acked.add(key)
                res_list = per_msg[key]
                ok = all(r.accepted for r in res_list)
                err = next((r.error for r in res_list if r.error), None)
                client.send_reliable(wire.ack_msg(index, ok, client.session.interaction_count, err))

            self.last_snapshot = self.world.snapshot()
            if self.mission is not None:
                self.mission.update(self.last_snapshot)

            if self._cmd_writer is not None:
                for entry in self.global_session.command_log[log_mark:]:
                    write_command_entry(self._cmd_writer, entry)
                log_mark = len(self.global_session.command_log)
            if self._snap_writer is not None:
                write_snapshot(self._snap_writer, self.last_snapshot)

            if self.world.tick % self.snapshot_every == 0:
                text = wire.encode(wire.snapshot_msg(self.last_snapshot))
                for client in self.clients:
                    client.send_snapshot(text)
                    if self.mission is not None:
                        client.send_mission(wire.mission_msg(
                            self.mission, client.session.interaction_count, self.world.dt))

            if self.real_time:
                now = loop.time()
                delay = next_deadline - now
                next_deadline += dt_wall
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    await asyncio.sleep(0)
                    next_deadline = max(next_deadline, now)
            else:
                await asyncio.sleep(0)
        self._stopping.set()

    # -- connection handling ---------------------------------------------------

    async def _writer(self, client: _Client):
        try:
            while not client.closed:
                await client.wake.wait()
                client.wake.clear()
                # Stop draining the moment the client is closed; a send must
                # never be cancelled mid-frame or the closing handshake breaks
                # and the peer waits out its close timeout.
                while not client.closed and (
                        client.reliable or client.snap_box or client.mission_box is not None):
                    if client.reliable:
                        msg = client.reliable.popleft()
                    elif client.snap_box:
                        msg = client.snap_box.popleft()
                    else:
                        msg = client.mission_box
                        client.mission_box = None
                    await client.ws.send(msg)
        except Exception:
            client.closed = True

    async def _handler(self, ws):
        client = _Client(ws, self.queue_limit)
        client.send_reliable(wire.hello_msg(
            self.scenario.name, self.config_hash, self.scenario.seed,
            self.world.dt, self.scenario.snapshot_hz / self.snapshot_every,
            regions=self.scenario.regions))
        writer = asyncio.create_task(self._writer(client))
        try:
            first = await ws.recv()
            try:
                kind, payload = wire.parse_client(first)
            except wire.ProtocolError as e:
                client.send_reliable(wire.error_msg(str(e)))
                await asyncio.sleep(0.05)
                return
            if kind != "hello" or payload != wire.PROTOCOL_VERSION:
                client.send_reliable(wire.error_msg(
                    f"protocol version mismatch: server speaks {wire.PROTOCOL_VERSION}"))
                await asyncio.sleep(0.05)
                return

            self.clients.add(client)
            async for raw in ws:
                try:
                    kind, payload = wire.parse_client(raw)
                except wire.ProtocolError as e:
                    client.send_reliable(wire.error_msg(str(e)))
                    continue
                if kind == "hello":
                    client.send_reliable(wire.error_msg("duplicate hello"))
                    continue
                index = client.next_index
                client.next_index += 1
                await self.inbound.put((client, index, kind, payload))
        except Exception:
            pass
        finally:
            self.clients.discard(client)
            client.closed = True
            client.wake.set()
            try:
                # let an in-flight send finish so the close handshake is clean
                await asyncio.wait_for(writer, 2.0)
            except Exception:
                writer.cancel()

    def _process_request(self, connection, request):
        """Serve the UI bundle over plain HTTP on the same port."""
        if self.ui_dir is None:
            return None
        if "upgrade" in request.headers.get("Connection", "").lower():
            return None
        path = request.path.split("?", 1)[0]
        if path.endswith("/"):
            path += "index.html"
        target = (self.ui_dir / path.lstrip("/")).resolve()
        try:
            target.relative_to(self.ui_dir.resolve())
        except ValueError:
            return connection.respond(HTTPStatus.FORBIDDEN, "forbidden\n")
        if not target.is_file():
            return connection.respond(HTTPStatus.NOT_FOUND, "not found\n")
        body = target.read_bytes()
        response = connection.respond(HTTPStatus.OK, "")
        response.body = body
        response.headers["Content-Type"] = _MIME.get(target.suffix, "application/octet-stream")
        response.headers["Content-Length"] = str(len(body))
        return response

    async def run(self, host: str = "127.0.0.1", port: int = 8765,
                  ready: Optional[asyncio.Event] = None,
                  duration: Optional[float] = None) -> None:
        self._open_recorders()
        if duration is not None and self.max_ticks is None:
            self.max_ticks = int(round(duration / self.world.dt))
        try:
            async with serve(self._handler, host, port,
                             process_request=self._process_request) as server:
                self.port = server.sockets[0].getsockname()[1] if server.sockets else port
                if ready is not None:
                    ready.set()
                sim = asyncio.create_task(self._sim_loop())
                try:
                    await sim
                finally:
                    if not sim.done():
                        sim.cancel()
        finally:
            self._close_recorders()

    def stop(self) -> None:
        self._stopping.set()
