"""Live server integration over real localhost websockets."""

import asyncio
import json

from websockets.asyncio.client import connect

from swarmgiant.codec import command_to_dict, event_to_dict
from swarmgiant.gestures import GraspEnd, GraspStart
from swarmgiant.interaction import DrawWall, UndoWall
from swarmgiant.recording import read_command_log, read_manifest, read_summary
from swarmgiant.scenario import Scenario
from swarmgiant.server import SwarmServer
from swarmgiant.wire import PROTOCOL_VERSION, encode

from conftest import mini_allocation_dict

TIMEOUT = 10.0


async def _start(server):
    ready = asyncio.Event()
    task = asyncio.create_task(server.run(host="127.0.0.1", port=0, ready=ready))
    await asyncio.wait_for(ready.wait(), TIMEOUT)
    return task


async def _finish(server, task):
    server.stop()
    try:
        await asyncio.wait_for(task, TIMEOUT)
    except (asyncio.TimeoutError, Exception):
        task.cancel()


async def _recv(ws):
    return json.loads(await asyncio.wait_for(ws.recv(), TIMEOUT))


async def _recv_type(ws, kind):
    """Read frames until one of the wanted type arrives."""
    for _ in range(50_000):
        msg = await _recv(ws)
        if msg["type"] == kind:
            return msg
    raise AssertionError(f"no {kind} message arrived")


async def _handshake(ws):
    hello = await _recv(ws)
    assert hello["type"] == "hello"
    await ws.send(encode({"type": "hello", "version": PROTOCOL_VERSION}))
    return hello


def _server(**kw):
    return SwarmServer(Scenario(mini_allocation_dict()), real_time=False, **kw)


def _connect(server):
    # max_queue=None so the test client never pauses its transport. A paused
    # reader cannot see the server's close frame, which turns every close
    # into a full close_timeout stall; real clients keep reading.
    return connect(f"ws://127.0.0.1:{server.port}", max_queue=None)


# -- tests --------------------------------------------------------------------

def test_hello_first_then_snapshots_with_increasing_ticks():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                hello = await _handshake(ws)
                assert hello["version"] == PROTOCOL_VERSION
                assert hello["scenario"] == "mini-allocation"
                assert hello["config_hash"] == srv.config_hash
                assert hello["dt"] == 0.05
                first = await _recv_type(ws, "snapshot")
                second = await _recv_type(ws, "snapshot")
                assert second["data"]["tick"] > first["data"]["tick"]
                assert len(first["data"]["robots"]) == 4
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_version_mismatch_is_refused():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _recv(ws)  # server hello
                await ws.send(encode({"type": "hello", "version": 99}))
                msg = await _recv_type(ws, "error")
                assert "version" in msg["message"]
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_command_is_acked_and_lands_in_the_world():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                wall = DrawWall((0.3, 0.3), (0.7, 0.3))
                await ws.send(encode({"type": "command", "command": command_to_dict(wall)}))
                ack = await _recv_type(ws, "ack")
                assert ack == {"type": "ack", "index": 0, "accepted": True,
                               "interaction_count": 1}
                for _ in range(200):
                    snap = await _recv_type(ws, "snapshot")
                    walls = [(tuple(w["a"]), tuple(w["b"])) for w in snap["data"]["walls"]]
                    if ((0.3, 0.3), (0.7, 0.3)) in walls:
                        break
                else:
                    raise AssertionError("wall never appeared in a snapshot")
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_rejected_command_ack_carries_error_and_no_count():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                bad = DrawWall((0.5, 0.5), (0.5, 0.5))  # degenerate
                await ws.send(encode({"type": "command", "command": command_to_dict(bad)}))
                ack = await _recv_type(ws, "ack")
                assert ack["index"] == 0
                assert ack["accepted"] is False
                assert ack["interaction_count"] == 0
                assert "degenerate" in ack["error"]
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_malformed_frame_gets_error_but_session_survives():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                await ws.send("this is not json")
                err = await _recv_type(ws, "error")
                assert "JSON" in err["message"]
                await ws.send(encode({"type": "command",
                                      "command": command_to_dict(UndoWall())}))
                ack = await _recv_type(ws, "ack")
                assert ack["accepted"] is True
                assert ack["index"] == 0  # the garbage frame consumed no index
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_duplicate_hello_is_an_error_not_a_disconnect():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                await ws.send(encode({"type": "hello", "version": PROTOCOL_VERSION}))
                err = await _recv_type(ws, "error")
                assert "duplicate" in err["message"]
                await ws.send(encode({"type": "command",
                                      "command": command_to_dict(UndoWall())}))
                ack = await _recv_type(ws, "ack")
                assert ack["accepted"] is True
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_gesture_events_map_to_commands_with_one_ack_each():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                await ws.send(encode({"type": "event",
                                      "event": event_to_dict(GraspStart("target:0"))}))
                ack0 = await _recv_type(ws, "ack")
                assert ack0["index"] == 0 and ack0["accepted"] is True
                assert ack0["interaction_count"] == 0  # picking up is free
                await ws.send(encode({
                    "type": "event",
                    "event": event_to_dict(GraspEnd("target:0", (2.0, 1.5, 0.0)))}))
                ack1 = await _recv_type(ws, "ack")
                assert ack1["index"] == 1 and ack1["accepted"] is True
                assert ack1["interaction_count"] == 1  # the placement counts
                for _ in range(200):
                    snap = await _recv_type(ws, "snapshot")
                    r0 = snap["data"]["robots"][0]
                    if r0["mode"] == "goto":
                        assert tuple(r0["target"]) == (2.0, 1.5)
                        break
                else:
                    raise AssertionError("robot never entered goto mode")
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_interaction_counts_are_per_client():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as a, \
                       _connect(srv) as b:
                await _handshake(a)
                await _handshake(b)
                await a.send(encode({"type": "command",
                                     "command": command_to_dict(DrawWall((0.2, 0.2), (0.6, 0.2)))}))
                ack_a = await _recv_type(a, "ack")
                assert ack_a["interaction_count"] == 1
                await b.send(encode({"type": "command",
                                     "command": command_to_dict(DrawWall((0.2, 0.4), (0.6, 0.4)))}))
                ack_b = await _recv_type(b, "ack")
                assert ack_b["interaction_count"] == 1  # b's own count, not the global 2
                assert srv.global_session.interaction_count == 2
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_mission_messages_track_progress():
    async def go():
        srv = _server()
        task = await _start(srv)
        try:
            async with _connect(srv) as ws:
                await _handshake(ws)
                msg = await _recv_type(ws, "mission")
                assert msg["demands"] == [4]
                assert len(msg["counts"]) == 1
                assert msg["complete"] is False
        finally:
            await _finish(srv, task)
    asyncio.run(go())


def test_bounded_run_records_replayable_artifacts(tmp_path):
    async def go():
        srv = _server(record_dir=tmp_path, max_ticks=40)
        task = await _start(srv)
        async with _connect(srv) as ws:
            await _handshake(ws)
            await ws.send(encode({"type": "command",
                                  "command": command_to_dict(DrawWall((0.3, 0.3), (0.7, 0.3)))}))
            await _recv_type(ws, "ack")
        await asyncio.wait_for(task, TIMEOUT)  # sim loop exits at max_ticks

        manifest = read_manifest(tmp_path)
        assert manifest["config_hash"] == srv.config_hash
        summary = read_summary(tmp_path)
        assert summary["ticks"] == 40
        assert summary["interaction_count"] == 1
        header, schedule, entries = read_command_log(tmp_path / "commands.jsonl")
        assert header["config_hash"] == srv.config_hash
        assert sum(len(v) for v in schedule.values()) == 1
    asyncio.run(go())
