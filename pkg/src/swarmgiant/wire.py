"""JSON message shapes for the operator wire protocol.

Text frames, one JSON object per message, discriminated by "type". The server
speaks snapshot/ack/mission/error/hello; clients speak hello/event/command.
Unknown or malformed client messages raise ProtocolError; the server answers
those with an error message instead of dropping the connection.
"""

from __future__ import annotations

import json

from .codec import CodecError, command_from_dict, event_from_dict, snapshot_to_dict

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    pass


def encode(msg: dict) -> str:
    return json.dumps(msg, separators=(",", ":"))


def hello_msg(scenario_name: str, config_hash: str, seed: int, dt: float, snapshot_hz: float,
              regions=()) -> dict:
    # Region geometry is static config a client cannot learn from snapshots
    # (those carry only the live counts), so the handshake states it once.
    return {
        "type": "hello",
        "version": PROTOCOL_VERSION,
        "scenario": scenario_name,
        "config_hash": config_hash,
        "seed": seed,
        "dt": dt,
        "snapshot_hz": snapshot_hz,
        "regions": [{"id": r["id"], "rect": list(r["rect"]), "demand": r["demand"]}
                    for r in regions],
    }


def snapshot_msg(snapshot) -> dict:
    return {"type": "snapshot", "data": snapshot_to_dict(snapshot)}


def ack_msg(index: int, accepted: bool, interaction_count: int, error: str = None) -> dict:
    out = {"type": "ack", "index": index, "accepted": accepted, "interaction_count": interaction_count}
    if error:
        out["error"] = error
    return out


def mission_msg(mission, interaction_count: int, dt: float) -> dict:
    return {
        "type": "mission",
        "counts": list(mission.last_counts),
        "demands": [r.demand for r in mission.regions],
        "dwell": mission.dwell,
        "complete": mission.complete,
        "completion_time": None if mission.complete_tick is None else mission.complete_tick * dt,
        "interaction_count": interaction_count,
    }


def error_msg(message: str) -> dict:
    return {"type": "error", "message": message}


def parse_client(text: str):
    """Decode a client frame into ("hello", version) | ("event", ev) | ("command", cmd)."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"not JSON: {e}") from e
    if not isinstance(d, dict):
        raise ProtocolError("message must be a JSON object")
    kind = d.get("type")
    if kind == "hello":
        try:
            return "hello", int(d["version"])
        except (KeyError, TypeError, ValueError):
            raise ProtocolError("hello needs an integer version") from None
    if kind == "event":
        try:
            return "event", event_from_dict(d["event"])
        except KeyError:
            raise ProtocolError("event message needs an event field") from None
        except CodecError as e:
            raise ProtocolError(str(e)) from e
    if kind == "command":
        try:
            return "command", command_from_dict(d["command"])
        except KeyError:
            raise ProtocolError("command message needs a command field") from None
        except CodecError as e:
            raise ProtocolError(str(e)) from e
    raise ProtocolError(f"unknown message type {kind!r}")
