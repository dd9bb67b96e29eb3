"""Run artifacts: manifest, snapshot log, command log, summary.

All logs are JSONL with a header record first, so a reader can refuse a file
that belongs to a different scenario before parsing the bulk. The command log
plus the scenario is a complete replay recipe; the snapshot log is evidence.
"""

from __future__ import annotations

import json
import platform
import sys
from pathlib import Path

from .codec import command_from_dict, command_to_dict, snapshot_to_dict

FORMAT = 1


class RecordingError(ValueError):
    pass


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("swarmgiant")
    except Exception:
        return "unknown"


class JsonlWriter:
    def __init__(self, path):
        self.path = Path(path)
        self._f = open(self.path, "w")

    def write(self, record: dict) -> None:
        self._f.write(json.dumps(record, separators=(",", ":")) + "\n")

    def close(self) -> None:
        self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_jsonl(path) -> tuple[dict, list[dict]]:
    header = None
    records = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if header is None:
                header = rec
            else:
                records.append(rec)
    if header is None:
        raise RecordingError(f"{path} is empty")
    return header, records


def snapshot_log_writer(path, config_hash: str, scenario_name: str) -> JsonlWriter:
    w = JsonlWriter(path)
    w.write({"kind": "snapshots", "format": FORMAT, "config_hash": config_hash, "scenario": scenario_name})
    return w


def write_snapshot(writer: JsonlWriter, snapshot) -> None:
    writer.write(snapshot_to_dict(snapshot))


def command_log_writer(path, config_hash: str, scenario_name: str) -> JsonlWriter:
    w = JsonlWriter(path)
    w.write({"kind": "commands", "format": FORMAT, "config_hash": config_hash, "scenario": scenario_name})
    return w


def write_command_entry(writer: JsonlWriter, entry) -> None:
    writer.write({
        "tick": entry.tick,
        "command": command_to_dict(entry.command),
        "accepted": entry.accepted,
        "interaction_count": entry.interaction_count,
    })


def read_command_log(path):
    """Returns (header, schedule, entries) where schedule maps tick -> commands."""
    header, records = read_jsonl(path)
    if header.get("kind") != "commands":
        raise RecordingError(f"{path} is not a command log")
    if header.get("format") != FORMAT:
        raise RecordingError(f"unsupported command log format {header.get('format')!r}")
    schedule: dict[int, list] = {}
    entries = []
    for rec in records:
        cmd = command_from_dict(rec["command"])
        tick = int(rec["tick"])
        schedule.setdefault(tick, []).append(cmd)
        entries.append((tick, cmd, bool(rec["accepted"]), int(rec["interaction_count"])))
    return header, schedule, entries


def write_manifest(out_dir, scenario) -> None:
    doc = {
        "format": FORMAT,
        "scenario": scenario.to_dict(),
        "config_hash": scenario.config_hash(),
        "package_version": _version(),
        "python": sys.version.split()[0],
        "platform": platform.platform(),
    }
    with open(Path(out_dir) / "manifest.json", "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def read_manifest(out_dir) -> dict:
    path = Path(out_dir) / "manifest.json"
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise RecordingError(f"cannot read {path}: {e}") from e


def write_summary(out_dir, summary: dict) -> None:
    with open(Path(out_dir) / "summary.json", "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")


def read_summary(out_dir) -> dict:
    path = Path(out_dir) / "summary.json"
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise RecordingError(f"cannot read {path}: {e}") from e
