"""Command line front end.

Subcommands: serve (websocket server), run (headless run with artifacts),
replay (verify a recorded run reproduces bit for bit), experiment (scripted
operator strategy comparison), scenarios (list builtins).

Exit codes: 0 success, 2 usage or config problems, 3 replay mismatch.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

from . import scenario as scen
from .codec import snapshot_hash
from .interaction import SessionState
from .mission import collect_metrics
from .operators import ScriptedOperator, experiment as run_experiment
from .recording import (
    RecordingError,
    command_log_writer,
    read_command_log,
    read_manifest,
    read_summary,
    snapshot_log_writer,
    write_command_entry,
    write_manifest,
    write_snapshot,
    write_summary,
)
from .runner import replay_run, run_headless
from .scenario import ScenarioError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3


def _add_scenario_arg(p):
    p.add_argument("--scenario", required=True,
                   help="builtin scenario name or path to a scenario JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")


def cmd_run(args) -> int:
    sc = scen.resolve(args.scenario, args.seed)
    world, mission = sc.build()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_manifest(out, sc)

    policy = None
    session = SessionState()
    if args.strategy is not None:
        if mission is None:
            print("--strategy needs a scenario with demand regions", file=sys.stderr)
            return EXIT_USAGE
        policy = ScriptedOperator(args.strategy, sc)
    if mission is None and args.duration is None:
        print("--duration is required when the scenario has no mission",
              file=sys.stderr)
        return EXIT_USAGE

    config_hash = sc.config_hash()
    snap_writer = snapshot_log_writer(out / "snapshots.jsonl", config_hash, sc.name)
    try:
        result = run_headless(
            world, mission=mission, session=session, policy=policy,
            duration=args.duration,
            snapshot_writer=lambda s: write_snapshot(snap_writer, s),
            snapshot_every=args.snapshot_every,
        )
    finally:
        snap_writer.close()

    with command_log_writer(out / "commands.jsonl", config_hash, sc.name) as w:
        for entry in result.session.command_log:
            write_command_entry(w, entry)

    summary = {
        "ticks": result.ticks,
        "config_hash": config_hash,
        "final_snapshot_hash": result.final_hash,
        "interaction_count": result.session.interaction_count,
        "metrics": result.metrics.to_dict() if result.metrics else None,
    }
    write_summary(out, summary)
    print(f"{sc.name}: {result.ticks} ticks, final snapshot {result.final_hash[:12]}..")
    if result.metrics:
        m = result.metrics
        status = "timed out" if m.timed_out else f"complete at {m.completion_time:.1f}s"
        print(f"mission {status}, {m.interaction_count} interactions")
    return EXIT_OK


def cmd_replay(args) -> int:
    run_dir = Path(args.run)
    manifest = read_manifest(run_dir)
    sc = scen.Scenario(manifest["scenario"])
    if sc.config_hash() != manifest["config_hash"]:
        print("replay refused: manifest config hash does not match its scenario "
              "(scenario or seed was edited)", file=sys.stderr)
        return EXIT_MISMATCH
    header, schedule, _ = read_command_log(run_dir / "commands.jsonl")
    if header.get("config_hash") != manifest["config_hash"]:
        print("replay refused: command log belongs to a different config "
              f"({header.get('config_hash', '?')[:12]}.. vs {manifest['config_hash'][:12]}..)",
              file=sys.stderr)
        return EXIT_MISMATCH
    summary = read_summary(run_dir)

    result = replay_run(sc, schedule, summary["ticks"])

    ok = True
    if result.final_hash != summary["final_snapshot_hash"]:
        print(f"snapshot hash mismatch: got {result.final_hash[:12]}.., "
              f"recorded {summary['final_snapshot_hash'][:12]}..", file=sys.stderr)
        ok = False
    recorded_metrics = summary.get("metrics")
    replayed_metrics = result.metrics.to_dict() if result.metrics else None
    if replayed_metrics != recorded_metrics:
        print("metrics mismatch between replay and recording", file=sys.stderr)
        ok = False
    if result.session.interaction_count != summary["interaction_count"]:
        print("interaction count mismatch", file=sys.stderr)
        ok = False
    if not ok:
        return EXIT_MISMATCH
    print(f"replay ok: {result.ticks} ticks, snapshot {result.final_hash[:12]}.. matches")
    return EXIT_OK


def cmd_experiment(args) -> int:
    sc = scen.resolve(args.scenario, args.seed)
    strategies = tuple(int(s) for s in args.strategies.split(","))
    seeds = [args.seed_base + i for i in range(args.seeds)]
    report = run_experiment(sc, seeds, strategies)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.json", "w") as f:
        json.dump({
            "scenario": sc.name,
            "config_hash": sc.config_hash(),
            "seeds": seeds,
            **report,
        }, f, indent=2, sort_keys=True)
        f.write("\n")
    for name, s in report["summary"].items():
        med_t = s["median_completion_time"]
        med_t = f"{med_t:.1f}s" if med_t is not None else "n/a"
        print(f"{name}: {s['completed']}/{s['runs']} complete, "
              f"median interactions {s['median_interactions']}, median time {med_t}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import SwarmServer
    sc = scen.resolve(args.scenario, args.seed)
    server = SwarmServer(
        sc,
        snapshot_every=args.snapshot_every,
        speed=args.speed,
        record_dir=args.record,
        ui_dir=args.ui,
    )
    print(f"serving {sc.name} on ws://{args.host}:{args.port} "
          f"(config {sc.config_hash()[:12]}..)")
    if args.ui:
        print(f"ui at http://{args.host}:{args.port}/")
    try:
        asyncio.run(server.run(args.host, args.port, duration=args.duration))
    except KeyboardInterrupt:
        print("stopped")
    return EXIT_OK


def cmd_scenarios(_args) -> int:
    for name in scen.BUILTIN_NAMES:
        sc = scen.builtin(name)
        extra = ""
        if sc.regions:
            extra = f", {len(sc.regions)} regions"
        print(f"{name}: arena {sc.width}x{sc.height}m{extra}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmgiant",
                                description="deterministic swarm simulator with an operator layer")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("run", help="headless run, writing replayable artifacts")
    _add_scenario_arg(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--duration", type=float, default=None,
                    help="seconds of sim time (defaults to the mission timeout)")
    sp.add_argument("--snapshot-every", type=int, default=1, help="snapshot log decimation")
    sp.add_argument("--strategy", type=int, choices=(1, 2), default=None,
                    help="drive the run with a scripted operator strategy")
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("replay", help="re-run a recorded run and verify it matches")
    sp.add_argument("--run", required=True, help="directory written by run/serve --record")
    sp.set_defaults(fn=cmd_replay)

    sp = sub.add_parser("experiment", help="strategy comparison over multiple seeds")
    _add_scenario_arg(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seeds", type=int, default=10, help="number of seeds")
    sp.add_argument("--seed-base", type=int, default=100, help="first seed value")
    sp.add_argument("--strategies", default="1,2")
    sp.set_defaults(fn=cmd_experiment)

    sp = sub.add_parser("serve", help="websocket server for live operation")
    _add_scenario_arg(sp)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8765)
    sp.add_argument("--speed", type=float, default=1.0, help="real-time multiplier")
    sp.add_argument("--snapshot-every", type=int, default=1,
                    help="send every Nth snapshot to clients")
    sp.add_argument("--record", default=None, help="record artifacts into this directory")
    sp.add_argument("--ui", default=None, help="serve this directory over HTTP on the same port")
    sp.add_argument("--duration", type=float, default=None, help="stop after this much sim time")
    sp.set_defaults(fn=cmd_serve)

    sp = sub.add_parser("scenarios", help="list builtin scenarios")
    sp.set_defaults(fn=cmd_scenarios)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioError, RecordingError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
