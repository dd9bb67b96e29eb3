"""Compare the two scripted allocation strategies over a few seeds.

Strategy 1 only moves robots and repairs regions as robots wander off.
Strategy 2 additionally seals a filled region's door with a drawn wall.
Sealing costs a few strokes but ends the repair treadmill, so it should
win on total interactions.

    python demos/strategy_shootout.py [n_seeds]
"""

import sys

from swarmgiant import scenario as scen
from swarmgiant.operators import experiment


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    sc = scen.builtin("task-allocation")
    seeds = [300 + i for i in range(n)]
    print(f"{sc.name}: {n} seeds x 2 strategies (this is "
          f"{n * 2} full mission runs, be patient)\n")

    report = experiment(sc, seeds, (1, 2))
    print(f"{'strategy':>9} {'seed':>5} {'interactions':>13} {'completion':>11}")
    for row in report["rows"]:
        t = "timeout" if row["timed_out"] else f"{row['completion_time']:.1f}s"
        print(f"{row['strategy']:>9} {row['seed']:>5} "
              f"{row['interaction_count']:>13} {t:>11}")

    print()
    for name, s in report["summary"].items():
        print(f"{name}: {s['completed']}/{s['runs']} complete, "
              f"median {s['median_interactions']} interactions, "
              f"median time {s['median_completion_time']:.1f}s")


if __name__ == "__main__":
    main()
