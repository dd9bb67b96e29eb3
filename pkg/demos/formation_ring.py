"""Place a control cube, watch six robots settle into a rotating ring,
then move the cube and watch them follow.

    python demos/formation_ring.py
"""

import math

from swarmgiant import scenario as scen
from swarmgiant.world import PlaceCube


def ring_report(world, center, ring_radius):
    snap = world.snapshot()
    members = [r for r in snap.robots if r.mode == "formation"]
    if not members:
        return "no formation members"
    radial = [math.hypot(r.x - center[0], r.y - center[1]) for r in members]
    worst = max(abs(d - ring_radius) for d in radial)
    return (f"{len(members)} robots on the ring, radius spread "
            f"{min(radial):.3f}..{max(radial):.3f} m (worst error {worst*1000:.1f} mm)")


def main():
    sc = scen.builtin("formation-arena")
    world, _ = sc.build()
    ring = sc.formation["ring_radius"]

    print(f"arena {sc.width}x{sc.height} m, {len(world.robots)} robots, "
          f"ring radius {ring} m")
    world.step((PlaceCube((1.5, 1.5)),))
    print("cube placed at (1.5, 1.5)")

    for t in (5, 15, 30):
        while world.tick * world.dt < t:
            world.step(())
        print(f"  t={t:3d}s  {ring_report(world, (1.5, 1.5), ring)}")

    world.step((PlaceCube((2.1, 2.1)),))
    print("cube moved to (2.1, 2.1)")
    for t in (35, 45, 60):
        while world.tick * world.dt < t:
            world.step(())
        print(f"  t={t:3d}s  {ring_report(world, (2.1, 2.1), ring)}")


if __name__ == "__main__":
    main()
