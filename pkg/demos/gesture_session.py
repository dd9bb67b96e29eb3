"""Feed a short hand-tracking session through the gesture recognizer and
print every event it emits: a two-hand resize, then a wall drawn by pinch,
then a button press.

    python demos/gesture_session.py
"""

from swarmgiant.gestures import AvatarState, GestureFsm, HandFrame, HandPose

DOWN = (0.0, -1.0, 0.0)
UP = (0.0, 1.0, 0.0)


def hand(thumb, index, palm=(0.0, 0.0, 0.0), normal=DOWN, grab=0.0):
    return HandPose(palm_position=palm, palm_normal=normal,
                    thumb_tip=thumb, index_tip=index, grab_strength=grab)


def pinch(x, y, sep=0.0):
    return hand((x - sep / 2, y, 0.0), (x + sep / 2, y, 0.0))


def open_hand(x, y):
    return hand((x - 0.1, y, 0.0), (x + 0.1, y, 0.0))


def main():
    fsm = GestureFsm(avatar=AvatarState())
    t = [0.0]

    def frame(left=None, right=None):
        t[0] += 0.1
        return HandFrame(timestamp=t[0], left=left, right=right)

    session = [
        ("hands appear, far apart", frame(open_hand(-0.2, 0.0), open_hand(0.2, 0.0))),
        ("both pinch 0.2 m apart", frame(pinch(-0.1, 0.0), pinch(0.1, 0.0))),
        ("spread to 0.4 m", frame(pinch(-0.2, 0.0), pinch(0.2, 0.0))),
        ("release", frame(open_hand(-0.2, 0.0), open_hand(0.2, 0.0))),
        ("right hand pinches", frame(None, pinch(0.3, 0.1))),
        ("drags while pinched", frame(None, pinch(0.5, 0.1))),
        ("lets go", frame(None, open_hand(0.5, 0.1))),
    ]

    for label, f in session:
        events = fsm.update(f)
        print(f"{label}:")
        for e in events:
            print(f"    {e}")
        if not events:
            print("    (nothing)")
    print(f"\nworld scale after the session: {fsm.avatar.world_scale}")


if __name__ == "__main__":
    main()
