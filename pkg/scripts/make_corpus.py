"""Write the scenario corpus used by the acceptance suite.

    python scripts/make_corpus.py [outdir]

Four situations, three variants each (s1..s4), six extra silent-gaze scenarios
(gaze_*), and one 60 s mixed scenario for threshold sweeps.
"""

import math
import sys
from pathlib import Path

FACE_AWAY = 90.0  # degrees added to the facing yaw when looking elsewhere
EDGE = 0.05       # yaw switch time, shorter than one frame


def facing_yaw(x, y):
    return math.degrees(math.atan2(-y, -x))


def person(pid, x, y, gazes, duration, away=FACE_AWAY):
    """Static person facing the robot during each (start, end) gaze interval."""
    face = facing_yaw(x, y)
    off = face + away
    pts = [(0.0, off)]
    for a, b in gazes:
        pts += [(max(a - EDGE, 0.0), off), (a, face), (b, face), (min(b + EDGE, duration), off)]
    # drop duplicate times while keeping the later entry
    out = {}
    for t, yaw in pts:
        out[round(t, 6)] = yaw
    lines = [f"[person {pid}]"]
    lines += [f"waypoint {t:g} {x:g} {y:g} {yaw:.3f}" for t, yaw in sorted(out.items())]
    return "\n".join(lines)


def scenario(duration, seed, persons, speech=(), noise=(), truth=(), comment=""):
    parts = [f"# {comment}"] if comment else []
    parts.append(f"[meta]\nduration = {duration:g}\nseed = {seed}")
    parts += persons
    if speech:
        parts.append("[speech]\n" + "\n".join(" ".join(f"{v:g}" for v in s) for s in speech))
    if noise:
        parts.append("[noise]\n" + "\n".join(f"{k} {x:g} {y:g} {a:g} {b:g}" for k, x, y, a, b in noise))
    if truth:
        parts.append("[truth]\n" + "\n".join(f"{p} {t:g} {k}" for p, t, k in truth))
    return "\n\n".join(parts) + "\n"


def suite():
    sc = {}
    # situation 1: speaks while looking at the robot
    sc["s1_speak_facing_a"] = scenario(
        6, 11, [person(1, 2.0, 0.5, [(0.0, 3.0)], 6)],
        speech=[(1, 1.0, 2.5)], truth=[(1, 1.2, "AudioVision")],
        comment="user speaks to the robot while looking at it")
    sc["s1_speak_facing_b"] = scenario(
        7, 12, [person(1, 1.5, -1.0, [(1.5, 4.5)], 7), person(2, 2.5, 1.5, [], 7)],
        speech=[(1, 2.0, 4.0)], truth=[(1, 2.2, "AudioVision")],
        comment="speaker facing the robot, bystander looking away")
    sc["s1_speak_facing_c"] = scenario(
        6, 13, [person(1, -1.0, 2.0, [(0.5, 3.5)], 6), person(2, 0.5, -2.0, [], 6)],
        speech=[(1, 1.0, 3.0)], truth=[(1, 1.2, "AudioVision")],
        comment="speaker behind-left of the robot")
    # situation 2: looks at the robot continuously, silent
    sc["s2_gaze_a"] = scenario(
        8, 21, [person(1, 2.0, 0.0, [(1.0, 6.5)], 8)],
        truth=[(1, 5.0, "VisionOnly")], comment="continuous silent gaze")
    sc["s2_gaze_b"] = scenario(
        9, 22, [person(1, 1.2, 1.6, [(2.0, 7.0)], 9), person(2, 2.0, -1.5, [], 9)],
        truth=[(1, 6.0, "VisionOnly")], comment="silent gaze with a bystander")
    sc["s2_gaze_c"] = scenario(
        8, 23, [person(1, -2.0, -1.0, [(0.5, 6.0)], 8)],
        truth=[(1, 4.5, "VisionOnly")], comment="silent gaze from behind")
    # situation 3: temporarily faces the robot while looking around
    sc["s3_glance_a"] = scenario(
        8, 31, [person(1, 2.0, 0.5, [(1.0, 2.0), (4.0, 5.5)], 8)],
        comment="short glances, each shorter than the gaze threshold")
    sc["s3_glance_b"] = scenario(
        8, 32, [person(1, 1.0, -2.0, [(0.5, 1.8), (3.0, 3.5), (5.0, 6.5)], 8),
                person(2, 2.5, 1.0, [(2.0, 3.0)], 8)],
        comment="two people glancing")
    sc["s3_glance_c"] = scenario(
        8, 33, [person(1, -1.5, 1.5, [(1.0, 2.5), (3.0, 4.5)], 8)],
        comment="glances separated by a break longer than the flicker tolerance")
    # situation 4: nobody speaks, a radio is on
    sc["s4_radio_a"] = scenario(
        8, 41, [person(1, 2.0, 0.5, [], 8)],
        noise=[("radio", -1.0, -1.7, 1.0, 7.0)], comment="radio on, user looking away")
    sc["s4_radio_b"] = scenario(
        8, 42, [person(1, -1.0, -1.8, [], 8), person(2, 1.5, 1.5, [], 8)],
        noise=[("radio", -1.0, -1.7, 0.5, 7.5)], comment="radio right behind a person looking away")
    sc["s4_radio_c"] = scenario(
        8, 43, [person(1, 1.0, 2.0, [], 8)],
        noise=[("tv", 2.5, -1.0, 1.0, 6.0)], comment="tv on, nobody facing the robot")
    # extra silent-gaze scenarios
    sc["gaze_flicker"] = scenario(
        9, 51, [person(1, 2.0, 1.0, [(1.0, 2.2), (2.4, 3.9), (4.1, 6.5)], 9)],
        truth=[(1, 5.0, "VisionOnly")], comment="gaze with short face-detector dropouts")
    sc["gaze_two_people"] = scenario(
        12, 52, [person(1, 2.0, -0.5, [(1.0, 6.0)], 12), person(2, -1.0, 2.0, [(6.5, 11.5)], 12)],
        truth=[(1, 5.0, "VisionOnly"), (2, 10.5, "VisionOnly")], comment="two people gaze one after another")
    sc["gaze_radio"] = scenario(
        9, 53, [person(1, 1.8, 0.8, [(1.0, 6.5)], 9)],
        noise=[("radio", -1.0, -1.7, 0.0, 9.0)],
        truth=[(1, 5.0, "VisionOnly")], comment="silent gaze while a radio plays")
    sc["gaze_far"] = scenario(
        8, 54, [person(1, 4.0, 2.5, [(1.5, 6.5)], 8)],
        truth=[(1, 5.5, "VisionOnly")], comment="silent gaze from across the room")
    sc["gaze_repeat"] = scenario(
        14, 55, [person(1, 1.5, -1.5, [(0.5, 5.0), (7.0, 12.0)], 14)],
        truth=[(1, 4.5, "VisionOnly"), (1, 11.0, "VisionOnly")], comment="same person gazes twice")
    sc["gaze_with_glancer"] = scenario(
        9, 56, [person(1, 2.2, 0.0, [(2.0, 7.0)], 9), person(2, 1.0, 2.0, [(1.0, 2.0), (4.0, 5.0)], 9)],
        truth=[(1, 6.0, "VisionOnly")], comment="gazer next to someone glancing around")
    return sc


def mixed():
    gazes = [(1.0, 3.5), (6.0, 9.5), (12.0, 16.5), (20.0, 25.5), (30.0, 36.5)]
    return scenario(
        60, 61,
        [person(1, 2.0, 0.5, gazes, 60), person(2, -1.0, 2.0, [(40.0, 44.0), (50.0, 53.0)], 60)],
        speech=[(2, 41.0, 43.0), (2, 50.5, 52.0)],
        noise=[("radio", -1.0, -1.7, 45.0, 49.0)],
        comment="mixed 60 s scenario: gazes of 2.5-6.5 s, speech, radio")


def main(outdir):
    out = Path(outdir)
    (out / "suite").mkdir(parents=True, exist_ok=True)
    for name, text in suite().items():
        (out / "suite" / f"{name}.scn").write_text(text)
    (out / "mixed_60s.scn").write_text(mixed())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "scenarios")
