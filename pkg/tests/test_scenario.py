import math

import numpy as np
import pytest

from ioi_fusion.core import EventKind, FusionConfig, wrap_degrees
from ioi_fusion.doa import localize
from ioi_fusion.scenario import (
    ScenarioError,
    frame_rng,
    load_scenario,
    load_scenario_file,
    parse_event_log,
    run_scenario,
    synthesize_audio,
    synthesize_tracks,
)

CFG = FusionConfig()

SPEAKER = """
[meta]
duration = 6
seed = 1

[person 1]
waypoint 0 2.0 0.0 180

[speech]
1 2.0 4.0 1.0

[truth]
1 2.2 AudioVision
"""


def one_source(kind_line, duration=2):
    return load_scenario(f"[meta]\nduration = {duration}\n{kind_line}")


def test_empty_scenario():
    sc = load_scenario("[meta]\nduration = 10\n")
    assert sc.duration == 10 and sc.persons == ()
    assert synthesize_tracks(sc, 5.0) == []


def test_speaker_scenario():
    sc = load_scenario(SPEAKER)
    assert sc.seed == 1
    assert sc.speech_intervals[0].t_start == 2.0
    assert sc.ground_truth_ioi[0].kind is EventKind.AUDIO_VISION


@pytest.mark.parametrize("text, line", [
    ("[meta]\nduration = 5\n[person 1]\nwaypoint 1 1 0 0\nwaypoint 1 2 0 0\n", 5),
    ("[meta]\nduration = 5\n[person 1]\nwaypoint 0 1 0 0\n[speech]\n2 0 1\n", 6),
    ("[meta]\nduration = 5\n[speech]\n", None),
    ("[meta]\nduration = 5\n[noise]\nfan 1 1 0 1\n", 4),
    ("[meta]\nduration = 5\n[person 1]\nwaypoint 0 0 0 0\n", 4),
    ("[meta]\nduration = 5\n[person 1]\nwaypoint 0 1 0 0\n[speech]\n1 3 7\n", 6),
    ("[meta]\nduration = 5\n[person 1]\nwaypoint 0 1 0 0\n[truth]\n1 2 Hotword\n", 6),
    ("[meta]\nduration = 5\n[bogus]\n", 3),
    ("[meta]\nduration = x\n", 2),
    ("waypoint 0 1 0 0\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    if line is None:
        load_scenario(text)  # an empty section is fine
        return
    with pytest.raises(ScenarioError, match=f"line {line}"):
        load_scenario(text)


def test_missing_duration():
    with pytest.raises(ScenarioError):
        load_scenario("[person 1]\nwaypoint 0 1 0 0\n")


def test_frontal_face_from_yaw():
    sc = load_scenario("[meta]\nduration = 1\n[person 1]\nwaypoint 0 2 0 180\n[person 2]\nwaypoint 0 2 0 150\n")
    t1, t2 = synthesize_tracks(sc, 0.5)
    assert t1.frontal_face is True
    assert t2.frontal_face is False  # |150 - 180| = 30 > 20


def test_frontal_wraps_angles():
    # bearing to the robot is -170; yaw 175 differs by 15 after wrapping
    x, y = -2 * math.cos(math.radians(-170)), -2 * math.sin(math.radians(-170))
    sc = load_scenario(f"[meta]\nduration = 1\n[person 1]\nwaypoint 0 {x} {y} 175\n")
    assert synthesize_tracks(sc, 0.0)[0].frontal_face


def test_linear_interpolation():
    sc = load_scenario("[meta]\nduration = 4\n[person 1]\nwaypoint 0 1 0 170\nwaypoint 2 3 2 -170\n")
    (tr,) = synthesize_tracks(sc, 1.0)
    assert tr.position == pytest.approx((2.0, 1.0))
    assert sc.person(1).pose(1.0)[2] == pytest.approx(-180.0)  # shortest way through 180
    assert synthesize_tracks(sc, 3.5)[0].position == pytest.approx((3.0, 2.0))


def test_person_absent_before_first_waypoint():
    sc = load_scenario("[meta]\nduration = 4\n[person 1]\nwaypoint 2 1 0 0\n")
    assert synthesize_tracks(sc, 1.0) == []
    assert len(synthesize_tracks(sc, 2.0)) == 1


def test_silence_gives_no_detection():
    sc = load_scenario("[meta]\nduration = 2\n")
    for k in range(10):
        x = synthesize_audio(sc, CFG.array, (k * 0.1, k * 0.1 + 0.1), rng=frame_rng(0, k))
        assert localize(x, CFG.array, CFG.doa, 0.0) == []


def test_speaker_bearing_recovered():
    sc = load_scenario("[meta]\nduration = 2\n[person 1]\nwaypoint 0 %f %f 0\n[speech]\n1 0 2\n"
                       % (2 * math.cos(math.radians(40)), 2 * math.sin(math.radians(40))))
    x = synthesize_audio(sc, CFG.array, (0.5, 0.6), rng=frame_rng(3, 5))
    (est,) = localize(x, CFG.array, CFG.doa, 0.5)
    assert abs(wrap_degrees(est.direction.azimuth - 40)) <= 2


def test_radio_localized_but_no_event():
    sc = load_scenario("[meta]\nduration = 5\n[person 1]\nwaypoint 0 2 0.5 90\n"
                       "[noise]\nradio -1.0 -1.7320508 0 5\n")
    x = synthesize_audio(sc, CFG.array, (1.0, 1.1), rng=frame_rng(0, 10))
    (est,) = localize(x, CFG.array, CFG.doa, 1.0)
    assert abs(wrap_degrees(est.direction.azimuth + 120)) <= 2
    assert run_scenario(sc, CFG).events == []


def test_window_outside_duration():
    sc = load_scenario("[meta]\nduration = 1\n")
    with pytest.raises(ValueError):
        synthesize_audio(sc, CFG.array, (0.95, 1.05))


def test_bearing_sweep_36():
    for i, bearing in enumerate(np.arange(-180, 180, 10.0)):
        r = math.radians(bearing)
        sc = load_scenario(f"[meta]\nduration = 1\n[person 1]\nwaypoint 0 {2 * math.cos(r)} {2 * math.sin(r)} 0\n"
                           "[speech]\n1 0 1\n")
        x = synthesize_audio(sc, CFG.array, (0.0, 0.1), snr_db=20, rng=frame_rng(i, 0))
        (est,) = localize(x, CFG.array, CFG.doa, 0.0)
        assert abs(wrap_degrees(est.direction.azimuth - bearing)) <= 2


def test_run_speaker_scenario():
    res = run_scenario(load_scenario(SPEAKER), CFG)
    assert [(e.kind, e.track_id) for e in res.events] == [(EventKind.AUDIO_VISION, 1)]
    assert res.events[0].timestamp == pytest.approx(2.2)
    assert len(res.trace) == 60


def test_small_voice_missed():
    quiet = SPEAKER.replace("1 2.0 4.0 1.0", "1 2.0 4.0 0.02").replace("waypoint 0 2.0 0.0 180",
                                                                     "waypoint 0 2.0 0.0 180\nwaypoint 3.5 2.0 0.0 180\nwaypoint 3.55 2.0 0.0 90")
    res = run_scenario(load_scenario(quiet), CFG)
    assert res.events == []


def test_seed_determinism(suite_dir):
    sc = load_scenario_file(suite_dir / "s1_speak_facing_b.scn")
    a = run_scenario(sc, CFG, seed=5)
    b = run_scenario(sc, CFG, seed=5)
    assert a.event_log() == b.event_log() and a.state_trace() == b.state_trace()


@pytest.mark.parametrize("name", ["s1_speak_facing_b", "s2_gaze_b", "s4_radio_b", "gaze_two_people"])
def test_mirror_symmetry(suite_dir, name):
    sc = load_scenario_file(suite_dir / f"{name}.scn")
    a = run_scenario(sc, CFG).events
    b = run_scenario(sc.mirrored(), CFG).events
    assert [(e.kind, e.track_id, e.timestamp) for e in a] == [(e.kind, e.track_id, e.timestamp) for e in b]
    for tr_a, tr_b in zip(synthesize_tracks(sc, 1.0), synthesize_tracks(sc.mirrored(), 1.0)):
        assert tr_b.position == pytest.approx((tr_a.position[0], -tr_a.position[1]))
        assert tr_a.frontal_face == tr_b.frontal_face


def test_event_log_round_trip():
    res = run_scenario(load_scenario(SPEAKER), CFG)
    log = res.event_log()
    assert log == "2.200,AudioVision,1,Monitoring;VocalAttention;VisualAttention;IoI\n"
    assert parse_event_log(log) == res.events
