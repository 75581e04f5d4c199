import itertools

import pytest
from hypothesis import given, strategies as st

from ioi_fusion.attention import AttentionTimer, ContractError, Phase, update_timers, z_a, z_v1, z_v2
from ioi_fusion.core import FusionConfig, PersonTrack

CFG = FusionConfig()
FP = CFG.frame_period


def run(frontal_flags, config=CFG):
    """Feed a per-frame frontal sequence; returns the timer after every frame."""
    timer = AttentionTimer(1)
    out = []
    for k, f in enumerate(frontal_flags):
        t = k * FP
        timer = update_timers(timer, PersonTrack(1, (2.0, 0.0), bool(f), t), t, config)
        out.append(timer)
    return out


def rising_edges(values):
    return sum(1 for a, b in zip([0] + values, values) if b and not a)


def test_zero_elapsed_at_first_frontal_frame():
    (timer,) = run([1])
    assert timer.t1_elapsed == 0.0 and timer.in_episode


def test_two_seconds_fires_z_v1():
    timers = run([1] * 21)  # frames at 0.0 .. 2.0 s
    assert [z_v1(t, CFG) for t in timers].index(1) == 20
    assert timers[20].phase is Phase.VISUAL_ATTENTION
    assert timers[20].t1_elapsed == CFG.delta_t1


def test_flicker_within_gap_is_held():
    # frontal 0.0-1.5 s, two missing frames (0.2 s), frontal again for 0.5 s
    timers = run([1] * 16 + [0] * 2 + [1] * 5)
    assert timers[15].t1_elapsed == pytest.approx(1.5)
    assert timers[17].t1_elapsed == pytest.approx(1.5)
    assert timers[-1].t1_elapsed == pytest.approx(2.0)
    assert z_v1(timers[-1], CFG) == 1


def test_gap_longer_than_tolerance_resets():
    timers = run([1] * 16 + [0] * 4 + [1])
    assert timers[-2].t1_elapsed == 0.0 and not timers[-2].in_episode
    assert timers[-1].t1_elapsed == 0.0


def test_z_v1_boundaries():
    assert z_v1(AttentionTimer(1, t1_elapsed=0.0), CFG) == 0
    assert z_v1(AttentionTimer(1, t1_elapsed=CFG.delta_t1), CFG) == 1
    assert z_v1(AttentionTimer(1, t1_elapsed=CFG.delta_t1 - FP), CFG) == 0


def test_z_v2_boundaries_and_contract():
    va = Phase.VISUAL_ATTENTION
    assert z_v2(AttentionTimer(1, 2.0, 0.0, va), CFG) == 0
    assert z_v2(AttentionTimer(1, 2.0, CFG.delta_t2, va), CFG) == 1
    with pytest.raises(ContractError):
        z_v2(AttentionTimer(1), CFG)


def test_gaze_broken_before_z_v2():
    # reach visual attention at 2.0 s, keep facing until t2 = 1.9 s, then look away 0.4 s
    timers = run([1] * 40 + [0] * 4)
    assert timers[39].phase is Phase.VISUAL_ATTENTION
    assert timers[39].t2_elapsed == pytest.approx(CFG.delta_t2 - 0.1)
    assert z_v2(timers[39], CFG) == 0
    assert timers[-1].phase is Phase.ACCUMULATING and timers[-1].t2_elapsed == 0.0


def test_timestamp_regression():
    timer = update_timers(AttentionTimer(1), PersonTrack(1, (1.0, 0.0), True, 1.0), 1.0, CFG)
    with pytest.raises(ValueError):
        update_timers(timer, PersonTrack(1, (1.0, 0.0), True, 0.5), 0.5, CFG)


@pytest.mark.parametrize("s, f, h", list(itertools.product((0, 1), repeat=3)))
def test_z_a_truth_table(s, f, h):
    assert z_a(s, f, h) == (1 if (s, f, h) == (1, 1, 1) else 0)


frontal_seqs = st.lists(st.booleans(), min_size=1, max_size=120)


@given(frontal_seqs)
def test_invariants(seq):
    timers = run(seq)
    for t in timers:
        assert t.t1_elapsed >= 0
        if t.phase is Phase.ACCUMULATING:
            assert t.t1_elapsed <= CFG.delta_t1
            assert t.t2_elapsed == 0
    if not any(seq):
        assert all(z_v1(t, CFG) == 0 for t in timers)


@given(frontal_seqs)
def test_deterministic(seq):
    assert run(seq) == run(seq)


@given(frontal_seqs, st.sampled_from([0.5, 1.0, 2.0]), st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_threshold_monotonicity(seq, low, high_extra):
    high = low + high_extra
    def counts(d1, d2):
        cfg = CFG.replace(delta_t1=d1, delta_t2=d2, max_face_gap=min(0.3, d1 / 2))
        timers = run(seq, cfg)
        v1 = [z_v1(t, cfg) for t in timers]
        v2 = [z_v2(t, cfg) if t.phase is Phase.VISUAL_ATTENTION else 0 for t in timers]
        return rising_edges(v1), rising_edges(v2)

    a1, a2 = counts(low, 2.0)
    b1, b2 = counts(high, 2.0)
    assert b1 <= a1 and b2 <= a2
    c1, c2 = counts(1.0, low)
    e1, e2 = counts(1.0, high)
    assert e2 <= c2
