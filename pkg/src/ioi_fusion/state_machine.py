"""Four-state initiation-of-interaction model.

States: Monitoring, VocalAttention, VisualAttention, IoI. IoI is reachable
along two paths only::

    Monitoring -> VocalAttention -> VisualAttention -> IoI   (AudioVision)
    Monitoring -> VisualAttention -> IoI                      (VisionOnly)

``step`` makes at most one transition per frame. IoI lasts exactly one frame
and then falls back to Monitoring so the model re-arms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .association import AssociationResult
from .attention import z_a
from .core import (
    EventKind,
    FusionConfig,
    IoIEvent,
    IoIState,
    IoIStateKind as K,
    PersonTrack,
    SoundSourceEstimate,
)

VOCAL = "vocal"
VISUAL = "visual"


@dataclass(frozen=True)
class FramePercepts:
    timestamp: float
    tracks: Sequence[PersonTrack] = ()
    sound: Optional[SoundSourceEstimate] = None
    association: Optional[AssociationResult] = None
    # track_id -> (z_v1, z_v2)
    gates: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.association is not None and self.sound is None:
            raise ValueError("an association requires a sound estimate in the same frame")


def z_v(zv1: int, zv2: int) -> int:
    return int(bool(zv1) and bool(zv2))


def z_ioi(za: int, zv: int) -> int:
    return int(bool(za) or bool(zv))


def _monitoring(t: float) -> IoIState:
    return IoIState(K.MONITORING, timestamp=t)


def step(state: IoIState, percepts: FramePercepts,
         config: FusionConfig) -> tuple[IoIState, Optional[IoIEvent]]:
    t = percepts.timestamp
    if state.timestamp is not None and t <= state.timestamp:
        raise ValueError(f"timestamp regression: {t} after {state.timestamp}")

    tracks = {tr.track_id: tr for tr in percepts.tracks}
    s = int(percepts.sound is not None)
    matched = percepts.association.matched if percepts.association is not None else None

    if state.kind is K.IOI:
        return _monitoring(t), None

    if state.kind is K.MONITORING:
        ready = []
        if config.enable_vision_path:
            ready = sorted(tid for tid, (g1, _) in percepts.gates.items() if g1 and tid in tracks)
        # a sound nobody can be matched to (radio, TV) must not starve a ready gaze
        if s and (matched is not None or not ready):
            return IoIState(K.VOCAL_ATTENTION, matched, VOCAL, t), None
        if ready:
            return IoIState(K.VISUAL_ATTENTION, ready[0], VISUAL, t), None
        return _monitoring(t), None

    if state.kind is K.VOCAL_ATTENTION:
        # radio/TV or nobody facing the robot: back to Monitoring
        if matched is None or not any(tr.frontal_face for tr in tracks.values()):
            return _monitoring(t), None
        return IoIState(K.VISUAL_ATTENTION, matched, VOCAL, t), None

    # VisualAttention
    tid = state.attending_track
    track = tracks.get(tid)
    if state.via == VOCAL:
        return _audio_vision(tid, track, s, t)

    if s and matched is not None:
        if matched != tid:
            # someone else is speaking: abandon this dwell, the vocal path restarts
            return _monitoring(t), None
        nxt, event = _audio_vision(tid, track, s, t)
        if event is not None:
            return nxt, event
    g1, g2 = percepts.gates.get(tid, (0, 0))
    if track is None or not g1:
        return _monitoring(t), None
    if z_v(g1, g2):
        return IoIState(K.IOI, tid, VISUAL, t), IoIEvent(EventKind.VISION_ONLY, tid, t)
    return IoIState(K.VISUAL_ATTENTION, tid, VISUAL, t), None


def _audio_vision(tid: int, track: Optional[PersonTrack], s: int,
                  t: float) -> tuple[IoIState, Optional[IoIEvent]]:
    h = int(track is not None)
    f = int(track is not None and track.frontal_face)
    if z_a(s, f, h):
        return IoIState(K.IOI, tid, VOCAL, t), IoIEvent(EventKind.AUDIO_VISION, tid, t)
    return _monitoring(t), None
