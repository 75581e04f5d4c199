"""Frame-synchronous fusion engine: tracks + sound estimates in, IoI events out."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set

from .association import match_speaker
from .attention import AttentionTimer, update_timers, visual_gates
from .core import FusionConfig, IoIEvent, IoIState, IoIStateKind, PersonTrack, SoundSourceEstimate
from .state_machine import FramePercepts, step


@dataclass(frozen=True)
class FrameRecord:
    timestamp: float
    state: IoIState
    event: Optional[IoIEvent]
    state_path: tuple


class FusionEngine:
    """Owns per-track timers and the state machine for one run.

    After an IoI event a track is marked engaged: its gaze gates are masked and
    sounds associated with it are ignored until its gaze episode ends (face
    away longer than ``max_face_gap``) or it leaves the scene. Without this
    latch a continued gaze or utterance would re-trigger IoI every few frames.
    """

    def __init__(self, config: FusionConfig):
        self.config = config
        self.state = IoIState()
        self.timers: Dict[int, AttentionTimer] = {}
        self.engaged: Set[int] = set()
        self._path: List[str] = [IoIStateKind.MONITORING.value]

    def process(self, t: float, tracks: Sequence[PersonTrack],
                sounds: Sequence[SoundSourceEstimate] = ()) -> FrameRecord:
        cfg = self.config
        present = {tr.track_id for tr in tracks}
        for tid in list(self.timers):
            if tid not in present:
                del self.timers[tid]
        self.engaged &= present

        gates = {}
        for tr in tracks:
            timer = self.timers.get(tr.track_id, AttentionTimer(tr.track_id))
            timer = update_timers(timer, tr, t, cfg)
            self.timers[tr.track_id] = timer
            if not timer.in_episode:
                self.engaged.discard(tr.track_id)
            gates[tr.track_id] = (0, 0) if tr.track_id in self.engaged else visual_gates(timer, cfg)

        sound = max(sounds, key=lambda s: s.power) if sounds else None
        association = match_speaker(tracks, sound, cfg) if sound is not None else None
        if association is not None and association.matched in self.engaged:
            sound, association = None, None

        percepts = FramePercepts(t, tuple(tracks), sound, association, gates)
        self.state, event = step(self.state, percepts, cfg)

        if self.state.kind is IoIStateKind.MONITORING:
            self._path = [IoIStateKind.MONITORING.value]
        elif self._path[-1] != self.state.kind.value:
            self._path.append(self.state.kind.value)
        if event is not None:
            self.engaged.add(event.track_id)
        return FrameRecord(t, self.state, event, tuple(self._path))
