"""Per-track visual attention timers and the indicator gates built on them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from .core import TIME_EPS, FusionConfig, PersonTrack


class Phase(str, enum.Enum):
    ACCUMULATING = "Accumulating"
    VISUAL_ATTENTION = "VisualAttention"


class ContractError(RuntimeError):
    """A gate was evaluated in a phase where it is undefined."""


@dataclass(frozen=True)
class AttentionTimer:
    """Gaze timers for one track.

    ``t1_elapsed`` counts frontal time towards visual attention and is capped at
    ``delta_t1``; once it reaches the cap the phase flips and ``t2_elapsed``
    starts from zero. ``last_frontal`` is None while no gaze episode is open.
    """

    track_id: int
    t1_elapsed: float = 0.0
    t2_elapsed: float = 0.0
    phase: Phase = Phase.ACCUMULATING
    last_frontal: Optional[float] = None
    last_update: Optional[float] = None

    @property
    def in_episode(self) -> bool:
        return self.last_frontal is not None


def update_timers(timer: AttentionTimer, track: PersonTrack, now: float,
                  config: FusionConfig) -> AttentionTimer:
    if timer.last_update is not None and now < timer.last_update - TIME_EPS:
        raise ValueError(f"timestamp regression: {now} < {timer.last_update}")
    if track.track_id != timer.track_id:
        raise ValueError("timer and track belong to different track ids")

    if track.frontal_face:
        if not timer.in_episode:
            return AttentionTimer(timer.track_id, last_frontal=now, last_update=now)
        dt = now - timer.last_update
        if timer.phase is Phase.ACCUMULATING:
            t1 = timer.t1_elapsed + dt
            if t1 >= config.delta_t1 - TIME_EPS:
                return replace(timer, t1_elapsed=config.delta_t1, t2_elapsed=0.0,
                               phase=Phase.VISUAL_ATTENTION, last_frontal=now, last_update=now)
            return replace(timer, t1_elapsed=t1, last_frontal=now, last_update=now)
        return replace(timer, t2_elapsed=timer.t2_elapsed + dt, last_frontal=now, last_update=now)

    if timer.in_episode and now - timer.last_frontal <= config.max_face_gap + TIME_EPS:
        # short detector dropout: hold both timers
        return replace(timer, last_update=now)
    return AttentionTimer(timer.track_id, last_update=now)


def z_v1(timer: AttentionTimer, config: FusionConfig) -> int:
    return int(timer.t1_elapsed >= config.delta_t1 - TIME_EPS)


def z_v2(timer: AttentionTimer, config: FusionConfig) -> int:
    if timer.phase is not Phase.VISUAL_ATTENTION:
        raise ContractError("z_v2 is only defined in the VisualAttention phase")
    return int(timer.t2_elapsed >= config.delta_t2 - TIME_EPS)


def visual_gates(timer: AttentionTimer, config: FusionConfig) -> tuple[int, int]:
    """(z_v1, z_v2) with z_v2 reported as 0 before visual attention is reached."""
    if timer.phase is Phase.VISUAL_ATTENTION:
        return z_v1(timer, config), z_v2(timer, config)
    return z_v1(timer, config), 0


def z_a(s: int, f: int, h: int) -> int:
    return int(bool(s) and bool(f) and bool(h))
