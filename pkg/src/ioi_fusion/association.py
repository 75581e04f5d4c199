"""Speaker association: which tracked person does a sound direction belong to."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import FusionConfig, PersonTrack, SoundSourceEstimate, angle_between


@dataclass(frozen=True)
class AssociationResult:
    matched: Optional[int] = None
    angle_error: Optional[float] = None


NO_MATCH = AssociationResult()
_TIE_EPS = 1e-12


def match_speaker(tracks: Sequence[PersonTrack], sound: SoundSourceEstimate,
                  config: FusionConfig) -> AssociationResult:
    """Pick the track whose unit bearing has the largest dot product with the sound.

    Positions are normalized first, so only bearing matters, not distance. The
    winner is rejected when its angle to the sound exceeds ``config.delta_l``.
    Ties go to the lowest track_id.
    """
    if not tracks:
        return NO_MATCH
    sx, sy = sound.direction.unit_vector
    best = None
    for tr in sorted(tracks, key=lambda t: t.track_id):
        x, y = tr.position
        norm = math.hypot(x, y)
        if norm <= 0.0:
            raise ValueError(f"track {tr.track_id} has a zero-norm position")
        score = (x * sx + y * sy) / norm
        # near-equal scores count as ties so rounding cannot beat the id tie-break
        if best is None or score > best[0] + _TIE_EPS:
            best = (score, tr)
    winner = best[1]
    err = angle_between(winner.bearing, sound.direction)
    if err > config.delta_l:
        return NO_MATCH
    return AssociationResult(winner.track_id, err)
