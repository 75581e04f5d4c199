"""Shared domain types, configuration and angle helpers.

Everything here is an immutable value type. Angles are degrees in the robot's
horizontal frame (0 = robot forward axis, counter-clockwise positive) and
positions are metres with the robot at the origin.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

# Tolerance used whenever two timestamps or accumulated durations are compared.
TIME_EPS = 1e-9


def wrap_degrees(angle: float) -> float:
    """Wrap an angle into [-180, 180)."""
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped < 0:
        wrapped += 360.0
    wrapped -= 180.0
    # fmod can round to exactly 180.0 for inputs a hair below -180
    if wrapped >= 180.0:
        wrapped -= 360.0
    return wrapped


@dataclass(frozen=True)
class Direction:
    azimuth: float
    unit_vector: Tuple[float, float]

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.unit_vector)


def direction_from_azimuth(azimuth: float) -> Direction:
    """Build a normalized Direction, wrapping ``azimuth`` into [-180, 180).

    >>> direction_from_azimuth(270).azimuth
    -90.0
    """
    if not math.isfinite(azimuth):
        raise ValueError(f"azimuth must be finite, got {azimuth!r}")
    az = wrap_degrees(float(azimuth))
    rad = math.radians(az)
    return Direction(az, (math.cos(rad), math.sin(rad)))


def direction_from_vector(vec: Sequence[float]) -> Direction:
    x, y = float(vec[0]), float(vec[1])
    if math.hypot(x, y) == 0.0:
        raise ValueError("cannot take the direction of a zero vector")
    return direction_from_azimuth(math.degrees(math.atan2(y, x)))


def angle_between(a: Direction, b: Direction) -> float:
    """Unsigned angle between two directions, in [0, 180] degrees."""
    # atan2 of cross/dot keeps full precision near 0 and 180 where arccos does not
    ax, ay = a.unit_vector
    bx, by = b.unit_vector
    cross = ax * by - ay * bx
    dot = ax * bx + ay * by
    return abs(math.degrees(math.atan2(cross, dot)))


@dataclass(frozen=True)
class PersonTrack:
    track_id: int
    position: Tuple[float, float]
    frontal_face: bool
    timestamp: float

    def __post_init__(self):
        if math.hypot(*self.position) <= 0.0:
            raise ValueError(f"track {self.track_id}: position coincides with the robot")

    @property
    def bearing(self) -> Direction:
        return direction_from_vector(self.position)


@dataclass(frozen=True)
class SoundSourceEstimate:
    direction: Direction
    power: float
    timestamp: float


@dataclass(frozen=True)
class MicArrayGeometry:
    mic_positions: Tuple[Tuple[float, float], ...]
    speed_of_sound: float = 343.0

    def __post_init__(self):
        if len(self.mic_positions) < 2:
            raise ValueError("a microphone array needs at least two microphones")
        if len(set(self.mic_positions)) != len(self.mic_positions):
            raise ValueError("microphone positions must be distinct")
        if not self.speed_of_sound > 0:
            raise ValueError("speed_of_sound must be positive")

    @property
    def n_mics(self) -> int:
        return len(self.mic_positions)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mic_positions, dtype=float)

    def rotated(self, degrees: float) -> "MicArrayGeometry":
        c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
        pos = tuple((c * x - s * y, s * x + c * y) for x, y in self.mic_positions)
        return MicArrayGeometry(pos, self.speed_of_sound)

    @classmethod
    def circular(cls, n_ring: int = 6, radius: float = 0.045, center: bool = True,
                 speed_of_sound: float = 343.0) -> "MicArrayGeometry":
        pos = [(radius * math.cos(2 * math.pi * k / n_ring),
                radius * math.sin(2 * math.pi * k / n_ring)) for k in range(n_ring)]
        if center:
            pos.append((0.0, 0.0))
        return cls(tuple(pos), speed_of_sound)


def default_array() -> MicArrayGeometry:
    """Seven microphones: six on a 4.5 cm ring plus one at the centre."""
    return MicArrayGeometry.circular()


@dataclass(frozen=True)
class DoaConfig:
    sample_rate: int = 16000
    fft_size: int = 512
    hop: int = 256
    band: Tuple[float, float] = (500.0, 2800.0)
    n_sources: int = 1
    grid_step: float = 1.0
    # ratio to the median pseudospectrum value
    peak_threshold: float = 10.0

    def validate(self, n_mics: int) -> None:
        f_lo, f_hi = self.band
        if not 0 < f_lo < f_hi < self.sample_rate / 2:
            raise ValueError(f"band {self.band} must satisfy 0 < f_lo < f_hi < sample_rate/2")
        if not 1 <= self.n_sources < n_mics:
            raise ValueError(f"n_sources must be in [1, {n_mics - 1}]")
        if self.grid_step <= 0 or abs(360.0 / self.grid_step - round(360.0 / self.grid_step)) > 1e-9:
            raise ValueError("grid_step must divide 360")
        if self.fft_size <= 0 or self.hop <= 0:
            raise ValueError("fft_size and hop must be positive")
        if self.peak_threshold <= 0:
            raise ValueError("peak_threshold must be positive")

    def bin_indices(self) -> np.ndarray:
        freqs = np.fft.rfftfreq(self.fft_size, 1.0 / self.sample_rate)
        f_lo, f_hi = self.band
        return np.flatnonzero((freqs >= f_lo) & (freqs <= f_hi))

    def bin_frequencies(self) -> np.ndarray:
        return self.bin_indices() * self.sample_rate / self.fft_size

    def grid(self) -> np.ndarray:
        n = int(round(360.0 / self.grid_step))
        return -180.0 + self.grid_step * np.arange(n)


@dataclass(frozen=True)
class FusionConfig:
    delta_l: float = 15.0
    delta_t1: float = 2.0
    delta_t2: float = 2.0
    max_face_gap: float = 0.3
    frame_period: float = 0.1
    array: MicArrayGeometry = field(default_factory=default_array)
    doa: DoaConfig = field(default_factory=DoaConfig)
    facing_threshold: float = 20.0
    snr_db: float = 20.0
    seed: int = 0
    enable_vision_path: bool = True

    def __post_init__(self):
        if not 0 < self.delta_l < 90:
            raise ValueError("delta_l must lie in (0, 90) degrees")
        if not (self.delta_t1 > 0 and self.delta_t2 > 0):
            raise ValueError("delta_t1 and delta_t2 must be positive")
        if not 0 <= self.max_face_gap < self.delta_t1:
            raise ValueError("max_face_gap must be non-negative and below delta_t1")
        if self.frame_period <= 0:
            raise ValueError("frame_period must be positive")
        if not 0 < self.facing_threshold < 180:
            raise ValueError("facing_threshold must lie in (0, 180)")
        self.doa.validate(self.array.n_mics)

    def replace(self, **changes) -> "FusionConfig":
        return dataclasses.replace(self, **changes)


class IoIStateKind(str, enum.Enum):
    MONITORING = "Monitoring"
    VOCAL_ATTENTION = "VocalAttention"
    VISUAL_ATTENTION = "VisualAttention"
    IOI = "IoI"


class EventKind(str, enum.Enum):
    AUDIO_VISION = "AudioVision"
    VISION_ONLY = "VisionOnly"


@dataclass(frozen=True)
class IoIState:
    """A state of the interaction model.

    ``via`` records which path led into VisualAttention/IoI ("vocal" or
    "visual"); ``timestamp`` is the time of the last processed frame.
    """

    kind: IoIStateKind = IoIStateKind.MONITORING
    attending_track: Optional[int] = None
    via: Optional[str] = None
    timestamp: Optional[float] = None

    def __post_init__(self):
        if self.kind is IoIStateKind.MONITORING and self.attending_track is not None:
            raise ValueError("Monitoring never has an attending track")
        if self.kind in (IoIStateKind.VISUAL_ATTENTION, IoIStateKind.IOI) and self.attending_track is None:
            raise ValueError(f"{self.kind.value} requires an attending track")


@dataclass(frozen=True)
class IoIEvent:
    kind: EventKind
    track_id: int
    timestamp: float


# -- flat key = value config files -------------------------------------------

_FUSION_KEYS = {f.name for f in dataclasses.fields(FusionConfig)} - {"array", "doa"}
_DOA_KEYS = {f.name for f in dataclasses.fields(DoaConfig)}
_ARRAY_KEYS = {"mic_positions", "speed_of_sound"}


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_value(key: str, text: str, current):
    if key == "band":
        parts = text.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError("band needs two numbers: f_lo f_hi")
        return (float(parts[0]), float(parts[1]))
    if key == "mic_positions":
        # "x y; x y; ..."
        pts = []
        for chunk in text.split(";"):
            if chunk.strip():
                x, y = chunk.replace(",", " ").split()
                pts.append((float(x), float(y)))
        return tuple(pts)
    if isinstance(current, bool):
        return _parse_bool(text)
    if isinstance(current, int):
        return int(text)
    return float(text)


def parse_config(text: str, base: Optional[FusionConfig] = None) -> FusionConfig:
    """Parse ``key = value`` lines into a FusionConfig.

    Keys are the field names of FusionConfig, DoaConfig and MicArrayGeometry.
    Unknown keys and invalid values raise ValueError; nothing is clamped.
    """
    base = base or FusionConfig()
    top, doa, arr = {}, {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in _FUSION_KEYS:
                top[key] = _parse_value(key, value, getattr(base, key))
            elif key in _DOA_KEYS:
                doa[key] = _parse_value(key, value, getattr(base.doa, key))
            elif key in _ARRAY_KEYS:
                arr[key] = _parse_value(key, value, getattr(base.array, key))
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    array = dataclasses.replace(base.array, **arr) if arr else base.array
    doa_cfg = dataclasses.replace(base.doa, **doa) if doa else base.doa
    return dataclasses.replace(base, array=array, doa=doa_cfg, **top)


def load_config(path: str | Path) -> FusionConfig:
    return parse_config(Path(path).read_text())
