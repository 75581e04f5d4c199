"""Scripted scenarios and the synthetic perception front-end.

A scenario file looks like::

    [meta]
    duration = 10
    seed = 3

    [person 1]
    # waypoint t x y head_yaw
    waypoint 0 2.0 0.0 180

    [speech]
    # person t_start t_end [gain]
    1 3.0 5.0 1.0

    [noise]
    # kind x y t_start t_end
    radio -1.0 -1.7 0 10

    [truth]
    # person t_onset kind
    1 3.2 AudioVision

Head yaw is the direction the face points, in the robot frame. A person is
present from the first waypoint time to the end of the scenario and holds
still after the last waypoint.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    TIME_EPS,
    EventKind,
    FusionConfig,
    IoIEvent,
    MicArrayGeometry,
    PersonTrack,
    wrap_degrees,
)
from .doa import localize
from .pipeline import FrameRecord, FusionEngine

SPEECH_BAND = (500.0, 2800.0)
NOISE_BAND = (200.0, 4000.0)
NOISE_KINDS = ("radio", "tv")
# zero-padding around each synthesized window so circular FFT delays never wrap into it
_PAD = 64


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Waypoint:
    t: float
    x: float
    y: float
    yaw: float


@dataclass(frozen=True)
class Person:
    id: int
    waypoints: Tuple[Waypoint, ...]

    def pose(self, t: float) -> Optional[Tuple[float, float, float]]:
        """(x, y, yaw) at time ``t``; None before the person appears."""
        wps = self.waypoints
        if t < wps[0].t - TIME_EPS:
            return None
        times = [w.t for w in wps]
        i = bisect.bisect_right(times, t)
        if i >= len(wps):
            w = wps[-1]
            return w.x, w.y, w.yaw
        a, b = wps[i - 1], wps[i]
        u = (t - a.t) / (b.t - a.t)
        yaw = a.yaw + u * wrap_degrees(b.yaw - a.yaw)
        return a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), wrap_degrees(yaw)


@dataclass(frozen=True)
class SpeechInterval:
    person: int
    t_start: float
    t_end: float
    gain: float = 1.0


@dataclass(frozen=True)
class NoiseSource:
    kind: str
    position: Tuple[float, float]
    t_start: float
    t_end: float
    gain: float = 1.0


@dataclass(frozen=True)
class TruthEntry:
    person: int
    t_onset: float
    kind: EventKind


@dataclass(frozen=True)
class Scenario:
    duration: float
    persons: Tuple[Person, ...] = ()
    speech_intervals: Tuple[SpeechInterval, ...] = ()
    noise_sources: Tuple[NoiseSource, ...] = ()
    ground_truth_ioi: Tuple[TruthEntry, ...] = ()
    seed: Optional[int] = None
    name: str = ""

    def person(self, pid: int) -> Person:
        for p in self.persons:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def mirrored(self) -> "Scenario":
        """Reflect everything across the robot's x axis."""
        persons = tuple(
            Person(p.id, tuple(Waypoint(w.t, w.x, -w.y, wrap_degrees(-w.yaw)) for w in p.waypoints))
            for p in self.persons
        )
        noise = tuple(replace(n, position=(n.position[0], -n.position[1])) for n in self.noise_sources)
        return replace(self, persons=persons, noise_sources=noise)


# -- parsing -----------------------------------------------------------------

def _floats(parts: Sequence[str], lineno: int) -> List[float]:
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ScenarioError(f"line {lineno}: expected numbers, got {' '.join(parts)!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise ScenarioError(f"line {lineno}: non-finite number")
    return vals


def _int(text: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScenarioError(f"line {lineno}: expected an integer id, got {text!r}") from None


def load_scenario(text: str, name: str = "") -> Scenario:
    section: Optional[str] = None
    meta: Dict[str, str] = {}
    waypoints: Dict[int, List[Tuple[int, Waypoint]]] = {}
    speech: List[Tuple[int, SpeechInterval]] = []
    noise: List[Tuple[int, NoiseSource]] = []
    truth: List[Tuple[int, TruthEntry]] = []
    current_person: Optional[int] = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError(f"line {lineno}: unterminated section header")
            head = line[1:-1].split()
            if not head:
                raise ScenarioError(f"line {lineno}: empty section header")
            section = head[0]
            if section == "person":
                if len(head) != 2:
                    raise ScenarioError(f"line {lineno}: expected [person <id>]")
                current_person = _int(head[1], lineno)
                if current_person in waypoints:
                    raise ScenarioError(f"line {lineno}: person {current_person} defined twice")
                waypoints[current_person] = []
            elif section not in ("meta", "speech", "noise", "truth") or len(head) != 1:
                raise ScenarioError(f"line {lineno}: unknown section {line}")
            continue

        parts = line.split()
        if section is None:
            raise ScenarioError(f"line {lineno}: content before any section")
        if section == "meta":
            if "=" not in line:
                raise ScenarioError(f"line {lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in ("duration", "seed"):
                raise ScenarioError(f"line {lineno}: unknown meta key {key!r}")
            meta[key] = value
            meta[key + "_line"] = str(lineno)
        elif section == "person":
            if parts[0] != "waypoint" or len(parts) != 5:
                raise ScenarioError(f"line {lineno}: expected 'waypoint t x y yaw'")
            t, x, y, yaw = _floats(parts[1:], lineno)
            if math.hypot(x, y) < 1e-6:
                raise ScenarioError(f"line {lineno}: person placed on the robot origin")
            waypoints[current_person].append((lineno, Waypoint(t, x, y, yaw)))
        elif section == "speech":
            if len(parts) not in (3, 4):
                raise ScenarioError(f"line {lineno}: expected 'person t_start t_end [gain]'")
            pid = _int(parts[0], lineno)
            vals = _floats(parts[1:], lineno)
            gain = vals[2] if len(vals) == 3 else 1.0
            speech.append((lineno, SpeechInterval(pid, vals[0], vals[1], gain)))
        elif section == "noise":
            if len(parts) not in (5, 6):
                raise ScenarioError(f"line {lineno}: expected 'kind x y t_start t_end [gain]'")
            if parts[0] not in NOISE_KINDS:
                raise ScenarioError(f"line {lineno}: noise kind must be one of {NOISE_KINDS}")
            vals = _floats(parts[1:], lineno)
            gain = vals[4] if len(vals) == 5 else 1.0
            noise.append((lineno, NoiseSource(parts[0], (vals[0], vals[1]), vals[2], vals[3], gain)))
        elif section == "truth":
            if len(parts) != 3:
                raise ScenarioError(f"line {lineno}: expected 'person t_onset kind'")
            pid = _int(parts[0], lineno)
            (t_on,) = _floats(parts[1:2], lineno)
            try:
                kind = EventKind(parts[2])
            except ValueError:
                raise ScenarioError(f"line {lineno}: unknown IoI kind {parts[2]!r}") from None
            truth.append((lineno, TruthEntry(pid, t_on, kind)))

    if "duration" not in meta:
        raise ScenarioError("line 0: [meta] duration is required")
    dline = int(meta["duration_line"])
    (duration,) = _floats([meta["duration"]], dline)
    if duration <= 0:
        raise ScenarioError(f"line {dline}: duration must be positive")
    seed = _int(meta["seed"], int(meta["seed_line"])) if "seed" in meta else None

    persons = []
    for pid, wps in waypoints.items():
        if not wps:
            raise ScenarioError(f"person {pid} has no waypoints")
        for (ln_a, a), (ln_b, b) in zip(wps, wps[1:]):
            if b.t <= a.t:
                raise ScenarioError(f"line {ln_b}: waypoint times for person {pid} must strictly increase")
        for ln, w in wps:
            if not 0 <= w.t <= duration:
                raise ScenarioError(f"line {ln}: waypoint time outside [0, duration]")
        persons.append(Person(pid, tuple(w for _, w in wps)))
    ids = set(waypoints)

    def check_interval(ln, t0, t1):
        if not 0 <= t0 < t1 <= duration:
            raise ScenarioError(f"line {ln}: interval must satisfy 0 <= t_start < t_end <= duration")

    for ln, sp in speech:
        if sp.person not in ids:
            raise ScenarioError(f"line {ln}: speech refers to unknown person {sp.person}")
        check_interval(ln, sp.t_start, sp.t_end)
        if sp.gain < 0:
            raise ScenarioError(f"line {ln}: gain must be non-negative")
    for ln, ns in noise:
        check_interval(ln, ns.t_start, ns.t_end)
        if math.hypot(*ns.position) < 1e-6:
            raise ScenarioError(f"line {ln}: noise source on the robot origin")
    for ln, tr in truth:
        if tr.person not in ids:
            raise ScenarioError(f"line {ln}: truth refers to unknown person {tr.person}")
        if not 0 <= tr.t_onset <= duration:
            raise ScenarioError(f"line {ln}: truth onset outside [0, duration]")

    return Scenario(
        duration=duration,
        persons=tuple(sorted(persons, key=lambda p: p.id)),
        speech_intervals=tuple(s for _, s in speech),
        noise_sources=tuple(n for _, n in noise),
        ground_truth_ioi=tuple(sorted((t for _, t in truth), key=lambda e: (e.t_onset, e.person))),
        seed=seed,
        name=name,
    )


def load_scenario_file(path: str | Path) -> Scenario:
    path = Path(path)
    return load_scenario(path.read_text(), name=path.stem)


# -- synthetic perception ----------------------------------------------------

def synthesize_tracks(scenario: Scenario, t: float, facing_threshold: float = 20.0) -> List[PersonTrack]:
    """Ideal tracker + head-pose output at time ``t``.

    A face counts as frontal when the head yaw is within ``facing_threshold``
    degrees of the bearing from the person back to the robot.
    """
    out = []
    for p in scenario.persons:
        pose = p.pose(t)
        if pose is None:
            continue
        x, y, yaw = pose
        to_robot = math.degrees(math.atan2(-y, -x))
        frontal = abs(wrap_degrees(yaw - to_robot)) <= facing_threshold
        out.append(PersonTrack(p.id, (x, y), frontal, t))
    return out


def _active(t0: float, t1: float, t: float) -> bool:
    return t0 - TIME_EPS <= t < t1 - TIME_EPS


def active_sources(scenario: Scenario, t: float) -> List[Tuple[float, Tuple[float, float], float]]:
    """(bearing, band, gain) for every sound source on at time ``t``."""
    out = []
    for sp in scenario.speech_intervals:
        if _active(sp.t_start, sp.t_end, t):
            pose = scenario.person(sp.person).pose(t)
            if pose is not None:
                out.append((math.degrees(math.atan2(pose[1], pose[0])), SPEECH_BAND, sp.gain))
    for ns in scenario.noise_sources:
        if _active(ns.t_start, ns.t_end, t):
            out.append((math.degrees(math.atan2(ns.position[1], ns.position[0])), NOISE_BAND, ns.gain))
    return out


def synthesize_plane_waves(sources: Sequence[Tuple[float, Tuple[float, float], float]],
                           array: MicArrayGeometry, n_samples: int, sample_rate: int,
                           rng: np.random.Generator, snr_db: float = 20.0) -> np.ndarray:
    """Band-limited noise sources arriving as plane waves, plus sensor noise.

    Each source is (bearing_deg, (f_lo, f_hi), gain) and has unit power before
    its gain. Delays are applied as exact phase shifts in the frequency domain.
    Sensor noise is white with variance 10**(-snr_db/10) on every channel;
    ``snr_db = inf`` gives a noise-free mixture.
    """
    n_fft = n_samples + 2 * _PAD
    freqs = np.fft.rfftfreq(n_fft, 1.0 / sample_rate)
    pos = array.as_array()
    out = np.zeros((n_samples, array.n_mics))
    for bearing, (f_lo, f_hi), gain in sources:
        white = rng.standard_normal(n_fft)
        spec = np.fft.rfft(white)
        spec[(freqs < f_lo) | (freqs > f_hi)] = 0.0
        base = np.fft.irfft(spec, n_fft)
        rms = np.sqrt(np.mean(base**2))
        if rms > 0:
            spec *= gain / rms
        az = math.radians(bearing)
        tau = -(pos @ np.array([math.cos(az), math.sin(az)])) / array.speed_of_sound
        shifted = spec[:, None] * np.exp(-2j * np.pi * freqs[:, None] * tau[None, :])
        out += np.fft.irfft(shifted, n_fft, axis=0)[_PAD:_PAD + n_samples]
    if math.isfinite(snr_db):
        out += rng.standard_normal(out.shape) * 10 ** (-snr_db / 20)
    return out


def frame_rng(seed: int, frame_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, frame_index])


def synthesize_audio(scenario: Scenario, array: MicArrayGeometry, window: Tuple[float, float],
                     sample_rate: int = 16000, snr_db: float = 20.0,
                     rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Multichannel samples (samples, mics) for the window [t, t + frame).

    Sources are those active at the window start; each window is synthesized
    independently from ``rng``.
    """
    t0, t1 = window
    if t0 < -TIME_EPS or t1 > scenario.duration + TIME_EPS or t1 <= t0:
        raise ValueError(f"window {window} outside scenario duration {scenario.duration}")
    rng = rng if rng is not None else np.random.default_rng(scenario.seed or 0)
    n = int(round((t1 - t0) * sample_rate))
    return synthesize_plane_waves(active_sources(scenario, t0), array, n, sample_rate, rng, snr_db)


# -- running -----------------------------------------------------------------

@dataclass
class RunResult:
    events: List[IoIEvent] = field(default_factory=list)
    trace: List[FrameRecord] = field(default_factory=list)

    def event_log(self) -> str:
        return format_event_log(self.events, self.trace)

    def state_trace(self) -> str:
        lines = []
        for rec in self.trace:
            tid = "" if rec.state.attending_track is None else str(rec.state.attending_track)
            lines.append(f"{rec.timestamp:.3f},{rec.state.kind.value},{tid}\n")
        return "".join(lines)


def format_event_log(events: Sequence[IoIEvent], trace: Sequence[FrameRecord]) -> str:
    paths = {rec.timestamp: rec.state_path for rec in trace if rec.event is not None}
    return "".join(
        f"{e.timestamp:.3f},{e.kind.value},{e.track_id},{';'.join(paths.get(e.timestamp, ()))}\n"
        for e in events
    )


def parse_event_log(text: str) -> List[IoIEvent]:
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) < 3:
            raise ValueError(f"line {lineno}: expected 'timestamp,kind,track_id,state_path'")
        try:
            events.append(IoIEvent(EventKind(parts[1]), int(parts[2]), float(parts[0])))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return events


def frame_times(duration: float, frame_period: float) -> np.ndarray:
    n = int(math.floor(duration / frame_period + 1e-9))
    return frame_period * np.arange(n)


def run_scenario(scenario: Scenario, config: FusionConfig, seed: Optional[int] = None) -> RunResult:
    """Step the whole pipeline over the scenario, one frame per ``frame_period``.

    Frame ``k`` covers audio [k*T, (k+1)*T) and is stamped k*T. The noise
    stream of frame ``k`` depends only on (seed, k), so runs are reproducible.
    Seed precedence: the ``seed`` argument, then the scenario's own seed, then
    ``config.seed``.
    """
    if seed is None:
        seed = scenario.seed if scenario.seed is not None else config.seed
    engine = FusionEngine(config)
    doa = config.doa
    result = RunResult()
    for k, t in enumerate(frame_times(scenario.duration, config.frame_period)):
        t = float(t)
        tracks = synthesize_tracks(scenario, t, config.facing_threshold)
        audio = synthesize_audio(scenario, config.array, (t, t + config.frame_period),
                                 doa.sample_rate, config.snr_db, frame_rng(seed, k))
        sounds = localize(audio, config.array, doa, t)
        rec = engine.process(t, tracks, sounds)
        result.trace.append(rec)
        if rec.event is not None:
            result.events.append(rec.event)
    return result
