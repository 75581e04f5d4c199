"""Initiation-of-interaction detection by fusing sound localization, person tracks and face direction."""

from .core import (
    Direction,
    DoaConfig,
    EventKind,
    FusionConfig,
    IoIEvent,
    IoIState,
    IoIStateKind,
    MicArrayGeometry,
    PersonTrack,
    SoundSourceEstimate,
    angle_between,
    direction_from_azimuth,
    load_config,
)
from .scenario import Scenario, load_scenario, load_scenario_file, run_scenario

__version__ = "0.1.0"
