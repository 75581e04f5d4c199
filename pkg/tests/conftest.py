from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


@pytest.fixture
def suite_dir():
    return SCENARIOS / "suite"


@pytest.fixture
def mixed_path():
    return SCENARIOS / "mixed_60s.scn"
