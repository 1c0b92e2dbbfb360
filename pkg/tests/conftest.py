import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from clock import qubit_clock  # noqa: E402
from regge import meshes  # noqa: E402
from spacetime import Minkowski, SchwarzschildExterior  # noqa: E402
from units import PhysicalConstants  # noqa: E402

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def constants():
    return PhysicalConstants()


@pytest.fixture
def minkowski(constants):
    return Minkowski(constants)


@pytest.fixture
def schwarzschild(constants):
    # roughly one solar mass, r_s ~ 2954 m
    return SchwarzschildExterior(2.0e30, constants)


@pytest.fixture
def qubit(constants):
    return qubit_clock(1.0e15, hbar=constants.hbar)


@pytest.fixture
def icosahedron():
    return meshes.icosahedron()


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR


@pytest.fixture
def write_scenario(tmp_path):
    """Write scenario text to a temporary file and return its path"""
    def _write(text, name="scenario.json"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
