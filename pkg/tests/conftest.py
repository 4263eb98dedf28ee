"""Create pytest fixtures that set up the command group, the shipped plant fixtures and small
optimal control configurations, passing them to the test functions as reusable components."""

import sys  # Used to add src to path directory python can access
import os  # Used to convert relative path to src to absolute path
from pathlib import Path  # Used for type hints
from typing import Callable  # Used for type hints
import click  # Used for type hints
from click.testing import CliRunner  # Invokes commands without a subprocess
import pytest  # Used for pytest fixtures

sys.path.insert(  # Allows imports from src folder
    0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src"))
)
# Below absolute path declaration so imports happen using new path
from main import create_app  # Used to setup app instance with test configuration
from config import ROOT_DIR  # Shipped fixtures live under ROOT_DIR / data
from controllers.plant_controllers import load_fixture, load_truth
from models import DiscreteModel, OcpConfig, TruthModel, WaveSpec

DATA_DIR = ROOT_DIR / "data"


@pytest.fixture
def app() -> click.Group:
    """Create the command group using the test configuration (TestConfig) defined in config.py."""

    return create_app("config.TestConfig")


@pytest.fixture
def runner() -> CliRunner:
    """Create a runner that invokes commands in process and captures their output and exit code."""

    return CliRunner()


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str, str], Path]:
    """Return a function that writes INI text into tmp_path and returns the file path."""

    def write(text: str, name: str = "run.ini") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


# Plant fixtures shared by every numerical test
# ==================================================================================================


@pytest.fixture(scope="session")
def wec_model() -> DiscreteModel:
    """Discrete model identified for the 6 m, 4 s wave."""

    return load_fixture(DATA_DIR / "wec_h6_t4.kv")


@pytest.fixture(scope="session")
def truth_model() -> TruthModel:
    """Continuous truth whose forward-Euler map at 0.01 s is wec_model."""

    return load_truth(DATA_DIR / "truth_h6_t4.kv")


@pytest.fixture(scope="session")
def wave() -> WaveSpec:
    """Regular 6 m, 4 s wave."""

    return WaveSpec(height=6.0, period=4.0)


# Optimal control configurations
# ==================================================================================================


@pytest.fixture
def ocp_config() -> Callable[..., OcpConfig]:
    """
    Return a function building an OcpConfig with the standard bounds, a small control cost
    that keeps the problem convex, and any field overridden by keyword.
    """

    def make(**changes) -> OcpConfig:
        values = {
            "gamma": 1e6,
            "delta": 3.0,
            "eta": 1.0,
            "rho": 0.0,
            "lambda1": 1e-6,
            "lambda2": 0.0,
            "n_steps": 20,
            "dt": 0.01,
        }
        values.update(changes)
        return OcpConfig(**values)

    return make
