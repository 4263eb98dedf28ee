"""Datasets for the three identification experiments and the fits each step produces.
The fit types chain (DriftFit -> WaveFit -> ControlFit) so the steps can only run in order."""

from dataclasses import dataclass, field
import numpy as np
from models.plant_model import DiscreteModel, Trajectory
from utils import checks_input
from utils.error_handling import ModelError


def _checks_trajectories(trajectories, name: str, min_samples: int) -> tuple[Trajectory, ...]:
    """Validate a collection of trajectories, returning it as a tuple"""

    trajectories = tuple(trajectories)
    if len(trajectories) == 0:
        raise ModelError(f"{name} needs at least one trajectory")
    for index, trajectory in enumerate(trajectories):
        if not isinstance(trajectory, Trajectory):
            raise ModelError(f"{name}[{index}] must be a Trajectory")
        if len(trajectory) < min_samples:
            raise ModelError(f"{name}[{index}] needs at least {min_samples} samples")
    return trajectories


@dataclass(frozen=True)
class DecayDataset:
    """
    Free-decay runs: no wave, no control. Runs shorter than three samples are accepted
    here; fit_A reports them as an underdetermined regression.
    """

    trajectories: tuple[Trajectory, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "trajectories", _checks_trajectories(self.trajectories, "decay", 1)
        )


@dataclass(frozen=True)
class FloatDataset:
    """Free-floating runs in a wave, no control. Wave samples w[:-1] drive the transitions."""

    trajectories: tuple[Trajectory, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "trajectories", _checks_trajectories(self.trajectories, "float", 2)
        )


@dataclass(frozen=True)
class ControlDataset:
    """
    Runs in a wave under a sinusoidal control whose phase is unknown to the fit. A zero
    amplitude is accepted here and rejected by the regression as a singular template.
    """

    trajectories: tuple[Trajectory, ...]
    amplitude: float  # Newtons
    period: float  # Seconds

    def __post_init__(self):
        object.__setattr__(
            self, "trajectories", _checks_trajectories(self.trajectories, "control", 2)
        )
        object.__setattr__(
            self, "amplitude", checks_input(self.amplitude, "amplitude", min_val=0)
        )
        object.__setattr__(
            self, "period", checks_input(self.period, "period", min_val=0, min_exclusive=True)
        )


@dataclass(frozen=True, eq=False)
class DriftFit:
    """Step 1 result"""

    A: np.ndarray
    residual: float  # Sum of squared residuals
    condition: float  # Condition number of the normal-equation matrix


@dataclass(frozen=True, eq=False)
class WaveFit:
    """Step 2 result, carries the drift it was fitted against"""

    drift: DriftFit
    c: np.ndarray
    residual: float
    condition: float


@dataclass(frozen=True, eq=False)
class ControlFit:
    """Step 3 result, carries the wave fit it was fitted against"""

    wave: WaveFit
    b: np.ndarray
    best_shift: float  # Seconds
    residual: float
    condition: float
    shifts: np.ndarray = field(default_factory=lambda: np.empty(0))  # Candidate grid
    shift_residuals: np.ndarray = field(default_factory=lambda: np.empty(0))


@dataclass(frozen=True, eq=False)
class IdentificationReport:
    """Fitted model plus per-step diagnostics"""

    model: DiscreteModel
    drift: DriftFit
    wave: WaveFit
    control: ControlFit

    @property
    def residuals(self) -> dict[str, float]:
        return {
            "fit_A": self.drift.residual,
            "fit_c": self.wave.residual,
            "fit_b": self.control.residual,
        }

    @property
    def conditions(self) -> dict[str, float]:
        return {
            "fit_A": self.drift.condition,
            "fit_c": self.wave.condition,
            "fit_b": self.control.condition,
        }
