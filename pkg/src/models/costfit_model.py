"""Damping samples and regression fits of mean squared velocity against damping"""

from dataclasses import dataclass, field
from enum import Enum
import numpy as np
from utils import checks_input
from utils.error_handling import ModelError


@dataclass(frozen=True)
class DampingSample:
    damping: float  # b, N s/m
    mean_sq_velocity: float  # Mean of zdot^2, m^2/s^2

    def __post_init__(self):
        object.__setattr__(
            self, "damping", checks_input(self.damping, "damping", min_val=0, min_exclusive=True)
        )
        object.__setattr__(
            self,
            "mean_sq_velocity",
            checks_input(self.mean_sq_velocity, "mean_sq_velocity", min_val=0, min_exclusive=True),
        )


class FitFamily(Enum):
    HYPERBOLIC = "Hyperbolic"  # a / (b + c)
    EXPONENTIAL = "Exponential"  # p exp(-q b)
    LOGARITHMIC = "Logarithmic"  # p - q log b
    POLYNOMIAL = "Polynomial"  # p0 + p1 b + p2 b^2


@dataclass(frozen=True)
class FitResult:
    family: FitFamily
    parameters: dict[str, float] = field(hash=False)
    r_squared: float

    def __post_init__(self):
        if not self.r_squared <= 1 + 1e-12:
            raise ModelError(f"r_squared cannot exceed 1, got {self.r_squared}")

    def predict(self, damping: np.ndarray | float) -> np.ndarray:
        """Mean squared velocity predicted at the given damping values"""

        b = np.asarray(damping, dtype=float)
        p = self.parameters
        if self.family is FitFamily.HYPERBOLIC:
            return p["a"] / (b + p["c"])
        if self.family is FitFamily.EXPONENTIAL:
            return p["p"] * np.exp(-p["q"] * b)
        if self.family is FitFamily.LOGARITHMIC:
            return p["p"] - p["q"] * np.log(b)
        return p["p0"] + p["p1"] * b + p["p2"] * b**2


@dataclass(frozen=True, eq=False)
class PowerForceCurve:
    """
    Damping grid with the force and power it implies under a fitted velocity model.
    sustaining_power is proportional to b (the power drawn to hold that damping);
    captured_power is b * zdot^2.
    """

    damping: np.ndarray
    force: np.ndarray  # b * sqrt(mean zdot^2)
    sustaining_power: np.ndarray
    captured_power: np.ndarray
