"""Plant domain types: regular wave, heave state, the discrete control model and the
continuous truth model used to generate identification data."""

from dataclasses import dataclass  # Models are frozen dataclasses
from enum import Enum
from typing import Mapping  # Used for type hints
import numpy as np
from utils import checks_input, checks_array, checks_series
from utils.error_handling import ModelError

# Coefficient names used in fixture files, in file order
DISCRETE_KEYS = ("a11", "a12", "a21", "a22", "b1", "b2", "c1", "c2", "dt")
TRUTH_KEYS = ("a11", "a12", "a21", "a22", "b1", "b2", "c1", "c2", "k_es", "z_es")

SPECTRAL_RADIUS_LIMIT = 1 + 1e-6
DEFAULT_K_ES = 1e3  # End-stop gain, 1/s^2 per meter of excess stroke
DEFAULT_Z_ES = 3.0  # Stroke limit in meters


@dataclass(frozen=True)
class WaveSpec:
    """Single regular wave; elevation amplitude is height / 2"""

    height: float  # Crest to trough, meters
    period: float  # Seconds
    phase: float = 0.0  # Radians

    def __post_init__(self):
        object.__setattr__(
            self, "height", checks_input(self.height, "height", min_val=0, min_exclusive=True)
        )
        object.__setattr__(
            self, "period", checks_input(self.period, "period", min_val=0, min_exclusive=True)
        )
        object.__setattr__(self, "phase", checks_input(self.phase, "phase"))

    @property
    def amplitude(self) -> float:
        return 0.5 * self.height


@dataclass(frozen=True)
class State:
    """Heave state, velocity first to match the state vector ordering"""

    velocity: float  # m/s
    position: float  # m

    def __post_init__(self):
        object.__setattr__(self, "velocity", checks_input(self.velocity, "velocity"))
        object.__setattr__(self, "position", checks_input(self.position, "position"))

    def as_array(self) -> np.ndarray:
        return np.array([self.velocity, self.position])

    @classmethod
    def from_array(cls, values: np.ndarray) -> "State":
        return cls(float(values[0]), float(values[1]))


class SimMode(Enum):
    """How the truth simulator advances between samples"""

    DISCRETE_EXACT = "DiscreteExact"  # Forward-Euler map of the truth, plus end-stop
    CONTINUOUS_RK4 = "ContinuousRk4"  # Classical RK4 at sample_dt / 10


def _spectral_radius(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """One-step map x_{k+1} = A x_k + b u_k + c w_k with state (velocity, position)"""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "A", checks_array(self.A, "A", (2, 2)))
        object.__setattr__(self, "b", checks_array(self.b, "b", (2,)))
        object.__setattr__(self, "c", checks_array(self.c, "c", (2,)))
        object.__setattr__(self, "dt", checks_input(self.dt, "dt", min_val=0, min_exclusive=True))

        radius = _spectral_radius(self.A)
        if radius > SPECTRAL_RADIUS_LIMIT:
            raise ModelError(f"A has spectral radius {radius:.9f}, the map is unstable")

    @classmethod
    def from_coefficients(cls, values: Mapping[str, float]) -> "DiscreteModel":
        """Build from fixture keys a11..c2, dt"""

        missing = [key for key in DISCRETE_KEYS if key not in values]
        extra = [key for key in values if key not in DISCRETE_KEYS]
        if missing or extra:
            raise ModelError(f"fixture keys: missing {missing}, unknown {extra}")
        return cls(
            A=[[values["a11"], values["a12"]], [values["a21"], values["a22"]]],
            b=[values["b1"], values["b2"]],
            c=[values["c1"], values["c2"]],
            dt=values["dt"],
        )

    def to_coefficients(self) -> dict[str, float]:
        return {
            "a11": float(self.A[0, 0]),
            "a12": float(self.A[0, 1]),
            "a21": float(self.A[1, 0]),
            "a22": float(self.A[1, 1]),
            "b1": float(self.b[0]),
            "b2": float(self.b[1]),
            "c1": float(self.c[0]),
            "c2": float(self.c[1]),
            "dt": float(self.dt),
        }


@dataclass(frozen=True, eq=False)
class TruthModel:
    """
    Continuous reduced heave dynamics x' = a_c x + b_c u + c_c w + endstop(z), where the
    end-stop only acts on the velocity derivative.
    """

    a_c: np.ndarray
    b_c: np.ndarray
    c_c: np.ndarray
    k_es: float = DEFAULT_K_ES
    z_es: float = DEFAULT_Z_ES

    def __post_init__(self):
        object.__setattr__(self, "a_c", checks_array(self.a_c, "a_c", (2, 2)))
        object.__setattr__(self, "b_c", checks_array(self.b_c, "b_c", (2,)))
        object.__setattr__(self, "c_c", checks_array(self.c_c, "c_c", (2,)))
        object.__setattr__(self, "k_es", checks_input(self.k_es, "k_es", min_val=0))
        object.__setattr__(
            self, "z_es", checks_input(self.z_es, "z_es", min_val=0, min_exclusive=True)
        )

        real_parts = np.linalg.eigvals(self.a_c).real
        if np.max(real_parts) > 1e-12:
            raise ModelError(f"a_c has an eigenvalue with positive real part {real_parts}")

    @classmethod
    def from_discrete(
        cls, model: DiscreteModel, k_es: float = DEFAULT_K_ES, z_es: float = DEFAULT_Z_ES
    ) -> "TruthModel":
        """Continuous model whose forward-Euler map at model.dt is the given discrete model"""

        return cls(
            a_c=(model.A - np.eye(2)) / model.dt,
            b_c=model.b / model.dt,
            c_c=model.c / model.dt,
            k_es=k_es,
            z_es=z_es,
        )

    def euler_model(self, dt: float) -> DiscreteModel:
        """Forward-Euler map (I + dt a_c, dt b_c, dt c_c), end-stop excluded"""

        return DiscreteModel(
            A=np.eye(2) + dt * self.a_c, b=dt * self.b_c, c=dt * self.c_c, dt=dt
        )

    def endstop(self, position: float) -> float:
        """Velocity-derivative contribution of the end-stop, opposing the excess stroke"""

        if position > self.z_es:
            return -self.k_es * (position - self.z_es)
        if position < -self.z_es:
            return -self.k_es * (position + self.z_es)
        return 0.0

    @classmethod
    def from_coefficients(cls, values: Mapping[str, float]) -> "TruthModel":
        required = TRUTH_KEYS[:8]
        missing = [key for key in required if key not in values]
        extra = [key for key in values if key not in TRUTH_KEYS]
        if missing or extra:
            raise ModelError(f"truth keys: missing {missing}, unknown {extra}")
        return cls(
            a_c=[[values["a11"], values["a12"]], [values["a21"], values["a22"]]],
            b_c=[values["b1"], values["b2"]],
            c_c=[values["c1"], values["c2"]],
            k_es=values.get("k_es", DEFAULT_K_ES),
            z_es=values.get("z_es", DEFAULT_Z_ES),
        )

    def to_coefficients(self) -> dict[str, float]:
        return {
            "a11": float(self.a_c[0, 0]),
            "a12": float(self.a_c[0, 1]),
            "a21": float(self.a_c[1, 0]),
            "a22": float(self.a_c[1, 1]),
            "b1": float(self.b_c[0]),
            "b2": float(self.b_c[1]),
            "c1": float(self.c_c[0]),
            "c2": float(self.c_c[1]),
            "k_es": float(self.k_es),
            "z_es": float(self.z_es),
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled run; every column has one entry per sample node"""

    t: np.ndarray
    u: np.ndarray
    zdot: np.ndarray
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name in ("t", "u", "zdot", "z", "w"):
            object.__setattr__(self, name, checks_series(getattr(self, name), name))
        lengths = {len(getattr(self, name)) for name in ("t", "u", "zdot", "z", "w")}
        if len(lengths) != 1:
            raise ModelError("trajectory columns must have equal length")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def states(self) -> np.ndarray:
        """Samples x (len, 2) with columns (velocity, position)"""

        return np.column_stack([self.zdot, self.z])

    @property
    def dt(self) -> float:
        if len(self.t) < 2:
            raise ModelError("trajectory has a single sample, no spacing")
        return float(self.t[1] - self.t[0])

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        return [
            (float(a), float(b), float(c), float(d), float(e))
            for a, b, c, d, e in zip(self.t, self.u, self.zdot, self.z, self.w)
        ]
