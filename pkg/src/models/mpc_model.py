"""Receding-horizon configuration and per-period log"""

from dataclasses import dataclass, field
import numpy as np
from models.ocp_model import OcpConfig
from models.plant_model import DiscreteModel, SimMode, State, Trajectory, TruthModel, WaveSpec
from models.solver_model import SolveReport, SolveStatus
from utils import checks_input
from utils.error_handling import ModelError

GRID_TOLERANCE = 1e-9


def steps_in(duration: float, dt: float, name: str) -> int:
    """Number of dt steps in duration, which must be an integral multiple of dt"""

    ratio = duration / dt
    steps = int(round(ratio))
    if abs(ratio - steps) > GRID_TOLERANCE * max(1.0, ratio) or steps < 1:
        raise ModelError(f"{name} = {duration} s is not a whole number of {dt} s steps")
    return steps


@dataclass(frozen=True, eq=False)
class MpcConfig:
    """
    Receding-horizon run. The plant is the truth model in plant_mode when truth is given,
    otherwise the controller's own model stepped exactly.
    """

    t0: float  # Timestamp of the first period, s
    horizon: float  # T, s
    update_horizon: float  # T^c, s
    dt: float
    periods: int  # K
    ocp: OcpConfig  # Formulation; n_steps, dt and u_init are set per period
    model: DiscreteModel
    wave: WaveSpec | None
    plant_mode: SimMode = SimMode.DISCRETE_EXACT
    truth: TruthModel | None = None
    x0: State = field(default_factory=lambda: State(0.0, 0.0))

    def __post_init__(self):
        positive = {"min_val": 0, "min_exclusive": True}
        object.__setattr__(self, "t0", checks_input(self.t0, "t0"))
        object.__setattr__(self, "horizon", checks_input(self.horizon, "horizon", **positive))
        object.__setattr__(
            self,
            "update_horizon",
            checks_input(self.update_horizon, "update_horizon", **positive),
        )
        object.__setattr__(self, "dt", checks_input(self.dt, "dt", **positive))
        object.__setattr__(
            self, "periods", checks_input(self.periods, "periods", data_type=int, min_val=1)
        )
        if self.update_horizon > self.horizon * (1 + GRID_TOLERANCE):
            raise ModelError("update_horizon cannot exceed horizon")
        if abs(self.model.dt - self.dt) > GRID_TOLERANCE * self.dt:
            raise ModelError(f"model dt {self.model.dt} does not match run dt {self.dt}")
        if self.horizon_steps < 2:
            raise ModelError("horizon must span at least 2 steps")
        self.update_steps  # Validates the update horizon grid

    @property
    def horizon_steps(self) -> int:
        return steps_in(self.horizon, self.dt, "horizon")

    @property
    def update_steps(self) -> int:
        return steps_in(self.update_horizon, self.dt, "update_horizon")


@dataclass(frozen=True)
class PeriodRecord:
    period: int
    t_start: float
    objective: float  # Implemented-slice objective, J
    energy: float  # Implemented-slice energy, J
    report: SolveReport
    max_alpha: float  # Soft-bound excess over the slice, N
    terminal_state: State
    update_horizon: float  # Time allowed for each solve, s

    @property
    def realtime_ok(self) -> bool:
        """Solve finished before the current control slice ran out"""

        return self.report.solve_seconds < self.update_horizon

    @property
    def status(self) -> SolveStatus:
        return self.report.status


@dataclass(eq=False)
class RecedingLog:
    """Per-period records plus the applied trajectory; truncated at a failed period"""

    update_horizon: float
    records: list[PeriodRecord] = field(default_factory=list)
    applied: Trajectory | None = None
    failed: bool = False

    @property
    def completed(self) -> list[PeriodRecord]:
        """Records whose slice was applied, i.e. all but a trailing failure"""

        return [record for record in self.records if record.status.usable]

    @property
    def total_objective(self) -> float:
        return float(sum(record.objective for record in self.completed))

    @property
    def total_energy(self) -> float:
        return float(sum(record.energy for record in self.completed))

    @property
    def realtime_fraction(self) -> float:
        if not self.records:
            return 0.0
        return sum(record.realtime_ok for record in self.records) / len(self.records)

    @property
    def max_alpha(self) -> float:
        return max((record.max_alpha for record in self.completed), default=0.0)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([record.objective for record in self.completed])
