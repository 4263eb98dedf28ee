"""Optimal control problem types: formulation parameters, variable layout, the assembled
sparse QP and the objective decomposition."""

from dataclasses import dataclass, field, replace
import numpy as np
from scipy import sparse  # QP matrices are scipy sparse
from models.plant_model import DiscreteModel, State, WaveSpec
from utils import checks_input
from utils.error_handling import LayoutError


@dataclass(frozen=True)
class OcpConfig:
    """Formulation parameters. u_init pins the first control when set (receding horizon)."""

    gamma: float  # Hard force bound, N
    delta: float  # Displacement bound, m
    eta: float  # Soft bound as a fraction of gamma
    rho: float  # Penalty per newton of excess, per second
    lambda1: float  # Control cost coefficient
    lambda2: float  # Smoothness cost coefficient
    n_steps: int  # N
    dt: float  # Seconds
    u_init: float | None = None  # Newtons, or None for a free first control

    def __post_init__(self):
        positive = {"min_val": 0, "min_exclusive": True}
        object.__setattr__(self, "gamma", checks_input(self.gamma, "gamma", **positive))
        object.__setattr__(self, "delta", checks_input(self.delta, "delta", **positive))
        object.__setattr__(self, "eta", checks_input(self.eta, "eta", max_val=1, **positive))
        object.__setattr__(self, "rho", checks_input(self.rho, "rho", min_val=0))
        object.__setattr__(self, "lambda1", checks_input(self.lambda1, "lambda1", min_val=0))
        object.__setattr__(self, "lambda2", checks_input(self.lambda2, "lambda2", min_val=0))
        object.__setattr__(
            self, "n_steps", checks_input(self.n_steps, "n_steps", data_type=int, min_val=2)
        )
        object.__setattr__(self, "dt", checks_input(self.dt, "dt", **positive))
        object.__setattr__(
            self,
            "u_init",
            checks_input(
                self.u_init, "u_init", required=False, min_val=-self.gamma, max_val=self.gamma
            ),
        )

    @property
    def soft_bound(self) -> float:
        """gamma * eta, in newtons"""

        return self.gamma * self.eta

    @property
    def pinned(self) -> bool:
        return self.u_init is not None

    def with_changes(self, **changes) -> "OcpConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Objective terms in joules; total = energy - control - smoothness - penalty"""

    energy: float
    control_cost: float
    smoothness_cost: float
    penalty_cost: float

    @property
    def total(self) -> float:
        return self.energy - self.control_cost - self.smoothness_cost - self.penalty_cost


@dataclass(frozen=True)
class VariableLayout:
    """Index map of the decision vector: u_0..u_N, zdot_0..zdot_{N+1}, z_0..z_{N+1}, alpha_0..alpha_N"""

    n_steps: int

    @property
    def size(self) -> int:
        return 4 * self.n_steps + 6

    @property
    def u(self) -> np.ndarray:
        return np.arange(0, self.n_steps + 1)

    @property
    def zdot(self) -> np.ndarray:
        start = self.n_steps + 1
        return np.arange(start, start + self.n_steps + 2)

    @property
    def z(self) -> np.ndarray:
        start = 2 * self.n_steps + 3
        return np.arange(start, start + self.n_steps + 2)

    @property
    def alpha(self) -> np.ndarray:
        start = 3 * self.n_steps + 5
        return np.arange(start, start + self.n_steps + 1)

    def split(self, point: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Return (u, zdot, z, alpha) views of a decision vector"""

        point = np.asarray(point, dtype=float)
        if point.shape != (self.size,):
            raise LayoutError(f"point has shape {point.shape}, layout needs ({self.size},)")
        return point[self.u], point[self.zdot], point[self.z], point[self.alpha]

    def join(
        self, u: np.ndarray, zdot: np.ndarray, z: np.ndarray, alpha: np.ndarray
    ) -> np.ndarray:
        """Inverse of split"""

        point = np.empty(self.size)
        point[self.u] = u
        point[self.zdot] = zdot
        point[self.z] = z
        point[self.alpha] = alpha
        return point


@dataclass(frozen=True, eq=False)
class OcpInstance:
    """
    The QP handed to the solver, in scaled units where forces are divided by gamma and the
    objective by gamma:

        minimize   0.5 x'Hx + g'x + constant
        subject to E x = f,  G x <= h

    Minimizing the scaled objective maximizes the physical one; objective_value converts.
    """

    config: OcpConfig
    model: DiscreteModel
    x0: State
    wave: WaveSpec | None
    t0: float
    wave_samples: np.ndarray  # w_0..w_N at t0 + k dt
    layout: VariableLayout
    hessian: sparse.csr_matrix
    gradient: np.ndarray
    constant: float
    eq_matrix: sparse.csr_matrix
    eq_rhs: np.ndarray
    ineq_matrix: sparse.csr_matrix
    ineq_rhs: np.ndarray
    ineq_groups: dict[str, slice] = field(default_factory=dict)  # Row ranges by constraint

    @property
    def force_scale(self) -> float:
        return self.config.gamma

    @property
    def objective_scale(self) -> float:
        return self.config.gamma

    @property
    def n_variables(self) -> int:
        return self.layout.size

    @property
    def n_equalities(self) -> int:
        return self.eq_matrix.shape[0]

    @property
    def n_inequalities(self) -> int:
        return self.ineq_matrix.shape[0]

    def _force_mask(self) -> np.ndarray:
        scale = np.ones(self.layout.size)
        scale[self.layout.u] = self.force_scale
        scale[self.layout.alpha] = self.force_scale
        return scale

    def scale_point(self, point: np.ndarray) -> np.ndarray:
        """Physical decision vector to solver units"""

        self.layout.split(point)
        return np.asarray(point, dtype=float) / self._force_mask()

    def unscale_point(self, scaled: np.ndarray) -> np.ndarray:
        """Solver units to physical decision vector"""

        self.layout.split(scaled)
        return np.asarray(scaled, dtype=float) * self._force_mask()

    def scaled_objective(self, scaled: np.ndarray) -> float:
        return float(
            0.5 * scaled @ (self.hessian @ scaled) + self.gradient @ scaled + self.constant
        )

    def objective_value(self, point: np.ndarray) -> float:
        """Physical objective (joules, to be maximized) of a physical decision vector"""

        return -self.objective_scale * self.scaled_objective(self.scale_point(point))

    def stage_dynamics(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Augmented stage matrices in solver units for the state (zdot, z, previous u) and the
        stage input (u, alpha): x+ = A_aug x + B_aug v + e.
        """

        a_aug = np.zeros((3, 3))
        a_aug[:2, :2] = self.model.A
        b_aug = np.zeros((3, 2))
        b_aug[:2, 0] = self.model.b * self.force_scale
        b_aug[2, 0] = 1.0
        return a_aug, b_aug
