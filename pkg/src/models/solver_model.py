"""Solver settings, status and report"""

from dataclasses import dataclass
from enum import Enum
import numpy as np
from utils import checks_input
from utils.error_handling import ModelError


class SolveStatus(Enum):
    OPTIMAL = "Optimal"
    ITER_LIMIT = "IterLimit"
    INFEASIBLE = "Infeasible"
    NUMERICAL_FAILURE = "NumericalFailure"

    @property
    def usable(self) -> bool:
        """Only a converged point is applied to a plant or tabulated"""

        return self is SolveStatus.OPTIMAL


@dataclass(frozen=True)
class SolveSettings:
    """Interior-point controls"""

    kkt_tol: float = 1e-6
    max_iter: int = 200
    barrier_init: float = 1.0
    barrier_shrink: float = 0.2
    regularization_floor: float = 1e-8
    multistart: int = 1
    mu_final: float = 1e-11  # Barrier value the iteration is driven to before stopping
    seed: int = 0  # Multistart perturbation seed
    alternating_start: bool = False  # Extra start whose controls flip sign every step

    def __post_init__(self):
        positive = {"min_val": 0, "min_exclusive": True}
        object.__setattr__(self, "kkt_tol", checks_input(self.kkt_tol, "kkt_tol", **positive))
        object.__setattr__(
            self, "max_iter", checks_input(self.max_iter, "max_iter", data_type=int, min_val=1)
        )
        object.__setattr__(
            self, "barrier_init", checks_input(self.barrier_init, "barrier_init", **positive)
        )
        object.__setattr__(
            self,
            "barrier_shrink",
            checks_input(
                self.barrier_shrink, "barrier_shrink", max_val=1, max_exclusive=True, **positive
            ),
        )
        object.__setattr__(
            self,
            "regularization_floor",
            checks_input(self.regularization_floor, "regularization_floor", **positive),
        )
        object.__setattr__(
            self,
            "multistart",
            checks_input(self.multistart, "multistart", data_type=int, min_val=1),
        )
        object.__setattr__(
            self,
            "mu_final",
            checks_input(self.mu_final, "mu_final", max_val=self.barrier_init, **positive),
        )
        object.__setattr__(self, "seed", checks_input(self.seed, "seed", data_type=int, min_val=0))
        if not isinstance(self.alternating_start, bool):
            raise ModelError("alternating_start must be type bool")


@dataclass(frozen=True)
class SolveReport:
    status: SolveStatus
    iterations: int
    kkt_residual: float
    solve_seconds: float  # Process CPU time, user plus system
    objective: float  # Joules
    multistart_spread: float  # Best minus worst objective over the starts
    starts: int = 1


@dataclass(frozen=True, eq=False)
class Multipliers:
    """Multipliers of the scaled QP: equality rows and inequality rows (z >= 0)"""

    equality: np.ndarray
    inequality: np.ndarray


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Physical point, report and the multipliers that certify it"""

    point: np.ndarray
    report: SolveReport
    multipliers: Multipliers
