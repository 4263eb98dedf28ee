"""One independent solve of a parameter sweep"""

from dataclasses import dataclass
from models.ocp_model import OcpConfig
from models.plant_model import DiscreteModel, WaveSpec
from models.solver_model import SolveSettings


@dataclass(frozen=True, eq=False)
class SweepJob:
    """
    Everything a worker process needs for one row. reference and reference_objective are
    set only for sensitivity rows: the coefficients the solution is judged by, and the
    objective the reference solution itself attains under them.
    """

    ocp: OcpConfig
    model: DiscreteModel
    wave: WaveSpec | None
    settings: SolveSettings
    reference: OcpConfig | None = None
    reference_objective: float | None = None
