"""Init file that allows models to be imported from models directory."""

from .plant_model import (
    WaveSpec,
    State,
    SimMode,
    DiscreteModel,
    TruthModel,
    Trajectory,
)
from .sysid_model import (
    DecayDataset,
    FloatDataset,
    ControlDataset,
    DriftFit,
    WaveFit,
    ControlFit,
    IdentificationReport,
)
from .ocp_model import OcpConfig, ObjectiveBreakdown, VariableLayout, OcpInstance
from .solver_model import SolveStatus, SolveSettings, SolveReport, Multipliers, SolveResult
from .mpc_model import MpcConfig, PeriodRecord, RecedingLog
from .costfit_model import DampingSample, FitFamily, FitResult, PowerForceCurve
from .run_config_model import RunConfig
from .sweep_model import SweepJob
