"""Init file that allows commands to be imported from cli_commands directory."""

from .estimate import estimate_model
from .sweep import sweep_parameters
from .mpc import receding_horizon
from .costfit import fit_cost_model
from .fixtures import write_fixtures

registerable_cli_commands = [
    estimate_model,
    sweep_parameters,
    receding_horizon,
    fit_cost_model,
    write_fixtures,
]
