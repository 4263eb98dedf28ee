"""Import the numerical operations so commands can reach them from the controllers package"""

from .plant_controllers import (
    wave_samples,
    sinusoidal_control,
    discrete_step,
    discrete_rollout,
    truth_rollout,
    exact_one_step,
    load_fixture,
    save_fixture,
    load_truth,
    save_truth,
    trajectory_to_csv,
)
from .sysid_controllers import fit_A, fit_b, fit_c, identify
from .ocp_controllers import build, objective_breakdown, baseline_point, dump_instance
from .qpsolver_controllers import solve, kkt_residual, brute_force_best
from .mpc_controllers import run, average_period
from .costmodel_controllers import (
    fit_families,
    power_force_exponent,
    captured_power_exponent,
    hyperbolic_properties,
    synthetic_samples,
    load_samples,
    save_samples,
)
from .sweep_controllers import lambda_row, grid_row, sensitivity_row, solve_job, select_lambda
