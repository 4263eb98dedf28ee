"""Row solvers for the parameter sweeps and the rule that picks a lambda from a sweep.
Each row function is module level and takes a single SweepJob so a process pool can map it."""

import logging
import math
from typing import Sequence  # Used for type hints
import numpy as np
from controllers.mpc_controllers import average_period
from controllers.ocp_controllers import build, objective_breakdown
from controllers.qpsolver_controllers import solve
from models import SolveResult, State, SweepJob
from utils.error_handling import UndefinedPeriodError

logger = logging.getLogger(__name__)

LAMBDA_COLUMNS = ("lambda1", "lambda2", "avg_velocity_period", "objective", "energy", "status")
GRID_COLUMNS = ("eta", "rho", "objective", "solve_seconds", "iterations", "status")
SENSITIVITY_COLUMNS = ("lambda1", "lambda2", "ratio", "status")

REST = State(0.0, 0.0)


def _solve_job(job: SweepJob):
    """Build and solve the job's instance from rest at t = 0"""

    instance = build(job.ocp, job.model, REST, job.wave)
    return instance, solve(instance, job.settings)


def solve_job(job: SweepJob) -> SolveResult:
    """Solve the job's own instance, e.g. the reference a sensitivity sweep divides by"""

    return _solve_job(job)[1]


def lambda_row(job: SweepJob) -> dict[str, object]:
    """Average velocity period, objective and energy of one lambda setting"""

    instance, result = _solve_job(job)
    status = result.report.status
    row = {
        "lambda1": job.ocp.lambda1,
        "lambda2": job.ocp.lambda2,
        "avg_velocity_period": math.nan,
        "objective": math.nan,
        "energy": math.nan,
        "status": status.value,
    }
    if not status.usable:
        return row

    breakdown = objective_breakdown(instance, result.point)
    zdot = instance.layout.split(result.point)[1]
    try:
        row["avg_velocity_period"] = average_period(zdot[:-1], job.ocp.dt)
    except UndefinedPeriodError as e:
        logger.warning("lambda1=%g lambda2=%g: %s", job.ocp.lambda1, job.ocp.lambda2, e)
    row["objective"] = breakdown.total
    row["energy"] = breakdown.energy
    return row


def grid_row(job: SweepJob) -> dict[str, object]:
    """Objective and solver effort at one (eta, rho) point"""

    _, result = _solve_job(job)
    report = result.report
    return {
        "eta": job.ocp.eta,
        "rho": job.ocp.rho,
        "objective": report.objective if report.status.usable else math.nan,
        "solve_seconds": report.solve_seconds,
        "iterations": report.iterations,
        "status": report.status.value,
    }


def sensitivity_row(job: SweepJob) -> dict[str, object]:
    """
    Reference objective of the solution found with the job's coefficients, relative to the
    reference objective of the reference solution. 1 means no loss.
    """

    _, result = _solve_job(job)
    row = {
        "lambda1": job.ocp.lambda1,
        "lambda2": job.ocp.lambda2,
        "ratio": math.nan,
        "status": result.report.status.value,
    }
    if result.report.status.usable:
        judged = build(job.reference, job.model, REST, job.wave)
        value = objective_breakdown(judged, result.point).total
        row["ratio"] = value / job.reference_objective
    return row


def select_lambda(
    rows: Sequence[dict[str, object]], key: str, wave_period: float, tolerance: float = 0.05
) -> dict[str, object] | None:
    """
    Smallest value of rows[key] whose average velocity period lies within tolerance of the
    wave period, as a fraction of it. None when no row qualifies.
    """

    for row in sorted(rows, key=lambda r: r[key]):
        period = row["avg_velocity_period"]
        if np.isfinite(period) and abs(period - wave_period) <= tolerance * wave_period:
            return row
    return None
