"""Three-step least-squares identification: drift A from free decay, wave gain c from
free floating, control gain b (with an unknown control phase) from forced runs."""

import logging
import numpy as np
from models import (
    ControlDataset,
    ControlFit,
    DecayDataset,
    DiscreteModel,
    DriftFit,
    FloatDataset,
    IdentificationReport,
    WaveFit,
)
from utils.error_handling import SingularRegressorError

logger = logging.getLogger(__name__)

RIDGE = 1e-12  # Added to the normal-equation diagonal
RANK_TOLERANCE = 1e-10  # Relative eigenvalue floor of the normal-equation matrix
TIE_TOLERANCE = 1e-12  # Shift residuals this close, relative to the remainder, are tied


def _transitions(trajectories) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Stack (x_k, x_{k+1}, u_k, w_k, t_k) over every transition of every trajectory"""

    x_now, x_next, u, w, t = [], [], [], [], []
    for trajectory in trajectories:
        states = trajectory.states
        x_now.append(states[:-1])
        x_next.append(states[1:])
        u.append(trajectory.u[:-1])
        w.append(trajectory.w[:-1])
        t.append(trajectory.t[:-1])
    return (
        np.concatenate(x_now),
        np.concatenate(x_next),
        np.concatenate(u),
        np.concatenate(w),
        np.concatenate(t),
    )


def _normal_solve(
    regressors: np.ndarray, targets: np.ndarray, step: str
) -> tuple[np.ndarray, float, float]:
    """
    Least squares targets ~ regressors @ theta through the ridge-stabilized normal
    equations. Returns (theta, sum of squared residuals, condition number).
    """

    regressors = regressors.reshape(len(regressors), -1)
    n_rows, n_cols = regressors.shape
    if n_rows < n_cols:
        raise SingularRegressorError(step, message=f"{n_rows} rows for {n_cols} unknowns")

    gram = regressors.T @ regressors
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    largest = eigenvalues[-1]
    if largest <= 0 or eigenvalues[0] <= RANK_TOLERANCE * largest:
        direction = eigenvectors[:, 0].tolist()
        raise SingularRegressorError(step, direction)

    theta = np.linalg.solve(gram + RIDGE * np.eye(n_cols), regressors.T @ targets)
    residual = targets - regressors @ theta
    return theta, float(np.sum(residual**2)), float(largest / eigenvalues[0])


def fit_A(data: DecayDataset) -> DriftFit:
    """x_{k+1} ~ A x_k over all free-decay transitions"""

    x_now, x_next, *_ = _transitions(data.trajectories)
    theta, residual, condition = _normal_solve(x_now, x_next, "fit_A")
    logger.info("fit_A residual=%.3e condition=%.3e", residual, condition)
    return DriftFit(A=theta.T, residual=residual, condition=condition)


def fit_c(data: FloatDataset, drift: DriftFit) -> WaveFit:
    """r_k = x_{k+1} - A x_k ~ c w_k"""

    x_now, x_next, _, w, _ = _transitions(data.trajectories)
    remainder = x_next - x_now @ drift.A.T
    theta, residual, condition = _normal_solve(w[:, None], remainder, "fit_c")
    logger.info("fit_c residual=%.3e condition=%.3e", residual, condition)
    return WaveFit(drift=drift, c=theta.ravel(), residual=residual, condition=condition)


def fit_b(data: ControlDataset, wave: WaveFit, shifts: np.ndarray | None = None) -> ControlFit:
    """
    r_k = x_{k+1} - A x_k - c w_k ~ b u_k(s) with u_k(s) = amplitude sin(2 pi (t_k + s) / T)
    for every candidate shift s. The default grid is 0, dt, ..., T - dt. Returns the shift with
    the least residual; ties go to the smallest shift.
    """

    x_now, x_next, _, w, t = _transitions(data.trajectories)
    remainder = x_next - x_now @ wave.drift.A.T - np.outer(w, wave.c)

    if shifts is None:
        dt = data.trajectories[0].dt
        shifts = dt * np.arange(int(round(data.period / dt)))
    shifts = np.asarray(shifts, dtype=float)

    omega = 2 * np.pi / data.period
    thetas, residuals, conditions = [], [], []
    for shift in shifts:
        template = data.amplitude * np.sin(omega * (t + shift))
        theta, residual, condition = _normal_solve(template[:, None], remainder, "fit_b")
        thetas.append(theta.ravel())
        residuals.append(residual)
        conditions.append(condition)

    residuals = np.array(residuals)
    # A shift half a period on fits equally well with b negated; the smaller shift wins
    tied = residuals <= residuals.min() + TIE_TOLERANCE * float(np.sum(remainder**2))
    best = int(np.flatnonzero(tied)[0])
    logger.info(
        "fit_b best_shift=%.4f s residual=%.3e over %d shifts",
        shifts[best],
        residuals[best],
        len(shifts),
    )
    return ControlFit(
        wave=wave,
        b=thetas[best],
        best_shift=float(shifts[best]),
        residual=float(residuals[best]),
        condition=conditions[best],
        shifts=shifts,
        shift_residuals=residuals,
    )


def identify(
    decay: DecayDataset,
    floating: FloatDataset,
    control: ControlDataset,
    shifts: np.ndarray | None = None,
) -> IdentificationReport:
    """Run the three steps in order and assemble the fitted model"""

    drift = fit_A(decay)
    wave = fit_c(floating, drift)
    control_fit = fit_b(control, wave, shifts)
    dt = decay.trajectories[0].dt
    model = DiscreteModel(A=drift.A, b=control_fit.b, c=wave.c, dt=dt)
    return IdentificationReport(model=model, drift=drift, wave=wave, control=control_fit)
