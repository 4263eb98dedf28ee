"""Regular-wave input, the discrete control model and the truth simulator"""

import logging
import math  # Scalar trig inside the integration loop
from pathlib import Path
from typing import Callable, Sequence  # Used for type hints
import numpy as np
from scipy.linalg import expm  # Matrix exponential for the exact one-step map
from models import DiscreteModel, SimMode, State, Trajectory, TruthModel, WaveSpec
from utils.error_handling import DivergenceError, LayoutError
from utils.file_io import read_csv_rows, read_key_values, write_csv, write_key_values

logger = logging.getLogger(__name__)

RK4_SUBSTEPS = 10  # Internal steps per sample interval
TRAJECTORY_COLUMNS = ("t", "u", "zdot", "z", "w")

ControlFn = Callable[[float], float]


def wave_elevation(spec: WaveSpec, t: float | np.ndarray) -> float | np.ndarray:
    """Elevation (H/2) sin(2 pi t / T + phase); scalar in, scalar out"""

    value = spec.amplitude * np.sin(2 * np.pi * np.asarray(t, dtype=float) / spec.period + spec.phase)
    return float(value) if np.ndim(value) == 0 else value


def wave_samples(spec: WaveSpec | None, t0: float, dt: float, count: int) -> np.ndarray:
    """Elevation at t0 + k dt for k = 0..count-1; zeros for a calm sea"""

    if spec is None:
        return np.zeros(count)
    return wave_elevation(spec, t0 + dt * np.arange(count))


def sinusoidal_control(amplitude: float, period: float, shift: float = 0.0) -> ControlFn:
    """Control template amplitude * sin(2 pi (t + shift) / period)"""

    omega = 2 * math.pi / period

    def control(t: float) -> float:
        return amplitude * math.sin(omega * (t + shift))

    return control


def _step(A: np.ndarray, b: np.ndarray, c: np.ndarray, x: np.ndarray, u: float, w: float):
    return A @ x + b * u + c * w


def discrete_step(model: DiscreteModel, x: State, u: float, w: float) -> State:
    """One application of x+ = A x + b u + c w"""

    return State.from_array(_step(model.A, model.b, model.c, x.as_array(), u, w))


def rollout_array(
    model: DiscreteModel, x0: np.ndarray, u: Sequence[float], w: Sequence[float]
) -> np.ndarray:
    """Array form of discrete_rollout, shape (len(u) + 1, 2)"""

    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if u.shape != w.shape or u.ndim != 1:
        raise LayoutError(f"control has {u.shape} samples, wave has {w.shape}")

    states = np.empty((len(u) + 1, 2))
    states[0] = x0
    for k in range(len(u)):
        states[k + 1] = _step(model.A, model.b, model.c, states[k], u[k], w[k])
    return states


def discrete_rollout(
    model: DiscreteModel, x0: State, u: Sequence[float], w: Sequence[float]
) -> list[State]:
    """N + 1 states starting at x0 under control u and wave w (both length N)"""

    states = rollout_array(model, x0.as_array(), u, w)
    return [State.from_array(row) for row in states]


def truth_rollout(
    model: TruthModel,
    mode: SimMode,
    x0: State,
    u_fn: ControlFn | None,
    wave: WaveSpec | None,
    t_end: float,
    sample_dt: float,
    t0: float = 0.0,
) -> Trajectory:
    """
    Sample the truth plant every sample_dt from t0 to t0 + t_end. u_fn is a function of
    absolute time; both modes hold the control and the wave at their sample values over each
    interval, while ContinuousRk4 lets the end-stop act continuously. Raises DivergenceError
    on a non-finite state.
    """

    n = int(round(t_end / sample_dt))
    if n < 1:
        raise LayoutError(f"t_end = {t_end} s gives no samples at {sample_dt} s")
    u_fn = u_fn or (lambda t: 0.0)
    w_fn = _wave_fn(wave)

    t = t0 + sample_dt * np.arange(n + 1)
    u = np.array([u_fn(tk) for tk in t])
    w = np.array([w_fn(tk) for tk in t])
    states = np.empty((n + 1, 2))
    states[0] = x0.as_array()

    if mode is SimMode.DISCRETE_EXACT:
        euler = model.euler_model(sample_dt)
        for k in range(n):
            nxt = _step(euler.A, euler.b, euler.c, states[k], u[k], w[k])
            nxt[0] += sample_dt * model.endstop(states[k, 1])
            states[k + 1] = nxt
            _check_finite(nxt, k + 1)
    else:
        velocity, position = states[0]
        for k in range(n):
            velocity, position = _rk4_interval(
                model, velocity, position, sample_dt, u[k], w[k]
            )
            states[k + 1] = (velocity, position)
            _check_finite(states[k + 1], k + 1)

    if np.max(np.abs(states[:, 1])) > model.z_es and model.k_es > 0:
        logger.warning(
            "end-stop active: max |z| = %.3f m exceeds stroke %.3f m",
            np.max(np.abs(states[:, 1])),
            model.z_es,
        )
    return Trajectory(t=t, u=u, zdot=states[:, 0], z=states[:, 1], w=w)


def truth_step(
    model: TruthModel, mode: SimMode, x: State, u: float, wave: WaveSpec | None, t: float, dt: float
) -> State:
    """Advance the truth plant one interval with the control held at u"""

    if mode is SimMode.DISCRETE_EXACT:
        euler = model.euler_model(dt)
        w = _wave_fn(wave)(t)
        nxt = _step(euler.A, euler.b, euler.c, x.as_array(), u, w)
        nxt[0] += dt * model.endstop(x.position)
    else:
        nxt = np.array(
            _rk4_interval(model, x.velocity, x.position, dt, u, _wave_fn(wave)(t))
        )
    _check_finite(nxt, 1)
    return State.from_array(nxt)


def _wave_fn(wave: WaveSpec | None) -> Callable[[float], float]:
    if wave is None:
        return lambda t: 0.0
    omega = 2 * math.pi / wave.period

    def elevation(t: float) -> float:
        return wave.amplitude * math.sin(omega * t + wave.phase)

    return elevation


def _rk4_interval(
    model: TruthModel, velocity: float, position: float, dt: float, u: float, w: float
) -> tuple[float, float]:
    """Classical RK4 over one sample interval with RK4_SUBSTEPS internal steps, u and w held"""

    (a11, a12), (a21, a22) = model.a_c.tolist()
    b1, b2 = model.b_c.tolist()
    c1, c2 = model.c_c.tolist()
    endstop = model.endstop
    forcing_v = b1 * u + c1 * w
    forcing_z = b2 * u + c2 * w

    def rhs(v: float, z: float) -> tuple[float, float]:
        return (
            a11 * v + a12 * z + forcing_v + endstop(z),
            a21 * v + a22 * z + forcing_z,
        )

    h = dt / RK4_SUBSTEPS
    v, z = velocity, position
    for _ in range(RK4_SUBSTEPS):
        k1v, k1z = rhs(v, z)
        k2v, k2z = rhs(v + 0.5 * h * k1v, z + 0.5 * h * k1z)
        k3v, k3z = rhs(v + 0.5 * h * k2v, z + 0.5 * h * k2z)
        k4v, k4z = rhs(v + h * k3v, z + h * k3z)
        v += (h / 6) * (k1v + 2 * k2v + 2 * k3v + k4v)
        z += (h / 6) * (k1z + 2 * k2z + 2 * k3z + k4z)
    return v, z


def _check_finite(x: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(x)):
        raise DivergenceError(step)


def exact_one_step(model: TruthModel, dt: float) -> DiscreteModel:
    """
    Exact zero-order-hold map of the linear truth (end-stop excluded): A = expm(a_c dt), and
    the b and c columns from the augmented exponential of [[a_c, b_c, c_c], [0, 0, 0]].
    """

    augmented = np.zeros((4, 4))
    augmented[:2, :2] = model.a_c
    augmented[:2, 2] = model.b_c
    augmented[:2, 3] = model.c_c
    phi = expm(augmented * dt)
    return DiscreteModel(A=phi[:2, :2], b=phi[:2, 2], c=phi[:2, 3], dt=dt)


def load_fixture(path: str | Path) -> DiscreteModel:
    """Read a discrete model from a key-value fixture file"""

    return DiscreteModel.from_coefficients(read_key_values(path))


def save_fixture(model: DiscreteModel, path: str | Path, header: str = "") -> Path:
    return write_key_values(path, model.to_coefficients(), header)


def load_truth(path: str | Path) -> TruthModel:
    return TruthModel.from_coefficients(read_key_values(path))


def save_truth(model: TruthModel, path: str | Path, header: str = "") -> Path:
    return write_key_values(path, model.to_coefficients(), header)


def trajectory_to_csv(trajectory: Trajectory, path: str | Path) -> Path:
    return write_csv(path, TRAJECTORY_COLUMNS, trajectory.rows())


def trajectory_from_csv(path: str | Path) -> Trajectory:
    rows = read_csv_rows(path, TRAJECTORY_COLUMNS)
    columns = {name: np.array([row[name] for row in rows]) for name in TRAJECTORY_COLUMNS}
    return Trajectory(**columns)
