"""Receding-horizon execution: solve over the horizon, apply the first update-horizon slice
to the plant, pin the next first control to the last applied one, repeat."""

import logging
import numpy as np
from controllers.ocp_controllers import build, implemented_breakdown, soft_excess
from controllers.plant_controllers import discrete_step, truth_step, wave_samples
from controllers.qpsolver_controllers import solve
from models import (
    MpcConfig,
    PeriodRecord,
    RecedingLog,
    SolveSettings,
    State,
    Trajectory,
)
from utils.error_handling import UndefinedPeriodError

logger = logging.getLogger(__name__)


def average_period(signal, dt: float) -> float:
    """
    Mean spacing of consecutive upward zero crossings (negative sample followed by a
    non-negative one), each crossing time refined by linear interpolation.
    """

    values = np.asarray(signal, dtype=float)
    before, after = values[:-1], values[1:]
    index = np.nonzero((before < 0) & (after >= 0))[0]
    if len(index) < 2:
        raise UndefinedPeriodError(f"signal has {len(index)} upward zero crossings, need 2")
    fraction = -before[index] / (after[index] - before[index])
    crossings = (index + fraction) * dt
    return float(np.mean(np.diff(crossings)))


def _plant_advance(
    config: MpcConfig, x: State, controls: np.ndarray, t_start: float, samples: np.ndarray
) -> np.ndarray:
    """
    Apply controls[0..M-1] one step each; returns the M+1 plant states of the slice. The
    model plant sees the same wave samples the controller planned with.
    """

    states = [x]
    for i, u in enumerate(controls):
        t = t_start + i * config.dt
        if config.truth is None:
            x = discrete_step(config.model, x, float(u), float(samples[i]))
        else:
            x = truth_step(config.truth, config.plant_mode, x, float(u), config.wave, t, config.dt)
        states.append(x)
    return np.array([s.as_array() for s in states])


def run(config: MpcConfig, settings: SolveSettings | None = None) -> RecedingLog:
    """
    Run config.periods receding-horizon periods. A period whose solve does not converge
    (iteration limit, infeasible or numerical failure) is recorded and ends the run.
    """

    settings = settings or SolveSettings()
    n, m = config.horizon_steps, config.update_steps
    log = RecedingLog(update_horizon=config.update_horizon)

    x = config.x0
    t_start = config.t0
    pinned_u: float | None = None
    warm: np.ndarray | None = None
    applied_t, applied_u, applied_x, applied_w = [], [], [], []

    for period in range(config.periods):
        ocp = config.ocp.with_changes(n_steps=n, dt=config.dt, u_init=pinned_u)
        instance = build(ocp, config.model, x, config.wave, t_start)
        result = solve(instance, settings, warm_start=warm)
        report = result.report

        if not report.status.usable:
            logger.warning("period %d failed with status %s", period, report.status.value)
            log.records.append(
                PeriodRecord(
                    period=period,
                    t_start=t_start,
                    objective=float("nan"),
                    energy=float("nan"),
                    report=report,
                    max_alpha=float("nan"),
                    terminal_state=x,
                    update_horizon=config.update_horizon,
                )
            )
            log.failed = True
            break

        plan = instance.layout.split(result.point)[0].copy()
        if pinned_u is not None:
            plan[0] = pinned_u  # Equal up to roundoff already; make it exact
        controls = np.clip(plan[: m + 1], -ocp.gamma, ocp.gamma)  # Roundoff can step past the bound
        states = _plant_advance(config, x, controls[:m], t_start, instance.wave_samples)

        breakdown = implemented_breakdown(controls, states[:, 0], ocp)
        terminal = State.from_array(states[-1])
        record = PeriodRecord(
            period=period,
            t_start=t_start,
            objective=breakdown.total,
            energy=breakdown.energy,
            report=report,
            max_alpha=float(np.max(soft_excess(controls, ocp))),
            terminal_state=terminal,
            update_horizon=config.update_horizon,
        )
        log.records.append(record)
        logger.info(
            "period %d t=%.2f objective=%.6e energy=%.6e max_alpha=%.3e realtime=%s",
            period,
            t_start,
            record.objective,
            record.energy,
            record.max_alpha,
            record.realtime_ok,
        )

        times = t_start + config.dt * np.arange(m)
        applied_t.append(times)
        applied_u.append(controls[:m])
        applied_x.append(states[:m])
        applied_w.append(instance.wave_samples[:m])

        x = terminal
        pinned_u = float(controls[m])
        t_start = t_start + m * config.dt
        warm = np.concatenate([plan[m:], np.full(m, plan[-1])])

    if applied_t:
        # Close the trajectory with the node the next period would have started from
        applied_t.append(np.array([t_start]))
        applied_u.append(np.array([pinned_u]))
        applied_x.append(x.as_array()[None, :])
        applied_w.append(wave_samples(config.wave, t_start, config.dt, 1))
        states = np.concatenate(applied_x)
        log.applied = Trajectory(
            t=np.concatenate(applied_t),
            u=np.concatenate(applied_u),
            zdot=states[:, 0],
            z=states[:, 1],
            w=np.concatenate(applied_w),
        )
    return log
