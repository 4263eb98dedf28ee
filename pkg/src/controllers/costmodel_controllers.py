"""Damping-versus-velocity regression: fit the candidate families, pick the best by R²,
and check that the power needed to sustain a damping level grows with the square of the
force it produces."""

import logging
import math
from pathlib import Path
from typing import Sequence  # Used for type hints
import numpy as np
from scipy import stats  # linregress for the linearized families
from models import DampingSample, FitFamily, FitResult, PowerForceCurve
from utils.error_handling import CsvFormatError, FitError, ModelError
from utils.file_io import read_csv_rows, write_csv

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("damping", "mean_sq_velocity")

# Reference hyperbolic model and layout of the shipped synthetic dataset
REFERENCE_A = 1330.2
REFERENCE_C = 9158.7
SYNTHETIC_COUNT = 40
SYNTHETIC_SPACING = 1000.0  # N s/m between consecutive damping levels

# Low-discrepancy noise: fractional parts of seed * SHIFT + k * GOLDEN are evenly spread
GOLDEN = 0.6180339887498949
SHIFT = 0.7548776662466927


def _r_squared(observed: np.ndarray, predicted: np.ndarray) -> float:
    """Coefficient of determination on the original scale"""

    if not np.all(np.isfinite(predicted)):
        return -math.inf
    total = float(np.sum((observed - observed.mean()) ** 2))
    return 1.0 - float(np.sum((observed - predicted) ** 2)) / total


def fit_family(family: FitFamily, damping: np.ndarray, mean_sq_velocity: np.ndarray) -> FitResult:
    """
    Fit one family. The two-parameter families are fitted by linear regression on the
    transformed scale, the quadratic directly; R² is always computed on mean_sq_velocity.
    """

    b = np.asarray(damping, dtype=float)
    y = np.asarray(mean_sq_velocity, dtype=float)
    if np.any(b <= 0) or np.any(y <= 0):
        raise FitError(f"{family.value}: damping and mean squared velocity must be positive")

    if family is FitFamily.HYPERBOLIC:
        line = stats.linregress(b, 1.0 / y)  # 1/y = b/a + c/a
        if line.slope == 0:
            raise FitError("Hyperbolic: reciprocal response does not vary with damping")
        parameters = {"a": 1.0 / line.slope, "c": line.intercept / line.slope}
    elif family is FitFamily.EXPONENTIAL:
        line = stats.linregress(b, np.log(y))  # log y = log p - q b
        parameters = {"p": math.exp(line.intercept), "q": -line.slope}
    elif family is FitFamily.LOGARITHMIC:
        line = stats.linregress(np.log(b), y)  # y = p - q log b
        parameters = {"p": line.intercept, "q": -line.slope}
    else:
        p2, p1, p0 = np.polyfit(b, y, 2)
        parameters = {"p0": p0, "p1": p1, "p2": p2}

    parameters = {name: float(value) for name, value in parameters.items()}
    draft = FitResult(family=family, parameters=parameters, r_squared=0.0)
    r_squared = _r_squared(y, draft.predict(b))
    return FitResult(family=family, parameters=parameters, r_squared=r_squared)


def fit_families(samples: Sequence[DampingSample]) -> list[FitResult]:
    """All four families, best R² first"""

    if len(samples) < 3:
        raise FitError(f"need at least 3 samples, got {len(samples)}")
    b = np.array([s.damping for s in samples])
    y = np.array([s.mean_sq_velocity for s in samples])
    if len(np.unique(b)) != len(b):
        raise FitError("damping values must be distinct")
    if np.ptp(y) == 0:
        raise FitError("mean squared velocity is constant; R² is undefined")

    results = [fit_family(family, b, y) for family in FitFamily]
    results.sort(key=lambda result: result.r_squared, reverse=True)
    for result in results:
        logger.info("family=%s r_squared=%.6f %s", result.family.value, result.r_squared, result.parameters)
    return results


def power_force_curve(fit: FitResult, b_range: tuple[float, float], points: int = 50) -> PowerForceCurve:
    """Evaluate force and power over a logarithmic damping grid spanning b_range"""

    if fit.family is not FitFamily.HYPERBOLIC:
        raise FitError(f"power-force check needs a Hyperbolic fit, got {fit.family.value}")
    b_lo, b_hi = (float(value) for value in b_range)
    if not (0 < b_lo < b_hi) or not (math.isfinite(b_lo) and math.isfinite(b_hi)):
        raise FitError(f"degenerate damping range [{b_lo}, {b_hi}]")
    if points < 2:
        raise FitError(f"need at least 2 grid points, got {points}")

    c = fit.parameters["c"]
    if b_hi < 10 * c:
        logger.warning(
            "damping range [%.3g, %.3g] ends below 10 c = %.3g; exponent is pre-asymptotic",
            b_lo,
            b_hi,
            10 * c,
        )

    damping = np.geomspace(b_lo, b_hi, points)
    msv = fit.predict(damping)
    if np.any(msv <= 0) or not np.all(np.isfinite(msv)):
        raise FitError("fitted model gives non-positive mean squared velocity in the range")
    return PowerForceCurve(
        damping=damping,
        force=damping * np.sqrt(msv),
        sustaining_power=damping.copy(),
        captured_power=damping * msv,
    )


def _log_slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(stats.linregress(np.log(x), np.log(y)).slope)


def power_force_exponent(fit: FitResult, b_range: tuple[float, float], points: int = 50) -> float:
    """Slope of log(sustaining power) against log(force); 2 means P grows like F²"""

    curve = power_force_curve(fit, b_range, points)
    return _log_slope(curve.force, curve.sustaining_power)


def captured_power_exponent(fit: FitResult, b_range: tuple[float, float], points: int = 50) -> float:
    """Slope of log(b zdot^2) against log(force); tends to 0 as captured power saturates at a"""

    curve = power_force_curve(fit, b_range, points)
    return _log_slope(curve.force, curve.captured_power)


def hyperbolic_properties(fit: FitResult, b_grid: Sequence[float]) -> dict[str, bool]:
    """
    Qualitative checks of a hyperbolic fit over b_grid:
    decreasing - mean squared velocity strictly decreases with damping
    vanishing - it goes to 0 for large damping
    bounded_at_zero - it tends to the finite value a/c as damping goes to 0
    captured_increasing - captured power b zdot^2 strictly increases with damping
    """

    if fit.family is not FitFamily.HYPERBOLIC:
        raise FitError(f"expected a Hyperbolic fit, got {fit.family.value}")
    a, c = fit.parameters["a"], fit.parameters["c"]
    b = np.sort(np.asarray(b_grid, dtype=float))
    msv = fit.predict(b)
    far = float(fit.predict(1e6 * max(b[-1], abs(c), 1.0)))
    return {
        "decreasing": bool(np.all(np.diff(msv) < 0)),
        "vanishing": bool(a > 0 and 0 < far < 1e-5 * np.max(msv)),
        "bounded_at_zero": bool(a > 0 and c > 0),
        "captured_increasing": bool(np.all(np.diff(b * msv) > 0)),
    }


def synthetic_samples(
    seed: int = 0,
    noise: float = 0.01,
    a: float = REFERENCE_A,
    c: float = REFERENCE_C,
    count: int = SYNTHETIC_COUNT,
    spacing: float = SYNTHETIC_SPACING,
) -> list[DampingSample]:
    """
    Samples of a / (b + c) at b = spacing, 2 spacing, ..., count spacing, each scaled by
    (1 + e) where e is uniform with standard deviation `noise`. The noise sequence is a
    deterministic function of seed.
    """

    if noise < 0 or noise * math.sqrt(3.0) >= 1:
        raise ModelError(f"noise must lie in [0, 1/sqrt(3)), got {noise}")
    k = np.arange(1, count + 1, dtype=float)
    damping = spacing * k
    unit = np.mod(seed * SHIFT + k * GOLDEN, 1.0)
    relative = noise * math.sqrt(3.0) * (2 * unit - 1)
    msv = a / (damping + c) * (1 + relative)
    return [DampingSample(float(b), float(y)) for b, y in zip(damping, msv)]


def load_samples(path: str | Path) -> list[DampingSample]:
    """Read a `damping,mean_sq_velocity` CSV; bad values are reported with their line number"""

    samples = []
    for index, row in enumerate(read_csv_rows(path, SAMPLE_COLUMNS)):
        try:
            samples.append(DampingSample(row["damping"], row["mean_sq_velocity"]))
        except ModelError as e:
            raise CsvFormatError(str(path), index + 2, str(e)) from e
    return samples


def save_samples(samples: Sequence[DampingSample], path: str | Path) -> Path:
    return write_csv(path, SAMPLE_COLUMNS, [(s.damping, s.mean_sq_velocity) for s in samples])
