"""Test cases for the plant: wave input, the discrete model, the truth simulator and the
fixture files."""

import numpy as np
import pytest  # Required for @parametrize decorator
from numpy.testing import assert_allclose
from controllers.mpc_controllers import average_period
from controllers.plant_controllers import (
    discrete_rollout,
    discrete_step,
    exact_one_step,
    load_fixture,
    load_truth,
    rollout_array,
    save_fixture,
    sinusoidal_control,
    trajectory_from_csv,
    trajectory_to_csv,
    truth_rollout,
    wave_elevation,
    wave_samples,
)
from models import DiscreteModel, SimMode, State, Trajectory, TruthModel, WaveSpec
from utils.error_handling import ConfigError, DivergenceError, LayoutError, ModelError


# Test domain value validation
# ==================================================================================================


@pytest.mark.parametrize(
    "height, period",
    [
        (0.0, 4.0),  # Zero height
        (-1.0, 4.0),  # Negative height
        (6.0, 0.0),  # Zero period
        (6.0, float("nan")),  # Not finite
        (True, 4.0),  # Booleans are not numbers
    ],
)
def test_wave_spec_rejects_invalid_values(height, period) -> None:
    """Test that a wave needs a positive finite height and period."""

    with pytest.raises(ModelError):
        WaveSpec(height=height, period=period)


def test_unstable_discrete_model_is_rejected() -> None:
    """Test that a drift matrix with spectral radius above 1 fails validation."""

    with pytest.raises(ModelError, match="spectral radius"):
        DiscreteModel(A=[[1.1, 0.0], [0.0, 0.5]], b=[0.0, 0.0], c=[0.0, 0.0], dt=0.01)


def test_discrete_model_rejects_wrong_shape() -> None:
    """Test that coefficient arrays must have the state dimension."""

    with pytest.raises(ModelError):
        DiscreteModel(A=[[0.9, 0.0], [0.0, 0.9]], b=[1.0, 2.0, 3.0], c=[0.0, 0.0], dt=0.01)


def test_unstable_truth_model_is_rejected() -> None:
    """Test that a continuous drift with a growing mode fails validation."""

    with pytest.raises(ModelError, match="positive real part"):
        TruthModel(a_c=[[0.5, 0.0], [0.0, -1.0]], b_c=[0.0, 0.0], c_c=[0.0, 0.0])


def test_fixture_keys_must_match(wec_model: DiscreteModel) -> None:
    """Test that a coefficient set with a missing or unknown key is rejected."""

    values = wec_model.to_coefficients()
    del values["c2"]
    values["c3"] = 0.0
    with pytest.raises(ModelError, match="missing"):
        DiscreteModel.from_coefficients(values)


# Test the wave input
# ==================================================================================================


def test_wave_elevation_scalar_and_array(wave: WaveSpec) -> None:
    """Test the elevation is (H/2) sin(2 pi t / T) and keeps the input's shape."""

    assert wave_elevation(wave, 1.0) == pytest.approx(3.0)
    assert isinstance(wave_elevation(wave, 1.0), float)
    values = wave_elevation(wave, np.array([0.0, 1.0, 2.0, 3.0]))
    assert_allclose(values, [0.0, 3.0, 0.0, -3.0], atol=1e-12)


def test_calm_sea_samples_are_zero() -> None:
    """Test that no wave gives zero elevation at every sample."""

    assert_allclose(wave_samples(None, 0.0, 0.01, 5), np.zeros(5))


# Test the discrete model
# ==================================================================================================


def test_discrete_step_matches_coefficients(wec_model: DiscreteModel) -> None:
    """Test single steps against the published coefficients."""

    assert discrete_step(wec_model, State(0.0, 0.0), 0.0, 0.0) == State(0.0, 0.0)

    free = discrete_step(wec_model, State(1.0, 0.0), 0.0, 0.0)
    assert free.velocity == pytest.approx(0.9939, rel=1e-12)
    assert free.position == pytest.approx(0.00997, rel=1e-12)

    forced = discrete_step(wec_model, State(0.0, 0.0), 1e6, 0.0)
    assert forced.velocity == pytest.approx(0.0123, rel=1e-12)
    assert forced.position == pytest.approx(6.1785e-5, rel=1e-12)


def test_discrete_rollout_length_and_values(wec_model: DiscreteModel) -> None:
    """Test that N controls give N + 1 states, each one step of the model."""

    states = discrete_rollout(wec_model, State(1.0, 0.0), [0.0, 0.0], [0.0, 0.0])

    assert len(states) == 3
    expected = wec_model.A @ wec_model.A @ np.array([1.0, 0.0])
    assert_allclose(states[2].as_array(), expected, rtol=1e-12)


def test_rollout_length_mismatch(wec_model: DiscreteModel) -> None:
    """Test that control and wave sequences of different lengths are rejected."""

    with pytest.raises(LayoutError):
        rollout_array(wec_model, np.zeros(2), [0.0, 0.0, 0.0], [0.0, 0.0])


def test_free_response_follows_wave_period(wec_model: DiscreteModel, wave: WaveSpec) -> None:
    """Test that after the transient the uncontrolled velocity oscillates at the wave period."""

    n = 6000  # 60 s
    w = wave_samples(wave, 0.0, 0.01, n)
    states = rollout_array(wec_model, np.zeros(2), np.zeros(n), w)

    period = average_period(states[2000:, 0], 0.01)  # Skip the first five wave periods

    assert period == pytest.approx(4.0, rel=0.05)


# Test the truth simulator
# ==================================================================================================


def test_euler_map_reproduces_discrete_model(truth_model: TruthModel, wec_model: DiscreteModel) -> None:
    """Test that the shipped truth's forward-Euler map at 0.01 s is the shipped discrete model."""

    euler = truth_model.euler_model(0.01)

    assert_allclose(euler.A, wec_model.A, rtol=1e-12)
    assert_allclose(euler.b, wec_model.b, rtol=1e-12)
    assert_allclose(euler.c, wec_model.c, rtol=1e-12)


def test_discrete_exact_truth_matches_model_rollout(
    wec_model: DiscreteModel, wave: WaveSpec
) -> None:
    """Test that the DiscreteExact plant equals the model rollout while the end-stop is inactive."""

    truth = TruthModel.from_discrete(wec_model)
    control = sinusoidal_control(2e5, 4.0)
    run = truth_rollout(truth, SimMode.DISCRETE_EXACT, State(0.1, 0.2), control, wave, 10.0, 0.01)

    states = rollout_array(wec_model, np.array([0.1, 0.2]), run.u[:-1], run.w[:-1])

    assert len(run) == 1001
    assert np.max(np.abs(run.z)) < truth.z_es
    assert_allclose(run.states, states, rtol=1e-9, atol=1e-12)


def test_rk4_truth_matches_exact_map(truth_model: TruthModel) -> None:
    """Test that unforced RK4 integration agrees with the exact one-step map."""

    run = truth_rollout(truth_model, SimMode.CONTINUOUS_RK4, State(1.0, 0.5), None, None, 1.0, 0.01)
    exact = exact_one_step(truth_model, 0.01)

    states = rollout_array(exact, np.array([1.0, 0.5]), np.zeros(100), np.zeros(100))

    assert_allclose(run.states, states, rtol=1e-8, atol=1e-10)


def test_exact_one_step_close_to_euler_for_small_dt(truth_model: TruthModel) -> None:
    """Test that the exact and Euler maps differ only at second order in dt."""

    exact = exact_one_step(truth_model, 0.01)
    euler = truth_model.euler_model(0.01)

    assert_allclose(exact.A, euler.A, atol=1e-3)
    assert exact.dt == 0.01


@pytest.mark.parametrize(
    "position, expected",
    [
        (0.0, 0.0),  # Inside the stroke
        (3.0, 0.0),  # On the limit
        (3.5, -500.0),  # Beyond the upper limit
        (-4.0, 1000.0),  # Beyond the lower limit
    ],
)
def test_endstop_force(truth_model: TruthModel, position: float, expected: float) -> None:
    """Test the end-stop acts only beyond the stroke and opposes the excess."""

    assert truth_model.endstop(position) == pytest.approx(expected)


def test_divergence_is_reported(wec_model: DiscreteModel) -> None:
    """Test that a simulation whose state overflows raises DivergenceError with the step."""

    stiff = TruthModel.from_discrete(wec_model, k_es=1e12, z_es=0.1)

    with pytest.raises(DivergenceError) as error:
        truth_rollout(stiff, SimMode.DISCRETE_EXACT, State(0.0, 1.0), None, None, 10.0, 0.01)

    assert error.value.step > 0


def test_truth_rollout_needs_a_sample() -> None:
    """Test that a run shorter than one sample interval is rejected."""

    truth = TruthModel(a_c=[[-1.0, 0.0], [0.0, -1.0]], b_c=[0.0, 0.0], c_c=[0.0, 0.0])
    with pytest.raises(LayoutError):
        truth_rollout(truth, SimMode.DISCRETE_EXACT, State(0.0, 0.0), None, None, 0.001, 0.01)


# Test fixture files
# ==================================================================================================


def test_fixture_round_trip(wec_model: DiscreteModel, tmp_path) -> None:
    """Test that saved coefficients load back bit for bit."""

    path = save_fixture(wec_model, tmp_path / "model.kv", header="round trip")

    assert load_fixture(path).to_coefficients() == wec_model.to_coefficients()
    assert path.read_text().startswith("# round trip\n")


@pytest.mark.parametrize(
    "text, message",
    [
        ("a11 0.5\n", "expected 'name = value'"),  # No separator
        ("a11 = 0.5\na11 = 0.6\n", "duplicate key"),  # Repeated key
        ("a11 = half\n", "is not a number"),  # Non-numeric value
    ],
)
def test_malformed_fixture(tmp_path, text: str, message: str) -> None:
    """Test that fixture syntax errors name the problem."""

    path = tmp_path / "bad.kv"
    path.write_text(text)
    with pytest.raises(ConfigError, match=message):
        load_fixture(path)


def test_missing_fixture(tmp_path) -> None:
    """Test that a missing fixture file is a ConfigError."""

    with pytest.raises(ConfigError, match="not found"):
        load_truth(tmp_path / "absent.kv")


def test_trajectory_csv_round_trip(tmp_path) -> None:
    """Test that a trajectory written to CSV reads back unchanged."""

    trajectory = Trajectory(
        t=[0.0, 0.01, 0.02], u=[1.0, -2.5, 0.0], zdot=[0.1, 0.2, 0.3], z=[0.0, 1e-3, 3e-3], w=[0.0, 0.5, 1.0]
    )
    loaded = trajectory_from_csv(trajectory_to_csv(trajectory, tmp_path / "run.csv"))

    assert loaded.rows() == trajectory.rows()


def test_trajectory_columns_must_match() -> None:
    """Test that trajectory columns of unequal length are rejected."""

    with pytest.raises(ModelError, match="equal length"):
        Trajectory(t=[0.0, 0.01], u=[0.0], zdot=[0.0, 0.0], z=[0.0, 0.0], w=[0.0, 0.0])
