"""Test cases for the optimal control problem assembly and objective bookkeeping."""

from typing import Callable  # Used for type hints
import numpy as np
import pytest  # Required for @parametrize decorator
from numpy.testing import assert_allclose
from controllers.ocp_controllers import (
    baseline_point,
    breakdown_terms,
    build,
    dump_instance,
    energy_absorbed,
    implemented_breakdown,
    load_instance_dump,
    objective_breakdown,
    soft_excess,
    trapezoid_weights,
)
from models import DiscreteModel, OcpConfig, State, VariableLayout, WaveSpec
from utils.error_handling import LayoutError, ModelError


# Test formulation parameters
# ==================================================================================================


@pytest.mark.parametrize(
    "field, value",
    [
        ("gamma", 0.0),  # Force bound must be positive
        ("delta", -1.0),  # Displacement bound must be positive
        ("eta", 0.0),  # Soft bound fraction lies in (0, 1]
        ("eta", 1.5),
        ("rho", -0.1),  # Costs are non-negative
        ("lambda1", -1e-9),
        ("lambda2", -1e-9),
        ("n_steps", 1),  # At least two steps
        ("n_steps", 2.5),  # Whole number of steps
        ("u_init", 2e6),  # Pinned control within the force bound
    ],
)
def test_ocp_config_validation(ocp_config: Callable[..., OcpConfig], field: str, value) -> None:
    """Test that out-of-range formulation parameters are rejected."""

    with pytest.raises(ModelError):
        ocp_config(**{field: value})


def test_soft_bound_and_pin(ocp_config: Callable[..., OcpConfig]) -> None:
    """Test the derived soft bound and the pinned flag."""

    config = ocp_config(eta=0.25, u_init=1e5)

    assert config.soft_bound == pytest.approx(2.5e5)
    assert config.pinned
    assert not config.with_changes(u_init=None).pinned


# Test objective bookkeeping
# ==================================================================================================


def test_trapezoid_weights() -> None:
    """Test half weights at both ends and full weights inside."""

    assert_allclose(trapezoid_weights(3, 0.01), [0.005, 0.01, 0.01, 0.005])


def test_energy_absorbed_constant_power() -> None:
    """Test the trapezoidal energy of a constant absorbing power."""

    assert energy_absorbed([1.0, 1.0, 1.0], [-1.0, -1.0, -1.0], 1.0) == pytest.approx(2.0)


def test_energy_absorbed_over_a_period() -> None:
    """Test that u = -sin and zdot = sin over one period absorb half the period."""

    t = np.arange(401) * 0.01
    zdot = np.sin(2 * np.pi * t / 4.0)

    assert energy_absorbed(-zdot, zdot, 0.01) == pytest.approx(2.0, rel=1e-3)


def test_energy_needs_matching_samples() -> None:
    """Test that sequences of different length are rejected."""

    with pytest.raises(LayoutError):
        energy_absorbed([1.0, 2.0], [1.0], 0.01)


def test_breakdown_terms(ocp_config: Callable[..., OcpConfig]) -> None:
    """Test each term of the objective on a hand-checked sequence."""

    config = ocp_config(n_steps=2, dt=1.0, eta=0.5, rho=2.0, lambda1=1e-6, lambda2=1e-6)
    u = np.array([0.0, 1e6, 0.0])
    zdot = np.array([0.0, -1.0, 0.0])

    breakdown = breakdown_terms(u, zdot, soft_excess(u, config), config)

    assert breakdown.energy == pytest.approx(1e6)
    assert breakdown.control_cost == pytest.approx(1e-6 * 1e12)
    assert breakdown.smoothness_cost == pytest.approx(1e-6 * 2e12)
    assert breakdown.penalty_cost == pytest.approx(2.0 * 5e5)
    assert breakdown.total == pytest.approx(1e6 - 1e6 - 2e6 - 1e6)
    assert implemented_breakdown(u, zdot, config) == breakdown


def test_soft_excess() -> None:
    """Test the least admissible excess is zero inside the soft bound."""

    config = OcpConfig(
        gamma=1e6, delta=3.0, eta=0.5, rho=0.0, lambda1=0.0, lambda2=0.0, n_steps=2, dt=0.01
    )

    assert_allclose(soft_excess([-8e5, 1e5, 5e5], config), [3e5, 0.0, 0.0])


# Test instance assembly
# ==================================================================================================


def test_layout_sizes() -> None:
    """Test the decision vector layout for N steps."""

    layout = VariableLayout(10)

    assert layout.size == 46
    assert len(layout.u) == len(layout.alpha) == 11
    assert len(layout.zdot) == len(layout.z) == 12
    assert sorted(np.concatenate([layout.u, layout.zdot, layout.z, layout.alpha])) == list(range(46))
    with pytest.raises(LayoutError):
        layout.split(np.zeros(45))


def test_instance_dimensions(
    ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel, wave: WaveSpec
) -> None:
    """Test row counts for a free and a pinned first control."""

    free = build(ocp_config(n_steps=10), wec_model, State(0.0, 0.0), wave)
    pinned = build(ocp_config(n_steps=10, u_init=1e5), wec_model, State(0.0, 0.0), wave)

    assert free.n_variables == 46
    assert free.n_equalities == 2 * 11 + 2
    assert pinned.n_equalities == 2 * 11 + 3
    assert free.n_inequalities == 6 * 11 + 2 * 12
    assert set(free.ineq_groups) == {
        "force_upper",
        "force_lower",
        "position_upper",
        "position_lower",
        "soft_upper",
        "soft_lower",
        "excess_nonnegative",
        "excess_cap",
    }


def test_build_rejects_dt_mismatch(ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel) -> None:
    """Test that the formulation and the model must share a sample interval."""

    with pytest.raises(LayoutError):
        build(ocp_config(dt=0.02), wec_model, State(0.0, 0.0), None)


def test_baseline_point_satisfies_equalities(
    ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel, wave: WaveSpec
) -> None:
    """Test that a model rollout is feasible for the dynamics rows."""

    instance = build(ocp_config(u_init=2e5), wec_model, State(0.3, -0.2), wave, t0=1.3)
    controls = np.random.default_rng(1).uniform(-5e5, 5e5, 21)

    scaled = instance.scale_point(baseline_point(instance, controls))

    assert_allclose(instance.eq_matrix @ scaled, instance.eq_rhs, atol=1e-12)
    assert instance.layout.split(instance.unscale_point(scaled))[0][0] == pytest.approx(2e5)


def test_calm_sea_objective_is_energy(
    ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel
) -> None:
    """Test that without costs the objective is the energy of the rollout."""

    instance = build(ocp_config(lambda1=0.0), wec_model, State(0.0, 0.0), None)
    controls = np.random.default_rng(2).uniform(-1e6, 1e6, 21)
    point = baseline_point(instance, controls)
    zdot = instance.layout.split(point)[1]

    assert instance.objective_value(point) == pytest.approx(
        energy_absorbed(controls, zdot[:-1], 0.01), rel=1e-9, abs=1e-6
    )


def test_objective_value_matches_breakdown(
    ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel, wave: WaveSpec
) -> None:
    """Test that the assembled quadratic equals the sum of the objective terms."""

    config = ocp_config(eta=0.3, rho=0.7, lambda1=1e-6, lambda2=1e-7)
    instance = build(config, wec_model, State(0.1, 0.0), wave)
    controls = np.random.default_rng(3).uniform(-1e6, 1e6, 21)
    point = baseline_point(instance, controls)

    breakdown = objective_breakdown(instance, point)

    assert breakdown.penalty_cost > 0
    assert breakdown.smoothness_cost > 0
    assert instance.objective_value(point) == pytest.approx(breakdown.total, rel=1e-9, abs=1e-6)


def test_dump_round_trip(
    ocp_config: Callable[..., OcpConfig], wec_model: DiscreteModel, wave: WaveSpec, tmp_path
) -> None:
    """Test that the text dump reproduces every matrix and vector."""

    instance = build(ocp_config(n_steps=5, lambda2=1e-7), wec_model, State(0.0, 0.0), wave)

    blocks = load_instance_dump(dump_instance(instance, tmp_path / "qp.txt"))

    assert_allclose(blocks["hessian"].toarray(), instance.hessian.toarray())
    assert_allclose(blocks["eq_matrix"].toarray(), instance.eq_matrix.toarray())
    assert_allclose(blocks["ineq_matrix"].toarray(), instance.ineq_matrix.toarray())
    assert_allclose(blocks["eq_rhs"], instance.eq_rhs)
    assert blocks["scale"] == instance.objective_scale
