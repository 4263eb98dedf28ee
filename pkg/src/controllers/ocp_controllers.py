"""Assembly of the wave-energy optimal control problem as a sparse QP, and objective
bookkeeping for trajectories.

Decision vector (physical units): u_0..u_N, zdot_0..zdot_{N+1}, z_0..z_{N+1}, alpha_0..alpha_N.
In solver units forces (u, alpha) are divided by gamma and the objective is divided by gamma.
"""

import logging
from pathlib import Path
import numpy as np
from scipy import sparse  # QP matrices are assembled in coordinate form
from controllers.plant_controllers import rollout_array, wave_samples
from models import (
    DiscreteModel,
    ObjectiveBreakdown,
    OcpConfig,
    OcpInstance,
    State,
    VariableLayout,
    WaveSpec,
)
from utils.error_handling import LayoutError

logger = logging.getLogger(__name__)


def trapezoid_weights(n_steps: int, dt: float) -> np.ndarray:
    """dt for interior nodes, dt/2 at both ends, for nodes 0..N"""

    weights = np.full(n_steps + 1, dt)
    weights[0] = weights[-1] = 0.5 * dt  # Half weight at both ends
    return weights


def energy_absorbed(u, zdot, dt: float) -> float:
    """Trapezoidal sum of -u zdot over equally spaced samples"""

    u = np.asarray(u, dtype=float)
    zdot = np.asarray(zdot, dtype=float)
    if u.shape != zdot.shape or u.ndim != 1:
        raise LayoutError(f"u has shape {u.shape}, zdot has shape {zdot.shape}")
    if len(u) < 2:
        raise LayoutError("energy needs at least 2 samples")
    power = u * zdot  # Instantaneous power taken by the actuator
    return float(-dt * (power.sum() - 0.5 * (power[0] + power[-1])))


def breakdown_terms(u, zdot, alpha, config: OcpConfig) -> ObjectiveBreakdown:
    """Evaluate every objective term on node sequences u, zdot, alpha (all length N+1)"""

    u = np.asarray(u, dtype=float)
    zdot = np.asarray(zdot, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if not u.shape == zdot.shape == alpha.shape:
        raise LayoutError(
            f"u {u.shape}, zdot {zdot.shape} and alpha {alpha.shape} must match"
        )
    weights = trapezoid_weights(len(u) - 1, config.dt)  # Nodes 0..N
    return ObjectiveBreakdown(
        energy=energy_absorbed(u, zdot, config.dt),
        control_cost=float(config.lambda1 * np.sum(weights * u**2)),
        smoothness_cost=float(config.lambda2 / config.dt * np.sum(np.diff(u) ** 2)),
        penalty_cost=float(config.rho * np.sum(weights * alpha)),
    )


def soft_excess(u, config: OcpConfig) -> np.ndarray:
    """max(|u| - gamma eta, 0), the least alpha that satisfies the soft-bound rows"""

    return np.maximum(np.abs(np.asarray(u, dtype=float)) - config.soft_bound, 0.0)


def implemented_breakdown(u, zdot, config: OcpConfig) -> ObjectiveBreakdown:
    """Breakdown of an applied trajectory, charging the least admissible excess"""

    return breakdown_terms(u, zdot, soft_excess(u, config), config)


def objective_breakdown(instance: OcpInstance, point) -> ObjectiveBreakdown:
    """Term-by-term objective of a physical decision vector"""

    u, zdot, _, alpha = instance.layout.split(point)
    return breakdown_terms(u, zdot[:-1], alpha, instance.config)


def build(
    config: OcpConfig,
    model: DiscreteModel,
    x0: State,
    wave: WaveSpec | None,
    t0: float = 0.0,
) -> OcpInstance:
    """Assemble the QP for one horizon starting at t0 from state x0. wave=None is a calm sea."""

    n = config.n_steps
    if abs(model.dt - config.dt) > 1e-12 * config.dt:
        raise LayoutError(f"model dt {model.dt} differs from config dt {config.dt}")

    layout = VariableLayout(n)  # Index ranges of every variable block
    weights = trapezoid_weights(n, config.dt)
    samples = wave_samples(wave, t0, config.dt, n + 1)  # Wave at nodes 0..N

    hessian = _hessian(layout, config, weights)
    gradient = np.zeros(layout.size)
    gradient[layout.alpha] = config.rho * weights  # rho w_k alpha_k, alpha in units of gamma

    eq_matrix, eq_rhs = _equalities(layout, config, model, x0, samples)  # Dynamics and initial state
    ineq_matrix, ineq_rhs, groups = _inequalities(layout, config)  # Bounds in solver units

    logger.debug(
        "built instance n_steps=%d variables=%d equalities=%d inequalities=%d",
        n,
        layout.size,
        eq_matrix.shape[0],
        ineq_matrix.shape[0],
    )
    return OcpInstance(
        config=config,
        model=model,
        x0=x0,
        wave=wave,
        t0=float(t0),
        wave_samples=samples,
        layout=layout,
        hessian=hessian,
        gradient=gradient,
        constant=0.0,
        eq_matrix=eq_matrix,
        eq_rhs=eq_rhs,
        ineq_matrix=ineq_matrix,
        ineq_rhs=ineq_rhs,
        ineq_groups=groups,
    )


def _hessian(layout: VariableLayout, config: OcpConfig, weights: np.ndarray) -> sparse.csr_matrix:
    """
    Scaled objective sum_k w_k u_k zdot_k + lambda1 gamma w_k u_k^2
    + (lambda2 gamma / dt) (u_k - u_{k-1})^2, written as 0.5 x'Hx.
    """

    n = layout.n_steps
    iu, izd = layout.u, layout.zdot
    smooth = config.lambda2 * config.gamma / config.dt
    rows, cols, vals = [], [], []

    # Energy: cross terms between u_k and zdot_k
    rows += [iu, izd[: n + 1]]
    cols += [izd[: n + 1], iu]
    vals += [weights, weights]

    # Control cost and the diagonal part of smoothness
    diagonal = 2 * config.lambda1 * config.gamma * weights
    diagonal[1:] += 2 * smooth
    diagonal[:-1] += 2 * smooth
    rows.append(iu)
    cols.append(iu)
    vals.append(diagonal)

    # Smoothness band
    band = np.full(n, -2 * smooth)
    rows += [iu[1:], iu[:-1]]
    cols += [iu[:-1], iu[1:]]
    vals += [band, band]

    return sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(layout.size, layout.size),
    ).tocsr()


def _equalities(
    layout: VariableLayout,
    config: OcpConfig,
    model: DiscreteModel,
    x0: State,
    samples: np.ndarray,
) -> tuple[sparse.csr_matrix, np.ndarray]:
    """Dynamics rows (velocity then position per step), initial state, optional u_0 pin"""

    n = layout.n_steps
    iu, izd, iz = layout.u, layout.zdot, layout.z
    A, b, c = model.A, model.b * config.gamma, model.c  # b acts on u over gamma
    rows, cols, vals = [], [], []
    rhs = []

    for k in range(n + 1):
        for i, own in enumerate((izd, iz)):
            row = 2 * k + i  # Velocity row then position row
            rows += [row, row, row, row]
            cols += [own[k + 1], izd[k], iz[k], iu[k]]
            vals += [1.0, -A[i, 0], -A[i, 1], -b[i]]
            rhs.append(c[i] * samples[k])  # Wave forcing is data

    base = 2 * (n + 1)  # First initial-state row
    rows += [base, base + 1]
    cols += [izd[0], iz[0]]
    vals += [1.0, 1.0]
    rhs += [x0.velocity, x0.position]

    if config.pinned:  # u_0 fixed to the last applied control
        rows.append(base + 2)
        cols.append(iu[0])
        vals.append(1.0)
        rhs.append(config.u_init / config.gamma)

    matrix = sparse.coo_matrix(
        (vals, (rows, cols)), shape=(len(rhs), layout.size)
    ).tocsr()
    return matrix, np.array(rhs)


def _inequalities(
    layout: VariableLayout, config: OcpConfig
) -> tuple[sparse.csr_matrix, np.ndarray, dict[str, slice]]:
    """Rows of G x <= h in solver units, grouped by constraint kind"""

    n_u = layout.n_steps + 1  # Control nodes
    n_x = layout.n_steps + 2  # State nodes
    iu, iz, ia = layout.u, layout.z, layout.alpha
    blocks = [
        # name, variable columns, coefficients, bound
        ("force_upper", [(iu, 1.0)], 1.0, n_u),
        ("force_lower", [(iu, -1.0)], 1.0, n_u),
        ("position_upper", [(iz, 1.0)], config.delta, n_x),
        ("position_lower", [(iz, -1.0)], config.delta, n_x),
        ("soft_upper", [(iu, 1.0), (ia, -1.0)], config.eta, n_u),
        ("soft_lower", [(iu, -1.0), (ia, -1.0)], config.eta, n_u),
        ("excess_nonnegative", [(ia, -1.0)], 0.0, n_u),
        ("excess_cap", [(ia, 1.0)], 1.0, n_u),
    ]

    rows, cols, vals, rhs = [], [], [], []
    groups: dict[str, slice] = {}
    start = 0
    for name, terms, bound, count in blocks:  # One row per node and block
        local = start + np.arange(count)
        for columns, coefficient in terms:
            rows.append(local)
            cols.append(columns)
            vals.append(np.full(count, coefficient))
        rhs.append(np.full(count, bound))
        groups[name] = slice(start, start + count)  # Rows of this block
        start += count

    matrix = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(start, layout.size),
    ).tocsr()
    return matrix, np.concatenate(rhs), groups


def baseline_point(instance: OcpInstance, u: np.ndarray | None = None) -> np.ndarray:
    """
    Physical point with controls u (zeros by default, u_0 pinned when configured), states
    from the model rollout and the least admissible excess.
    """

    config = instance.config
    n = config.n_steps
    controls = np.zeros(n + 1) if u is None else np.array(u, dtype=float)
    if controls.shape != (n + 1,):
        raise LayoutError(f"controls need shape ({n + 1},), got {controls.shape}")
    if config.pinned:
        controls[0] = config.u_init

    states = rollout_array(instance.model, instance.x0.as_array(), controls, instance.wave_samples)
    return instance.layout.join(controls, states[:, 0], states[:, 1], soft_excess(controls, config))


def dump_instance(instance: OcpInstance, path: str | Path) -> Path:
    """
    Text dump of the scaled QP. Each block starts with a header line
    `matrix <name> <rows> <cols> <nnz>` or `vector <name> <len>`, followed by one
    `i j value` triplet (matrices) or one value (vectors) per line.
    """

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"scalar constant {instance.constant!r}", f"scalar scale {instance.objective_scale!r}"]
    for name, matrix in (
        ("hessian", instance.hessian),
        ("eq_matrix", instance.eq_matrix),
        ("ineq_matrix", instance.ineq_matrix),
    ):
        coo = matrix.tocoo()
        lines.append(f"matrix {name} {coo.shape[0]} {coo.shape[1]} {coo.nnz}")
        lines += [f"{i} {j} {v!r}" for i, j, v in zip(coo.row, coo.col, coo.data.tolist())]
    for name, vector in (
        ("gradient", instance.gradient),
        ("eq_rhs", instance.eq_rhs),
        ("ineq_rhs", instance.ineq_rhs),
    ):
        lines.append(f"vector {name} {len(vector)}")
        lines += [repr(v) for v in vector.tolist()]
    path.write_text("\n".join(lines) + "\n")
    return path


def load_instance_dump(path: str | Path) -> dict[str, object]:
    """Read a dump back into scipy sparse matrices and numpy vectors"""

    lines = Path(path).read_text().splitlines()
    blocks: dict[str, object] = {}
    position = 0
    while position < len(lines):
        head = lines[position].split()
        position += 1
        if head[0] == "scalar":
            blocks[head[1]] = float(head[2])
        elif head[0] == "matrix":
            n_rows, n_cols, nnz = int(head[2]), int(head[3]), int(head[4])
            triplets = [lines[position + i].split() for i in range(nnz)]
            position += nnz
            rows = [int(t[0]) for t in triplets]
            cols = [int(t[1]) for t in triplets]
            vals = [float(t[2]) for t in triplets]
            blocks[head[1]] = sparse.coo_matrix(
                (vals, (rows, cols)), shape=(n_rows, n_cols)
            ).tocsr()
        else:
            length = int(head[2])
            blocks[head[1]] = np.array([float(v) for v in lines[position : position + length]])
            position += length
    return blocks
