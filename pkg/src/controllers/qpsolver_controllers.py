"""Structured interior-point solver for the wave-energy QP, plus a brute-force oracle.

The QP (solver units, see OcpInstance) is

    minimize 0.5 x'Hx + g'x   subject to   E x = f,   G x + s = h,   s >= 0.

Each Newton step eliminates slacks and inequality multipliers, leaving an equality
constrained subproblem with Hessian W = H + G' diag(z/s) G. That subproblem has the time
stage structure of the dynamics and is solved by a backward Riccati recursion over the
augmented stage state (zdot_k, z_k, u_{k-1}) with stage input (u_k, alpha_k); the smoothness
term couples u_k to u_{k-1} through the third state component. A non positive-definite
Riccati pivot means the subproblem has the wrong inertia, and the real variables get a
diagonal shift that grows until every pivot is positive.
"""

import itertools  # Oracle enumerates the control grid
import logging
import time  # Process CPU time for the report
from dataclasses import dataclass
import numpy as np
from scipy import sparse
from controllers.ocp_controllers import baseline_point, trapezoid_weights
from models import Multipliers, OcpInstance, SolveReport, SolveResult, SolveSettings, SolveStatus
from utils.error_handling import InstanceTooLargeError, LayoutError

logger = logging.getLogger(__name__)

REGULARIZATION_CEILING = 1e8
SLACK_FLOOR = 1e-2  # Initial slacks are at least this far from zero
TAU_MIN = 0.99  # Fraction-to-boundary parameter floor
ARMIJO = 1e-4
MAX_BACKTRACKS = 30
BARRIER_TOLERANCE_FACTOR = 10.0  # Barrier shrinks once the barrier error is below this times mu
MULTIPLIER_SAFEGUARD = 1e10  # z_i s_i is kept within this factor of mu
FEASIBILITY_TOLERANCE = 1e-9
INFEASIBILITY_THRESHOLD = 1e-6
STALL_STEP = 1e-12
STALL_LIMIT = 10
PIVOT_TOLERANCE = 1e-13
PERTURBATION = 0.1  # Multistart noise amplitude as a fraction of gamma
START_MARGIN = 0.99  # Initial controls stay inside this fraction of gamma
ALTERNATING_AMPLITUDE = 0.5  # Sign-flipping start amplitude as a fraction of gamma

MAX_ORACLE_NODES = 5
MAX_ORACLE_LEVELS = 11


class _WrongInertia(Exception):
    """A Riccati pivot is not positive definite"""

    def __init__(self, stage: int):
        self.stage = stage
        super().__init__(f"non positive-definite pivot at stage {stage}")


class _StagewiseKkt:
    """Riccati solver for the equality constrained Newton subproblem of one instance"""

    def __init__(self, instance: OcpInstance):
        layout = instance.layout
        self.n = layout.n_steps
        self.size = layout.size
        self.iu, self.izd, self.iz, self.ia = layout.u, layout.zdot, layout.z, layout.alpha
        self.a_aug, self.b_aug = instance.stage_dynamics()
        self.pinned = instance.config.pinned
        self.n_eq = instance.n_equalities
        self.base = 2 * (self.n + 1)  # First initial-state row

    def set_hessian(self, W: sparse.csr_matrix) -> None:
        """Split W into stage blocks; stage k owns (u_k, alpha_k) and (zdot_k, z_k, u_{k-1})"""

        n = self.n
        iu, izd, iz, ia = self.iu, self.izd, self.iz, self.ia
        diagonal = W.diagonal()

        def pick(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
            return np.asarray(W[rows, cols]).ravel()

        band = pick(iu[1:], iu[:-1])  # Coupling of u_k and u_{k-1}, k = 1..N

        R = np.zeros((n + 1, 2, 2))
        R[:, 0, 0] = diagonal[iu]
        R[:-1, 0, 0] += band  # The u_k^2 share of the next difference moves to stage k+1
        R[:, 1, 1] = diagonal[ia]
        R[:, 0, 1] = R[:, 1, 0] = pick(iu, ia)

        Q = np.zeros((n + 2, 3, 3))
        Q[:, 0, 0] = diagonal[izd]
        Q[:, 1, 1] = diagonal[iz]
        Q[:, 0, 1] = Q[:, 1, 0] = pick(izd, iz)
        Q[1 : n + 1, 2, 2] = -band

        S = np.zeros((n + 1, 3, 2))
        S[:, 0, 0] = pick(izd[: n + 1], iu)
        S[:, 0, 1] = pick(izd[: n + 1], ia)
        S[:, 1, 0] = pick(iz[: n + 1], iu)
        S[:, 1, 1] = pick(iz[: n + 1], ia)
        S[1:, 2, 0] = band

        self.R, self.Q, self.S = R, Q, S

    def solve(
        self, g_sub: np.ndarray, r_e: np.ndarray, delta: float
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Solve  min 0.5 d'(W + delta I)d + g_sub'd  s.t.  E d = -r_e.
        Returns (d, y) with y the equality multipliers. Raises _WrongInertia.
        """

        n = self.n
        A, B = self.a_aug, self.b_aug
        At, Bt = A.T, B.T

        R = self.R + delta * np.eye(2)  # Shift on the real variables only
        Q = self.Q.copy()
        Q[:, 0, 0] += delta
        Q[:, 1, 1] += delta
        S = self.S

        q = np.zeros((n + 2, 3))  # Linear terms, state then input
        q[:, 0] = g_sub[self.izd]
        q[:, 1] = g_sub[self.iz]
        r = np.column_stack([g_sub[self.iu], g_sub[self.ia]])
        e = np.zeros((n + 1, 3))  # Dynamics residuals enter as affine terms
        e[:, :2] = -r_e[: self.base].reshape(n + 1, 2)
        # Initial-state rows fix the first state
        x_start = np.array([-r_e[self.base], -r_e[self.base + 1], 0.0])
        du_start = -r_e[self.base + 2] if self.pinned else 0.0

        gains = np.empty((n + 1, 2, 3))
        offsets = np.empty((n + 1, 2))
        P_next = np.empty((n + 1, 3, 3))
        p_next = np.empty((n + 1, 3))
        first_stage = None

        P, p = Q[n + 1], q[n + 1]  # Terminal cost-to-go
        for k in range(n, -1, -1):
            P_next[k], p_next[k] = P, p
            PB = P @ B
            PA = P @ A
            Rt = R[k] + Bt @ PB  # Input Hessian of the stage
            St = S[k].T + Bt @ PA  # Input-state cross term
            pe = P @ e[k] + p
            rt = r[k] + Bt @ pe  # Input gradient

            if k == 0 and self.pinned:
                if not Rt[1, 1] > 0:
                    raise _WrongInertia(0)
                first_stage = (Rt, St, rt)
                break

            a, b, c = Rt[0, 0], Rt[0, 1], Rt[1, 1]
            # 2x2 pivot is positive definite iff a > 0 and schur > 0
            schur = c - b * b / a if a > 0 else -1.0
            if not (a > 0 and schur > PIVOT_TOLERANCE * (abs(c) + b * b / a)):
                raise _WrongInertia(k)
            det = a * schur
            inverse = np.array([[c, -b], [-b, a]]) / det  # Closed form 2x2 inverse
            gains[k] = -inverse @ St
            offsets[k] = -inverse @ rt
            P = Q[k] + At @ PA + St.T @ gains[k]
            P = 0.5 * (P + P.T)  # Keep symmetric against roundoff
            p = q[k] + At @ pe + St.T @ offsets[k]

        states = np.empty((n + 2, 3))
        inputs = np.empty((n + 1, 2))
        x = x_start  # Forward sweep
        for k in range(n + 1):
            states[k] = x
            if k == 0 and self.pinned:
                Rt, St, rt = first_stage
                slope = St[1] @ x + rt[1] + Rt[1, 0] * du_start
                v = np.array([du_start, -slope / Rt[1, 1]])
            else:
                v = gains[k] @ x + offsets[k]
            inputs[k] = v
            x = A @ x + B @ v + e[k]
        states[n + 1] = x

        # Costates lambda_{k+1} = P_{k+1} x_{k+1} + p_{k+1}; dynamics multipliers are -lambda
        costates = np.einsum("kij,kj->ki", P_next, states[1:]) + p_next
        y = np.empty(self.n_eq)
        y[: self.base] = -costates[:, :2].ravel()
        grad_x0 = Q[0] @ states[0] + S[0] @ inputs[0] + q[0]
        y[self.base : self.base + 2] = -(grad_x0 + At @ costates[0])[:2]
        if self.pinned:
            grad_v0 = S[0].T @ states[0] + R[0] @ inputs[0] + r[0]
            y[self.base + 2] = -(grad_v0 + Bt @ costates[0])[0]

        step = np.empty(self.size)
        step[self.iu] = inputs[:, 0]
        step[self.ia] = inputs[:, 1]
        step[self.izd] = states[:, 0]
        step[self.iz] = states[:, 1]
        return step, y


@dataclass
class _StartOutcome:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    status: SolveStatus
    iterations: int
    objective: float = float("nan")


def _max_step(values: np.ndarray, steps: np.ndarray, tau: float) -> float:
    """Largest a in (0, 1] with values + a steps >= (1 - tau) values"""

    shrinking = steps < 0
    if not np.any(shrinking):
        return 1.0
    return float(min(1.0, np.min(-tau * values[shrinking] / steps[shrinking])))


def _inf(vector: np.ndarray) -> float:
    return float(np.max(np.abs(vector))) if vector.size else 0.0


def _interior_point(
    instance: OcpInstance, kkt: _StagewiseKkt, x: np.ndarray, settings: SolveSettings
) -> _StartOutcome:
    """One primal-dual interior-point run from the scaled starting point x"""

    H, g = instance.hessian, instance.gradient
    E, f = instance.eq_matrix, instance.eq_rhs
    G, h = instance.ineq_matrix, instance.ineq_rhs
    Et, Gt = E.T.tocsr(), G.T.tocsr()

    s = np.maximum(h - G @ x, SLACK_FLOOR)  # Slacks strictly positive
    mu = settings.barrier_init
    z = mu / s  # Start on the central path
    y = np.zeros(E.shape[0])
    merit_weight = 1.0
    delta_last = 0.0
    stalled = 0
    status = SolveStatus.ITER_LIMIT
    iteration = 0

    for iteration in range(settings.max_iter + 1):
        Hx = H @ x
        r_d = Hx + g + Et @ y + Gt @ z  # Dual residual
        r_e = E @ x - f
        r_i = G @ x + s - h
        comp = s * z  # Complementarity
        primal = max(_inf(r_e), _inf(r_i))
        error = max(_inf(r_d), primal, _inf(comp))

        if not np.isfinite(error):  # Overflow in the iterate
            status = SolveStatus.NUMERICAL_FAILURE
            break
        if error <= settings.kkt_tol and mu <= settings.mu_final and primal <= FEASIBILITY_TOLERANCE:
            status = SolveStatus.OPTIMAL
            break

        while mu > settings.mu_final and max(
            _inf(r_d), primal, _inf(comp - mu)
        ) <= BARRIER_TOLERANCE_FACTOR * mu:
            # Superlinear decrease
            mu = max(settings.mu_final, min(settings.barrier_shrink * mu, mu**1.5))

        if iteration == settings.max_iter or stalled >= STALL_LIMIT:
            break

        sigma = z / s  # Barrier Hessian weights
        W = (H + Gt @ sparse.diags(sigma) @ G).tocsr()  # Condensed Hessian
        r_c = comp - mu
        g_sub = r_d - Et @ y + Gt @ ((z * r_i - r_c) / s)  # Condensed gradient
        kkt.set_hessian(W)

        delta = 0.0  # Try the unshifted system first
        while True:
            try:
                dx, y_plus = kkt.solve(g_sub, r_e, delta)
                break
            except _WrongInertia as e:
                delta = max(settings.regularization_floor, delta_last / 4) if delta == 0 else 2 * delta
                logger.debug("iteration %d: %s, delta=%.3e", iteration, e, delta)
                if delta > REGULARIZATION_CEILING:
                    logger.warning("inertia correction exceeded %.0e", REGULARIZATION_CEILING)
                    return _StartOutcome(x, y, z, SolveStatus.NUMERICAL_FAILURE, iteration)
        if delta > 0:
            delta_last = delta

        Gdx = G @ dx
        ds = -r_i - Gdx  # Recover the eliminated slack step
        dz = (z * r_i - r_c + z * Gdx) / s  # and the multiplier step
        tau = max(TAU_MIN, 1 - mu)  # Fraction to boundary tightens with mu
        a_primal = _max_step(s, ds, tau)
        a_dual = _max_step(z, dz, tau)

        # Armijo backtracking on q - mu sum log s + nu (|r_e|_1 + |r_i|_1); residuals are linear in a
        infeasibility = float(np.sum(np.abs(r_e)) + np.sum(np.abs(r_i)))
        grad_q = Hx + g
        slope_q = float(grad_q @ dx)
        curvature = float(dx @ (H @ dx))
        slope_barrier = slope_q - mu * float(np.sum(ds / s))
        merit_weight = max(merit_weight, 1.1 * max(_inf(y_plus), _inf(z + dz)))
        if infeasibility > 0 and slope_barrier - merit_weight * infeasibility >= 0:
            merit_weight = slope_barrier / infeasibility + 1.0
        descent = slope_barrier - merit_weight * infeasibility

        log_s = float(np.sum(np.log(s)))
        step = a_primal
        for _ in range(MAX_BACKTRACKS):
            change = (
                step * slope_q
                + 0.5 * step * step * curvature
                - mu * (float(np.sum(np.log(s + step * ds))) - log_s)
                - merit_weight * step * infeasibility
            )
            if change <= ARMIJO * step * descent:
                break
            step *= 0.5
        else:
            step = a_primal

        x = x + step * dx
        s = s + step * ds
        y = y + step * (y_plus - y)
        z = z + a_dual * dz
        # Keep s z near mu
        z = np.clip(z, mu / (MULTIPLIER_SAFEGUARD * s), MULTIPLIER_SAFEGUARD * mu / s)

        stalled = stalled + 1 if step < STALL_STEP else 0  # Consecutive collapsed steps
        logger.debug(
            "iteration %d: mu=%.2e error=%.3e primal=%.3e step=%.3e dual_step=%.3e delta=%.1e",
            iteration,
            mu,
            error,
            primal,
            step,
            a_dual,
            delta,
        )

    if status is SolveStatus.ITER_LIMIT:
        r_e = E @ x - f
        r_i = G @ x + s - h
        if max(_inf(r_e), _inf(r_i)) > INFEASIBILITY_THRESHOLD:  # Never became feasible
            status = SolveStatus.INFEASIBLE
    return _StartOutcome(x, y, z, status, iteration)


def _start_controls(
    instance: OcpInstance,
    warm_start: np.ndarray | None,
    start: int,
    seed: int,
    alternating: bool = False,
) -> np.ndarray:
    """Physical initial controls for one multistart run"""

    gamma = instance.config.gamma
    n_nodes = instance.config.n_steps + 1
    if warm_start is None:
        controls = np.zeros(n_nodes)
    else:
        controls = np.array(warm_start, dtype=float)
        if controls.shape != (n_nodes,):
            raise LayoutError(f"warm start needs shape ({n_nodes},), got {controls.shape}")
    if alternating:
        # +a, -a, +a, ... reaches the high-frequency optima a smooth start never sees
        controls = controls + ALTERNATING_AMPLITUDE * gamma * (-1.0) ** np.arange(n_nodes)
    elif start > 0:
        rng = np.random.default_rng([seed, start])  # One stream per start index
        controls = controls + gamma * rng.uniform(-PERTURBATION, PERTURBATION, n_nodes)
    return np.clip(controls, -START_MARGIN * gamma, START_MARGIN * gamma)


def solve(
    instance: OcpInstance,
    settings: SolveSettings | None = None,
    warm_start: np.ndarray | None = None,
) -> SolveResult:
    """
    Solve the instance from the zero-control start (or warm_start, physical controls),
    settings.multistart - 1 perturbed starts and, when settings.alternating_start is set, one
    sign-flipping start; the best converged solution is returned. Failures are reported
    through the status, never raised.
    """

    settings = settings or SolveSettings()
    started = time.process_time()
    kkt = _StagewiseKkt(instance)  # Stage blocks are reused by every start

    starts = [(index, False) for index in range(settings.multistart)]
    if settings.alternating_start:
        starts.append((settings.multistart, True))

    outcomes: list[_StartOutcome] = []
    for start, alternating in starts:
        controls = _start_controls(instance, warm_start, start, settings.seed, alternating)
        # States follow the controls
        x_start = instance.scale_point(baseline_point(instance, controls))
        outcome = _interior_point(instance, kkt, x_start, settings)
        if np.all(np.isfinite(outcome.x)):
            outcome.objective = instance.objective_value(instance.unscale_point(outcome.x))
        logger.debug(
            "start %d%s: status=%s iterations=%d objective=%.6e",
            start,
            " (alternating)" if alternating else "",
            outcome.status.value,
            outcome.iterations,
            outcome.objective,
        )
        outcomes.append(outcome)

    best = _best_outcome(outcomes)
    point = instance.unscale_point(best.x)
    multipliers = Multipliers(equality=best.y, inequality=best.z)
    finite = [o.objective for o in outcomes if np.isfinite(o.objective)]
    report = SolveReport(
        status=best.status,
        iterations=best.iterations,
        kkt_residual=kkt_residual(instance, point, multipliers),
        solve_seconds=time.process_time() - started,  # Every start counts
        objective=best.objective,
        multistart_spread=float(max(finite) - min(finite)) if finite else float("nan"),
        starts=len(starts),
    )
    logger.info(
        "solve status=%s iterations=%d objective=%.6e kkt=%.2e seconds=%.3f",
        report.status.value,
        report.iterations,
        report.objective,
        report.kkt_residual,
        report.solve_seconds,
    )
    return SolveResult(point=point, report=report, multipliers=multipliers)


def _best_outcome(outcomes: list[_StartOutcome]) -> _StartOutcome:
    """Highest objective among converged starts, then among those stopped at the iteration
    limit (reported, never applied), else the first"""

    for statuses in ((SolveStatus.OPTIMAL,), (SolveStatus.OPTIMAL, SolveStatus.ITER_LIMIT)):
        candidates = [
            o for o in outcomes if o.status in statuses and np.isfinite(o.objective)
        ]
        if candidates:
            return max(candidates, key=lambda o: o.objective)  # First of equal objectives
    return outcomes[0]


def kkt_residual(instance: OcpInstance, point: np.ndarray, multipliers: Multipliers) -> float:
    """
    Infinity norm of stationarity, primal infeasibility, dual sign and complementarity of
    the scaled problem at a physical point.
    """

    x = instance.scale_point(point)
    y, z = multipliers.equality, multipliers.inequality
    if y.shape != (instance.n_equalities,) or z.shape != (instance.n_inequalities,):
        raise LayoutError(
            f"multipliers {y.shape}/{z.shape} do not match "
            f"{instance.n_equalities}/{instance.n_inequalities} rows"
        )

    stationarity = (
        instance.hessian @ x
        + instance.gradient
        + instance.eq_matrix.T @ y
        + instance.ineq_matrix.T @ z
    )
    slack = instance.ineq_rhs - instance.ineq_matrix @ x
    return max(
        _inf(stationarity),
        _inf(instance.eq_matrix @ x - instance.eq_rhs),
        _inf(np.maximum(-slack, 0.0)),
        _inf(np.maximum(-z, 0.0)),
        _inf(z * np.maximum(slack, 0.0)),
    )


def brute_force_best(instance: OcpInstance, levels: int) -> float:
    """
    Best objective over every control sequence on an equally spaced grid of `levels`
    values in [-gamma, gamma] (just 0 when levels is 1), with the least admissible excess.
    Displacement-infeasible sequences are discarded; -inf when none is feasible.
    """

    config = instance.config
    n_nodes = config.n_steps + 1
    if n_nodes > MAX_ORACLE_NODES or not 1 <= levels <= MAX_ORACLE_LEVELS:
        raise InstanceTooLargeError(
            f"oracle handles at most {MAX_ORACLE_NODES} controls and {MAX_ORACLE_LEVELS} levels, "
            f"got {n_nodes} and {levels}"
        )

    values = np.array([0.0]) if levels == 1 else np.linspace(-config.gamma, config.gamma, levels)
    free_nodes = n_nodes - 1 if config.pinned else n_nodes
    grid = np.array(list(itertools.product(values, repeat=free_nodes))).reshape(-1, free_nodes)
    if config.pinned:
        grid = np.column_stack([np.full(len(grid), config.u_init), grid])

    model = instance.model
    states = np.tile(instance.x0.as_array(), (len(grid), 1))
    velocity, position = [states[:, 0]], [states[:, 1]]
    for k in range(n_nodes):
        states = states @ model.A.T + np.outer(grid[:, k], model.b) + model.c * instance.wave_samples[k]
        velocity.append(states[:, 0])
        position.append(states[:, 1])
    velocity = np.column_stack(velocity)
    position = np.column_stack(position)

    weights = trapezoid_weights(config.n_steps, config.dt)
    excess = np.maximum(np.abs(grid) - config.soft_bound, 0.0)
    total = (
        -(grid * velocity[:, :n_nodes]) @ weights
        - config.lambda1 * (grid**2) @ weights
        - config.lambda2 / config.dt * np.sum(np.diff(grid, axis=1) ** 2, axis=1)
        - config.rho * excess @ weights
    )
    feasible = np.all(np.abs(position) <= config.delta, axis=1)
    if not np.any(feasible):
        return float("-inf")
    return float(np.max(total[feasible]))
