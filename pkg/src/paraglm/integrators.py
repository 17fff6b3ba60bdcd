"""Two-step variational integrator for degenerate Lagrangians.

Systems here have a Lagrangian of the form ``<alpha(q), qdot> - H(q)``, so
the Euler-Lagrange equations are first order and the trapezoidal discrete
Lagrangian produces a two-step scheme. The same scheme is exposed both as
a direct multistep iteration (:func:`del_step`) and as a general linear
method (:func:`leapfrog_tableau` with :func:`pack_inputs`).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .glm import GLMState, GLMTableau, glm_run, make_tableau
from .newton import NewtonStats, newton_solve
from .trajectory import Trajectory


@dataclass(frozen=True)
class DegenerateLagrangianSystem:
    """Problem definition: the one-form coefficients alpha, their Jacobian, and H.

    ``d_alpha(q)[i][j]`` is the partial derivative of ``alpha_i`` with
    respect to ``q_j``. The noncanonical two-form matrix
    ``omega = d_alpha.T - d_alpha`` must be invertible wherever the flow is
    evaluated; this is checked at evaluation time.
    """

    dim: int
    alpha: Callable[[np.ndarray], np.ndarray]
    d_alpha: Callable[[np.ndarray], np.ndarray]
    hamiltonian: Callable[[np.ndarray], float]
    grad_h: Callable[[np.ndarray], np.ndarray]
    name: str = ""


@dataclass(frozen=True)
class StepperConfig:
    h: float
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be at least 1")


def vector_field(sys: DegenerateLagrangianSystem, q: np.ndarray) -> np.ndarray:
    """Continuous flow f(q) solving omega(q) f = grad H(q).

    Raises ``numpy.linalg.LinAlgError`` when the two-form is singular at q.
    """
    q = np.asarray(q, dtype=float)
    da = sys.d_alpha(q)
    omega = da.T - da
    try:
        return np.linalg.solve(omega, sys.grad_h(q))
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"two-form omega is singular at q={q}") from exc


def discrete_lagrangian(sys: DegenerateLagrangianSystem, q_a: np.ndarray,
                        q_b: np.ndarray, h: float) -> float:
    """Trapezoidal quadrature of the action over one step of length h."""
    q_a = np.asarray(q_a, dtype=float)
    q_b = np.asarray(q_b, dtype=float)
    dq = q_b - q_a
    kinetic = 0.5 * float((sys.alpha(q_a) + sys.alpha(q_b)) @ dq)
    return kinetic - 0.5 * h * (sys.hamiltonian(q_a) + sys.hamiltonian(q_b))


def d1_ld(sys: DegenerateLagrangianSystem, q_a: np.ndarray, q_b: np.ndarray,
          h: float) -> np.ndarray:
    """Exact derivative of the discrete Lagrangian with respect to its first slot."""
    q_a = np.asarray(q_a, dtype=float)
    q_b = np.asarray(q_b, dtype=float)
    dq = q_b - q_a
    return (0.5 * (sys.d_alpha(q_a).T @ dq - sys.alpha(q_a) - sys.alpha(q_b))
            - 0.5 * h * sys.grad_h(q_a))


def d2_ld(sys: DegenerateLagrangianSystem, q_a: np.ndarray, q_b: np.ndarray,
          h: float) -> np.ndarray:
    """Exact derivative of the discrete Lagrangian with respect to its second slot."""
    q_a = np.asarray(q_a, dtype=float)
    q_b = np.asarray(q_b, dtype=float)
    dq = q_b - q_a
    return (0.5 * (sys.d_alpha(q_b).T @ dq + sys.alpha(q_a) + sys.alpha(q_b))
            - 0.5 * h * sys.grad_h(q_b))


def del_step(sys: DegenerateLagrangianSystem, q_prev: np.ndarray,
             q_curr: np.ndarray, cfg: StepperConfig,
             stats: Optional[NewtonStats] = None) -> np.ndarray:
    """One step of the discrete Euler-Lagrange equations.

    Solves ``d_alpha(q_m).T (q_next - q_prev) = alpha(q_next) - alpha(q_prev)
    + 2h grad H(q_m)`` for ``q_next`` by Newton, started from the explicit
    predictor ``q_prev + 2h f(q_m)``. For linear alpha the predictor already
    solves the equation, so the step is effectively explicit.
    """
    q_prev = np.asarray(q_prev, dtype=float)
    q_curr = np.asarray(q_curr, dtype=float)
    h = cfg.h
    guess = q_prev + (2.0 * h) * vector_field(sys, q_curr)
    dat = sys.d_alpha(q_curr).T
    a_prev = sys.alpha(q_prev)
    rhs_const = a_prev - (2.0 * h) * sys.grad_h(q_curr)

    def residual(x):
        return dat @ (x - q_prev) - sys.alpha(x) + rhs_const

    def jac(x):
        return dat - sys.d_alpha(x)

    return newton_solve(residual, guess, tol=cfg.newton_tol,
                        max_iter=cfg.newton_max_iter, jac=jac, stats=stats)


def starting_value(sys: DegenerateLagrangianSystem, q0: np.ndarray,
                   cfg: StepperConfig,
                   stats: Optional[NewtonStats] = None) -> np.ndarray:
    """Extra initial point q_{-1} the two-step scheme needs.

    Determined by the discrete momentum condition
    ``alpha(q0) = d2_ld(q_{-1}, q0, h)``, solved by Newton from the
    backward-Euler guess ``q0 - h f(q0)``.
    """
    q0 = np.asarray(q0, dtype=float)
    a0 = sys.alpha(q0)
    guess = q0 - cfg.h * vector_field(sys, q0)
    da0_t = sys.d_alpha(q0).T

    def residual(x):
        return d2_ld(sys, x, q0, cfg.h) - a0

    def jac(x):
        return 0.5 * (sys.d_alpha(x) - da0_t)

    return newton_solve(residual, guess, tol=cfg.newton_tol,
                        max_iter=cfg.newton_max_iter, jac=jac, stats=stats)


def leapfrog_tableau() -> GLMTableau:
    """The two-step scheme y_{m+1} = y_{m-1} + 2h f(y_m) as a one-stage GLM.

    Inputs are packed as (y_m, y_{m-1}, h f(y_m), h f(y_m) + h f(y_{m-1}));
    see :func:`pack_inputs`. The fourth component is carried along by the
    output recurrence but never read (column 4 of U and V is zero).
    """
    A = [[0.0]]
    U = [[0.0, 1.0, 2.0, 0.0]]
    B = [[0.0], [0.0], [1.0], [1.0]]
    V = [[0.0, 1.0, 2.0, 0.0],
         [1.0, 0.0, 0.0, 0.0],
         [0.0, 0.0, 0.0, 0.0],
         [0.0, 0.0, 1.0, 0.0]]
    return make_tableau(A, U, B, V)


def pack_inputs(sys: DegenerateLagrangianSystem, q_curr: np.ndarray,
                q_prev: np.ndarray, h: float) -> GLMState:
    """Initial GLM input vector matching :func:`leapfrog_tableau`."""
    q_curr = np.asarray(q_curr, dtype=float)
    q_prev = np.asarray(q_prev, dtype=float)
    hf_curr = h * vector_field(sys, q_curr)
    hf_prev = h * vector_field(sys, q_prev)
    return GLMState(np.stack([q_curr, q_prev, hf_curr, hf_curr + hf_prev]),
                    h=h, m=0)


def multistep_run(sys: DegenerateLagrangianSystem, q0: np.ndarray,
                  cfg: StepperConfig, n: int,
                  stats: Optional[NewtonStats] = None) -> Trajectory:
    """Starting value, then n applications of :func:`del_step`.

    Records (t_m, q_m, H(q_m), |H(q_m) - H(q_0)|) for m = 0..n.
    """
    if n < 0:
        raise ValueError("step count must be non-negative")
    q0 = np.asarray(q0, dtype=float)
    stats = stats if stats is not None else NewtonStats()
    q = np.empty((n + 1, q0.size))
    q[0] = q0
    q_prev = starting_value(sys, q0, cfg, stats=stats)
    q_curr = q0
    for m in range(1, n + 1):
        try:
            q_next = del_step(sys, q_prev, q_curr, cfg, stats=stats)
        except (RuntimeError, ValueError) as exc:
            raise type(exc)(f"step {m}: {exc}") from exc
        q_prev, q_curr = q_curr, q_next
        q[m] = q_curr
    energy = np.array([sys.hamiltonian(q[m]) for m in range(n + 1)])
    return Trajectory(
        t=np.arange(n + 1) * cfg.h,
        q=q,
        energy=energy,
        energy_error=np.abs(energy - energy[0]),
        metadata={"system": sys.name, "h": cfg.h, "steps": n,
                  "engine": "direct", "newton": stats},
    )


def glm_multistep_run(sys: DegenerateLagrangianSystem, q0: np.ndarray,
                      cfg: StepperConfig, n: int,
                      stats: Optional[NewtonStats] = None) -> Trajectory:
    """Same run as :func:`multistep_run`, through the GLM formulation."""
    q0 = np.asarray(q0, dtype=float)
    stats = stats if stats is not None else NewtonStats()
    q_prev = starting_value(sys, q0, cfg, stats=stats)
    state0 = pack_inputs(sys, q0, q_prev, cfg.h)
    traj = glm_run(leapfrog_tableau(), lambda q: vector_field(sys, q),
                   state0, n, energy_fn=sys.hamiltonian,
                   newton_tol=cfg.newton_tol,
                   newton_max_iter=cfg.newton_max_iter, stats=stats)
    traj.metadata.update(system=sys.name, engine="glm", tableau="leapfrog",
                         newton=stats)
    return traj
