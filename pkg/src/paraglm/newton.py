"""Dense Newton solver for the implicit stage and stepping equations."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

_FD_STEP = np.sqrt(np.finfo(float).eps)


class NewtonError(RuntimeError):
    """Raised when a Newton iteration fails to reach its residual tolerance."""


@dataclass
class NewtonStats:
    """Mutable iteration counters, shared across the solves of one run."""

    solves: int = 0
    iterations: int = 0
    max_iterations: int = 0

    def record(self, iterations: int) -> None:
        self.solves += 1
        self.iterations += iterations
        self.max_iterations = max(self.max_iterations, iterations)


def fd_jacobian(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                f0: np.ndarray) -> np.ndarray:
    """Forward-difference Jacobian of ``func`` at ``x``, column step sqrt(eps)*(1+|x_j|)."""
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        dx = _FD_STEP * (1.0 + abs(x[j]))
        xj = x.copy()
        xj[j] += dx
        jac[:, j] = (func(xj) - f0) / dx
    return jac


def newton_solve(residual: Callable[[np.ndarray], np.ndarray],
                 x0: np.ndarray,
                 tol: float = 1e-12,
                 max_iter: int = 50,
                 jac: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 stats: Optional[NewtonStats] = None) -> np.ndarray:
    """Solve residual(x) = 0 by Newton iteration from the initial guess ``x0``.

    The residual is checked before each update, so a guess that already meets
    ``tol`` is returned unchanged after zero iterations. The Jacobian is
    ``jac`` when supplied and a forward finite difference otherwise.

    Raises
    ------
    NewtonError
        If the residual does not meet ``tol`` within ``max_iter`` updates, or
        a residual evaluation turns non-finite.
    """
    x = np.array(x0, dtype=float)
    for iteration in range(max_iter + 1):
        r = residual(x)
        if not np.all(np.isfinite(r)):
            raise NewtonError(f"non-finite residual after {iteration} iterations")
        if np.max(np.abs(r)) <= tol:
            if stats is not None:
                stats.record(iteration)
            return x
        if iteration == max_iter:
            break
        j = jac(x) if jac is not None else fd_jacobian(residual, x, r)
        try:
            x = x - np.linalg.solve(j, r)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(f"singular Newton Jacobian at iteration {iteration}") from exc
    raise NewtonError(
        f"no convergence within {max_iter} iterations "
        f"(residual {np.max(np.abs(r)):.3e} > tol {tol:.3e})")
