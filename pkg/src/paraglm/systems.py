"""Built-in degenerate Lagrangian systems."""

from typing import Callable

import numpy as np

from .integrators import DegenerateLagrangianSystem


def pendulum() -> DegenerateLagrangianSystem:
    """Nonlinear pendulum in first-order form, q = (angle, velocity).

    alpha(q) = (q2, 0) and H(q) = q2^2/2 - cos(q1), so the flow is
    f(q) = (q2, -sin(q1)).
    """
    da = np.array([[0.0, 1.0], [0.0, 0.0]])
    da.setflags(write=False)
    return DegenerateLagrangianSystem(
        dim=2,
        alpha=lambda q: np.array([q[1], 0.0]),
        d_alpha=lambda q: da,
        hamiltonian=lambda q: 0.5 * q[1] ** 2 - np.cos(q[0]),
        grad_h=lambda q: np.array([np.sin(q[0]), q[1]]),
        name="pendulum",
    )


def canonical_system(hamiltonian: Callable[[np.ndarray], float],
                     grad_h: Callable[[np.ndarray], np.ndarray],
                     d: int = 1,
                     name: str = "canonical") -> DegenerateLagrangianSystem:
    """Phase-space Lagrangian for a canonical Hamiltonian on R^{2d}.

    With x = (q, p) and alpha(x) = (p, 0), the induced flow is Hamilton's
    equations (qdot = dH/dp, pdot = -dH/dq).
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    n = 2 * d
    da = np.zeros((n, n))
    da[:d, d:] = np.eye(d)
    da.setflags(write=False)

    def alpha(x):
        out = np.zeros(n)
        out[:d] = x[d:]
        return out

    return DegenerateLagrangianSystem(
        dim=n, alpha=alpha, d_alpha=lambda x: da,
        hamiltonian=hamiltonian, grad_h=grad_h, name=name)


def _harmonic() -> DegenerateLagrangianSystem:
    return canonical_system(
        hamiltonian=lambda x: 0.5 * (x[0] ** 2 + x[1] ** 2),
        grad_h=lambda x: np.array([x[0], x[1]]),
        name="canonical:harmonic",
    )


def _canonical_pendulum() -> DegenerateLagrangianSystem:
    return canonical_system(
        hamiltonian=lambda x: 0.5 * x[1] ** 2 - np.cos(x[0]),
        grad_h=lambda x: np.array([np.sin(x[0]), x[1]]),
        name="canonical:pendulum",
    )


_REGISTRY = {
    "pendulum": pendulum,
    "canonical:harmonic": _harmonic,
    "canonical:pendulum": _canonical_pendulum,
}


def get_system(name: str) -> DegenerateLagrangianSystem:
    """Look up a built-in system by name ("pendulum", "canonical:<preset>")."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown system {name!r} (known: {known})") from None
    return factory()
