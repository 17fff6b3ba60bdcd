"""Independent numerical oracles shared by the test modules.

Everything here is deliberately written from scratch (hand recursions,
central differences, classical one-step reference) so the quantities under
test are checked against code that shares nothing with the library paths.
"""

import numpy as np


def pendulum_field(q):
    """Hand-coded pendulum flow (angle rate, -sin angle)."""
    return np.array([q[1], -np.sin(q[0])])


def leapfrog_by_hand(f, q0, q_minus1, h, n):
    """Direct two-term recursion q_{m+1} = q_{m-1} + 2 h f(q_m)."""
    out = np.empty((n + 1, np.size(q0)))
    out[0] = q0
    q_prev, q_curr = np.asarray(q_minus1, float), np.asarray(q0, float)
    for m in range(1, n + 1):
        q_next = q_prev + 2.0 * h * f(q_curr)
        q_prev, q_curr = q_curr, q_next
        out[m] = q_curr
    return out


def rk4(f, q0, h, n):
    """Classical fourth-order one-step reference integrator."""
    q = np.asarray(q0, dtype=float)
    for _ in range(n):
        k1 = f(q)
        k2 = f(q + 0.5 * h * k1)
        k3 = f(q + 0.5 * h * k2)
        k4 = f(q + h * k3)
        q = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return q


def central_jacobian(func, q, eps=1e-6):
    """Central-difference Jacobian [i][j] = d func_i / d q_j."""
    q = np.asarray(q, dtype=float)
    f0 = np.asarray(func(q), dtype=float)
    jac = np.empty((f0.size, q.size))
    for j in range(q.size):
        qp, qm = q.copy(), q.copy()
        qp[j] += eps
        qm[j] -= eps
        jac[:, j] = (np.asarray(func(qp)) - np.asarray(func(qm))) / (2.0 * eps)
    return jac


def central_gradient(func, q, eps=1e-6):
    """Central-difference gradient of a scalar function."""
    q = np.asarray(q, dtype=float)
    g = np.empty(q.size)
    for j in range(q.size):
        qp, qm = q.copy(), q.copy()
        qp[j] += eps
        qm[j] -= eps
        g[j] = (func(qp) - func(qm)) / (2.0 * eps)
    return g
