"""General linear methods: tableau representation, stepping, parasitism analysis.

A general linear method advances an r-component input vector ``y`` through
s internal stages::

    K    = h (A x I) f(K) + (U x I) y
    ynew = h (B x I) f(K) + (V x I) y

The eigenvalues of V split into principal roots (equal to 1), which carry
the consistent approximation, and parasitic roots, whose perturbations are
amplified at a rate governed by the growth parameters mu_i reported here.
"""

import json
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .newton import NewtonStats, newton_solve
from .trajectory import Trajectory

PRINCIPAL_TOL = 1e-8

VectorField = Callable[[np.ndarray], np.ndarray]


class AnalysisError(RuntimeError):
    """Raised when a tableau fails a precondition of the parasitism analysis."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GLMTableau:
    """The four characteristic matrices of a general linear method.

    A is s x s, U is s x r, B is r x s and V is r x r. Instances are
    immutable; build them through :func:`make_tableau`.
    """

    A: np.ndarray
    U: np.ndarray
    B: np.ndarray
    V: np.ndarray

    @property
    def s(self) -> int:
        return self.A.shape[0]

    @property
    def r(self) -> int:
        return self.V.shape[0]


def _as_matrix(value, name: str) -> np.ndarray:
    try:
        m = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not a rectangular numeric matrix") from exc
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    return m


def make_tableau(A, U, B, V) -> GLMTableau:
    """Validate the four matrices and assemble a tableau.

    The stage count s and input count r are inferred from A and V. Shape
    mismatches among the matrices and non-finite entries are rejected.
    """
    mats = {name: _as_matrix(val, name) for name, val in
            (("A", A), ("U", U), ("B", B), ("V", V))}
    s = mats["A"].shape[0]
    r = mats["V"].shape[0]
    expected = {"A": (s, s), "U": (s, r), "B": (r, s), "V": (r, r)}
    for name, shape in expected.items():
        if mats[name].shape != shape:
            raise ValueError(
                f"{name} has shape {mats[name].shape}, expected {shape} "
                f"for s={s}, r={r}")
        if not np.all(np.isfinite(mats[name])):
            raise ValueError(f"{name} contains non-finite entries")
    return GLMTableau(**{k: _readonly(v) for k, v in mats.items()})


def adams_moulton_tableau(betas) -> GLMTableau:
    """Adams-Moulton method with weights (beta_0, ..., beta_k) as a GLM.

    One stage, k+1 inputs (the previous solution value followed by the k
    stored values of h*f). ``betas=(0.5, 0.5)`` gives the trapezoidal rule.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size < 2:
        raise ValueError("need at least (beta_0, beta_1)")
    k = betas.size - 1
    r = k + 1
    A = [[betas[0]]]
    U = np.empty((1, r))
    U[0, 0] = 1.0
    U[0, 1:] = betas[1:]
    B = np.zeros((r, 1))
    B[0, 0] = betas[0]
    B[1, 0] = 1.0
    V = np.zeros((r, r))
    V[0] = U[0]
    for i in range(2, r):
        V[i, i - 1] = 1.0
    return make_tableau(A, U, B, V)


@dataclass(frozen=True)
class GLMState:
    """The r input vectors of a method at step ``m``, stacked as an (r, N) array."""

    components: np.ndarray
    h: float
    m: int = 0

    def __post_init__(self) -> None:
        comps = np.atleast_2d(np.asarray(self.components, dtype=float))
        object.__setattr__(self, "components", _readonly(comps))
        if not self.h > 0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if self.m < 0:
            raise ValueError(f"step index must be non-negative, got {self.m}")

    @property
    def r(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]


def _eval_field(f: VectorField, q: np.ndarray, n: int) -> np.ndarray:
    out = np.asarray(f(q), dtype=float)
    if out.shape != (n,):
        raise ValueError(f"vector field returned shape {out.shape}, expected ({n},)")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"vector field returned non-finite values at q={q}")
    return out


def _is_strictly_lower(A: np.ndarray) -> bool:
    return not np.any(np.triu(A) != 0.0)


def _is_lower(A: np.ndarray) -> bool:
    return not np.any(np.triu(A, k=1) != 0.0)


def glm_step(tab: GLMTableau, f: VectorField, state: GLMState, *,
             jac: Optional[Callable[[np.ndarray], np.ndarray]] = None,
             newton_tol: float = 1e-12, newton_max_iter: int = 50,
             stats: Optional[NewtonStats] = None) -> GLMState:
    """Advance one step of the method.

    The stage values solve K = h(A x I)f(K) + (U x I)y. A strictly lower
    triangular A is swept explicitly; a lower triangular A is solved one
    stage at a time by Newton; a full A is solved as one coupled Newton
    system. ``jac`` is the Jacobian of ``f`` for the implicit branches,
    finite differences when omitted.
    """
    if state.r != tab.r:
        raise ValueError(f"state has {state.r} components, tableau expects {tab.r}")
    y = state.components
    h, n = state.h, state.dim
    uy = tab.U @ y
    F = np.empty((tab.s, n))

    if _is_strictly_lower(tab.A):
        for i in range(tab.s):
            k_i = uy[i]
            for j in range(i):
                if tab.A[i, j] != 0.0:
                    k_i = k_i + (h * tab.A[i, j]) * F[j]
            F[i] = _eval_field(f, k_i, n)
    elif _is_lower(tab.A):
        for i in range(tab.s):
            base = uy[i]
            for j in range(i):
                if tab.A[i, j] != 0.0:
                    base = base + (h * tab.A[i, j]) * F[j]
            a_ii = tab.A[i, i]
            if a_ii == 0.0:
                F[i] = _eval_field(f, base, n)
                continue

            def residual(k):
                return k - (h * a_ii) * _eval_field(f, k, n) - base

            jac_i = None
            if jac is not None:
                jac_i = lambda k: np.eye(n) - (h * a_ii) * np.asarray(jac(k))
            k_i = newton_solve(residual, base, tol=newton_tol,
                               max_iter=newton_max_iter, jac=jac_i, stats=stats)
            F[i] = _eval_field(f, k_i, n)
    else:
        def residual(k_flat):
            K = k_flat.reshape(tab.s, n)
            for i in range(tab.s):
                F[i] = _eval_field(f, K[i], n)
            return (K - h * (tab.A @ F) - uy).ravel()

        jac_full = None
        if jac is not None:
            def jac_full(k_flat):
                K = k_flat.reshape(tab.s, n)
                J = np.eye(tab.s * n)
                for i in range(tab.s):
                    for j in range(tab.s):
                        if tab.A[i, j] != 0.0:
                            block = (h * tab.A[i, j]) * np.asarray(jac(K[j]))
                            J[i * n:(i + 1) * n, j * n:(j + 1) * n] -= block
                return J

        k_flat = newton_solve(residual, uy.ravel(), tol=newton_tol,
                              max_iter=newton_max_iter, jac=jac_full, stats=stats)
        K = k_flat.reshape(tab.s, n)
        for i in range(tab.s):
            F[i] = _eval_field(f, K[i], n)

    out = h * (tab.B @ F) + tab.V @ y
    return GLMState(out, h=h, m=state.m + 1)


def glm_run(tab: GLMTableau, f: VectorField, state0: GLMState, n: int,
            energy_fn: Optional[Callable[[np.ndarray], float]] = None,
            **step_kwargs):
    """Iterate :func:`glm_step` n times, recording the first output component.

    Returns a trajectory of the points y_1 at times m*h for m = 0..n, with
    energy diagnostics when ``energy_fn`` is given.
    """
    if n < 0:
        raise ValueError("step count must be non-negative")
    q = np.empty((n + 1, state0.dim))
    q[0] = state0.components[0]
    state = state0
    for m in range(1, n + 1):
        try:
            state = glm_step(tab, f, state, **step_kwargs)
        except (RuntimeError, ValueError) as exc:
            raise type(exc)(f"step {m}: {exc}") from exc
        q[m] = state.components[0]
    t = (state0.m + np.arange(n + 1)) * state0.h
    energy = energy_error = None
    if energy_fn is not None:
        energy = np.array([energy_fn(q[m]) for m in range(n + 1)])
        energy_error = np.abs(energy - energy[0])
    return Trajectory(t=t, q=q, energy=energy, energy_error=energy_error,
                      metadata={"h": state0.h, "steps": n})


def _left_eigensystem(V: np.ndarray, principal_tol: float):
    """All left eigenpairs of V, principal roots first, with a defectiveness flag.

    The flag covers repeated nonzero eigenvalues whose eigenvector set is
    rank deficient; nilpotent blocks (eigenvalue 0) are ignored, since their
    components are annihilated each step rather than amplified.
    """
    V = np.asarray(V, dtype=float)
    vals, vecs = np.linalg.eig(V.T)
    vals = vals.astype(complex)
    pairs = []
    for i in range(vals.size):
        w = np.conj(vecs[:, i]).astype(complex)
        w = w / np.linalg.norm(w)
        pairs.append((vals[i], w))

    def rank(item):
        xi = item[0]
        return (0 if abs(xi - 1.0) <= principal_tol else 1, -abs(xi))

    pairs.sort(key=rank)

    max_residual = max(
        float(np.linalg.norm(np.conj(w) @ V - xi * np.conj(w)))
        for xi, w in pairs)
    defective = max_residual > 1e-10
    # repeated nonzero eigenvalues with a rank-deficient eigenvector set
    unassigned = [i for i in range(len(pairs))
                  if abs(pairs[i][0]) > principal_tol]
    while unassigned:
        i = unassigned.pop(0)
        group = [i]
        for j in list(unassigned):
            if abs(pairs[i][0] - pairs[j][0]) <= principal_tol:
                group.append(j)
                unassigned.remove(j)
        if len(group) > 1:
            W = np.stack([pairs[g][1] for g in group])
            if np.linalg.svd(W, compute_uv=False)[-1] < 1e-8:
                defective = True
    return pairs, defective, max_residual


def left_eigenpairs(V, principal_tol: float = PRINCIPAL_TOL):
    """Eigenvalues of V with unit-norm left eigenvectors w, w* V = xi w*.

    Pairs with an eigenvalue equal to 1 within ``principal_tol`` come first,
    the rest follow by decreasing magnitude. A defective eigenspace is
    reported through a warning, not an error.
    """
    pairs, defective, max_residual = _left_eigensystem(
        _as_matrix(V, "V"), principal_tol)
    if defective:
        warnings.warn(
            f"defective or ill-conditioned eigenspace "
            f"(max left residual {max_residual:.3e})", RuntimeWarning,
            stacklevel=2)
    return pairs


def growth_parameter(tab: GLMTableau, xi: complex, w: np.ndarray) -> complex:
    """Growth parameter mu = xi^-1 w* B U w for one parasitic root.

    ``w`` is normalized to unit 2-norm before use, so any rescaling of the
    input eigenvector leaves the result unchanged.
    """
    w = np.asarray(w, dtype=complex)
    w = w / np.linalg.norm(w)
    return complex(np.vdot(w, (tab.B @ tab.U) @ w) / xi)


@dataclass(frozen=True)
class ParasitismReport:
    """Eigenstructure of V and the growth parameters of its parasitic roots.

    ``growth_parameters`` holds one (xi, mu) pair per parasitic root;
    principal roots (xi = 1) and nilpotent roots (xi = 0, whose components
    are annihilated each step) carry no growth parameter.
    """

    eigenvalues: tuple
    left_eigenvectors: tuple
    growth_parameters: tuple
    principal_count: int
    defective: bool = False


def parasitic_growth_parameters(tab: GLMTableau,
                                principal_tol: float = PRINCIPAL_TOL,
                                zero_tol: float = PRINCIPAL_TOL) -> ParasitismReport:
    """Compute mu_i = xi_i^-1 w_i* B U w_i for every parasitic root of V.

    Raises
    ------
    AnalysisError
        If no eigenvalue of V equals 1 within ``principal_tol`` (the method
        is not preconsistent).
    """
    pairs, defective, _ = _left_eigensystem(tab.V, principal_tol)
    principal_count = sum(1 for xi, _ in pairs if abs(xi - 1.0) <= principal_tol)
    if principal_count == 0:
        raise AnalysisError(
            "V has no eigenvalue equal to 1: the method is inconsistent")
    growth = []
    for xi, w in pairs:
        if abs(xi - 1.0) <= principal_tol or abs(xi) <= zero_tol:
            continue
        growth.append((xi, growth_parameter(tab, xi, w)))
    return ParasitismReport(
        eigenvalues=tuple(xi for xi, _ in pairs),
        left_eigenvectors=tuple(_readonly_complex(w) for _, w in pairs),
        growth_parameters=tuple(growth),
        principal_count=principal_count,
        defective=defective,
    )


def _readonly_complex(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


TABLEAU_FIELDS = ("s", "r", "A", "U", "B", "V")


def tableau_from_dict(obj: dict) -> GLMTableau:
    """Build a tableau from the JSON document layout.

    The document must carry "s", "r" and the four matrices as arrays of
    row arrays. Missing fields, ragged rows and shape/count mismatches are
    rejected.
    """
    missing = [k for k in TABLEAU_FIELDS if k not in obj]
    if missing:
        raise ValueError(f"missing tableau field(s): {', '.join(missing)}")
    for name in ("A", "U", "B", "V"):
        rows = obj[name]
        if not isinstance(rows, list) or not rows or \
                not all(isinstance(row, list) for row in rows):
            raise ValueError(f"field {name!r} must be a non-empty list of rows")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(
                    f"field {name!r}: row {i} has {len(row)} entries, "
                    f"row 0 has {width} (ragged matrix)")
    tab = make_tableau(obj["A"], obj["U"], obj["B"], obj["V"])
    if tab.s != obj["s"] or tab.r != obj["r"]:
        raise ValueError(
            f"declared s={obj['s']}, r={obj['r']} do not match matrix "
            f"shapes (s={tab.s}, r={tab.r})")
    return tab


def load_tableau(path: str) -> GLMTableau:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("tableau file must contain a JSON object")
    return tableau_from_dict(obj)


def save_tableau(tab: GLMTableau, path: str) -> None:
    obj = {"s": tab.s, "r": tab.r,
           "A": tab.A.tolist(), "U": tab.U.tolist(),
           "B": tab.B.tolist(), "V": tab.V.tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
