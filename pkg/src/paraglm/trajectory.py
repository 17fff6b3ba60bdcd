"""Time-indexed solution records and their CSV serialization.

The CSV schema is flat and fixed: ``t, q_1..q_N, H, abs_energy_error,
projected`` with floats written at 17 significant digits so a parsed file
reproduces the in-memory values exactly.
"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np


@dataclass
class Trajectory:
    """Sequence of solution points with energy diagnostics.

    ``q[m]`` is the solution at time ``t[m] = m*h``. ``energy`` and
    ``energy_error`` are None when the run was made without an energy
    function. ``pre_projection_error`` holds the defect of each raw step
    before projection (projected runs only).
    """

    t: np.ndarray
    q: np.ndarray
    energy: Optional[np.ndarray] = None
    energy_error: Optional[np.ndarray] = None
    projected: Optional[np.ndarray] = None
    metadata: dict[str, Any] = field(default_factory=dict)
    pre_projection_error: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=float)
        self.q = np.atleast_2d(np.asarray(self.q, dtype=float))
        if self.projected is None:
            self.projected = np.zeros(len(self.t), dtype=bool)
        if len(self.t) != self.q.shape[0]:
            raise ValueError("t and q must have the same number of rows")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def dim(self) -> int:
        return self.q.shape[1]


def write_csv(traj: Trajectory, path: str) -> None:
    """Write one row per step; requires energy diagnostics to be present."""
    if traj.energy is None or traj.energy_error is None:
        raise ValueError("trajectory has no energy diagnostics to serialize")
    names = ["t"] + [f"q_{i + 1}" for i in range(traj.dim)]
    names += ["H", "abs_energy_error", "projected"]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for m in range(len(traj)):
            vals = [traj.t[m], *traj.q[m], traj.energy[m], traj.energy_error[m]]
            fh.write(",".join(f"{v:.17g}" for v in vals))
            fh.write(f",{int(traj.projected[m])}\n")


def read_csv(path: str) -> Trajectory:
    """Parse a file produced by :func:`write_csv` back into a trajectory."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        columns = header.split(",") if header else []
        q_cols = [c for c in columns if c.startswith("q_")]
        expected = ["t"] + q_cols + ["H", "abs_energy_error", "projected"]
        if not q_cols or columns != expected:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != len(columns):
                raise ValueError(
                    f"line {lineno}: {len(parts)} fields, expected {len(columns)}")
            rows.append([float(p) for p in parts])
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(columns))
    n_q = len(q_cols)
    return Trajectory(
        t=data[:, 0],
        q=data[:, 1:1 + n_q],
        energy=data[:, 1 + n_q],
        energy_error=data[:, 2 + n_q],
        projected=data[:, 3 + n_q].astype(bool),
        metadata={"source": path},
    )
