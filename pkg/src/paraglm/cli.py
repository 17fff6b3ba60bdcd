"""Command-line harness: run experiments, analyze tableaux, emit CSV diagnostics.

Exit codes: 0 success, 2 parse/config error, 3 analysis precondition
failure, 4 solver failure.
"""

import argparse
import importlib.resources
import json
import sys as _sys
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .glm import AnalysisError, load_tableau, parasitic_growth_parameters
from .integrators import (StepperConfig, glm_multistep_run, multistep_run,
                          pack_inputs, starting_value, leapfrog_tableau,
                          vector_field)
from .newton import NewtonError, NewtonStats
from .projection import ProjectionConfig, ProjectionError, projected_glm_run
from .systems import get_system
from .trajectory import Trajectory, write_csv

PROJECTION_CHOICES = ("off", "one-shot", "iterated")
ENGINE_CHOICES = ("direct", "glm")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ANALYSIS = 3
EXIT_SOLVER = 4


@dataclass
class RunConfig:
    system: str = "pendulum"
    q0: tuple = (2.3, 0.0)
    h: float = 0.1
    steps: int = 1000
    projection: str = "off"
    engine: str = "glm"
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    projection_tol: float = 1e-10
    projection_max_iter: int = 20
    out: Optional[str] = None

    def validate(self) -> None:
        if self.projection not in PROJECTION_CHOICES:
            raise ValueError(f"projection must be one of {PROJECTION_CHOICES}")
        if self.engine not in ENGINE_CHOICES:
            raise ValueError(f"engine must be one of {ENGINE_CHOICES}")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.engine == "direct" and self.projection != "off":
            raise ValueError(
                "projection is defined on the GLM formulation only; "
                "use --engine glm or --projection off")


def config_from_dict(obj: dict, base: Optional[RunConfig] = None) -> RunConfig:
    cfg = base if base is not None else RunConfig()
    known = {f.name for f in fields(RunConfig)}
    updates = {}
    for key, value in obj.items():
        if key == "notes":
            continue
        if key not in known:
            raise ValueError(f"unknown config field {key!r}")
        updates[key] = tuple(value) if key == "q0" else value
    return replace(cfg, **updates)


def load_preset(name: str) -> RunConfig:
    resource = importlib.resources.files("paraglm") / "presets" / f"{name}.json"
    if not resource.is_file():
        raise ValueError(f"unknown preset {name!r}")
    return config_from_dict(json.loads(resource.read_text()))


def run_trajectory(cfg: RunConfig) -> Trajectory:
    """Execute a run configuration and return the trajectory."""
    cfg.validate()
    sys_def = get_system(cfg.system)
    q0 = np.asarray(cfg.q0, dtype=float)
    if q0.shape != (sys_def.dim,):
        raise ValueError(
            f"q0 has {q0.size} components, system {cfg.system!r} has "
            f"dimension {sys_def.dim}")
    step_cfg = StepperConfig(h=cfg.h, newton_tol=cfg.newton_tol,
                             newton_max_iter=cfg.newton_max_iter)
    stats = NewtonStats()
    if cfg.engine == "direct":
        traj = multistep_run(sys_def, q0, step_cfg, cfg.steps, stats=stats)
    elif cfg.projection == "off":
        traj = glm_multistep_run(sys_def, q0, step_cfg, cfg.steps, stats=stats)
    else:
        q_prev = starting_value(sys_def, q0, step_cfg, stats=stats)
        state0 = pack_inputs(sys_def, q0, q_prev, cfg.h)
        proj_cfg = ProjectionConfig(mode=cfg.projection,
                                    tol=cfg.projection_tol,
                                    max_iter=cfg.projection_max_iter)
        traj = projected_glm_run(leapfrog_tableau(),
                                 lambda q: vector_field(sys_def, q),
                                 sys_def, state0, cfg.steps, proj_cfg,
                                 newton_tol=cfg.newton_tol,
                                 newton_max_iter=cfg.newton_max_iter,
                                 stats=stats)
        traj.metadata.update(system=sys_def.name, engine="glm",
                             tableau="leapfrog", newton=stats)
    traj.metadata["projection"] = cfg.projection
    return traj


def cmd_run(cfg: RunConfig, stream=None) -> int:
    stream = stream if stream is not None else _sys.stdout
    try:
        traj = run_trajectory(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except (NewtonError, ProjectionError, np.linalg.LinAlgError) as exc:
        print(f"solver failure: {exc}", file=_sys.stderr)
        return EXIT_SOLVER
    out = cfg.out if cfg.out else "trajectory.csv"
    write_csv(traj, out)
    stats = traj.metadata.get("newton")
    print(f"system={cfg.system} engine={cfg.engine} h={cfg.h} "
          f"steps={cfg.steps} projection={cfg.projection}", file=stream)
    print(f"max |H - H0| = {np.max(traj.energy_error):.17g}", file=stream)
    print(f"final |H - H0| = {traj.energy_error[-1]:.17g}", file=stream)
    if isinstance(stats, NewtonStats):
        print(f"newton: {stats.solves} solves, {stats.iterations} iterations "
              f"total, max {stats.max_iterations} per solve", file=stream)
    print(f"wrote {out} ({len(traj)} rows)", file=stream)
    return EXIT_OK


def _format_complex(z: complex) -> str:
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.10g}j"


def cmd_analyze(path: str, stream=None) -> int:
    stream = stream if stream is not None else _sys.stdout
    try:
        tab = load_tableau(path)
    except (OSError, ValueError) as exc:
        # json.JSONDecodeError subclasses ValueError and carries line info
        print(f"error: {path}: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    try:
        report = parasitic_growth_parameters(tab)
    except AnalysisError as exc:
        print(f"error: {path}: {exc}", file=_sys.stderr)
        return EXIT_ANALYSIS
    print(f"tableau: s={tab.s} stages, r={tab.r} inputs", file=stream)
    eigs = ", ".join(_format_complex(x) for x in report.eigenvalues)
    print(f"eigenvalues of V: {eigs}", file=stream)
    print(f"principal roots (eigenvalue 1): {report.principal_count}",
          file=stream)
    if report.defective:
        print("warning: defective or ill-conditioned eigenspace", file=stream)
    if not report.growth_parameters:
        print("no parasitic roots", file=stream)
    for xi, mu in report.growth_parameters:
        print(f"parasitic root xi = {_format_complex(xi)}: "
              f"mu = {_format_complex(mu)}", file=stream)
    return EXIT_OK


def parasitic_component_estimate(traj: Trajectory) -> np.ndarray:
    """Alternating second-difference estimate of the parasitic mode amplitude.

    Returns z_m = (-1)^m (q_{m+1} - 2 q_m + q_{m-1}) / 4 for the interior
    steps m = 1..n-1, aligned with ``traj.t[1:-1]``. For a solution carrying
    an oscillation c + (-1)^m a the estimate recovers |a|; on a smooth
    trajectory it is O(h^2).
    """
    if len(traj) < 3:
        raise ValueError("need at least 3 trajectory rows")
    q = traj.q
    second_diff = q[2:] - 2.0 * q[1:-1] + q[:-2]
    signs = np.where(np.arange(1, len(traj) - 1) % 2 == 0, 1.0, -1.0)
    return signs[:, None] * second_diff / 4.0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paraglm",
        description="Variational integrators for degenerate Lagrangians as "
                    "general linear methods, with parasitism control")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate a system and write CSV diagnostics")
    run.add_argument("--preset", help="named bundled configuration")
    run.add_argument("--config", help="JSON file mirroring the run configuration")
    run.add_argument("--system", help="system name (pendulum, canonical:<preset>)")
    run.add_argument("--q0", help="comma-separated initial point, e.g. 2.3,0")
    run.add_argument("--h", type=float, help="step size")
    run.add_argument("--steps", type=int, help="number of steps")
    run.add_argument("--projection", choices=PROJECTION_CHOICES)
    run.add_argument("--engine", choices=ENGINE_CHOICES)
    run.add_argument("--newton-tol", type=float, dest="newton_tol")
    run.add_argument("--newton-max-iter", type=int, dest="newton_max_iter")
    run.add_argument("--projection-tol", type=float, dest="projection_tol")
    run.add_argument("--projection-max-iter", type=int,
                     dest="projection_max_iter")
    run.add_argument("--out", help="output CSV path")

    analyze = sub.add_parser("analyze",
                             help="report eigenvalues and parasitic growth "
                                  "parameters of a tableau file")
    analyze.add_argument("tableau", help="tableau JSON file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else EXIT_OK

    if args.command == "analyze":
        return cmd_analyze(args.tableau)

    try:
        cfg = RunConfig()
        if args.preset:
            cfg = load_preset(args.preset)
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = config_from_dict(json.load(fh), base=cfg)
        overrides = {}
        for name in ("system", "h", "steps", "projection", "engine",
                     "newton_tol", "newton_max_iter", "projection_tol",
                     "projection_max_iter", "out"):
            value = getattr(args, name)
            if value is not None:
                overrides[name] = value
        if args.q0 is not None:
            overrides["q0"] = tuple(float(x) for x in args.q0.split(","))
        cfg = replace(cfg, **overrides)
        cfg.validate()
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    return cmd_run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
