"""Variational integrators for degenerate Lagrangian systems, written as
general linear methods, with parasitism analysis and energy projection."""

from .glm import (AnalysisError, GLMState, GLMTableau, ParasitismReport,
                  adams_moulton_tableau, glm_run, glm_step, growth_parameter,
                  left_eigenpairs, load_tableau, make_tableau,
                  parasitic_growth_parameters, save_tableau,
                  tableau_from_dict)
from .integrators import (DegenerateLagrangianSystem, StepperConfig,
                          d1_ld, d2_ld, del_step, discrete_lagrangian,
                          glm_multistep_run, leapfrog_tableau, multistep_run,
                          pack_inputs, starting_value, vector_field)
from .newton import NewtonError, NewtonStats, newton_solve
from .projection import (ProjectionConfig, ProjectionError,
                         project_onto_level_set, projected_glm_run)
from .systems import canonical_system, get_system, pendulum
from .trajectory import Trajectory, read_csv, write_csv

__version__ = "0.1.0"

__all__ = [
    "AnalysisError", "DegenerateLagrangianSystem", "GLMState", "GLMTableau",
    "NewtonError", "NewtonStats", "ParasitismReport", "ProjectionConfig",
    "ProjectionError", "StepperConfig", "Trajectory",
    "adams_moulton_tableau", "canonical_system", "d1_ld", "d2_ld",
    "del_step", "discrete_lagrangian", "get_system", "glm_multistep_run",
    "glm_run", "glm_step", "growth_parameter", "leapfrog_tableau",
    "left_eigenpairs", "load_tableau", "make_tableau", "multistep_run",
    "newton_solve", "pack_inputs", "parasitic_growth_parameters",
    "pendulum", "project_onto_level_set", "projected_glm_run", "read_csv",
    "save_tableau", "starting_value", "tableau_from_dict", "vector_field",
    "write_csv",
]
