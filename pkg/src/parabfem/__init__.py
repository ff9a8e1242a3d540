"""Linearized backward-Euler Galerkin FEM for nonlinear parabolic problems."""

from .basis import QuadratureRule, ReferenceElement, quadrature
from .harness import ConvergenceReport, StudyConfig, plateau_check, run_study
from .mesh import (Mesh, element_geometry, unit_cube_mesh, unit_disk_mesh,
                   unit_square_mesh)
from .norms import ErrorPair, error_norms, observed_rate
from .problem import (FdStencil, ProblemSpec, example_1, example_2, example_3,
                      manufactured_forcing)
from .scheme import (DiscreteState, EllipticityError, SolverError, advance,
                     assemble_step_A, assemble_step_B, initialize, with_tau)
from .space import FunctionSpace
from .sparse import (SolveStats, SparseMatrix, apply_dirichlet,
                     assemble_from_triplets, cg_solve)

__all__ = [
    "Mesh", "unit_square_mesh", "unit_cube_mesh", "unit_disk_mesh",
    "element_geometry", "ReferenceElement", "QuadratureRule", "quadrature",
    "FunctionSpace", "SparseMatrix", "SolveStats", "assemble_from_triplets",
    "apply_dirichlet", "cg_solve", "ProblemSpec", "FdStencil",
    "manufactured_forcing", "example_1", "example_2", "example_3",
    "DiscreteState", "initialize", "assemble_step_A", "assemble_step_B",
    "advance", "with_tau", "EllipticityError", "SolverError",
    "ErrorPair", "error_norms", "observed_rate",
    "StudyConfig", "ConvergenceReport", "run_study", "plateau_check",
]
