"""Constraint-preserving integrators for the Suslov rigid body on SO(3).

The constraint kills one body angular velocity component; the adapted
integrators keep it exactly zero at machine precision while an unadapted
comparator lets it drift.  See the README for the method names and the CLI.
"""
from ._backend import BACKEND, backend_name
from .algebra import (adjoint, bracket, coadjoint, hat, rotation_defects,
                      structure_constants, validate_rotation, vee)
from .checks import CheckResult, run_check_suite
from .constraint import (SUSLOV_SPLIT, ConstraintSubspace, include_d,
                         project_d, project_dual, restrict)
from .diagnostics import (DegenerateFitError, StepDiagnostics,
                          convergence_errors, diagnose, estimate_order,
                          fit_order)
from .discretization import (DiscretizationScheme, constraint_adapted_inv,
                             cotangent_lift_inv, discretize, discretize_inv)
from .integrators import (METHODS, NewtonReport, StepFailure, StepperConfig,
                          Trajectory, normalize_method, simulate,
                          solve_velocity_cayley, solve_velocity_exp,
                          step_lp_unadapted, step_lps)
from .retraction import (RetractionKind, dtau_left, dtau_left_dual_matrix,
                         dtau_right, tau, tau_inv)
from .system import (SuslovState, SuslovSystem, exact_flow, hamiltonian,
                     vector_field)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "backend_name", "__version__",
    "hat", "vee", "bracket", "adjoint", "coadjoint", "structure_constants",
    "rotation_defects", "validate_rotation",
    "RetractionKind", "tau", "tau_inv", "dtau_left", "dtau_right",
    "dtau_left_dual_matrix",
    "ConstraintSubspace", "SUSLOV_SPLIT", "project_d", "include_d",
    "project_dual", "restrict",
    "DiscretizationScheme", "discretize", "discretize_inv",
    "cotangent_lift_inv", "constraint_adapted_inv",
    "SuslovSystem", "SuslovState", "hamiltonian", "vector_field", "exact_flow",
    "METHODS", "normalize_method", "StepperConfig", "NewtonReport",
    "StepFailure", "Trajectory", "simulate", "step_lps", "step_lp_unadapted",
    "solve_velocity_exp", "solve_velocity_cayley",
    "StepDiagnostics", "diagnose", "convergence_errors", "fit_order",
    "estimate_order", "DegenerateFitError",
    "CheckResult", "run_check_suite",
]
