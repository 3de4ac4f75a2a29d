"""Fifth-order A-WENO finite-difference schemes.

Two ways of computing the high-order correction terms are implemented side
by side: from point values of the flux (``old``) and from the finite-volume
interface fluxes already produced by the Rusanov flux pass (``new``).  The
same choice is offered for nonconservative systems through a well-balanced
flux-globalization path.
"""

from .awenocorr import NEW, OLD, SchemeConfig, correction_new, correction_old, evaluate_rhs
from .errors import (ConfigurationError, EigenError, IntegrationError, ReconstructionError,
                     StateError)
from .grid import FREE, PERIODIC, WALL, BoundarySpec, Dirichlet, Grid1D, Grid2D
from .harness import convergence_study, cpu_benchmark, l1_distance, runge_error_rate
from .models import Problem, example_catalog, get_problem
from .timeint import TimeController, run_problem, simulate, ssp_rk3_step

__version__ = "0.1.0"

__all__ = [
    "OLD", "NEW", "SchemeConfig", "correction_old", "correction_new", "evaluate_rhs",
    "ConfigurationError", "StateError", "EigenError", "ReconstructionError", "IntegrationError",
    "PERIODIC", "FREE", "WALL", "BoundarySpec", "Dirichlet", "Grid1D", "Grid2D",
    "convergence_study", "cpu_benchmark", "l1_distance", "runge_error_rate",
    "Problem", "example_catalog", "get_problem",
    "TimeController", "run_problem", "simulate", "ssp_rk3_step",
]
