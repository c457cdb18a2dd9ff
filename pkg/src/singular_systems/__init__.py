"""Finite-volume solvers and boundary-asymptotics tools for singular quasilinear elliptic systems."""

__version__ = "0.1.0"

from .errors import (DomainError, InsufficientWindow, LossOfPositivity, MonotonicityViolation,
                     NonConvergence, ShellConstructionFailure, ShellEscape, SingularJacobian,
                     SolverError)
from .karamata import LogPowerFactor, combine, eval_L, integral_L_over_t
from .mesh import GridFunction, build_mesh
from .params import (AbsorptionSpec, CompetitionSpec, RegimeReport, SystemSpec, check_subhomogeneity,
                     classify, classify_regime, find_sigma, scalar_regime)
from .scalar import ScalarProblem, SolveOptions, SolveReport, solve_scalar
from .analysis import (bracket_constants, calibrate_Cr, check_comparison, fit_boundary_exponent,
                       fit_log_correction, peral_gap)
from .system import (ConicalShell, apply_T, build_shell, fixed_point_iterate, monotone_scheme,
                     uniqueness_probe)
from .scenarios import SCENARIOS, RunConfig, ScalarSpec, Scenario, get_scenario
