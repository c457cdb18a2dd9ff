"""Classify a scenario, pick the solver, run it and fit boundary exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .analysis import bracket_constants, fit_boundary_exponent, log_correction_fit
from .karamata import combine
from .mesh import GradedMesh1D, GridFunction, build_mesh
from .params import VERYWEAK, RegimeReport, classify, scalar_regime
from .scalar import SolveOptions, SolveReport
from .scenarios import RunConfig, ScalarSpec, Scenario
from .system import ConicalShell, aux_profile, build_shell, fixed_point_iterate, monotone_scheme


@dataclass(frozen=True)
class FitRow:
    component: str
    gamma_hat: float
    stderr: float
    predicted: Optional[float]

    @property
    def abs_dev(self) -> Optional[float]:
        return None if self.predicted is None else abs(self.gamma_hat - self.predicted)


@dataclass
class RunResult:
    scenario: Scenario
    regime: RegimeReport
    mesh: GradedMesh1D
    method: str
    u: GridFunction
    v: Optional[GridFunction]
    report: SolveReport
    shell: Optional[ConicalShell] = None
    fits: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)


def classify_scenario(scenario: Scenario) -> RegimeReport:
    spec = scenario.spec
    if isinstance(spec, ScalarSpec):
        return scalar_regime(spec.r, spec.k, spec.delta, spec.L)
    return classify(spec, scenario.run.epsilon)


def choose_method(scenario: Scenario, regime: RegimeReport) -> str:
    if isinstance(scenario.spec, ScalarSpec):
        return "scalar"
    if scenario.run.method != "auto":
        return scenario.run.method
    if regime.regularity == VERYWEAK and scenario.spec.cooperative:
        return "monotone"
    return "fixed_point"


def scenario_mesh(scenario: Scenario) -> GradedMesh1D:
    m = scenario.mesh
    return build_mesh(m.geometry, m.n, m.s, m.dim)


def _fit_rows(scenario: Scenario, regime: RegimeReport, comps) -> list:
    rows = []
    for name, w, gamma, ell in comps:
        f = fit_boundary_exponent(w, scenario.fit.window)
        rows.append(FitRow(name, f.gamma_hat, f.stderr, gamma))
        if scenario.fit.log_fit and ell is not None:
            lf = log_correction_fit(w, gamma, scenario.fit.log_A, scenario.fit.log_window)
            rows.append(FitRow(f"{name}_log", lf.log_exponent_hat, lf.stderr, ell))
    return rows


def run_scenario(cfg: RunConfig, regime: RegimeReport = None) -> RunResult:
    """Solve the configured scenario.  Solver exceptions propagate to the caller."""
    sc = cfg.scenario
    regime = regime or classify_scenario(sc)
    if not regime.feasible:
        raise ValueError(f"infeasible parameters: {regime.reason}")
    mesh = scenario_mesh(sc)
    method = choose_method(sc, regime)
    if method == "scalar":
        spec = sc.spec
        weight = None if spec.L.trivial else combine((spec.L, 1.0))
        w, rep = aux_profile(mesh, spec.r, spec.delta, spec.k, weight, cfg.solver or SolveOptions(),
                             return_report=True)
        res = RunResult(sc, regime, mesh, method, w, None, rep)
        res.fits = _fit_rows(sc, regime, [("u", w, regime.gamma_u, regime.log_correction_u)])
        return res

    shell = build_shell(sc.spec, regime, mesh, sc.run.m_init, cfg.solver, sc.run.max_halvings)
    shell.compensation_mode = sc.run.compensation
    if method == "monotone":
        sol = monotone_scheme(sc.spec, shell, mesh, sc.run.n_stages, cfg.solver,
                              sc.run.gauss_seidel, sc.run.schedule)
    elif method == "fixed_point":
        sol = fixed_point_iterate(sc.spec, shell, mesh, cfg.solver, sc.run.start, sc.run.max_iter,
                                  sc.run.tol, sc.run.residual_tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    res = RunResult(sc, regime, mesh, method, sol.u, sol.v, sol.report, shell)
    res.fits = _fit_rows(sc, regime, [("u", sol.u, regime.gamma_u, regime.log_correction_u),
                                      ("v", sol.v, regime.gamma_v, regime.log_correction_v)])
    if regime.epsilon_bracket:
        for name, w in (("u", sol.u), ("v", sol.v)):
            lo, hi = regime.brackets[name]
            gamma = regime.gamma_u if name == "u" else regime.gamma_v
            res.checks[f"bracket_{name}"] = bracket_constants(
                w, gamma if lo is None else lo, gamma if hi is None else hi, sc.fit.window)
    return res


def finite_or_none(x) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None
