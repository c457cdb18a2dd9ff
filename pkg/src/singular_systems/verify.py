"""Invariant suite behind ``verify``: each property returns (passed, detail)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .analysis import _structured_pairs, calibrate_Cr, check_comparison, peral_gap
from .errors import SolverError
from .mesh import build_mesh
from .params import SystemSpec, classify
from .scalar import ScalarProblem, solve_scalar
from .scenarios import RunConfig, Scenario, get_scenario
from .runner import classify_scenario, scenario_mesh
from .system import aux_profile, build_shell, fixed_point_iterate, monotone_scheme


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"property={self.name} status={'pass' if self.passed else 'fail'} detail={self.detail}"


def exact_plaplace_unit_rhs(x, p: float):
    """Closed-form solution of -Delta_p w = 1 on (0, 1) with zero boundary values."""
    e = p / (p - 1.0)
    return (p - 1.0) / p * (0.5 ** e - np.abs(np.asarray(x) - 0.5) ** e)


def scalar_oracle_error(p: float, n: int = 513) -> float:
    mesh = build_mesh("interval", n, 1.0)
    w, _ = solve_scalar(ScalarProblem(p, rhs_fixed=np.where(mesh.interior, 1.0, 0.0)), mesh)
    return float(np.max(np.abs(np.asarray(w.values) - exact_plaplace_unit_rhs(mesh.nodes, p))))


def prop_scalar_oracle(cfg: RunConfig):
    errs = {p: scalar_oracle_error(p) for p in (1.5, 2.0, 3.0)}
    worst = max(errs.values())
    return worst <= 1e-3, "max_error=" + ",".join(f"p{p:g}:{e:.3e}" for p, e in errs.items())


def min_peral_gap(r: float, C: float, seed: int, samples: int = 100_000) -> float:
    rng = np.random.default_rng(seed + 1)
    x = rng.uniform(-1.0, 1.0, size=(samples, 2))
    y = rng.uniform(-1.0, 1.0, size=(samples, 2))
    xs, ys = _structured_pairs()
    X, Y = np.vstack([x, xs]), np.vstack([y, ys])
    if r < 2:
        keep = (np.linalg.norm(X, axis=1) + np.linalg.norm(Y, axis=1)) > 0
        X, Y = X[keep], Y[keep]
    return float(np.min(peral_gap(X, Y, r, C)))


def prop_peral_oracle(cfg: RunConfig):
    parts = []
    ok = True
    for r in (1.5, 2.0, 3.0):
        C = calibrate_Cr(r, seed=cfg.seed)
        gap = min_peral_gap(r, C, cfg.seed)
        ok &= C > 0 and gap >= -1e-12
        if r == 2.0:
            ok &= C == 0.5
        parts.append(f"r{r:g}:C={C:.6g},min_gap={gap:.3e}")
    return ok, ";".join(parts)


def prop_comparison_verdicts(cfg: RunConfig):
    mesh = build_mesh("interval", 513, 2.0)
    psi = aux_profile(mesh, 2.0, -0.5)
    K = np.where(mesh.interior, 1.0, 0.0)
    g = lambda c: mesh.grid(c * np.asarray(psi.values))
    got = [check_comparison(g(a), psi, K, -0.5, 2.0).verdict for a in (0.9, 1.0, 1.1)]
    want = ["holds", "holds", "hypotheses not satisfied"]
    return got == want, "verdicts=" + "|".join(got)


def prop_classification(cfg: RunConfig):
    cases = [
        (SystemSpec(2, 2, 0, 0, 0.5, 0.5), "Alt2", 1.0),
        (SystemSpec(2, 2, 0, 0, -0.5, -0.5, 1.2, 1.2), "Alt1", 8.0 / 15.0),
        (SystemSpec(2, 2, 0, 0, 0.1, 0.1, 1.8, 1.8), "Coop-i", 2.0 / 9.0),
        (SystemSpec(2, 2, 0, 0, 1, 1), "Infeasible", None),
    ]
    bad = []
    for spec, tag, gamma in cases:
        rep = classify(spec)
        if rep.regime != tag or (gamma is not None and abs(rep.gamma_u - gamma) > 1e-12):
            bad.append(f"{tag}->{rep.regime}")
        sw = classify(spec.swapped())
        if sw.regime != rep.swapped().regime:
            bad.append(f"swap:{tag}")
    return not bad, "mismatches=" + (",".join(bad) if bad else "none")


def _scenario(cfg: RunConfig, default: str) -> Scenario:
    return cfg.scenario if cfg.scenario is not None else get_scenario(default)


def prop_shell_invariance(cfg: RunConfig):
    sc = _scenario(cfg, "alt2_cooperative")
    regime = classify_scenario(sc)
    if not regime.feasible:
        return False, f"scenario={sc.name} infeasible"
    mesh = scenario_mesh(sc)
    try:
        shell = build_shell(sc.spec, regime, mesh, sc.run.m_init, cfg.solver)
        sol = fixed_point_iterate(sc.spec, shell, mesh, cfg.solver, max_iter=sc.run.max_iter)
    except (SolverError, ValueError) as exc:
        return False, f"scenario={sc.name} error={type(exc).__name__}"
    ext = sol.report.extra
    ok = ext["shell_violations"] == 0 and ext["max_shell_violation"] <= 1e-9
    return ok, f"scenario={sc.name} violations={ext['shell_violations']} worst={ext['max_shell_violation']:.3e}"


def prop_monotonicity(cfg: RunConfig):
    sc = _scenario(cfg, "coop_very_weak")
    regime = classify_scenario(sc)
    if not regime.feasible:
        return False, f"scenario={sc.name} infeasible ({regime.reason})"
    mesh = scenario_mesh(sc)
    try:
        shell = build_shell(sc.spec, regime, mesh, sc.run.m_init, cfg.solver)
        sol = monotone_scheme(sc.spec, shell, mesh, sc.run.n_stages, cfg.solver, sc.run.gauss_seidel,
                              sc.run.schedule)
    except (SolverError, ValueError) as exc:
        return False, f"scenario={sc.name} error={type(exc).__name__}"
    ext = sol.report.extra
    ok = ext["max_monotonicity_drop"] <= 1e-10 and ext["shell_violations"] == 0
    return ok, f"scenario={sc.name} max_drop={ext['max_monotonicity_drop']:.3e} violations={ext['shell_violations']}"


PROPERTIES = {
    "scalar_oracle": prop_scalar_oracle,
    "peral_oracle": prop_peral_oracle,
    "comparison_verdicts": prop_comparison_verdicts,
    "classification": prop_classification,
    "shell_invariance": prop_shell_invariance,
    "monotonicity": prop_monotonicity,
}


def run_suite(cfg: RunConfig, names: Optional[tuple] = None, on_result: Callable = None) -> list:
    names = tuple(PROPERTIES) if names is None else names
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise KeyError(f"unknown properties: {', '.join(unknown)}")
    results = []
    for name in names:
        passed, detail = PROPERTIES[name](cfg)
        res = PropertyResult(name, bool(passed), detail)
        results.append(res)
        if on_result:
            on_result(res)
    return results
