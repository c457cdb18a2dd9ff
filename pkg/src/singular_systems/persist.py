"""Run artifacts: solution.csv, convergence.csv, fits.csv and manifest.json."""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .runner import RunResult
from .scenarios import RunConfig


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return f"{x:.17g}" if math.isfinite(x) else ""


def jsonable(obj):
    """Plain JSON types; non-finite floats become strings so the file stays valid JSON."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        fam = getattr(obj, "family", None)
        if isinstance(fam, str) and "family" not in out:
            out["family"] = fam
        return out
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_solution(path: Path, res: RunResult) -> None:
    mesh = res.mesh
    u = np.asarray(res.u.values, float)
    v = None if res.v is None else np.asarray(res.v.values, float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node", "x", "d", "u", "v"])
        for i in range(mesh.n):
            w.writerow([i, fmt(mesh.nodes[i]), fmt(mesh.d[i]), fmt(u[i]), "" if v is None else fmt(v[i])])


def convergence_rows(res: RunResult):
    rep = res.report
    if res.v is None:
        # scalar Newton: one row per step, no second component
        return [(i, r, None, None) for i, r in enumerate(rep.residual_history)]
    rows = []
    for i, (r, ch) in enumerate(zip(rep.residual_history, rep.change_history)):
        rows.append((i if res.method == "fixed_point" else i + 1, r[0], r[1], ch))
    return rows


def write_convergence(path: Path, res: RunResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "res_u", "res_v", "change"])
        for it, ru, rv, ch in convergence_rows(res):
            w.writerow([it, fmt(ru), fmt(rv), fmt(ch)])


def write_fits(path: Path, res: RunResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component", "gamma_hat", "stderr", "predicted", "abs_dev"])
        for f in res.fits:
            w.writerow([f.component, fmt(f.gamma_hat), fmt(f.stderr), fmt(f.predicted), fmt(f.abs_dev)])


def manifest(cfg: RunConfig, res: RunResult) -> dict:
    sc = res.scenario
    rep = res.report
    out = {
        "version": __version__,
        "scenario": sc.name,
        "description": sc.description,
        "seed": cfg.seed,
        "overrides": cfg.overrides,
        "spec": sc.spec,
        "mesh": sc.mesh,
        "run": sc.run,
        "fit": sc.fit,
        "solver": cfg.solver,
        "method": res.method,
        "regime": res.regime.as_dict(),
        "converged": rep.converged,
        "iterations": rep.iterations,
        "final_residuals": rep.extra.get("final_residuals",
                                         rep.residual_history[-1:] if res.v is None else None),
        "fits": [dict(dataclasses.asdict(f), abs_dev=f.abs_dev) for f in res.fits],
        "checks": res.checks,
    }
    if res.shell is not None:
        sh = res.shell
        out["shell"] = {"m": sh.m, "sigma": sh.sigma, "halvings": sh.halvings,
                        "margins": sh.margins.as_dict() if sh.margins else None,
                        "compensation_mode": sh.compensation_mode}
        for key in ("kappa", "max_shell_violation", "shell_violations", "max_monotonicity_drop",
                    "final_cutoff", "start", "schedule", "gauss_seidel"):
            if key in rep.extra:
                out[key] = rep.extra[key]
    return jsonable(out)


def write_run(out_dir, cfg: RunConfig, res: RunResult) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_solution(out / "solution.csv", res)
    write_convergence(out / "convergence.csv", res)
    write_fits(out / "fits.csv", res)
    write_manifest(out / "manifest.json", manifest(cfg, res))
    return out


def write_manifest(path: Path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
