"""Damped Newton solver for scalar problems

    -Delta_r w + c(x) g(x, w) = rhs(x) + K(x) w^delta,   w = 0 on the boundary,

where g is either the identity or the cut-off clamp(w, 0, w_up).  Negative
delta is handled by continuation in a positivity floor: the power term is
evaluated as K max(w, floor)^delta with the floor driven down a list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from .errors import LossOfPositivity, NonConvergence, SingularJacobian
from .mesh import (DEFAULT_EPS_GRAD, DISK, GradedMesh1D, GridFunction, eigen_profile,
                   flux, flux_derivative)

DEFAULT_FLOORS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)


def _arr(x, n) -> Optional[np.ndarray]:
    if x is None:
        return None
    a = np.asarray(x.values if isinstance(x, GridFunction) else x, dtype=float)
    return np.broadcast_to(a, (n,)).copy()


@dataclass
class ScalarProblem:
    r: float
    coeff_c: object = None
    rhs_fixed: object = None
    rhs_power: Optional[tuple] = None
    cutoff_upper: object = None
    # Dirichlet data on non-free nodes (default: zero on the boundary)
    free: Optional[np.ndarray] = None
    dirichlet: object = None

    def __post_init__(self):
        if not self.r > 1:
            raise ValueError(f"r must exceed 1, got {self.r}")
        if self.coeff_c is not None and np.any(np.asarray(
                self.coeff_c.values if isinstance(self.coeff_c, GridFunction) else self.coeff_c) < 0):
            raise ValueError("absorption coefficient must be nonnegative")

    @property
    def delta(self) -> Optional[float]:
        return None if self.rhs_power is None else float(self.rhs_power[1])


@dataclass
class SolveOptions:
    tol_residual: float = 1e-10
    max_newton: int = 200
    continuation_floors: tuple = DEFAULT_FLOORS
    damping: float = 0.5
    eps_grad: float = DEFAULT_EPS_GRAD
    max_backtracks: int = 50

    def __post_init__(self):
        fl = tuple(float(f) for f in self.continuation_floors)
        if any(f <= 0 for f in fl) or any(b >= a for a, b in zip(fl, fl[1:])):
            raise ValueError("continuation floors must be positive and strictly decreasing")
        self.continuation_floors = fl
        if not 0 < self.damping < 1:
            raise ValueError("damping factor must lie in (0, 1)")


@dataclass
class SolveReport:
    converged: bool = False
    iterations: int = 0
    residual_history: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    change_history: list = field(default_factory=list)
    shell_flags: list = field(default_factory=list)
    energy_history: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        import csv
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iter", "stage_floor", "residual"])
            for row in self.stages_rows():
                w.writerow(row)

    def stages_rows(self):
        i = 0
        for st in self.stages:
            for res in st["residuals"]:
                yield [i, f"{st['floor']:.17g}", f"{res:.17g}"]
                i += 1


class _Discrete:
    """Residual, Jacobian and energy of one problem at one floor value."""

    def __init__(self, prob: ScalarProblem, mesh: GradedMesh1D, opts: SolveOptions, floor: float):
        n = mesh.n
        self.mesh, self.r, self.eps = mesh, float(prob.r), opts.eps_grad
        self.c = _arr(prob.coeff_c, n) if prob.coeff_c is not None else np.zeros(n)
        self.rhs = _arr(prob.rhs_fixed, n) if prob.rhs_fixed is not None else np.zeros(n)
        self.cut = _arr(prob.cutoff_upper, n)
        if prob.rhs_power is not None:
            self.K = _arr(prob.rhs_power[0], n)
            self.delta = float(prob.rhs_power[1])
        else:
            self.K, self.delta = None, 0.0
        self.floor = floor
        self.free = mesh.interior.copy() if prob.free is None else np.asarray(prob.free, bool)
        self.fixed_vals = np.zeros(n) if prob.dirichlet is None else _arr(prob.dirichlet, n)
        self.K_free = None if self.K is None else self.K[self.free]

    # nonlinear pieces -------------------------------------------------
    def absorb(self, w):
        if self.cut is None:
            return self.c * w, self.c.copy()
        z = np.clip(w, 0.0, self.cut)
        dz = ((w > 0) & (w < self.cut)).astype(float)
        return self.c * z, self.c * dz

    def power(self, w):
        if self.K is None:
            return np.zeros_like(w), np.zeros_like(w)
        d = self.delta
        if d == 0.0:
            return self.K.copy(), np.zeros_like(w)
        if d < 0:
            wf = np.maximum(w, self.floor)
            # floor 0 at a zero node gives inf; zero weights contribute nothing there
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.where(self.K == 0, 0.0, self.K * wf ** d)
                der = np.where((w > self.floor) & (self.K != 0), d * self.K * wf ** (d - 1.0), 0.0)
            return val, der
        wp = np.maximum(w, 0.0)
        val = self.K * wp ** d
        der = d * self.K * np.maximum(w, 1e-300) ** (d - 1.0)
        der = np.where(w > 0, der, 0.0)
        return val, der

    def fluxes(self, w):
        m = self.mesh
        slope = np.diff(w) / m.h
        return slope, m.weights * flux(slope, self.r, self.eps)

    def lap(self, w):
        m = self.mesh
        _, q = self.fluxes(w)
        out = np.zeros(m.n)
        out[1:-1] = -(q[1:] - q[:-1]) / m.measure[1:-1]
        if m.geometry == DISK:
            out[0] = -q[0] / m.measure[0]
        qa = np.abs(q)
        mag = np.zeros(m.n)
        mag[1:-1] = (qa[1:] + qa[:-1]) / m.measure[1:-1]
        if m.geometry == DISK:
            mag[0] = qa[0] / m.measure[0]
        return out, mag

    def rounding(self, w, mag):
        """Floating-point uncertainty of the discrete operator at each node."""
        m = self.mesh
        t = m.weights * flux_derivative(np.diff(w) / m.h, self.r, self.eps) / m.h
        aw = np.abs(w)
        sens = np.zeros(m.n)
        sens[1:-1] = (t[1:] * (aw[2:] + aw[1:-1]) + t[:-1] * (aw[1:-1] + aw[:-2])) / m.measure[1:-1]
        if m.geometry == DISK:
            sens[0] = t[0] * (aw[0] + aw[1]) / m.measure[0]
        return 64.0 * np.finfo(float).eps * (mag + sens)

    def residual(self, w, with_noise=False):
        lap, mag = self.lap(w)
        g, _ = self.absorb(w)
        pw, _ = self.power(w)
        R = lap + g - self.rhs - pw
        scale = 1.0 + np.abs(self.rhs) + np.abs(pw) + np.abs(g) + mag
        R[~self.free] = 0.0
        if with_noise:
            return R, scale, self.rounding(w, mag)
        return R, scale

    def jacobian_bands(self, w):
        """Banded (3, n) Jacobian for scipy.linalg.solve_banded."""
        m = self.mesh
        n = m.n
        slope = np.diff(w) / m.h
        fd = flux_derivative(slope, self.r, self.eps)
        top = fd.max() if fd.size else 0.0
        if top > 0:
            # flat iterates with r > 2 make F' vanish; keep the system solvable
            fd = np.maximum(fd, 1e-12 * top)
        t = m.weights * fd / m.h
        V = m.measure
        diag = np.zeros(n)
        upper = np.zeros(n)
        lower = np.zeros(n)
        diag[1:-1] = (t[1:] + t[:-1]) / V[1:-1]
        upper[1:-1] = -t[1:] / V[1:-1]
        lower[1:-1] = -t[:-1] / V[1:-1]
        if m.geometry == DISK:
            diag[0] = t[0] / V[0]
            upper[0] = -t[0] / V[0]
        _, dg = self.absorb(w)
        _, dp = self.power(w)
        diag += dg - dp
        fixed = ~self.free
        diag[fixed], upper[fixed], lower[fixed] = 1.0, 0.0, 0.0
        # couplings into fixed columns do not matter: their updates are zero
        upper[:-1][fixed[1:]] = 0.0
        lower[1:][fixed[:-1]] = 0.0
        ab = np.zeros((3, n))
        ab[0, 1:] = upper[:-1]
        ab[1] = diag
        ab[2, :-1] = lower[1:]
        return ab

    def energy(self, w):
        m = self.mesh
        slope = np.diff(w) / m.h
        r = self.r
        grad = np.sum(m.weights * m.h * ((slope ** 2 + self.eps ** 2) ** (r / 2) - self.eps ** r)) / r
        if self.cut is None:
            G = 0.5 * self.c * w ** 2
        else:
            z = np.clip(w, 0.0, self.cut)
            G = self.c * (0.5 * z ** 2 + self.cut * (np.maximum(w, self.cut) - self.cut))
        vol = m.measure * self.free
        return grad + np.sum(vol * (G - self.rhs * w))


def default_initial_guess(mesh: GradedMesh1D, r: float) -> np.ndarray:
    """Poisson-like positive profile with zero boundary values."""
    phi = eigen_profile(mesh)
    return phi / max(phi.max(), 1e-300) * 0.1


def solve_linearized(prob: ScalarProblem, mesh: GradedMesh1D, w_current, opts: SolveOptions = None,
                     floor: float = 0.0, _disc: _Discrete = None):
    """One damped Newton step.  Returns (w_new, step_norm, residual_before, residual_after)."""
    opts = opts or SolveOptions()
    disc = _disc or _Discrete(prob, mesh, opts, floor)
    w = np.array(w_current.values if isinstance(w_current, GridFunction) else w_current, dtype=float)
    w[~disc.free] = disc.fixed_vals[~disc.free]
    R, scale = disc.residual(w)
    ab = disc.jacobian_bands(w)
    if not np.all(np.isfinite(ab)):
        raise SingularJacobian("non-finite Jacobian entries")
    row = np.abs(ab[1]) + np.abs(np.r_[ab[0, 1:], 0.0]) + np.abs(np.r_[0.0, ab[2, :-1]])
    if np.any(np.abs(ab[1][disc.free]) < 1e-14 * row[disc.free]):
        raise SingularJacobian("pivot below 1e-14 of its row scale")
    try:
        step = solve_banded((1, 1), ab, -R, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularJacobian(str(exc)) from exc
    if not np.all(np.isfinite(step)):
        raise SingularJacobian("Newton direction is not finite")
    step[~disc.free] = 0.0
    merit0 = float(np.linalg.norm(R / scale))
    need_pos = disc.K is not None and disc.delta != 0
    use_energy = prob.cutoff_upper is not None and prob.rhs_power is None
    E0 = disc.energy(w) if use_energy else None
    lam = 1.0
    for _ in range(opts.max_backtracks):
        cand = w + lam * step
        if need_pos and np.any(cand[disc.free] <= 0):
            lam *= opts.damping
            continue
        Rc, _ = disc.residual(cand)
        merit = float(np.linalg.norm(Rc / scale))
        ok = merit < merit0 or merit <= 1e-15 * math.sqrt(mesh.n)
        if ok and use_energy:
            E1 = disc.energy(cand)
            ok = E1 <= E0 + 1e-12 * (1.0 + abs(E0))
        if ok:
            return cand, float(np.max(np.abs(lam * step))), merit0, merit
        lam *= opts.damping
    if need_pos:
        raise LossOfPositivity("no positive damped Newton step found")
    return w, 0.0, merit0, merit0


def _scaled_sup(disc: _Discrete, w) -> float:
    # residual below its own rounding uncertainty counts as zero
    R, scale, noise = disc.residual(w, with_noise=True)
    eff = np.maximum(np.abs(R) - noise, 0.0) / scale
    return float(np.max(eff[disc.free])) if disc.free.any() else 0.0


def solve_scalar(prob: ScalarProblem, mesh: GradedMesh1D, opts: SolveOptions = None, w0=None):
    """Solve the scalar problem; returns (GridFunction, SolveReport)."""
    opts = opts or SolveOptions()
    report = SolveReport()
    if w0 is None:
        w = default_initial_guess(mesh, prob.r)
    else:
        w = np.array(w0.values if isinstance(w0, GridFunction) else w0, dtype=float)
    singular = prob.rhs_power is not None and prob.delta < 0
    if singular and not opts.continuation_floors:
        raise ValueError("negative exponents need a nonempty floor list")
    floors = opts.continuation_floors if singular else (0.0,)
    failures = 0
    last_ok = False
    track_energy = prob.cutoff_upper is not None and prob.rhs_power is None
    for floor in floors:
        disc = _Discrete(prob, mesh, opts, floor)
        w[~disc.free] = disc.fixed_vals[~disc.free]
        stage = {"floor": floor, "residuals": [], "converged": False}
        res = _scaled_sup(disc, w)
        stage["residuals"].append(res)
        if track_energy:
            report.energy_history.append(disc.energy(w))
        for _ in range(opts.max_newton):
            if res <= opts.tol_residual:
                break
            w, step, _, _ = solve_linearized(prob, mesh, w, opts, floor, _disc=disc)
            report.iterations += 1
            if track_energy:
                report.energy_history.append(disc.energy(w))
            res_new = _scaled_sup(disc, w)
            stage["residuals"].append(res_new)
            if step == 0.0:
                break
            res = res_new
        stage["converged"] = res <= opts.tol_residual
        report.stages.append(stage)
        report.residual_history.extend(stage["residuals"])
        last_ok = stage["converged"]
        failures = 0 if last_ok else failures + 1
        if failures >= 3:
            raise NonConvergence(f"residual stagnated over {failures} consecutive floors", report)
    if not last_ok:
        raise NonConvergence(
            f"final stage residual {report.residual_history[-1]:.3e} above {opts.tol_residual:.1e}", report)
    report.converged = True
    return GridFunction(mesh, w), report


def discrete_energy(prob: ScalarProblem, mesh: GradedMesh1D, w, opts: SolveOptions = None) -> float:
    disc = _Discrete(prob, mesh, opts or SolveOptions(), 0.0)
    return disc.energy(np.asarray(w.values if isinstance(w, GridFunction) else w, float))


def scaled_residual(prob: ScalarProblem, mesh: GradedMesh1D, w, opts: SolveOptions = None,
                    floor: float = 0.0) -> float:
    disc = _Discrete(prob, mesh, opts or SolveOptions(), floor)
    return _scaled_sup(disc, np.asarray(w.values if isinstance(w, GridFunction) else w, float))
