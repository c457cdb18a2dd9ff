"""Shell construction, the compensated fixed-point map T, Picard iteration,
the cooperative expanding-domain scheme and the uniqueness probe.

Each equation of a system is stored as a sum of monomials
coef(x) * own^e_own * other^e_other, where "own" is the unknown of that
equation (u for the first, v for the second).  This covers the power,
absorption and competition families and makes derivatives, corner
evaluations and compensation constants generic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (DomainError, MonotonicityViolation, NonConvergence, ShellConstructionFailure,
                     ShellEscape)
from .karamata import combine, eval_L_unchecked
from .mesh import GradedMesh1D, GridFunction, eigen_profile
from .params import AbsorptionSpec, CompetitionSpec, RegimeReport, SystemSpec, scalar_regime
from .scalar import ScalarProblem, SolveOptions, SolveReport, scaled_residual, solve_scalar

SHELL_TOL = 1e-9
ESCAPE_TOL = 1e-6
MONO_TOL = 1e-10
KAPPA_SAFETY = 1.1
# T solves are scaled by |f| + c u, which dwarfs the system scale when c is large
T_TOL = 1e-12
STARTS = ("LowerCorner", "UpperCorner", "Midpoint")


def _vals(x) -> np.ndarray:
    return np.asarray(x.values if isinstance(x, GridFunction) else x, dtype=float)


def _interior_weight(mesh: GradedMesh1D, fn) -> np.ndarray:
    out = np.zeros(mesh.n)
    inner = mesh.interior
    out[inner] = fn(mesh.d[inner])
    return out


# nonlinearities ------------------------------------------------------------

@dataclass
class Term:
    coef: np.ndarray
    e_own: float
    e_other: float


@dataclass
class Nonlinearity:
    """Right-hand sides of both equations on a fixed mesh."""
    mesh: GradedMesh1D
    terms: tuple          # (terms of f1, terms of f2)
    r: tuple              # (p, q)

    def _eval(self, terms, own, other, mask):
        out = np.zeros(self.mesh.n)
        o, t = own[mask], other[mask]
        for tm in terms:
            val = tm.coef[mask]
            if tm.e_own:
                val = val * o ** tm.e_own
            if tm.e_other:
                val = val * t ** tm.e_other
            out[mask] += val
        return out

    def f(self, comp: int, u, v) -> np.ndarray:
        """f1(x, u, v) for comp 0, f2(x, u, v) for comp 1; zero on the boundary."""
        u, v = _vals(u), _vals(v)
        own, other = (u, v) if comp == 0 else (v, u)
        return self._eval(self.terms[comp], own, other, self.mesh.interior)

    def need(self, comp: int, own_lo, own_up, oth_lo, oth_up) -> np.ndarray:
        """Nodewise bound of |df/d own| over the shell, term by term at the corners."""
        mask = self.mesh.interior
        total = np.zeros(self.mesh.n)
        corners_own = (_vals(own_lo)[mask], _vals(own_up)[mask])
        corners_oth = (_vals(oth_lo)[mask], _vals(oth_up)[mask])
        for tm in self.terms[comp]:
            if tm.e_own == 0:
                continue
            best = np.zeros(mask.sum())
            for o in corners_own:
                for t in corners_oth:
                    val = np.abs(tm.coef[mask] * tm.e_own) * o ** (tm.e_own - 1.0)
                    if tm.e_other:
                        val = val * t ** tm.e_other
                    best = np.maximum(best, val)
            total[mask] += best
        return total

    def d_exponent(self, comp: int, g_own: float, g_other: float, k_own: float = 0.0) -> Optional[float]:
        """Predicted power of d in |df/d own| when own ~ d^g_own, other ~ d^g_other."""
        exps = [-k_own + (tm.e_own - 1.0) * g_own + tm.e_other * g_other
                for tm in self.terms[comp] if tm.e_own != 0]
        return min(exps) if exps else None

    def cooperative(self) -> bool:
        for comp in (0, 1):
            signs = [np.sign(np.max(tm.coef)) * np.sign(tm.e_other) for tm in self.terms[comp] if tm.e_other]
            if not signs or min(signs) <= 0:
                return False
        return True


def _power_weight(mesh, k, L):
    return _interior_weight(mesh, lambda d: d ** (-k) * eval_L_unchecked(L, d))


def build_nonlinearity(spec, mesh: GradedMesh1D) -> Nonlinearity:
    ones = _interior_weight(mesh, lambda d: np.ones_like(d))
    if isinstance(spec, SystemSpec):
        t1 = (Term(_power_weight(mesh, spec.k1, spec.L1), spec.a1, spec.b1),)
        t2 = (Term(_power_weight(mesh, spec.k2, spec.L2), spec.a2, spec.b2),)
    elif isinstance(spec, AbsorptionSpec):
        t1 = (Term(ones, spec.a1, spec.b1), Term(-ones, spec.alpha1, spec.beta1))
        t2 = (Term(ones, spec.a2, spec.b2), Term(-ones, spec.alpha2, spec.beta2))
    elif isinstance(spec, CompetitionSpec):
        t1 = (Term(spec.lambda1 * ones, spec.alpha1, 0.0), Term(-ones, spec.beta1, 0.0),
              Term(-spec.mu1 * ones, spec.a1, spec.b1))
        t2 = (Term(spec.lambda2 * ones, spec.alpha2, 0.0), Term(-ones, spec.beta2, 0.0),
              Term(-spec.mu2 * ones, spec.a2, spec.b2))
    else:
        raise TypeError(f"unsupported spec type {type(spec).__name__}")
    return Nonlinearity(mesh, (t1, t2), (float(spec.p), float(spec.q)))


# profiles ------------------------------------------------------------------

def power_profile(mesh: GradedMesh1D, r: float, gamma: float, opts: SolveOptions = None) -> GridFunction:
    """Solution of -Delta_r W = d^{gamma (r-1) - r}, which behaves like d^gamma.

    Stands in for powers of the first eigenfunction; needs 1 - 1/r < gamma < 1.
    """
    if not 1.0 - 1.0 / r < gamma < 1.0:
        raise DomainError(f"profile exponent {gamma} outside (1 - 1/r, 1) for r = {r}")
    rhs = _interior_weight(mesh, lambda d: d ** (gamma * (r - 1.0) - r))
    w, _ = solve_scalar(ScalarProblem(r, rhs_fixed=rhs), mesh, opts)
    return w


def aux_profile(mesh: GradedMesh1D, r: float, delta: float, k: float = 0.0, weight=None,
                opts: SolveOptions = None, return_report: bool = False):
    """Positive solution of -Delta_r w = d^{-k} weight(d) w^delta.

    Newton starts from a profile with the predicted boundary power, which keeps
    strongly singular weights inside the basin of attraction on graded meshes.
    """
    gamma = scalar_regime(r, k, delta).gamma_u
    phi = eigen_profile(mesh)
    if gamma < 1.0:
        # amplitude of the exact power solution near a flat boundary
        amp = (gamma ** (r - 1.0) * (1.0 - gamma) * (r - 1.0)) ** (-1.0 / (r - 1.0 - delta))
        w0 = amp * phi ** gamma
    else:
        w0 = 0.1 * phi / phi.max()
    if weight is None:
        K = _interior_weight(mesh, lambda d: d ** (-k))
    else:
        K = _interior_weight(mesh, lambda d: d ** (-k) * weight(d))
    w, rep = solve_scalar(ScalarProblem(r, rhs_power=(K, delta)), mesh, opts, w0=w0)
    return (w, rep) if return_report else w


# shells --------------------------------------------------------------------

@dataclass
class ConicalShell:
    u_low: GridFunction
    u_up: GridFunction
    v_low: GridFunction
    v_up: GridFunction
    m: float
    sigma: float
    gammas: tuple = (1.0, 1.0)
    margins: Optional["ShellMargins"] = None
    profiles: dict = field(default_factory=dict, repr=False)
    halvings: int = 0
    # "nodewise": c = 1.1 max|df/d own|; "power": c = kappa d^e with one kappa
    compensation_mode: str = "nodewise"

    def __post_init__(self):
        for g in (self.u_low, self.u_up, self.v_low, self.v_up):
            if np.any(_vals(g)[g.mesh.boundary] != 0):
                raise ValueError("shell bounds must vanish on the boundary")

    @property
    def mesh(self) -> GradedMesh1D:
        return self.u_low.mesh

    def contains(self, u, v, tol: float = SHELL_TOL) -> bool:
        return self.violation(u, v) <= tol

    def violation(self, u, v) -> float:
        """Largest relative excursion of (u, v) outside the shell."""
        worst = 0.0
        for x, lo, hi in ((u, self.u_low, self.u_up), (v, self.v_low, self.v_up)):
            x, lo, hi = _vals(x), _vals(lo), _vals(hi)
            below = (lo - x) / (1.0 + np.abs(lo))
            above = (x - hi) / (1.0 + np.abs(hi))
            worst = max(worst, float(np.max(below)), float(np.max(above)))
        return worst

    def corner(self, start: str):
        if start == "LowerCorner":
            return self.u_low, self.v_low
        if start == "UpperCorner":
            return self.u_up, self.v_up
        if start == "Midpoint":
            mesh = self.mesh
            return (GridFunction(mesh, np.sqrt(_vals(self.u_low) * _vals(self.u_up))),
                    GridFunction(mesh, np.sqrt(_vals(self.v_low) * _vals(self.v_up))))
        raise ValueError(f"unknown start {start!r}; expected one of {STARTS}")


@dataclass
class ShellMargins:
    sub_u: float
    sub_v: float
    super_u: float
    super_v: float
    ordered: bool = True

    @property
    def values(self) -> tuple:
        return (self.sub_u, self.sub_v, self.super_u, self.super_v)

    @property
    def ok(self) -> bool:
        return self.ordered and min(self.values) >= 0.0

    def as_dict(self) -> dict:
        return {"sub_u": self.sub_u, "sub_v": self.sub_v, "super_u": self.super_u,
                "super_v": self.super_v, "ordered": self.ordered}


def _laplacian(mesh, w, r, eps_grad):
    from .mesh import neg_r_laplacian
    return neg_r_laplacian(mesh, _vals(w), r, eps_grad)


def verify_subsuper(shell: ConicalShell, spec, mesh: GradedMesh1D = None,
                    eps_grad: float = SolveOptions().eps_grad) -> ShellMargins:
    """Minimum scaled margin of each sub/supersolution inequality over interior nodes.

    The opposite component is taken at whichever end of its interval is
    least favourable, nodewise.
    """
    mesh = mesh or shell.mesh
    nl = build_nonlinearity(spec, mesh)
    inner = mesh.interior

    def margin(comp, w, others, sub):
        lap = _laplacian(mesh, w, nl.r[comp], eps_grad)
        vals = [nl.f(comp, w, o) if comp == 0 else nl.f(comp, o, w) for o in others]
        f = np.minimum(*vals) if sub else np.maximum(*vals)
        gap = (f - lap) if sub else (lap - f)
        scaled = gap / (1.0 + np.abs(f) + np.abs(lap))
        return float(np.min(scaled[inner]))

    ordered = bool(np.all(_vals(shell.u_low) <= _vals(shell.u_up))
                   and np.all(_vals(shell.v_low) <= _vals(shell.v_up)))
    vs = (shell.v_low, shell.v_up)
    us = (shell.u_low, shell.u_up)
    return ShellMargins(margin(0, shell.u_low, vs, True), margin(1, shell.v_low, us, True),
                        margin(0, shell.u_up, vs, False), margin(1, shell.v_up, us, False), ordered)


def _component_profiles(spec, regime: RegimeReport, mesh: GradedMesh1D, opts: SolveOptions):
    out = {}
    power = isinstance(spec, SystemSpec)
    for comp, r in (("u", spec.p), ("v", spec.q)):
        lo_exp, hi_exp = regime.brackets.get(comp) or (None, None)
        delta = regime.delta_u if comp == "u" else regime.delta_v
        psi = None
        if lo_exp is None or hi_exp is None:
            if delta is None:
                raise DomainError(f"regime {regime.regime} gives no auxiliary problem for {comp}")
            weight = None
            k = 0.0
            if power:
                k = spec.k1 if comp == "u" else spec.k2
                own, other = (spec.L1, spec.L2) if comp == "u" else (spec.L2, spec.L1)
                lexp = regime.lexp_u if comp == "u" else regime.lexp_v
                if (lexp[0] and not own.trivial) or (lexp[1] and not other.trivial):
                    weight = combine((own, lexp[0]), (other, lexp[1]))
            psi = aux_profile(mesh, r, delta, k, weight, opts)
        low = psi if lo_exp is None else power_profile(mesh, r, lo_exp, opts)
        up = psi if hi_exp is None else power_profile(mesh, r, hi_exp, opts)
        out[comp] = (low, up)
    return out


def _assemble_shell(profiles, m, sigma, mesh, gammas):
    (ul, uu), (vl, vu) = profiles["u"], profiles["v"]
    return ConicalShell(
        GridFunction(mesh, m * _vals(ul)), GridFunction(mesh, _vals(uu) / m),
        GridFunction(mesh, m ** sigma * _vals(vl)), GridFunction(mesh, _vals(vu) / m ** sigma),
        m, sigma, gammas, profiles=profiles)


def build_shell(spec, regime: RegimeReport, mesh: GradedMesh1D, m_init: float = 0.5,
                opts: SolveOptions = None, max_halvings: int = 40) -> ConicalShell:
    """(m psi1, psi1/m, m^sigma psi2, psi2/m^sigma), halving m until every margin is >= 0."""
    if not regime.feasible:
        raise DomainError(f"regime is infeasible: {regime.reason}")
    if not 0 < m_init < 1:
        raise DomainError("m_init must lie in (0, 1)")
    sigma = regime.sigma if regime.sigma is not None else 1.0
    profiles = _component_profiles(spec, regime, mesh, opts)
    gammas = (regime.gamma_u or 1.0, regime.gamma_v or 1.0)
    m = m_init
    history = []
    for halving in range(max_halvings + 1):
        shell = _assemble_shell(profiles, m, sigma, mesh, gammas)
        margins = verify_subsuper(shell, spec, mesh)
        history.append((m, margins.values))
        if margins.ok:
            shell.margins = margins
            shell.halvings = halving
            return shell
        m *= 0.5
    raise ShellConstructionFailure(
        f"margins still negative after {max_halvings} halvings: {margins.as_dict()}", margins=history)


# the map T ------------------------------------------------------------------

@dataclass
class Compensation:
    c_u: np.ndarray
    c_v: np.ndarray
    kappa: tuple
    exponents: tuple


def compensation(spec, shell: ConicalShell, mesh: GradedMesh1D = None, mode: str = None) -> Compensation:
    """Absorption coefficients c_i dominating |df_i/d own| over the shell, with a 10 % margin.

    ``power`` mode uses c = kappa d^e with a single kappa; ``nodewise`` uses the
    corner bound itself, which is smaller wherever the power law is loose and
    speeds up the Picard iteration.  ``kappa`` is reported for both.
    """
    mesh = mesh or shell.mesh
    mode = mode or shell.compensation_mode
    if mode not in ("nodewise", "power"):
        raise ValueError(f"unknown compensation mode {mode!r}")
    nl = build_nonlinearity(spec, mesh)
    inner = mesh.interior
    d = mesh.d[inner]
    cs, kappas, exps = [], [], []
    ks = (getattr(spec, "k1", 0.0), getattr(spec, "k2", 0.0))
    for comp, (olo, oup, tlo, tup) in enumerate(((shell.u_low, shell.u_up, shell.v_low, shell.v_up),
                                                   (shell.v_low, shell.v_up, shell.u_low, shell.u_up))):
        need = nl.need(comp, olo, oup, tlo, tup)
        g_own, g_other = shell.gammas if comp == 0 else shell.gammas[::-1]
        e = nl.d_exponent(comp, g_own, g_other, ks[comp])
        c = np.zeros(mesh.n)
        if e is None or not np.any(need[inner] > 0):
            kappas.append(0.0), exps.append(0.0)
        else:
            kappa = KAPPA_SAFETY * float(np.max(need[inner] * d ** (-e)))
            c[inner] = kappa * d ** e if mode == "power" else KAPPA_SAFETY * need[inner]
            kappas.append(kappa), exps.append(e)
        cs.append(c)
    return Compensation(cs[0], cs[1], tuple(kappas), tuple(exps))


def _get_comp(spec, shell):
    comp = shell.profiles.get("_compensation")
    if comp is None:
        comp = compensation(spec, shell)
        shell.profiles["_compensation"] = comp
    return comp


def apply_T(spec, shell: ConicalShell, u, v, mesh: GradedMesh1D = None, opts: SolveOptions = None,
            _nl: Nonlinearity = None):
    """One application of T = (T1, T2); both components use the input pair (u, v)."""
    mesh = mesh or shell.mesh
    if shell.violation(u, v) > SHELL_TOL:
        raise ShellEscape(f"input pair lies outside the shell by {shell.violation(u, v):.3e}")
    nl = _nl or build_nonlinearity(spec, mesh)
    opts = opts or SolveOptions(tol_residual=T_TOL)
    comp = _get_comp(spec, shell)
    out = []
    for i, (own, c, up, r) in enumerate(((u, comp.c_u, shell.u_up, spec.p), (v, comp.c_v, shell.v_up, spec.q))):
        rhs = nl.f(i, u, v) + c * _vals(own)
        prob = ScalarProblem(r, coeff_c=c, rhs_fixed=rhs, cutoff_upper=up)
        w, _ = solve_scalar(prob, mesh, opts, w0=own)
        out.append(w)
    bad = shell.violation(*out)
    if bad > ESCAPE_TOL:
        raise ShellEscape(f"T left the shell by {bad:.3e}; kappa or mesh inadequate")
    return out[0], out[1]


# Picard iteration -------------------------------------------------------------

@dataclass
class SystemSolution:
    u: GridFunction
    v: GridFunction
    report: SolveReport
    shell: Optional[ConicalShell] = None

    @property
    def residuals(self) -> tuple:
        return tuple(self.report.extra.get("final_residuals", (math.nan, math.nan)))


def system_residuals(spec, u, v, mesh: GradedMesh1D = None, opts: SolveOptions = None, free=None) -> tuple:
    """Scaled sup residuals of both equations at (u, v)."""
    mesh = mesh or u.mesh
    nl = build_nonlinearity(spec, mesh)
    out = []
    for i, (w, r) in enumerate(((u, spec.p), (v, spec.q))):
        prob = ScalarProblem(r, rhs_fixed=nl.f(i, u, v), free=free, dirichlet=None if free is None else w)
        out.append(scaled_residual(prob, mesh, w, opts))
    return tuple(out)


def fixed_point_iterate(spec, shell: ConicalShell, mesh: GradedMesh1D = None, opts: SolveOptions = None,
                        start: str = "LowerCorner", max_iter: int = 500, tol: float = 1e-9,
                        residual_tol: float = 1e-7, log_iterates: bool = False) -> SystemSolution:
    """Iterate (u, v) <- T(u, v) from a shell corner until the relative change is below tol."""
    mesh = mesh or shell.mesh
    nl = build_nonlinearity(spec, mesh)
    u, v = shell.corner(start)
    report = SolveReport()
    report.extra.update(start=start, kappa=_get_comp(spec, shell).kappa)
    res = system_residuals(spec, u, v, mesh, opts)
    report.residual_history.append(res)
    report.shell_flags.append(shell.contains(u, v))
    report.change_history.append(math.nan)
    if log_iterates:
        report.extra["iterates"] = [(u, v)]
    worst_violation = shell.violation(u, v)
    converged = max_iter == 0
    change = math.nan
    for it in range(1, max_iter + 1):
        un, vn = apply_T(spec, shell, u, v, mesh, opts, _nl=nl)
        du = float(np.max(np.abs(_vals(un) - _vals(u))))
        dv = float(np.max(np.abs(_vals(vn) - _vals(v))))
        change = max(du / (1.0 + np.max(_vals(un))), dv / (1.0 + np.max(_vals(vn))))
        u, v = un, vn
        res = system_residuals(spec, u, v, mesh, opts)
        viol = shell.violation(u, v)
        worst_violation = max(worst_violation, viol)
        report.iterations = it
        report.residual_history.append(res)
        report.change_history.append(change)
        report.shell_flags.append(viol <= SHELL_TOL)
        if log_iterates:
            report.extra["iterates"].append((u, v))
        # large compensation makes the residual lag the change criterion; require both
        if change <= tol and max(res) <= residual_tol:
            converged = True
            break
    report.extra["final_residuals"] = res
    report.extra["max_shell_violation"] = worst_violation
    report.extra["shell_violations"] = int(sum(not f for f in report.shell_flags))
    sol = SystemSolution(u, v, report, shell)
    if not converged:
        raise NonConvergence(f"no fixed point after {max_iter} iterations (change {change:.3e}, "
                             f"residuals {res[0]:.3e}, {res[1]:.3e})", report)
    report.converged = max_iter > 0
    return sol


# cooperative expanding-domain scheme --------------------------------------------

def stage_cutoffs(n_stages: int, schedule: str = "harmonic") -> list:
    """Distance thresholds of the exhausting subdomains: 1/(n+2) or a geometric 2^{-(n+1)}."""
    if schedule == "harmonic":
        return [1.0 / (n + 2) for n in range(1, n_stages + 1)]
    if schedule == "geometric":
        return [2.0 ** (-(n + 1)) for n in range(1, n_stages + 1)]
    raise ValueError(f"unknown schedule {schedule!r}")


def monotone_scheme(spec, shell: ConicalShell, mesh: GradedMesh1D = None, n_stages: int = 12,
                    opts: SolveOptions = None, gauss_seidel: bool = False,
                    schedule: str = "harmonic") -> SystemSolution:
    """Solve the decoupled problems on growing subdomains, extending by the subsolution outside."""
    mesh = mesh or shell.mesh
    nl = build_nonlinearity(spec, mesh)
    if not nl.cooperative():
        raise DomainError("monotone scheme needs a cooperative system")
    if n_stages < 1:
        raise ValueError("need at least one stage")
    comp = _get_comp(spec, shell)
    ul, vl = _vals(shell.u_low), _vals(shell.v_low)
    u_prev, v_prev = ul.copy(), vl.copy()
    report = SolveReport()
    report.extra.update(kappa=comp.kappa, schedule=schedule, gauss_seidel=gauss_seidel)
    worst_drop = 0.0
    worst_violation = 0.0
    free = None
    for stage, cut in enumerate(stage_cutoffs(n_stages, schedule), start=1):
        free = mesh.interior & (mesh.d >= cut)
        if not free.any():
            raise DomainError(f"stage {stage} subdomain d >= {cut:.3g} holds no nodes")
        rhs_u = nl.f(0, u_prev, v_prev) + comp.c_u * u_prev
        pu = ScalarProblem(spec.p, coeff_c=comp.c_u, rhs_fixed=rhs_u, free=free, dirichlet=ul)
        un, _ = solve_scalar(pu, mesh, opts, w0=u_prev)
        u_new = np.where(free, _vals(un), ul)
        u_for_v = u_new if gauss_seidel else u_prev
        rhs_v = nl.f(1, u_for_v, v_prev) + comp.c_v * v_prev
        pv = ScalarProblem(spec.q, coeff_c=comp.c_v, rhs_fixed=rhs_v, free=free, dirichlet=vl)
        vn, _ = solve_scalar(pv, mesh, opts, w0=v_prev)
        v_new = np.where(free, _vals(vn), vl)
        drop = max(float(np.max((u_prev - u_new) / (1.0 + np.abs(u_prev)))),
                   float(np.max((v_prev - v_new) / (1.0 + np.abs(v_prev)))))
        worst_drop = max(worst_drop, drop)
        if drop > MONO_TOL:
            raise MonotonicityViolation(f"stage {stage}: iterate decreased by {drop:.3e}")
        viol = shell.violation(u_new, v_new)
        worst_violation = max(worst_violation, viol)
        report.shell_flags.append(viol <= SHELL_TOL)
        report.change_history.append(max(float(np.max(np.abs(u_new - u_prev))),
                                         float(np.max(np.abs(v_new - v_prev)))))
        res = system_residuals(spec, GridFunction(mesh, u_new), GridFunction(mesh, v_new), mesh, opts,
                               free=free)
        report.residual_history.append(res)
        report.stages.append({"floor": cut, "residuals": list(res), "converged": True,
                              "free_nodes": int(free.sum())})
        u_prev, v_prev = u_new, v_new
        report.iterations = stage
    report.converged = True
    report.extra.update(final_residuals=report.residual_history[-1], max_monotonicity_drop=worst_drop,
                        max_shell_violation=worst_violation,
                        shell_violations=int(sum(not f for f in report.shell_flags)),
                        final_cutoff=stage_cutoffs(n_stages, schedule)[-1])
    return SystemSolution(GridFunction(mesh, u_prev), GridFunction(mesh, v_prev), report, shell)


# uniqueness -----------------------------------------------------------------

def uniqueness_probe(spec, shell: ConicalShell, mesh: GradedMesh1D = None, opts: SolveOptions = None,
                     starts=STARTS, return_solutions: bool = False, **kwargs):
    """Largest pairwise sup distance between fixed points reached from different starts."""
    if not spec.b1 * spec.b2 > 0:
        raise DomainError("uniqueness probe needs b1 b2 > 0")
    if isinstance(spec, SystemSpec):
        from .params import check_subhomogeneity
        if not check_subhomogeneity(spec)[0]:
            raise DomainError("uniqueness probe needs the subhomogeneity condition")
    sols = [fixed_point_iterate(spec, shell, mesh, opts, start=s, **kwargs) for s in starts]
    dist = 0.0
    for i in range(len(sols)):
        for j in range(i + 1, len(sols)):
            dist = max(dist, float(np.max(np.abs(_vals(sols[i].u) - _vals(sols[j].u)))),
                       float(np.max(np.abs(_vals(sols[i].v) - _vals(sols[j].v)))))
    return (dist, sols) if return_solutions else dist
