"""Exponent fitting, discrete comparison verdicts and the convexity-gap oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import stats

from .errors import DomainError, InsufficientWindow
from .mesh import DEFAULT_EPS_GRAD, GridFunction, neg_r_laplacian

DEFAULT_WINDOW = (1e-4, 1e-2)
MIN_POINTS = 8


@dataclass(frozen=True)
class ExponentFit:
    gamma_hat: float
    stderr: float
    window: tuple
    n_points: int
    log_exponent_hat: Optional[float] = None


def _window_nodes(u: GridFunction, window):
    lo, hi = float(window[0]), float(window[1])
    if not 0 < lo < hi <= 0.25:
        raise InsufficientWindow(f"window must satisfy 0 < d_min < d_max <= 0.25, got {window}")
    m = u.mesh
    sel = (m.d >= lo) & (m.d <= hi) & m.near_side
    if sel.sum() < MIN_POINTS:
        raise InsufficientWindow(f"only {int(sel.sum())} nodes in window {window}; need {MIN_POINTS}")
    vals = np.asarray(u.values, dtype=float)[sel]
    if np.any(vals <= 0):
        raise DomainError("function must be positive on the fit window")
    return m.d[sel], vals


def fit_boundary_exponent(u: GridFunction, window=DEFAULT_WINDOW) -> ExponentFit:
    """Least-squares slope of ln u against ln d near one boundary."""
    d, vals = _window_nodes(u, window)
    x, y = np.log(d), np.log(vals)
    res = stats.linregress(x, y)
    return ExponentFit(float(res.slope), _slope_stderr(x, y, res), (float(window[0]), float(window[1])), len(d))


def _slope_stderr(x, y, res) -> float:
    # linregress derives stderr from 1 - r^2, which cancels to ~1e-8 on exact powers
    resid = y - (res.intercept + res.slope * x)
    sxx = np.sum((x - x.mean()) ** 2)
    return float(np.sqrt(np.sum(resid ** 2) / (len(x) - 2) / sxx))


def log_correction_fit(u: GridFunction, gamma: float, A: Optional[float] = None,
                       window=DEFAULT_WINDOW) -> ExponentFit:
    """Regression of ln(u / d^gamma) on ln ln(A/d); the slope lands in ``log_exponent_hat``.

    ``A`` defaults to ten times the domain diameter.
    """
    if A is None:
        A = 10.0 * u.mesh.diameter
    d, vals = _window_nodes(u, window)
    if A <= np.max(d):
        raise DomainError("A must exceed every distance in the window")
    y = np.log(vals) - gamma * np.log(d)
    x = np.log(np.log(A / d))
    res = stats.linregress(x, y)
    return ExponentFit(float(gamma), _slope_stderr(x, y, res), (float(window[0]), float(window[1])), len(d),
                       log_exponent_hat=float(res.slope))


def fit_log_correction(u: GridFunction, gamma: float, A: Optional[float] = None, window=DEFAULT_WINDOW) -> float:
    """Exponent l in u ~ C d^gamma (ln(A/d))^l."""
    return log_correction_fit(u, gamma, A, window).log_exponent_hat


def bracket_constants(u: GridFunction, low_exp: float, high_exp: float, window=DEFAULT_WINDOW) -> dict:
    """Best constants in C1 d^low_exp <= u <= C2 d^high_exp over the fit window."""
    d, vals = _window_nodes(u, window)
    c1 = float(np.min(vals / d ** low_exp))
    c2 = float(np.max(vals / d ** high_exp))
    return {"C1": c1, "C2": c2, "low_exp": low_exp, "high_exp": high_exp,
            "holds": bool(c1 > 0 and np.isfinite(c2)), "n_points": len(d)}


# comparison verdicts -------------------------------------------------------

@dataclass
class ComparisonVerdict:
    subsolution_ok: bool
    supersolution_ok: bool
    integrability_ok: bool
    ordered: bool
    verdict: str
    failed: list = field(default_factory=list)
    worst_sub_margin: float = 0.0
    worst_super_margin: float = 0.0

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def check_comparison(u: GridFunction, v: GridFunction, K, delta: float, r: float,
                     w0: Optional[GridFunction] = None, eps_grad: float = DEFAULT_EPS_GRAD,
                     tol: float = 1e-8) -> ComparisonVerdict:
    """Check the hypotheses of the weak comparison principle, then u <= v."""
    mesh = u.mesh
    uu = np.asarray(u.values, float)
    vv = np.asarray(v.values, float)
    Kv = np.broadcast_to(np.asarray(K.values if isinstance(K, GridFunction) else K, float), (mesh.n,))
    inner = mesh.interior
    if np.any(uu[inner] <= 0) or np.any(vv[inner] <= 0):
        raise DomainError("u and v must be positive at interior nodes")
    lu = neg_r_laplacian(mesh, uu, r, eps_grad)
    lv = neg_r_laplacian(mesh, vv, r, eps_grad)
    with np.errstate(divide="ignore"):
        fu = np.where(inner, Kv * np.where(inner, uu, 1.0) ** delta, 0.0)
        fv = np.where(inner, Kv * np.where(inner, vv, 1.0) ** delta, 0.0)
    sub_gap = (fu - lu) / (1.0 + np.abs(fu) + np.abs(lu))
    sup_gap = (lv - fv) / (1.0 + np.abs(fv) + np.abs(lv))
    sub_ok = bool(np.all(sub_gap[inner] >= -tol))
    sup_ok = bool(np.all(sup_gap[inner] >= -tol))
    integ_ok = True
    if delta > 0:
        w = np.minimum(uu, vv) if w0 is None else np.asarray(w0.values, float)
        total = np.sum((Kv * np.abs(w) ** (delta + 1.0) * mesh.measure)[inner])
        integ_ok = bool(np.isfinite(total))
    failed = [name for name, ok in (("subsolution", sub_ok), ("supersolution", sup_ok),
                                    ("integrability", integ_ok)) if not ok]
    ordered = bool(np.all(uu <= vv + 1e-9 * (1.0 + np.abs(vv))))
    if failed:
        verdict = "hypotheses not satisfied"
    elif ordered:
        verdict = "holds"
    else:
        verdict = "violated"
    return ComparisonVerdict(sub_ok, sup_ok, integ_ok, ordered, verdict, failed,
                             float(np.min(sub_gap[inner])), float(np.min(sup_gap[inner])))


# convexity gap -------------------------------------------------------------

def _as_vectors(x):
    a = np.asarray(x, dtype=float)
    return a[..., None] if a.ndim == 0 else a


def _split_terms(x, y, r):
    # squared norms keep the r = 2 case exact on dyadic inputs
    x, y = np.broadcast_arrays(_as_vectors(x), _as_vectors(y))
    nx2 = np.sum(x * x, axis=-1)
    ny2 = np.sum(y * y, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        gx = np.where(nx2 > 0, nx2 ** ((r - 2.0) / 2.0), 0.0)
    dot = np.sum(x * (y - x), axis=-1)
    lhs = ny2 ** (r / 2.0) - nx2 ** (r / 2.0) - r * gx * dot
    dd2 = np.sum((x - y) ** 2, axis=-1)
    if r >= 2:
        pen = dd2 ** (r / 2.0)
    else:
        tot = np.sqrt(nx2) + np.sqrt(ny2)
        if np.any(tot == 0):
            raise DomainError("x = y = 0 is excluded when r < 2")
        pen = dd2 / tot ** (2.0 - r)
    return lhs, pen


def peral_gap(x, y, r: float, C: float):
    """|y|^r - |x|^r - r|x|^{r-2} x.(y - x) - C * penalty(x, y)."""
    if not r > 1:
        raise DomainError("r must exceed 1")
    lhs, pen = _split_terms(x, y, r)
    gap = lhs - C * pen
    return float(gap) if np.ndim(gap) == 0 else gap


def _structured_pairs(dim: int = 2):
    q = 1.0 / 1024.0
    base = np.array([[1.0, 0.0], [0.5, 0.25], [-0.75, 0.5], [0.125, -1.0], [q, 0.0], [0.0, 1.0]])[:, :dim]
    xs, ys = [], []
    for x in base:
        for t in (-1.0, -0.5, 0.0, 0.25, 0.5, 2.0, 1.0 + q, 1.0 - q):
            xs.append(x), ys.append(t * x)          # collinear, antipodal at t = -1
        for e in (np.eye(dim)[0], np.eye(dim)[-1]):
            xs.append(x), ys.append(x + q * e)      # near-equal
        xs.append(np.zeros(dim)), ys.append(x)      # x = 0
        xs.append(x), ys.append(np.zeros(dim))      # y = 0
    return np.array(xs), np.array(ys)


def _rotate(a, angle):
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, -s], [s, c]])
    return a @ R.T


def calibrate_Cr(r: float, samples: int = 10_000, seed: int = 0, rotation: float = 0.0) -> float:
    """0.5 times the smallest ratio lhs / penalty over random and structured pairs.

    Random pairs lie on a dyadic lattice in [-1, 1]^2 so the r = 2 ratio is exact.
    """
    if samples < 10_000:
        raise ValueError("calibration needs at least 1e4 samples")
    rng = np.random.default_rng(seed)
    xr = rng.integers(-1024, 1025, size=(samples, 2)) / 1024.0
    yr = rng.integers(-1024, 1025, size=(samples, 2)) / 1024.0
    xs, ys = _structured_pairs()
    X = np.vstack([xr, xs])
    Y = np.vstack([yr, ys])
    if rotation:
        X, Y = _rotate(X, rotation), _rotate(Y, rotation)
    keep = np.linalg.norm(X - Y, axis=-1) > 0
    lhs, pen = _split_terms(X[keep], Y[keep], r)
    return float(0.5 * np.min(lhs / pen))


class CalibrationTable:
    """Plain-text cache of calibrated constants, one ``r C`` pair per line."""

    def __init__(self, path):
        self.path = Path(path)
        self.values = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip() and not line.startswith("#"):
                    r, c = line.split()
                    self.values[float(r)] = float(c)

    def get(self, r: float, samples: int = 10_000, seed: int = 0) -> float:
        if r not in self.values:
            self.values[r] = calibrate_Cr(r, samples, seed)
            self.save()
        return self.values[r]

    def save(self) -> None:
        lines = ["# r C_r"] + [f"{r:.17g} {c:.17g}" for r, c in sorted(self.values.items())]
        self.path.write_text("\n".join(lines) + "\n")
