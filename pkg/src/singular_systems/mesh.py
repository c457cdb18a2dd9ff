"""Boundary-graded 1D meshes, grid functions and the discrete r-Laplacian.

Two geometries are supported: the unit interval (0, 1) with clustering at
both endpoints, and the radial unit ball in dimension N >= 2 with
clustering at the outer sphere.  Everything downstream works with the
conservative three-point flux form

    -Delta_r u  ~  -(W+ F(s+) - W- F(s-)) / V_i,   F(s) = (s^2 + e^2)^((r-2)/2) s

where s+- are one-sided slopes, W+- the radial weights rho^(N-1) at the
half nodes (1 on the interval) and V_i the cell measure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize, special

INTERVAL = "interval"
DISK = "disk"

DEFAULT_EPS_GRAD = 1e-10


@dataclass(frozen=True, eq=False)
class GradedMesh1D:
    geometry: str
    n: int
    s: float
    nodes: np.ndarray = field(repr=False)
    dim: int = 1

    @property
    def diameter(self) -> float:
        return 1.0 if self.geometry == INTERVAL else 2.0

    @cached_property
    def h(self) -> np.ndarray:
        """Cell widths, one per half node."""
        return np.diff(self.nodes)

    @cached_property
    def half_nodes(self) -> np.ndarray:
        return 0.5 * (self.nodes[1:] + self.nodes[:-1])

    @cached_property
    def weights(self) -> np.ndarray:
        """Flux weights at the half nodes."""
        if self.geometry == INTERVAL:
            return np.ones(self.n - 1)
        return self.half_nodes ** (self.dim - 1)

    @cached_property
    def measure(self) -> np.ndarray:
        """Control-volume measure of every node (boundary entries unused)."""
        vol = np.zeros(self.n)
        if self.geometry == INTERVAL:
            vol[1:-1] = 0.5 * (self.h[1:] + self.h[:-1])
            vol[0], vol[-1] = 0.5 * self.h[0], 0.5 * self.h[-1]
            return vol
        N = self.dim
        rh = self.half_nodes
        vol[0] = rh[0] ** N / N
        vol[1:-1] = (rh[1:] ** N - rh[:-1] ** N) / N
        vol[-1] = (1.0 - rh[-1] ** N) / N
        return vol

    @cached_property
    def boundary(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[-1] = True
        if self.geometry == INTERVAL:
            mask[0] = True
        return mask

    @cached_property
    def interior(self) -> np.ndarray:
        return ~self.boundary

    @cached_property
    def d(self) -> np.ndarray:
        if self.geometry == INTERVAL:
            return np.minimum(self.nodes, 1.0 - self.nodes)
        return 1.0 - self.nodes

    @cached_property
    def near_side(self) -> np.ndarray:
        """Nodes belonging to the half of the domain next to the fitted boundary."""
        if self.geometry == INTERVAL:
            return self.nodes <= 0.5
        return np.ones(self.n, dtype=bool)

    def grid(self, values) -> "GridFunction":
        return GridFunction(self, np.broadcast_to(np.asarray(values, dtype=float), (self.n,)).copy())


@dataclass(frozen=True, eq=False)
class GridFunction:
    mesh: GradedMesh1D
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.mesh.n:
            raise ValueError(f"expected {self.mesh.n} values, got {len(self.values)}")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def to_csv(self, path) -> None:
        label = "x" if self.mesh.geometry == INTERVAL else "r"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["node_index", label, "d", "value"])
            for i, (x, d, v) in enumerate(zip(self.mesh.nodes, self.mesh.d, self.values)):
                w.writerow([i, f"{x:.17g}", f"{d:.17g}", f"{v:.17g}"])


def graded_nodes(geometry: str, n: int, s: float) -> np.ndarray:
    """Node positions of the graded grid, without the minimum-size check.

    Interval: images of the uniform grid under xi -> (2 xi)^s / 2 on [0, 1/2],
    mirrored onto [1/2, 1].  Disk: r_i = 1 - (1 - xi_i)^s.
    """
    if geometry not in (INTERVAL, DISK):
        raise ValueError(f"unknown geometry {geometry!r}")
    if s < 1:
        raise ValueError(f"grading power must be >= 1, got {s}")
    xi = np.linspace(0.0, 1.0, n)
    if geometry == INTERVAL:
        left = 0.5 * (2.0 * np.minimum(xi, 1.0 - xi)) ** s
        nodes = np.where(xi <= 0.5, left, 1.0 - left)
        if n % 2 == 1:
            nodes[n // 2] = 0.5
    else:
        nodes = 1.0 - (1.0 - xi) ** s
    nodes[0], nodes[-1] = 0.0, 1.0
    return nodes


def build_mesh(geometry: str = INTERVAL, n: int = 513, s: float = 1.0, dim: int = 2) -> GradedMesh1D:
    if n < 16:
        raise ValueError(f"need at least 16 nodes, got {n}")
    nodes = graded_nodes(geometry, n, s)
    if geometry == INTERVAL:
        return GradedMesh1D(INTERVAL, n, float(s), nodes, dim=1)
    if dim < 2:
        raise ValueError("radial geometry needs dimension >= 2")
    return GradedMesh1D(DISK, n, float(s), nodes, dim=int(dim))


def distance_fn(mesh: GradedMesh1D) -> GridFunction:
    return GridFunction(mesh, mesh.d.copy())


def flux(slope, r, eps_grad=DEFAULT_EPS_GRAD):
    """Regularized r-Laplacian flux (s^2 + e^2)^((r-2)/2) s."""
    if r == 2:
        return np.array(slope, dtype=float)
    return (slope * slope + eps_grad * eps_grad) ** ((r - 2) / 2) * slope


def flux_derivative(slope, r, eps_grad=DEFAULT_EPS_GRAD):
    if r == 2:
        return np.ones_like(slope, dtype=float)
    q = slope * slope + eps_grad * eps_grad
    return q ** ((r - 4) / 2) * ((r - 1) * slope * slope + eps_grad * eps_grad)


def neg_r_laplacian(mesh: GradedMesh1D, u: np.ndarray, r: float,
                    eps_grad: float = DEFAULT_EPS_GRAD) -> np.ndarray:
    """Nodewise discrete -Delta_r u; boundary entries are 0."""
    slope = np.diff(u) / mesh.h
    q = mesh.weights * flux(slope, r, eps_grad)
    out = np.zeros(mesh.n)
    out[1:-1] = -(q[1:] - q[:-1]) / mesh.measure[1:-1]
    if mesh.geometry == DISK:
        out[0] = -q[0] / mesh.measure[0]
    out[mesh.boundary] = 0.0
    return out


def r_laplacian_residual(u: GridFunction, r: float, rhs: GridFunction,
                         eps_grad: float = DEFAULT_EPS_GRAD) -> GridFunction:
    """Discrete residual of -Delta_r u - rhs at interior nodes."""
    mesh = u.mesh
    res = neg_r_laplacian(mesh, np.asarray(u.values, float), r, eps_grad) - np.asarray(rhs.values, float)
    res[mesh.boundary] = 0.0
    return GridFunction(mesh, res)


def _radial_eigen_zero(nu: float) -> float:
    # first positive zero of J_nu lies in (nu + 1, nu + 1 + 2.5) for the orders used here
    lo = max(nu, 0.0) + 1.0
    return optimize.brentq(lambda z: special.jv(nu, z), lo, lo + 3.0, xtol=1e-14)


def eigen_profile(mesh: GradedMesh1D) -> np.ndarray:
    """First Dirichlet eigenfunction of the Laplacian, scaled to unit boundary slope.

    Used wherever a smooth profile comparable to d(x) is needed.
    """
    x = mesh.nodes
    if mesh.geometry == INTERVAL:
        return np.sin(np.pi * x) / np.pi
    nu = mesh.dim / 2.0 - 1.0
    j = _radial_eigen_zero(nu)
    scale = j * special.jv(nu + 1.0, j)
    out = np.empty_like(x)
    pos = x > 0
    out[pos] = x[pos] ** (-nu) * special.jv(nu, j * x[pos])
    out[~pos] = (j / 2.0) ** nu / special.gamma(nu + 1.0)
    out /= scale
    out[-1] = 0.0
    return np.maximum(out, 0.0)
