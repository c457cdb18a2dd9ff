from dataclasses import replace

import numpy as np
import pytest

from singular_systems.analysis import fit_boundary_exponent
from singular_systems.errors import DomainError, NonConvergence, ShellEscape
from singular_systems.mesh import INTERVAL, GridFunction, build_mesh
from singular_systems.params import AbsorptionSpec, CompetitionSpec, SystemSpec, classify
from singular_systems.scalar import ScalarProblem, solve_scalar
from singular_systems.system import (ConicalShell, apply_T, build_nonlinearity, build_shell, fixed_point_iterate,
                                     monotone_scheme, stage_cutoffs, uniqueness_probe, verify_subsuper)

ALT2 = SystemSpec(2, 2, 0, 0, 0.5, 0.5)
ALT1 = SystemSpec(2, 2, 0, 0, -0.5, -0.5, 1.2, 1.2)
COOP = SystemSpec(2, 2, -0.5, -0.5, 0.25, 0.25)


@pytest.fixture(scope="module")
def mesh():
    return build_mesh(INTERVAL, 513, 2.0)


@pytest.fixture(scope="module")
def alt2(mesh):
    shell = build_shell(ALT2, classify(ALT2), mesh)
    return shell, fixed_point_iterate(ALT2, shell, mesh)


def vals(g):
    return np.asarray(g.values)


def test_nonlinearity_values(mesh):
    u = mesh.grid(np.where(mesh.interior, 4.0, 0.0))
    v = mesh.grid(np.where(mesh.interior, 9.0, 0.0))
    i = mesh.interior
    f1 = build_nonlinearity(ALT2, mesh).f(0, u, v)
    assert np.allclose(f1[i], 3.0) and np.all(f1[~i] == 0)
    ab = build_nonlinearity(AbsorptionSpec(2, 2, 0, 0, 0.5, 0.5, 1, 1, 0, 0), mesh)
    assert np.allclose(ab.f(0, u, v)[i], 3.0 - 4.0)
    cs = CompetitionSpec(2, 2, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1)
    # lambda - u - mu u v with alpha = 0, beta = 1, a = b = 1
    assert np.allclose(build_nonlinearity(cs, mesh).f(0, u, v)[i], 1 - 4 - 36)
    assert build_nonlinearity(ALT2, mesh).cooperative() and not build_nonlinearity(ALT1, mesh).cooperative()


def test_shell_construction(alt2, mesh):
    shell, _ = alt2
    assert shell.margins.ok and shell.m >= 2.0 ** -40
    assert min(verify_subsuper(shell, ALT2).values) >= 0
    i = mesh.interior
    assert np.all(vals(shell.u_low)[i] > 0) and np.all(vals(shell.u_low) <= vals(shell.u_up))
    assert np.all(vals(shell.u_low)[mesh.boundary] == 0)
    # symmetric spec, sigma = 1
    assert np.array_equal(vals(shell.u_low), vals(shell.v_low))
    assert np.array_equal(vals(shell.u_up), vals(shell.v_up))


def test_shell_ordering_in_m(mesh):
    a = build_shell(ALT2, classify(ALT2), mesh, m_init=0.5)
    b = build_shell(ALT2, classify(ALT2), mesh, m_init=0.25)
    assert np.all(vals(b.u_low) <= vals(a.u_low)) and np.all(vals(b.u_up) >= vals(a.u_up))


def test_inflated_subsolution_rejected():
    mesh = build_mesh(INTERVAL, 1025, 3.0)
    shell = build_shell(ALT1, classify(ALT1), mesh)
    bad = replace(shell, u_low=GridFunction(mesh, 4.0 * vals(shell.u_low)),
                  v_low=GridFunction(mesh, 4.0 * vals(shell.v_low)))
    assert min(verify_subsuper(bad, ALT1).values) < 0


def test_shell_rejects_nonzero_boundary(mesh):
    one = mesh.grid(np.ones(mesh.n))
    with pytest.raises(ValueError):
        ConicalShell(one, one, one, one, 0.5, 1.0)


def test_T_stays_in_shell_and_is_symmetric(alt2, mesh):
    shell, _ = alt2
    u, v = apply_T(ALT2, shell, shell.u_low, shell.v_low)
    assert shell.contains(u, v)
    assert np.max(np.abs(vals(u) - vals(v))) <= 1e-9


def test_fixed_point_property(alt2):
    shell, sol = alt2
    u, v = apply_T(ALT2, shell, sol.u, sol.v)
    assert max(np.max(np.abs(vals(u) - vals(sol.u))), np.max(np.abs(vals(v) - vals(sol.v)))) <= 1e-8
    assert sol.report.converged and max(sol.residuals) <= 1e-7
    assert sol.report.extra["shell_violations"] == 0
    assert np.max(np.abs(vals(sol.u) - vals(sol.v))) <= 1e-8


def test_alt2_exponent():
    m = build_mesh(INTERVAL, 2049, 2.0)
    sol = fixed_point_iterate(ALT2, build_shell(ALT2, classify(ALT2), m), m)
    assert fit_boundary_exponent(sol.u).gamma_hat == pytest.approx(1.0, abs=0.05)


def test_cooperative_order_preservation(alt2, mesh):
    shell, _ = alt2
    rng = np.random.default_rng(3)
    lo_u, hi_u, lo_v, hi_v = (vals(g) for g in (shell.u_low, shell.u_up, shell.v_low, shell.v_up))
    for _ in range(5):
        t = np.sort(rng.uniform(0, 1, (2, 2, mesh.n)), axis=0)
        pairs = [(mesh.grid(lo_u + t[j, 0] * (hi_u - lo_u)), mesh.grid(lo_v + t[j, 1] * (hi_v - lo_v)))
                 for j in range(2)]
        (u0, v0), (u1, v1) = (apply_T(ALT2, shell, *p) for p in pairs)
        assert np.all(vals(u0) <= vals(u1) + 1e-9) and np.all(vals(v0) <= vals(v1) + 1e-9)


def test_subhomogeneous_scaling():
    # T1 o T2 without compensation: v solves -v'' = v^a2 u^b2, then u solves -u'' = u^a1 v^b1
    p = q = 2.0
    a1 = a2 = 0.25
    b1 = b2 = 0.5
    mesh = build_mesh(INTERVAL, 513, 1.0)
    i = mesh.interior
    base = np.sin(np.pi * mesh.nodes)

    def composite(u):
        v, _ = solve_scalar(ScalarProblem(q, rhs_power=(np.where(i, u ** b2, 0.0), a2)), mesh)
        w, _ = solve_scalar(ScalarProblem(p, rhs_power=(np.where(i, vals(v) ** b1, 0.0), a1)), mesh)
        return vals(w)

    ref = composite(base)
    band = (mesh.d >= 0.1) & (mesh.d <= 0.4)
    want = b1 * b2 / ((p - 1 - a1) * (q - 1 - a2))
    for c in (0.5, 0.1):
        got = np.log(composite(c * base)[band] / ref[band]) / np.log(c)
        assert np.all(np.abs(got - want) <= 0.05)


def test_max_iter_zero_returns_start(alt2, mesh):
    shell, _ = alt2
    sol = fixed_point_iterate(ALT2, shell, mesh, max_iter=0)
    assert np.array_equal(vals(sol.u), vals(shell.u_low)) and sol.report.iterations == 0
    assert len(sol.residuals) == 2


def test_nonconvergence_carries_report(alt2, mesh):
    shell, _ = alt2
    with pytest.raises(NonConvergence) as exc:
        fixed_point_iterate(ALT2, shell, mesh, max_iter=2)
    assert exc.value.report.iterations == 2


def test_escape_detected(alt2, mesh):
    shell, _ = alt2
    with pytest.raises(ShellEscape):
        apply_T(ALT2, shell, mesh.grid(2 * vals(shell.u_up)), shell.v_low)


def test_stage_cutoffs():
    assert stage_cutoffs(3) == [1 / 3, 1 / 4, 1 / 5]
    assert stage_cutoffs(2, "geometric") == [0.25, 0.125]
    with pytest.raises(ValueError):
        stage_cutoffs(2, "linear")


def test_monotone_scheme_cooperative():
    m = build_mesh(INTERVAL, 2049, 2.0)
    shell = build_shell(COOP, classify(COOP), m)
    sol = monotone_scheme(COOP, shell, m, n_stages=12)
    ext = sol.report.extra
    assert ext["max_monotonicity_drop"] <= 1e-10 and ext["shell_violations"] == 0
    assert fit_boundary_exponent(sol.u).gamma_hat == pytest.approx(1.0, abs=0.05)


def test_monotone_single_stage(alt2, mesh):
    shell, _ = alt2
    sol = monotone_scheme(ALT2, shell, mesh, n_stages=1)
    outside = mesh.d < 1 / 3
    assert np.array_equal(vals(sol.u)[outside], vals(shell.u_low)[outside])
    assert np.all(vals(sol.u) >= vals(shell.u_low) - 1e-12)
    assert sol.report.iterations == 1


def test_monotone_rejects_competitive():
    m = build_mesh(INTERVAL, 513, 3.0)
    shell = build_shell(ALT1, classify(ALT1), m)
    with pytest.raises(DomainError):
        monotone_scheme(ALT1, shell, m)


def test_uniqueness_identical_starts(alt2, mesh):
    shell, _ = alt2
    assert uniqueness_probe(ALT2, shell, mesh, starts=("LowerCorner",) * 3) == 0.0


def test_uniqueness_distinct_starts(alt2, mesh):
    shell, _ = alt2
    assert uniqueness_probe(ALT2, shell, mesh) <= 1e-6
