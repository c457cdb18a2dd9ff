import numpy as np
import pytest
from hypothesis import given, strategies as st

from singular_systems.analysis import fit_boundary_exponent
from singular_systems.errors import LossOfPositivity, NonConvergence
from singular_systems.mesh import INTERVAL, build_mesh
from singular_systems.scalar import (ScalarProblem, SolveOptions, discrete_energy, scaled_residual,
                                     solve_linearized, solve_scalar)
from singular_systems.system import aux_profile
from singular_systems.verify import exact_plaplace_unit_rhs


def interior_ones(mesh):
    return np.where(mesh.interior, 1.0, 0.0)


@pytest.fixture(scope="module")
def uniform():
    return build_mesh(INTERVAL, 513, 1.0)


def test_poisson_via_power_form(uniform):
    x = uniform.nodes
    w, rep = solve_scalar(ScalarProblem(2.0, rhs_power=(interior_ones(uniform), 0.0)), uniform)
    assert rep.converged
    assert np.max(np.abs(w.values - x * (1 - x) / 2)) <= 1e-4


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_unit_rhs_closed_form(uniform, p):
    w, _ = solve_scalar(ScalarProblem(p, rhs_fixed=interior_ones(uniform)), uniform)
    assert np.max(np.abs(w.values - exact_plaplace_unit_rhs(uniform.nodes, p))) <= 1e-3


def test_closed_form_oracle_values():
    # p = 2 reduces to x(1 - x)/2
    x = np.linspace(0, 1, 11)
    assert np.allclose(exact_plaplace_unit_rhs(x, 2.0), x * (1 - x) / 2, atol=1e-15)


@pytest.mark.parametrize("delta, gamma", [(-0.5, 1.0), (-1.5, 0.8)])
def test_singular_exponent_recovery(delta, gamma):
    mesh = build_mesh(INTERVAL, 2049, 3.0)
    w = aux_profile(mesh, 2.0, delta)
    assert np.all(w.values[mesh.interior] > 0)
    assert abs(fit_boundary_exponent(w).gamma_hat - gamma) <= 0.03


def test_newton_step_at_solution_is_tiny(uniform):
    prob = ScalarProblem(2.0, rhs_fixed=interior_ones(uniform))
    w, _ = solve_scalar(prob, uniform)
    _, step, _, _ = solve_linearized(prob, uniform, w)
    assert step <= 1e-10


def test_linear_problem_one_step(uniform):
    prob = ScalarProblem(2.0, rhs_fixed=interior_ones(uniform))
    w1, _, _, after = solve_linearized(prob, uniform, np.zeros(uniform.n))
    assert scaled_residual(prob, uniform, w1) <= 1e-10


def test_r3_flat_start_decreases_residual(uniform):
    prob = ScalarProblem(3.0, rhs_fixed=interior_ones(uniform))
    w = np.where(uniform.interior, 0.1, 0.0)
    merits = []
    for _ in range(8):
        w, step, before, after = solve_linearized(prob, uniform, w)
        if step == 0:
            break
        assert after < before
        merits.append(after)
    assert len(merits) >= 3


@given(seed=st.integers(0, 2**31 - 1), r=st.sampled_from([1.5, 2.0, 3.0]))
def test_discrete_maximum_principle(seed, r):
    mesh = build_mesh(INTERVAL, 65, 2.0)
    rng = np.random.default_rng(seed)
    rhs = rng.uniform(0, 2, mesh.n) * mesh.interior
    c = rng.uniform(0, 5, mesh.n)
    w, _ = solve_scalar(ScalarProblem(r, coeff_c=c, rhs_fixed=rhs), mesh)
    assert np.all(w.values >= -1e-14)


@given(seed=st.integers(0, 2**31 - 1))
def test_linear_comparison(seed):
    mesh = build_mesh(INTERVAL, 65, 2.0)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=mesh.n) * mesh.interior
    g2 = g + rng.uniform(0, 1, mesh.n) * mesh.interior
    c = rng.uniform(0, 3, mesh.n)
    w1, _ = solve_scalar(ScalarProblem(2.0, coeff_c=c, rhs_fixed=g), mesh)
    w2, _ = solve_scalar(ScalarProblem(2.0, coeff_c=c, rhs_fixed=g2), mesh)
    assert np.all(w1.values <= w2.values + 1e-9)


def test_continuation_stability():
    mesh = build_mesh(INTERVAL, 2049, 3.0)
    base = aux_profile(mesh, 2.0, -0.5)
    floors = SolveOptions().continuation_floors
    finer = aux_profile(mesh, 2.0, -0.5, opts=SolveOptions(continuation_floors=floors + (floors[-1] / 2,)))
    assert np.max(np.abs(base.values - finer.values)) <= 1e-6


def test_energy_non_increasing_with_cutoff():
    mesh = build_mesh(INTERVAL, 257, 2.0)
    x = mesh.nodes
    up = np.where(mesh.interior, 0.05 * np.sin(np.pi * x), 0.0)
    prob = ScalarProblem(3.0, coeff_c=np.full(mesh.n, 2.0), rhs_fixed=interior_ones(mesh), cutoff_upper=up)
    w, rep = solve_scalar(prob, mesh, w0=0.5 * up)
    E = np.array(rep.energy_history)
    assert len(E) >= 2
    assert np.all(np.diff(E) <= 1e-12 * (1 + np.abs(E[:-1])))
    assert discrete_energy(prob, mesh, w) == pytest.approx(E[-1])


def test_report_csv(tmp_path):
    mesh = build_mesh(INTERVAL, 129, 3.0)
    _, rep = solve_scalar(ScalarProblem(2.0, rhs_power=(interior_ones(mesh), -0.5)), mesh)
    assert [st["floor"] for st in rep.stages] == list(SolveOptions().continuation_floors)
    rep.to_csv(tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "iter,stage_floor,residual"
    assert len(lines) == 1 + len(rep.residual_history)


def test_nonconvergence_carries_report():
    mesh = build_mesh(INTERVAL, 129, 1.0)
    with pytest.raises(NonConvergence) as exc:
        solve_scalar(ScalarProblem(3.0, rhs_fixed=interior_ones(mesh)), mesh, SolveOptions(max_newton=1))
    assert exc.value.report is not None and exc.value.report.iterations == 1


def test_loss_of_positivity():
    mesh = build_mesh(INTERVAL, 129, 1.0)
    prob = ScalarProblem(2.0, rhs_power=(interior_ones(mesh), -0.5))
    # one backtrack is not enough to keep a far-off unfloored start positive
    with pytest.raises(LossOfPositivity):
        solve_linearized(prob, mesh, 10.0 * interior_ones(mesh), SolveOptions(max_backtracks=1))


@pytest.mark.parametrize("kwargs", [dict(continuation_floors=(1e-2, 1e-2)), dict(continuation_floors=(-1.0,)),
                                    dict(damping=1.0)])
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        SolveOptions(**kwargs)


def test_problem_rejects_negative_absorption():
    with pytest.raises(ValueError):
        ScalarProblem(2.0, coeff_c=-np.ones(3))
