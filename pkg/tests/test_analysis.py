import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from singular_systems.analysis import (CalibrationTable, bracket_constants, calibrate_Cr, check_comparison,
                                       fit_boundary_exponent, fit_log_correction, log_correction_fit, peral_gap)
from singular_systems.errors import DomainError, InsufficientWindow
from singular_systems.mesh import INTERVAL, build_mesh
from singular_systems.system import aux_profile


@pytest.fixture(scope="module")
def mesh():
    return build_mesh(INTERVAL, 2049, 3.0)


def test_fit_exact_linear(mesh):
    f = fit_boundary_exponent(mesh.grid(mesh.d))
    assert f.gamma_hat == pytest.approx(1.0, abs=1e-10) and f.stderr < 1e-9
    assert f.n_points >= 12


def test_fit_exact_power(mesh):
    f = fit_boundary_exponent(mesh.grid(mesh.d ** 0.8), window=(1e-4, 1e-1))
    assert f.gamma_hat == pytest.approx(0.8, abs=1e-6)


def log_half(mesh):
    d = mesh.d
    return mesh.grid(d * np.sqrt(np.log(10 / np.where(d > 0, d, 1.0))))


def test_fit_log_biased_and_drifting(mesh):
    # local slope is 1 - 1/(2 ln(10/d)): biased low, approaching 1 as the window deepens
    u = log_half(mesh)
    wide = fit_boundary_exponent(u).gamma_hat
    deep = fit_boundary_exponent(u, window=(1e-5, 1e-3)).gamma_hat
    assert 0.88 < wide < 1.0
    assert wide < deep < 1.0


@given(gamma=st.floats(0.1, 2.0), c=st.floats(0.01, 100.0), s=st.sampled_from([1.0, 2.0, 3.0]))
def test_fit_exact_on_pure_powers(gamma, c, s):
    m = build_mesh(INTERVAL, 1025, s)
    f = fit_boundary_exponent(m.grid(c * m.d ** gamma))
    assert abs(f.gamma_hat - gamma) < 1e-9 and f.stderr < 1e-9


def test_log_correction_examples(mesh):
    u = log_half(mesh)
    assert fit_log_correction(u, 1.0, A=10.0) == pytest.approx(0.5, abs=0.02)
    assert fit_log_correction(mesh.grid(mesh.d ** 0.8), 0.8) == pytest.approx(0.0, abs=0.02)
    f = log_correction_fit(u, 1.0, A=10.0)
    assert f.gamma_hat == 1.0 and f.log_exponent_hat == pytest.approx(0.5, abs=1e-9)


def test_log_correction_of_scalar_solve(mesh):
    w = aux_profile(mesh, 2.0, 0.0, k=1.0)
    assert fit_log_correction(w, 1.0, A=1.0, window=(1e-8, 1e-4)) == pytest.approx(1.0, abs=0.1)


def test_window_errors(mesh):
    u = mesh.grid(mesh.d)
    with pytest.raises(InsufficientWindow):
        fit_boundary_exponent(u, window=(1e-2, 0.5))
    with pytest.raises(InsufficientWindow):
        fit_boundary_exponent(build_mesh(INTERVAL, 17, 1.0).grid(np.ones(17)), window=(1e-4, 1e-2))
    with pytest.raises(DomainError):
        log_correction_fit(u, 1.0, A=1e-3)


def test_bracket_constants(mesh):
    b = bracket_constants(mesh.grid(3.0 * mesh.d), 1.0, 0.99)
    assert b["holds"] and b["C1"] == pytest.approx(3.0)
    # d^{0.01} peaks at the window's last node, just below d = 1e-2
    assert 0.999 * 3.0 * 1e-2 ** 0.01 < b["C2"] <= 3.0 * 1e-2 ** 0.01


# comparison --------------------------------------------------------------

@pytest.fixture(scope="module")
def psi_setup():
    m = build_mesh(INTERVAL, 513, 2.0)
    return m, aux_profile(m, 2.0, -0.5), np.where(m.interior, 1.0, 0.0)


@pytest.mark.parametrize("c, verdict", [(0.9, "holds"), (1.0, "holds"), (1.1, "hypotheses not satisfied")])
def test_comparison_verdicts(psi_setup, c, verdict):
    m, psi, K = psi_setup
    v = check_comparison(m.grid(c * np.asarray(psi.values)), psi, K, -0.5, 2.0)
    assert v.verdict == verdict
    if verdict != "holds":
        assert v.failed == ["subsolution"]


@given(c=st.floats(0.5, 2.0), seed=st.integers(0, 1000))
def test_comparison_gating(psi_setup, c, seed):
    m, psi, K = psi_setup
    rng = np.random.default_rng(seed)
    u = c * np.asarray(psi.values) * (1 + 0.01 * rng.uniform(-1, 1, m.n))
    v = check_comparison(m.grid(u), psi, K, -0.5, 2.0)
    if not v.subsolution_ok:
        assert v.verdict != "holds"
    assert v.verdict in ("holds", "violated", "hypotheses not satisfied")


# convexity gap -----------------------------------------------------------------

@given(st.lists(st.floats(-4, 4), min_size=4, max_size=4))
def test_gap_identity_at_r2(vals):
    x, y = np.array(vals[:2]), np.array(vals[2:])
    assert peral_gap(x, y, 2.0, 1.0) == pytest.approx(0.0, abs=1e-9 * (1 + np.dot(x, x) + np.dot(y, y)))


@given(st.lists(st.integers(-3072, 3072), min_size=2, max_size=2), st.sampled_from([1.5, 2.0, 3.0, 4.5]),
       st.floats(0.0, 2.0))
def test_gap_vanishes_on_diagonal(x, r, C):
    x = np.array(x) / 1024.0
    if r < 2 and not np.any(x):
        x = np.array([1.0, 0.0])
    assert peral_gap(x, x, r, C) == pytest.approx(0.0, abs=1e-12)


def test_gap_nonnegative_r3():
    C = calibrate_Cr(3.0)
    rng = np.random.default_rng(7)
    x, y = rng.uniform(-1, 1, (100_000, 2)), rng.uniform(-1, 1, (100_000, 2))
    assert np.min(peral_gap(x, y, 3.0, C)) >= -1e-12


def test_gap_rejects_double_zero_below_two():
    with pytest.raises(DomainError):
        peral_gap(np.zeros(2), np.zeros(2), 1.5, 0.1)


def test_calibration_values():
    assert calibrate_Cr(2.0) == 0.5
    a, b = calibrate_Cr(3.0, seed=0), calibrate_Cr(3.0, seed=1)
    assert 0 < a <= 0.5 and abs(a - b) <= 0.1 * max(a, b)
    assert calibrate_Cr(1.5) > 0
    with pytest.raises(ValueError):
        calibrate_Cr(3.0, samples=100)


@pytest.mark.parametrize("r", [1.5, 3.0])
def test_calibration_isotropy(r):
    base = calibrate_Cr(r)
    rot = calibrate_Cr(r, rotation=math.pi / 7)
    assert abs(rot - base) <= 0.05 * base


def test_calibration_table(tmp_path):
    t = CalibrationTable(tmp_path / "c.txt")
    c = t.get(2.0)
    assert c == 0.5
    assert CalibrationTable(tmp_path / "c.txt").values == {2.0: 0.5}
