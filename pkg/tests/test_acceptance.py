"""End-to-end acceptance suite; each test records one PASS/FAIL line."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, scenario_run
from singular_systems.analysis import calibrate_Cr, fit_log_correction
from singular_systems.persist import write_run
from singular_systems.runner import run_scenario
from singular_systems.scenarios import RunConfig, get_scenario
from singular_systems.system import uniqueness_probe
from singular_systems.verify import min_peral_gap, scalar_oracle_error


def record(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def fits_by_name(res):
    return {f.component: f for f in res.fits}


def test_c01_scalar_oracle():
    parts, ok = [], True
    for p in (1.5, 2.0, 3.0):
        err, dt = timed(scalar_oracle_error, p, 513)
        ok &= err <= 1e-3 and dt < 5.0
        parts.append(f"p={p:g} err={err:.2e} t={dt:.2f}s")
    record(1, ok, "; ".join(parts))


def test_c02_scalar_exponents():
    parts, ok = [], True
    for name, gamma in (("gms_scalar_i", 1.0), ("gms_scalar_iii", 0.8)):
        res, dt = timed(scenario_run, name)
        g = fits_by_name(res)["u"].gamma_hat
        ok &= abs(g - gamma) <= 0.03 and dt < 30.0
        parts.append(f"{name} gamma_hat={g:.4f} (want {gamma}) t={dt:.2f}s")
    record(2, ok, "; ".join(parts))


def test_c03_scalar_log_correction():
    res = scenario_run("gms_scalar_ii")
    fc = res.scenario.fit
    ell = fit_log_correction(res.u, 1.0, A=fc.log_A, window=fc.log_window)
    record(3, abs(ell - 1.0) <= 0.1, f"log exponent={ell:.4f} (want 1.0 +- 0.1)")


def test_c04_alt2():
    res, dt = timed(scenario_run, "alt2_cooperative")
    f = fits_by_name(res)
    rs = res.report.extra["final_residuals"]
    ok = (res.report.converged and max(rs) <= 1e-7 and res.report.iterations <= 100
          and all(abs(f[c].gamma_hat - 1.0) <= 0.05 for c in "uv") and dt < 120)
    record(4, ok, f"iterations={res.report.iterations} residuals=({rs[0]:.1e}, {rs[1]:.1e}) "
                  f"gamma=({f['u'].gamma_hat:.4f}, {f['v'].gamma_hat:.4f}) t={dt:.2f}s")


def test_c05_alt1():
    res, dt = timed(scenario_run, "alt1_competitive")
    f = fits_by_name(res)
    ok = all(abs(f[c].gamma_hat - 8 / 15) <= 0.05 for c in "uv") and dt < 180
    record(5, ok, f"gamma=({f['u'].gamma_hat:.4f}, {f['v'].gamma_hat:.4f}) want {8 / 15:.4f} t={dt:.2f}s")


def test_c06_uniqueness():
    parts, ok = [], True
    for name in ("alt2_cooperative", "alt1_competitive"):
        res = scenario_run(name)
        run = res.scenario.run
        dist = uniqueness_probe(res.scenario.spec, res.shell, res.mesh, max_iter=run.max_iter, tol=run.tol,
                                residual_tol=run.residual_tol)
        ok &= dist <= 1e-6
        parts.append(f"{name} distance={dist:.2e}")
    record(6, ok, "; ".join(parts))


def test_c07_monotone_scheme():
    res, dt = timed(scenario_run, "coop_very_weak")
    ext = res.report.extra
    g = fits_by_name(res)["u"]
    ok = (res.method == "monotone" and ext["max_monotonicity_drop"] <= 1e-10 and ext["shell_violations"] == 0
          and res.scenario.fit.window == (1e-3, 1e-1) and abs(g.gamma_hat - 2 / 9) <= 0.05 and dt < 180)
    record(7, ok, f"stages={res.report.iterations} max_drop={ext['max_monotonicity_drop']:.1e} "
                  f"violations={ext['shell_violations']} gamma={g.gamma_hat:.4f} want {2 / 9:.4f} t={dt:.2f}s")


def test_c08_limit_bracket():
    res = scenario_run("limit_epsilon")
    chk = res.checks["bracket_u"]
    m = res.mesh
    lo, hi = res.scenario.fit.window
    sel = (m.d >= lo) & (m.d <= hi) & m.near_side
    u, d = np.asarray(res.u.values)[sel], m.d[sel]
    nodewise = bool(np.all(chk["C1"] * d <= u * (1 + 1e-12)) and np.all(u <= chk["C2"] * d ** 0.99 * (1 + 1e-12)))
    ok = chk["holds"] and chk["C1"] > 0 and np.isfinite(chk["C2"]) and nodewise and chk["high_exp"] == 0.99
    record(8, ok, f"C1={chk['C1']:.4f} C2={chk['C2']:.4f} nodes={chk['n_points']} nodewise={nodewise}")


def test_c09_competition_log():
    res = scenario_run("ex3_log")
    fc = res.scenario.fit
    ell = fit_log_correction(res.u, 1.0, A=fc.log_A, window=fc.log_window)
    record(9, abs(ell - 0.5) <= 0.1, f"log exponent={ell:.4f} (want 0.5 +- 0.1)")


def test_c10_convexity_gap():
    t0 = time.perf_counter()
    parts, ok = [], True
    for r in (1.5, 2.0, 3.0):
        C = calibrate_Cr(r, seed=0)
        gap = min_peral_gap(r, C, seed=0, samples=100_000)
        ok &= C > 0 and gap >= -1e-12
        if r == 2.0:
            ok &= C == 0.5
        parts.append(f"r={r:g} C={C:.4g} min_gap={gap:.1e}")
    dt = time.perf_counter() - t0
    record(10, ok and dt < 10, "; ".join(parts) + f" t={dt:.2f}s")


def test_c11_shell_invariance():
    parts, ok = [], True
    for name in ("alt2_cooperative", "alt1_competitive", "coop_very_weak"):
        ext = scenario_run(name).report.extra
        ok &= ext["shell_violations"] == 0 and ext["max_shell_violation"] <= 1e-9
        parts.append(f"{name} violations={ext['shell_violations']} worst={ext['max_shell_violation']:.1e}")
    record(11, ok, "; ".join(parts))


def test_c12_determinism(tmp_path):
    blobs = []
    for tag in ("first", "second"):
        cfg = RunConfig(get_scenario("alt2_cooperative"), seed=0)
        write_run(tmp_path / tag, cfg, run_scenario(cfg))
        blobs.append((tmp_path / tag / "solution.csv").read_bytes())
    record(12, blobs[0] == blobs[1] and len(blobs[0]) > 0, f"solution.csv {len(blobs[0])} bytes, identical={blobs[0] == blobs[1]}")
