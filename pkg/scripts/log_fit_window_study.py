"""Sensitivity of the log-correction exponent to the base A and the fit window.

For u = d g(d) with g slowly varying the regression of ln(u/d) on ln ln(A/d)
is biased by lower-order terms of ln g; deeper windows and A = 1 reduce it.

    python3 scripts/log_fit_window_study.py
"""

from singular_systems.analysis import fit_log_correction
from singular_systems.runner import run_scenario
from singular_systems.scenarios import RunConfig, get_scenario

WINDOWS = [(1e-4, 1e-2), (1e-6, 1e-3), (1e-8, 1e-4), (1e-10, 1e-6)]
BASES = [1.0, 2.0, 10.0]


def main():
    for name, target in (("gms_scalar_ii", 1.0), ("ex3_log", 0.5)):
        res = run_scenario(RunConfig(get_scenario(name)))
        print(f"{name}: predicted log exponent {target}")
        print("  window              " + "".join(f"A={A:<8g}" for A in BASES))
        for w in WINDOWS:
            cells = []
            for A in BASES:
                try:
                    cells.append(f"{fit_log_correction(res.u, 1.0, A=A, window=w):<10.4f}")
                except ValueError as exc:
                    cells.append(f"{type(exc).__name__[:9]:<10s}")
            print(f"  ({w[0]:.0e}, {w[1]:.0e})  " + "".join(cells))


if __name__ == "__main__":
    main()
