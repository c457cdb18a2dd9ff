"""Fitted boundary exponent against mesh size and grading for a few scenarios.

    python3 scripts/mesh_refinement_study.py
"""

from dataclasses import replace

from singular_systems.runner import run_scenario
from singular_systems.scenarios import MeshConfig, RunConfig, get_scenario

NAMES = ("gms_scalar_iii", "alt1_competitive", "coop_very_weak")


def main():
    for name in NAMES:
        base = get_scenario(name)
        print(f"{name}")
        for s in (2.0, 3.0):
            for n in (513, 1025, 2049, 4097):
                sc = replace(base, mesh=MeshConfig(base.mesh.geometry, n, s, base.mesh.dim))
                try:
                    res = run_scenario(RunConfig(sc))
                    f = res.fits[0]
                    print(f"  s={s:g} n={n:5d} gamma_hat={f.gamma_hat:.4f} predicted={f.predicted:.4f}")
                except Exception as exc:  # report and keep sweeping
                    print(f"  s={s:g} n={n:5d} {type(exc).__name__}: {exc}")


if __name__ == "__main__":
    main()
