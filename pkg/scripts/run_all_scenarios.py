"""Solve every named scenario and print fitted against predicted exponents.

    python3 scripts/run_all_scenarios.py [--out runs]
"""

import argparse
import time
from pathlib import Path

from singular_systems.persist import write_run
from singular_systems.runner import run_scenario
from singular_systems.scenarios import SCENARIOS, RunConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="write artifacts under this directory")
    args = ap.parse_args()
    print(f"{'scenario':20s} {'regime':10s} {'method':12s} {'iters':>5s} {'comp':6s} {'fit':>8s} {'pred':>8s} {'time':>6s}")
    for name, sc in SCENARIOS.items():
        cfg = RunConfig(sc)
        t0 = time.perf_counter()
        res = run_scenario(cfg)
        dt = time.perf_counter() - t0
        if args.out:
            write_run(Path(args.out) / name, cfg, res)
        for i, f in enumerate(res.fits):
            head = (name, res.regime.regime, res.method, str(res.report.iterations)) if i == 0 else ("",) * 4
            pred = "" if f.predicted is None else f"{f.predicted:8.4f}"
            tail = f"{dt:6.2f}" if i == 0 else ""
            print(f"{head[0]:20s} {head[1]:10s} {head[2]:12s} {head[3]:>5s} {f.component:6s} "
                  f"{f.gamma_hat:8.4f} {pred:>8s} {tail:>6s}")


if __name__ == "__main__":
    main()
