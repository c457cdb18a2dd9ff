"""Command line: ``classify``, ``solve`` and ``verify``.

Exit codes: 0 success, 1 bad configuration, 2 infeasible parameters,
3 solver did not converge, 4 shell construction failed, 5 property failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .config import ConfigError, build_config, load_config
from .errors import NonConvergence, ShellConstructionFailure, SolverError
from .params import VERYWEAK

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_NONCONV, EXIT_SHELL, EXIT_VERIFY = 0, 1, 2, 3, 4, 5


def num(x) -> str:
    if x is None:
        return "none"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def render_regime(rep) -> list:
    if not rep.feasible:
        lines = [f"infeasible: {rep.reason}"]
        if rep.candidates:
            lines.append("candidates=" + ",".join(rep.candidates))
    else:
        head = [f"regime={rep.regime}", f"gamma_u={num(rep.gamma_u)}"]
        if rep.gamma_v is not None:
            head.append(f"gamma_v={num(rep.gamma_v)}")
        head.append(f"regularity={rep.regularity}")
        head.append("solution_space=" + ("very-weak" if rep.regularity == VERYWEAK else "weak"))
        if rep.log_correction_u is not None:
            head.append(f"log_u={num(rep.log_correction_u)}")
        if rep.log_correction_v is not None:
            head.append(f"log_v={num(rep.log_correction_v)}")
        lines = [" ".join(head)]
        if rep.epsilon_bracket:
            lines.append(f"epsilon={num(rep.epsilon)} brackets=" + json.dumps(rep.brackets, sort_keys=True))
        if rep.membership_threshold is not None:
            lines.append(f"membership_threshold={num(rep.membership_threshold)}")
    if rep.sigma_interval is not None:
        lo, hi = rep.sigma_interval
        lines.append(f"sigma={num(rep.sigma)} sigma_window=({num(lo)}, {num(hi)})")
    for key, val in rep.margins.items():
        lines.append(f"margin.{key}={num(val)}")
    return lines


def _config(args, require_scenario=True):
    kw = dict(scenario_name=args.scenario, out=args.out, seed=args.seed, require_scenario=require_scenario)
    if args.config:
        return load_config(args.config, **kw)
    return build_config({}, **kw)


def cmd_classify(args) -> int:
    from .runner import classify_scenario
    cfg = _config(args)
    rep = classify_scenario(cfg.scenario)
    for line in render_regime(rep):
        print(line)
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def cmd_solve(args) -> int:
    from .persist import write_run
    from .runner import classify_scenario, run_scenario
    cfg = _config(args)
    rep = classify_scenario(cfg.scenario)
    if not rep.feasible:
        print(f"infeasible: {rep.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    out = Path(cfg.out or Path("runs") / cfg.scenario.name)
    try:
        res = run_scenario(cfg, rep)
    except ShellConstructionFailure as exc:
        print(f"shell construction failed: {exc}", file=sys.stderr)
        return EXIT_SHELL
    except (NonConvergence, SolverError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    write_run(out, cfg, res)
    print(f"scenario={cfg.scenario.name} method={res.method} regime={rep.regime} "
          f"iterations={res.report.iterations} out={out}")
    for f in res.fits:
        print(f"fit {f.component}: gamma_hat={num(f.gamma_hat)} predicted={num(f.predicted)} "
              f"abs_dev={num(f.abs_dev)}")
    for key, chk in res.checks.items():
        print(f"check {key}: holds={chk['holds']} C1={num(chk['C1'])} C2={num(chk['C2'])}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import PROPERTIES, run_suite
    cfg = _config(args, require_scenario=False)
    names = cfg.properties
    if names is not None:
        unknown = [n for n in names if n not in PROPERTIES]
        if unknown:
            raise ConfigError(f"unknown properties: {', '.join(unknown)}; known: {', '.join(PROPERTIES)}")
    results = run_suite(cfg, names, on_result=lambda r: print(r.line(), flush=True))
    failed = sum(not r.passed for r in results)
    print(f"summary total={len(results)} passed={len(results) - failed} failed={failed}")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = {"seed": cfg.seed, "properties": [r.__dict__ for r in results]}
        (out / "verify.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singular-systems", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("classify", "solve", "verify"))
    ap.add_argument("--config", help="flat key = value file")
    ap.add_argument("--scenario", help="named scenario; overrides the config file")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--seed", type=int, help="seed for calibration randomness")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"classify": cmd_classify, "solve": cmd_solve, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
