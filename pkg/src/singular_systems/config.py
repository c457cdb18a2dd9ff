"""Flat ``key = value`` configuration files with dotted keys.

Example::

    scenario = alt2_cooperative
    spec.b2 = 0.25
    mesh.n = 1025
    fit.window = 1e-4, 1e-2
    verify.properties = peral_oracle, classification

An inline spec needs ``spec.family`` plus every field of that family.
"""

from __future__ import annotations

import dataclasses
from dataclasses import replace
from typing import Optional

from .errors import DomainError
from .karamata import LogPowerFactor
from .scalar import SolveOptions
from .scenarios import (SPEC_TYPES, FitConfig, MeshConfig, RunConfig, RunSettings, Scenario,
                        get_scenario)


class ConfigError(ValueError):
    pass


SECTIONS = {"mesh": MeshConfig, "run": RunSettings, "fit": FitConfig, "solver": SolveOptions}
TOP_KEYS = ("scenario", "out", "seed", "verify.properties")


def parse_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key or any(c.isspace() for c in key):
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def _floats(raw: str) -> tuple:
    parts = [p.strip() for p in raw.strip("()[] ").split(",") if p.strip()]
    return tuple(float(p) for p in parts)


def coerce(type_name: str, raw: str, key: str):
    t = str(type_name)
    try:
        if "bool" in t:
            low = raw.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return low in ("true", "1", "yes")
        if t == "int":
            return int(raw)
        if t == "float":
            return float(raw)
        if "tuple" in t:
            return _floats(raw)
        if "LogPowerFactor" in t:
            raise ConfigError(f"{key}: set the factor through {key}.A and {key}.mus")
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {t}") from None


def _apply_section(obj, cls, items: dict, section: str):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    changes = {}
    for name, raw in items.items():
        if name not in fields:
            raise ConfigError(f"unknown key {section}.{name}")
        changes[name] = coerce(fields[name].type, raw, f"{section}.{name}")
    try:
        return replace(obj, **changes) if changes else obj
    except (DomainError, ValueError, TypeError) as exc:
        raise ConfigError(f"{section}: {exc}") from None


def _log_factor(base: LogPowerFactor, items: dict, key: str) -> LogPowerFactor:
    allowed = {"A", "mus", "D"}
    bad = set(items) - allowed
    if bad:
        raise ConfigError(f"unknown key {key}.{sorted(bad)[0]}")
    try:
        return LogPowerFactor(float(items.get("A", base.A)),
                              _floats(items["mus"]) if "mus" in items else base.mus,
                              float(items.get("D", base.D)))
    except (DomainError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _build_spec(base, items: dict):
    family = items.pop("family", None)
    cls = SPEC_TYPES.get(family or getattr(base, "family", ""))
    if cls is None:
        raise ConfigError(f"spec.family must be one of {sorted(SPEC_TYPES)}, got {family!r}")
    nested = {}
    for key in [k for k in items if "." in k]:
        head, tail = key.split(".", 1)
        nested.setdefault(head, {})[tail] = items.pop(key)
    fields = {f.name: f for f in dataclasses.fields(cls)}
    inherit = base is not None and isinstance(base, cls) and family in (None, cls.family)
    values = {f: getattr(base, f) for f in fields} if inherit else {}
    for name, raw in items.items():
        if name not in fields:
            raise ConfigError(f"unknown key spec.{name} for family {cls.family}")
        values[name] = coerce(fields[name].type, raw, f"spec.{name}")
    for name, sub in nested.items():
        if name not in fields or "LogPowerFactor" not in str(fields[name].type):
            raise ConfigError(f"unknown key spec.{name}.*")
        values[name] = _log_factor(values.get(name, LogPowerFactor()), sub, f"spec.{name}")
    missing = [f for f, fd in fields.items() if f not in values
               and fd.default is dataclasses.MISSING and fd.default_factory is dataclasses.MISSING]
    if missing:
        raise ConfigError(f"inline {cls.family} spec is missing {', '.join('spec.' + m for m in missing)}")
    try:
        return cls(**values)
    except (DomainError, ValueError, TypeError) as exc:
        raise ConfigError(f"spec: {exc}") from None


def build_config(pairs: dict, scenario_name: Optional[str] = None, out: Optional[str] = None,
                 seed: Optional[int] = None, require_scenario: bool = True) -> RunConfig:
    """Resolve parsed pairs plus command-line overrides into a RunConfig.

    Command-line values win over the file.
    """
    pairs = dict(pairs)
    groups = {"spec": {}, **{s: {} for s in SECTIONS}}
    top = {}
    for key, val in pairs.items():
        if key in TOP_KEYS:
            top[key] = val
            continue
        head, _, tail = key.partition(".")
        if head not in groups or not tail:
            raise ConfigError(f"unknown key {key!r}")
        groups[head][tail] = val
    name = scenario_name or top.get("scenario")
    base: Optional[Scenario] = None
    if name:
        try:
            base = get_scenario(name)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
    if base is None and groups["spec"]:
        base = Scenario("inline", _build_spec(None, dict(groups["spec"])))
    elif base is not None and groups["spec"]:
        base = replace(base, spec=_build_spec(base.spec, dict(groups["spec"])))
    if base is None:
        if require_scenario:
            raise ConfigError("no scenario given: use --scenario, 'scenario = NAME' or an inline spec")
    else:
        base = replace(base,
                       mesh=_apply_section(base.mesh, MeshConfig, groups["mesh"], "mesh"),
                       run=_apply_section(base.run, RunSettings, groups["run"], "run"),
                       fit=_apply_section(base.fit, FitConfig, groups["fit"], "fit"))
    solver = None
    if groups["solver"]:
        solver = _apply_section(SolveOptions(), SolveOptions, groups["solver"], "solver")
    try:
        seed_val = seed if seed is not None else int(top.get("seed", 0))
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {top['seed']!r}") from None
    props = None
    if "verify.properties" in top:
        props = tuple(p.strip() for p in top["verify.properties"].split(",") if p.strip())
    overrides = {k: v for k, v in pairs.items() if k not in ("scenario", "out", "seed")}
    return RunConfig(base, solver, out or top.get("out"), seed_val, props, overrides)


def load_config(path, **kwargs) -> RunConfig:
    try:
        text = open(path).read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return build_config(parse_text(text), **kwargs)
