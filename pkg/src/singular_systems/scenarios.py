"""Named scenarios and the run configuration built around them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import DomainError
from .karamata import LogPowerFactor
from .params import AbsorptionSpec, CompetitionSpec, SystemSpec
from .scalar import SolveOptions


@dataclass(frozen=True)
class ScalarSpec:
    """-Delta_r w = d^{-k} L(d) w^delta in the domain, w = 0 on the boundary."""
    r: float
    k: float
    delta: float
    L: LogPowerFactor = field(default_factory=LogPowerFactor)

    family = "scalar"

    def __post_init__(self):
        if not self.r > 1:
            raise DomainError("r must exceed 1")
        if not 0 <= self.k < self.r:
            raise DomainError("need 0 <= k < r")
        if not self.delta < self.r - 1:
            raise DomainError("need delta < r - 1")


Spec = Union[SystemSpec, AbsorptionSpec, CompetitionSpec, ScalarSpec]
SPEC_TYPES = {"power": SystemSpec, "absorption": AbsorptionSpec, "competition": CompetitionSpec,
              "scalar": ScalarSpec}


@dataclass(frozen=True)
class MeshConfig:
    geometry: str = "interval"
    n: int = 2049
    s: float = 2.0
    dim: int = 2


@dataclass(frozen=True)
class RunSettings:
    method: str = "auto"            # auto | fixed_point | monotone | scalar
    m_init: float = 0.5
    max_halvings: int = 40
    n_stages: int = 12
    schedule: str = "harmonic"
    gauss_seidel: bool = False
    max_iter: int = 500
    tol: float = 1e-9
    residual_tol: float = 1e-7
    start: str = "LowerCorner"
    epsilon: float = 0.01
    compensation: str = "nodewise"


@dataclass(frozen=True)
class FitConfig:
    window: tuple = (1e-4, 1e-2)
    log_fit: bool = False
    log_A: float = 1.0
    log_window: tuple = (1e-8, 1e-4)


@dataclass(frozen=True)
class Scenario:
    name: str
    spec: Spec
    mesh: MeshConfig = MeshConfig()
    run: RunSettings = RunSettings()
    fit: FitConfig = FitConfig()
    description: str = ""


@dataclass
class RunConfig:
    scenario: Optional[Scenario]
    # None keeps each solver's own defaults
    solver: Optional[SolveOptions] = None
    out: Optional[str] = None
    seed: int = 0
    # None = full default suite
    properties: Optional[tuple] = None
    overrides: dict = field(default_factory=dict)


def _power(b, k=0.0, a=0.0):
    return SystemSpec(2.0, 2.0, a, a, b, b, k, k)


_SINGULAR = MeshConfig(s=3.0)

SCENARIOS = {
    s.name: s for s in (
        Scenario("alt2_cooperative", _power(0.5),
                 description="cooperative power system, gamma = 1 for both components"),
        Scenario("alt1_competitive", _power(-0.5, k=1.2), _SINGULAR,
                 description="competitive power system with singular weights, gamma = 8/15"),
        Scenario("coop_very_weak", _power(0.1, k=1.8), _SINGULAR, RunSettings(method="monotone"),
                 FitConfig(window=(1e-3, 1e-1)),
                 description="cooperative very weak regime solved by the expanding-domain scheme"),
        Scenario("limit_epsilon", _power(0.5, k=1.0, a=-0.5),
                 description="borderline case with the two-sided bracket d <= u <= d^(1 - eps)"),
        Scenario("gms_scalar_i", ScalarSpec(2.0, 0.0, -0.5), _SINGULAR,
                 description="scalar problem, gamma = 1"),
        Scenario("gms_scalar_ii", ScalarSpec(2.0, 1.0, 0.0), _SINGULAR, fit=FitConfig(log_fit=True),
                 description="scalar problem on the log-corrected border, d ln(1/d)"),
        Scenario("gms_scalar_iii", ScalarSpec(2.0, 0.0, -1.5), _SINGULAR,
                 description="scalar problem, gamma = 0.8"),
        Scenario("gms_scalar_iv", ScalarSpec(2.0, 0.0, -3.5), _SINGULAR,
                 description="scalar problem below the energy threshold, gamma = 4/9"),
        Scenario("ex2_absorption", AbsorptionSpec(2.0, 2.0, -0.5, -0.5, 0.25, 0.25, 0.0, 0.0, 0.5, 0.5),
                 _SINGULAR, description="system with absorption terms"),
        Scenario("ex3_competition",
                 CompetitionSpec(2.0, 2.0, 1.0, 1.0, 1.0, 1.0, -1.5, -1.5, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0),
                 _SINGULAR, description="competition system, gamma = 0.8"),
        Scenario("ex3_log",
                 CompetitionSpec(2.0, 2.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0),
                 _SINGULAR, fit=FitConfig(log_fit=True),
                 description="competition system with the d |ln d|^(1/2) boundary law"),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}") from None


def with_spec(scenario: Scenario, **changes) -> Scenario:
    return replace(scenario, spec=replace(scenario.spec, **changes))
