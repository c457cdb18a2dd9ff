"""Closed-form regime calculus for three families of singular systems.

Power system (``SystemSpec``)
    -Delta_p u = K1 u^a1 v^b1,   -Delta_q v = K2 v^a2 u^b2,   K_i = d^{-k_i} L_i(d).
Absorption system (``AbsorptionSpec``)
    -Delta_p u = u^a1 v^b1 - u^alpha1 v^beta1   (and symmetrically for v).
Competition system (``CompetitionSpec``)
    -Delta_p u = lambda1 u^alpha1 - u^beta1 - mu1 u^a1 v^b1   (and symmetrically).

Every classifier returns a ``RegimeReport`` carrying the predicted boundary
exponents together with the auxiliary exponents needed to build
sub/supersolution shells.  Slowly varying exponent pairs are stored as
(exponent of the component's own L, exponent of the other component's L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import DomainError
from .karamata import LogPowerFactor

TOL = 1e-9
DEFAULT_EPSILON = 0.01
MARGIN_FLOOR = 1e-6

C1ALPHA, C0ALPHA, VERYWEAK = "C1alpha", "C0alpha", "VeryWeak"
INFEASIBLE = "Infeasible"
SYSTEM_ORDER = ("Alt2", "Alt1", "Alt3", "Alt4", "Limit-i", "Limit-ii", "Limit-iii", "Limit-iv",
                "Coop-i", "Coop-ii", "Coop-iii")
SWAP_TAG = {"Alt3": "Alt4", "Alt4": "Alt3", "Limit-i": "Limit-ii", "Limit-ii": "Limit-i",
            "Limit-iii": "Limit-iv", "Limit-iv": "Limit-iii", "Coop-ii": "Coop-iii",
            "Coop-iii": "Coop-ii"}


def _eq(a: float, b: float) -> bool:
    return abs(a - b) <= TOL * (1.0 + abs(a) + abs(b))


def _between(lo: float, x: float, hi: float) -> bool:
    return lo < x < hi and not _eq(x, lo) and not _eq(x, hi)


# specs ---------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    p: float
    q: float
    a1: float
    a2: float
    b1: float
    b2: float
    k1: float = 0.0
    k2: float = 0.0
    L1: LogPowerFactor = field(default_factory=LogPowerFactor)
    L2: LogPowerFactor = field(default_factory=LogPowerFactor)

    family = "power"

    def __post_init__(self):
        if not (self.p > 1 and self.q > 1):
            raise DomainError("p and q must exceed 1")
        if not (self.a1 < self.p - 1 and self.a2 < self.q - 1):
            raise DomainError("need a1 < p-1 and a2 < q-1")
        if self.b1 == 0 or self.b2 == 0:
            raise DomainError("b1 and b2 must be nonzero")
        if not (0 <= self.k1 < self.p and 0 <= self.k2 < self.q):
            raise DomainError("need 0 <= k1 < p and 0 <= k2 < q")

    def swapped(self) -> "SystemSpec":
        return SystemSpec(self.q, self.p, self.a2, self.a1, self.b2, self.b1,
                          self.k2, self.k1, self.L2, self.L1)

    @property
    def cooperative(self) -> bool:
        return self.b1 > 0 and self.b2 > 0


@dataclass(frozen=True)
class AbsorptionSpec:
    p: float
    q: float
    a1: float
    a2: float
    b1: float
    b2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    family = "absorption"
    k1 = 0.0
    k2 = 0.0

    def __post_init__(self):
        if not (self.p > 1 and self.q > 1):
            raise DomainError("p and q must exceed 1")

    def swapped(self) -> "AbsorptionSpec":
        return AbsorptionSpec(self.q, self.p, self.a2, self.a1, self.b2, self.b1,
                              self.alpha2, self.alpha1, self.beta2, self.beta1)

    @property
    def cooperative(self) -> bool:
        return False


@dataclass(frozen=True)
class CompetitionSpec:
    p: float
    q: float
    lambda1: float
    lambda2: float
    mu1: float
    mu2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    a1: float
    a2: float
    b1: float
    b2: float

    family = "competition"
    k1 = 0.0
    k2 = 0.0

    def __post_init__(self):
        if not (self.p > 1 and self.q > 1):
            raise DomainError("p and q must exceed 1")
        if min(self.lambda1, self.lambda2, self.mu1, self.mu2) <= 0:
            raise DomainError("lambda_i and mu_i must be positive")
        for r, al, be in ((self.p, self.alpha1, self.beta1), (self.q, self.alpha2, self.beta2)):
            if not -2.0 - 1.0 / (r - 1.0) < al < r - 1.0:
                raise DomainError(f"alpha = {al} outside (-2 - 1/(r-1), r-1)")
            if not al < be:
                raise DomainError("need alpha_i < beta_i")

    def swapped(self) -> "CompetitionSpec":
        return CompetitionSpec(self.q, self.p, self.lambda2, self.lambda1, self.mu2, self.mu1,
                               self.alpha2, self.alpha1, self.beta2, self.beta1,
                               self.a2, self.a1, self.b2, self.b1)

    @property
    def cooperative(self) -> bool:
        return False


# report --------------------------------------------------------------------

@dataclass(frozen=True)
class RegimeReport:
    feasible: bool
    regime: str
    gamma_u: Optional[float] = None
    gamma_v: Optional[float] = None
    slowly_varying_u: tuple = (0.0, 0.0)
    slowly_varying_v: tuple = (0.0, 0.0)
    log_correction_u: Optional[float] = None
    log_correction_v: Optional[float] = None
    sigma: Optional[float] = None
    sigma_interval: Optional[tuple] = None
    regularity: Optional[str] = None
    epsilon_bracket: bool = False
    epsilon: Optional[float] = None
    # per component: (lower, upper) exponent of a power profile, None = use psi
    brackets: dict = field(default_factory=dict)
    # auxiliary scalar problems -Delta w = d^{-k} Lcal(d) w^delta behind the shell
    delta_u: Optional[float] = None
    delta_v: Optional[float] = None
    lexp_u: tuple = (0.0, 0.0)
    lexp_v: tuple = (0.0, 0.0)
    membership_threshold: Optional[float] = None
    margins: dict = field(default_factory=dict)
    candidates: tuple = ()
    family: str = "power"
    reason: str = ""

    def swapped(self) -> "RegimeReport":
        br = {"u": self.brackets.get("v"), "v": self.brackets.get("u")} if self.brackets else {}
        sig = None if self.sigma is None else 1.0 / self.sigma
        interval = None
        if self.sigma_interval is not None:
            lo, hi = self.sigma_interval
            interval = (0.0 if hi == math.inf else 1.0 / hi, math.inf if lo == 0 else 1.0 / lo)
        return replace(
            self, regime=SWAP_TAG.get(self.regime, self.regime),
            gamma_u=self.gamma_v, gamma_v=self.gamma_u,
            slowly_varying_u=self.slowly_varying_v, slowly_varying_v=self.slowly_varying_u,
            log_correction_u=self.log_correction_v, log_correction_v=self.log_correction_u,
            sigma=sig, sigma_interval=interval, brackets=br,
            delta_u=self.delta_v, delta_v=self.delta_u, lexp_u=self.lexp_v, lexp_v=self.lexp_u,
            candidates=tuple(SWAP_TAG.get(c, c) for c in self.candidates))

    def as_dict(self) -> dict:
        out = {}
        for key in self.__dataclass_fields__:
            val = getattr(self, key)
            out[key] = list(val) if isinstance(val, tuple) else val
        return out


# basic conditions -------------------------------------------------------------

def check_subhomogeneity(spec: SystemSpec):
    margin = (spec.p - 1 - spec.a1) * (spec.q - 1 - spec.a2) - abs(spec.b1 * spec.b2)
    return margin > TOL, margin


def _window_from_halflines(constraints):
    """Intersect {sigma > 0 : A - B sigma > 0} over (A, B) pairs."""
    lo, hi = 0.0, math.inf
    for A, B in constraints:
        if B > 0:
            hi = min(hi, A / B)
        elif B < 0:
            lo = max(lo, A / B)
        elif A <= 0:
            return None
    if not lo < hi or _eq(lo, hi):
        return None
    return lo, hi


def _pick_sigma(lo: float, hi: float) -> float:
    if lo > 0 and hi < math.inf:
        return math.sqrt(lo * hi)
    if hi < math.inf:
        return hi / 2.0
    if lo > 0:
        return 2.0 * lo
    return 1.0


def find_sigma(spec: SystemSpec):
    """Admissible interval of sigma and its geometric mean, or None."""
    ok, _ = check_subhomogeneity(spec)
    if not ok:
        return None
    win = _window_from_halflines([
        (spec.p - 1 - spec.a1, abs(spec.b1)),
        (-abs(spec.b2), -(spec.q - 1 - spec.a2)),
    ])
    if win is None:
        return None
    return win, _pick_sigma(*win)


def absorption_window(spec: AbsorptionSpec):
    win = _window_from_halflines([
        (spec.p - 1 - spec.a1, abs(spec.b1)),
        (spec.alpha1 - spec.a1, abs(spec.beta1) - abs(spec.b1)),
        (-abs(spec.b2), -(spec.q - 1 - spec.a2)),
        (-(abs(spec.beta2) - abs(spec.b2)), -(spec.alpha2 - spec.a2)),
    ])
    return None if win is None else (win, _pick_sigma(*win))


def competition_window(spec: CompetitionSpec):
    win = _window_from_halflines([
        (spec.a1 - spec.alpha1, abs(spec.b1)),
        (-abs(spec.b2), -(spec.a2 - spec.alpha2)),
    ])
    return None if win is None else (win, _pick_sigma(*win))


# scalar problem ------------------------------------------------------------

def scalar_regime(r: float, k: float, delta: float, L: LogPowerFactor = None) -> RegimeReport:
    """Boundary behaviour of the solution of -Delta_r w = d^{-k} L(d) w^delta."""
    if not r > 1:
        raise DomainError("r must exceed 1")
    if not 0 <= k < r:
        raise DomainError("need 0 <= k < r")
    if delta >= r - 1:
        raise DomainError(f"delta = {delta} must be below r - 1 = {r - 1}")
    threshold = k - 2 + (k - 1) / (r - 1)
    gamma = (r - k) / (r - 1 - delta)
    common = dict(feasible=True, family="scalar", delta_u=delta,
                  margins={"delta_minus_(k-1)": delta - (k - 1), "delta_minus_threshold": delta - threshold})
    if _eq(delta, k - 1):
        return RegimeReport(regime="Scalar-ii", gamma_u=1.0, log_correction_u=1.0 / (r - k),
                            regularity=C0ALPHA, **common)
    if delta > k - 1:
        return RegimeReport(regime="Scalar-i", gamma_u=1.0, regularity=C1ALPHA, **common)
    sv = (1.0 / (r - 1 - delta), 0.0)
    if delta > threshold and not _eq(delta, threshold):
        return RegimeReport(regime="Scalar-iii", gamma_u=gamma, slowly_varying_u=sv,
                            regularity=C0ALPHA, **common)
    return RegimeReport(regime="Scalar-iv", gamma_u=gamma, slowly_varying_u=sv, regularity=VERYWEAK,
                        membership_threshold=(r - 1) * (r - 1 - delta) / (r * (r - k)), **common)


# power system ----------------------------------------------------------------

def _midpoint(lo: float, hi: float) -> float:
    return 0.5 * (lo + hi)


def _alt1_data(s: SystemSpec):
    den = (s.p - 1 - s.a1) * (s.q - 1 - s.a2) - s.b1 * s.b2
    g1 = ((s.p - s.k1) * (s.q - 1 - s.a2) + (s.q - s.k2) * s.b1) / den
    g2 = ((s.q - s.k2) * (s.p - 1 - s.a1) + (s.p - s.k1) * s.b2) / den
    al1, al2 = (s.q - 1 - s.a2) / den, (s.p - 1 - s.a1) / den
    be1, be2 = s.b1 / den, s.b2 / den
    return den, g1, g2, al1, al2, be1, be2


def _alt1_fields(s: SystemSpec):
    den, g1, g2, al1, al2, be1, be2 = _alt1_data(s)
    d1 = (s.p - 1) - (s.p - s.k1) / g1
    d2 = (s.q - 1) - (s.q - s.k2) / g2
    w1, w2 = s.p - 1 - d1, s.q - 1 - d2
    return dict(gamma_u=g1, gamma_v=g2, slowly_varying_u=(al1, be1), slowly_varying_v=(al2, be2),
                delta_u=d1, delta_v=d2, lexp_u=(al1 * w1, be1 * w1), lexp_v=(al2 * w2, be2 * w2))


def _alt3_fields(s: SystemSpec):
    g = (s.p - s.k1 + s.b1) / (s.p - 1 - s.a1)
    d1 = (s.p - 1) - (s.p - s.k1) / g
    lam1 = (s.p - 1 - d1) / (s.p - 1 - s.a1)
    return dict(gamma_u=g, gamma_v=1.0, slowly_varying_u=(1.0 / (s.p - 1 - s.a1), 0.0),
                slowly_varying_v=(0.0, 0.0), delta_u=d1, delta_v=s.a2 + s.b2 * g,
                lexp_u=(lam1, 0.0), lexp_v=(1.0, s.b2 / (s.p - 1 - s.a1)))


def _gamma3(s: SystemSpec) -> float:
    return (s.p - s.k1 + s.b1) / (s.p - 1 - s.a1)


def _power_matches(s: SystemSpec, sigma: float, eps: float):
    """All regimes whose hypotheses hold, each with its report fields."""
    out = {}
    p, q = s.p, s.q
    den, g1, g2, *_ = _alt1_data(s)
    if _between(s.k1 - 1, s.a1 + s.b1, p - 1) and _between(s.k2 - 1, s.a2 + s.b2, q - 1):
        out["Alt2"] = dict(gamma_u=1.0, gamma_v=1.0, delta_u=s.a1 + s.b1, delta_v=s.a2 + s.b2,
                           lexp_u=(1.0, 0.0), lexp_v=(1.0, 0.0), regularity=C1ALPHA)
    if _between(1 - 1 / p, g1, 1) and _between(1 - 1 / q, g2, 1):
        out["Alt1"] = dict(_alt1_fields(s), regularity=C0ALPHA)
    g = _gamma3(s)
    if _between(1 - 1 / p, g, 1) and _between(s.k2 - 1, s.a2 + s.b2 * g, q - 1):
        out["Alt3"] = dict(_alt3_fields(s), regularity=C0ALPHA)
    sw = _power_matches_half(s.swapped())
    if "Alt3" in sw:
        out["Alt4"] = _swap_fields(dict(_alt3_fields(s.swapped()), regularity=C0ALPHA))
    lim = _limit_fields(s, sigma, eps)
    if lim is not None:
        out["Limit-i"] = lim
    lim = _limit_fields(s.swapped(), 1.0 / sigma, eps)
    if lim is not None:
        out["Limit-ii"] = _swap_fields(lim)
    lim = _limit3_fields(s, sigma, eps)
    if lim is not None:
        out["Limit-iii"] = lim
    lim = _limit3_fields(s.swapped(), 1.0 / sigma, eps)
    if lim is not None:
        out["Limit-iv"] = _swap_fields(lim)
    if s.cooperative:
        lo1, lo2 = 1 - 1 / p, 1 - 1 / q
        in1 = 0 < g1 <= lo1 or _eq(g1, lo1)
        in2 = 0 < g2 <= lo2 or _eq(g2, lo2)
        mid1, mid2 = _between(lo1, g1, 1), _between(lo2, g2, 1)
        if (in1 and in2) or (mid1 and in2) or (in1 and mid2):
            out["Coop-i"] = dict(_alt1_fields(s), regularity=VERYWEAK)
        if (0 < g <= lo1 or _eq(g, lo1)) and _between(s.k2 - 1, s.a2 + s.b2 * g, q - 1):
            out["Coop-ii"] = dict(_alt3_fields(s), regularity=VERYWEAK)
        t = s.swapped()
        gt = _gamma3(t)
        if (0 < gt <= lo2 or _eq(gt, lo2)) and _between(t.k2 - 1, t.a2 + t.b2 * gt, t.q - 1):
            out["Coop-iii"] = _swap_fields(dict(_alt3_fields(t), regularity=VERYWEAK))
    return out


def _power_matches_half(s: SystemSpec):
    g = _gamma3(s)
    ok = _between(1 - 1 / s.p, g, 1) and _between(s.k2 - 1, s.a2 + s.b2 * g, s.q - 1)
    return {"Alt3": True} if ok else {}


def _swap_fields(f: dict) -> dict:
    out = dict(f)
    for a, b in (("gamma_u", "gamma_v"), ("slowly_varying_u", "slowly_varying_v"),
                 ("delta_u", "delta_v"), ("lexp_u", "lexp_v"),
                 ("log_correction_u", "log_correction_v")):
        if a in f or b in f:
            out[a], out[b] = f.get(b), f.get(a)
    if "brackets" in f:
        out["brackets"] = {"u": f["brackets"].get("v"), "v": f["brackets"].get("u")}
    return {k: v for k, v in out.items() if v is not None}


def _limit_fields(s: SystemSpec, sigma: float, eps: float):
    """a1 + b1 = k1 - 1 and k2 - 1 <= a2 + b2 < q - 1."""
    p, q = s.p, s.q
    s2 = s.a2 + s.b2
    if not _eq(s.a1 + s.b1, s.k1 - 1):
        return None
    if not ((s.k2 - 1 < s2 or _eq(s2, s.k2 - 1)) and s2 < q - 1 and not _eq(s2, q - 1)):
        return None
    return dict(gamma_u=1.0, gamma_v=1.0, regularity=C0ALPHA,
                delta_u=_midpoint(s.k1 - 1, p - 1), delta_v=_midpoint(max(s2, s.k2 - 1), q - 1),
                lexp_u=(1.0, 0.0), lexp_v=(1.0, 0.0),
                brackets={"u": (None, 1.0 - eps), "v": (None, 1.0 - sigma * eps)})


def _limit3_fields(s: SystemSpec, sigma: float, eps: float):
    """1 - 1/p < gamma < 1 and a2 + b2 gamma = k2 - 1."""
    g = _gamma3(s)
    if not (_between(1 - 1 / s.p, g, 1) and _eq(s.a2 + s.b2 * g, s.k2 - 1)):
        return None
    return dict(gamma_u=g, gamma_v=1.0, regularity=C0ALPHA,
                delta_u=None, delta_v=_midpoint(s.a2 + s.b2 * g, s.q - 1),
                lexp_u=(0.0, 0.0), lexp_v=(1.0, 0.0),
                brackets={"u": (g + eps, g - eps), "v": (None, 1.0 - sigma * eps)})


def _epsilon_margins(p: float, q: float, fields: dict, eps: float, sigma: float) -> dict:
    m = {}
    for comp, r in (("u", p), ("v", q)):
        br = fields.get("brackets", {}).get(comp)
        if br is None:
            continue
        lo, hi = br
        m[f"{comp}_upper_exponent_positive"] = hi
        if lo is not None:
            m[f"{comp}_lower_exponent_below_1"] = 1.0 - lo
            m[f"{comp}_upper_exponent_above_1-1/r"] = hi - (1.0 - 1.0 / r)
    return m


def _assemble(tag: str, fields: dict, base: dict, candidates, family: str, eps: float) -> RegimeReport:
    f = dict(fields)
    is_limit = tag.startswith("Limit")
    margins = dict(base.get("margins", {}))
    if is_limit:
        margins.update(_epsilon_margins(base["p"], base["q"], f, eps, base["sigma"]))
    return RegimeReport(
        feasible=True, regime=tag, family=family,
        sigma=base["sigma"], sigma_interval=base["interval"],
        epsilon_bracket=is_limit, epsilon=eps if is_limit else None,
        margins=margins, candidates=tuple(candidates), **f)


def classify_regime(spec: SystemSpec, epsilon: float = DEFAULT_EPSILON) -> RegimeReport:
    ok, h1 = check_subhomogeneity(spec)
    margins = {"subhomogeneity": h1}
    found = find_sigma(spec)
    if not ok or found is None:
        return RegimeReport(False, INFEASIBLE, margins=margins,
                            reason=f"subhomogeneity margin {h1:.6g}")
    interval, sigma = found
    den, g1, g2, *_ = _alt1_data(spec)
    g3, g4 = _gamma3(spec), _gamma3(spec.swapped())
    margins.update({
        "gamma1": g1, "gamma2": g2, "gamma_alt3": g3, "gamma_alt4": g4,
        "a1+b1-(k1-1)": spec.a1 + spec.b1 - (spec.k1 - 1), "(p-1)-(a1+b1)": spec.p - 1 - spec.a1 - spec.b1,
        "a2+b2-(k2-1)": spec.a2 + spec.b2 - (spec.k2 - 1), "(q-1)-(a2+b2)": spec.q - 1 - spec.a2 - spec.b2,
        "sigma_lower_gap": sigma - interval[0], "sigma_upper_gap": interval[1] - sigma,
    })
    matches = _power_matches(spec, sigma, epsilon)
    cands = [t for t in SYSTEM_ORDER if t in matches]
    if not cands:
        return RegimeReport(False, INFEASIBLE, sigma=sigma, sigma_interval=interval, margins=margins,
                            reason="no regime hypotheses hold")
    tag = cands[0]
    base = {"p": spec.p, "q": spec.q, "sigma": sigma, "interval": interval, "margins": margins}
    return _assemble(tag, matches[tag], base, cands, "power", epsilon)


# absorption system ------------------------------------------------------------

def classify_absorption(spec: AbsorptionSpec, epsilon: float = DEFAULT_EPSILON) -> RegimeReport:
    s = spec
    found = absorption_window(s)
    h1 = (s.p - 1 - s.a1) * (s.q - 1 - s.a2) - abs(s.b1 * s.b2)
    margins = {"subhomogeneity": h1}
    if found is None or h1 <= TOL:
        return RegimeReport(False, INFEASIBLE, family="absorption", margins=margins,
                            reason=f"empty sigma window (subhomogeneity margin {h1:.6g})")
    interval, sigma = found
    p, q = s.p, s.q
    den = (p - 1 - s.a1) * (q - 1 - s.a2) - s.b1 * s.b2
    g1 = (p * (q - 1 - s.a2) + q * s.b1) / den
    g2 = (q * (p - 1 - s.a1) + p * s.b2) / den
    g3 = (p + s.b1) / (p - 1 - s.a1)
    g4 = (q + s.b2) / (q - 1 - s.a2)
    A1, B1 = s.alpha1 - s.a1, s.beta1 - s.b1
    A2, B2 = s.alpha2 - s.a2, s.beta2 - s.b2
    margins.update({"gamma1": g1, "gamma2": g2, "gamma_alt3": g3, "gamma_alt4": g4})
    matches = {}

    def dpsi(r, gam):
        return (r - 1) - r / gam

    # (i)
    sign1, sign2 = A1 * g1 + B1 * g2, A2 * g2 + B2 * g1
    margins.update({"alt1_sign_u": sign1, "alt1_sign_v": sign2})
    if _between(1 - 1 / p, g1, 1) and _between(1 - 1 / q, g2, 1) and sign1 > 0 and sign2 > 0:
        matches["Alt1"] = dict(gamma_u=g1, gamma_v=g2, delta_u=dpsi(p, g1), delta_v=dpsi(q, g2),
                               regularity=C0ALPHA)
    # (ii)
    margins.update({"alt2_sign_u": A1 + B1, "alt2_sign_v": A2 + B2})
    if _between(-1, s.a1 + s.b1, p - 1) and _between(-1, s.a2 + s.b2, q - 1) and A1 + B1 > 0 and A2 + B2 > 0:
        matches["Alt2"] = dict(gamma_u=1.0, gamma_v=1.0, delta_u=s.a1 + s.b1, delta_v=s.a2 + s.b2,
                               regularity=C1ALPHA)
    # (iii) with the q - 1 bound on the second component
    m3u, m3v = A1 * g3 + B1, A2 + B2 * g3
    margins.update({"alt3_sign_u": m3u, "alt3_sign_v": m3v})
    if (_between(1 - 1 / p, g3, 1) and m3u > 0 and _between(-1, s.a2 + s.b2 * g3, q - 1) and m3v > 0):
        matches["Alt3"] = dict(gamma_u=g3, gamma_v=1.0, delta_u=dpsi(p, g3), delta_v=s.a2 + s.b2 * g3,
                               regularity=C0ALPHA)
    # (iv)
    m4u, m4v = A1 + B1 * g4, A2 * g4 + B2
    margins.update({"alt4_sign_u": m4u, "alt4_sign_v": m4v})
    if (_between(-1, s.a1 + s.b1 * g4, p - 1) and m4u > 0 and _between(1 - 1 / q, g4, 1) and m4v > 0):
        matches["Alt4"] = dict(gamma_u=1.0, gamma_v=g4, delta_u=s.a1 + s.b1 * g4, delta_v=dpsi(q, g4),
                               regularity=C0ALPHA)
    # limiting cases
    s1, s2 = s.a1 + s.b1, s.a2 + s.b2

    def le(a, b):
        return a < b or _eq(a, b)

    if _eq(s1, -1) and A1 + B1 > 0 and le(-1, s2) and s2 < q - 1 and A2 + B2 > 0:
        matches["Limit-i"] = dict(gamma_u=1.0, gamma_v=1.0, regularity=C0ALPHA,
                                  delta_u=_midpoint(-1, p - 1), delta_v=_midpoint(max(s2, -1), q - 1),
                                  brackets={"u": (None, 1 - epsilon), "v": (None, 1 - sigma * epsilon)})
    if _eq(s2, -1) and A2 + B2 > 0 and le(-1, s1) and s1 < p - 1 and A1 + B1 > 0:
        e2 = epsilon / sigma
        matches["Limit-ii"] = dict(gamma_u=1.0, gamma_v=1.0, regularity=C0ALPHA,
                                   delta_u=_midpoint(max(s1, -1), p - 1), delta_v=_midpoint(-1, q - 1),
                                   brackets={"u": (None, 1 - e2), "v": (None, 1 - epsilon)})
    if _between(1 - 1 / p, g3, 1) and m3u > 0 and _eq(s.a2 + s.b2 * g3, -1) and m3v > 0:
        matches["Limit-iii"] = dict(gamma_u=g3, gamma_v=1.0, regularity=C0ALPHA, delta_u=None,
                                    delta_v=_midpoint(-1, q - 1),
                                    brackets={"u": (g3 + epsilon, g3 - epsilon),
                                              "v": (None, 1 - sigma * epsilon)})
    if _between(1 - 1 / q, g4, 1) and m4v > 0 and _eq(s.a1 + s.b1 * g4, -1) and m4u > 0:
        e2 = epsilon / sigma
        matches["Limit-iv"] = dict(gamma_u=1.0, gamma_v=g4, regularity=C0ALPHA, delta_u=_midpoint(-1, p - 1),
                                   delta_v=None,
                                   brackets={"u": (None, 1 - e2), "v": (g4 + epsilon, g4 - epsilon)})
    cands = [t for t in SYSTEM_ORDER if t in matches]
    if not cands:
        return RegimeReport(False, INFEASIBLE, family="absorption", sigma=sigma, sigma_interval=interval,
                            margins=margins, reason="no regime hypotheses hold")
    tag = cands[0]
    base = {"p": p, "q": q, "sigma": sigma, "interval": interval, "margins": margins}
    return _assemble(tag, matches[tag], base, cands, "absorption", epsilon)


# competition system ------------------------------------------------------------

COMPETITION_ORDER = ("Alt2", "Alt1", "Alt3", "Alt4", "Log-ii", "Log-i", "Log-iii")


def classify_competition(spec: CompetitionSpec) -> RegimeReport:
    s = spec
    found = competition_window(s)
    interval, sigma = found if found is not None else (None, None)
    p, q = s.p, s.q
    lo1, lo2 = -2 - 1 / (p - 1), -2 - 1 / (q - 1)
    A1, A2 = s.a1 - s.alpha1, s.a2 - s.alpha2
    g1, g2 = p / (p - 1 - s.alpha1), q / (q - 1 - s.alpha2)
    m = {
        "alt1_u": A1 * p / (p - 1 - s.alpha1) + s.b1 * q / (q - 1 - s.alpha2),
        "alt1_v": A2 * q / (q - 1 - s.alpha2) + s.b2 * p / (p - 1 - s.alpha1),
        "alt2_u": A1 + s.b1, "alt2_v": A2 + s.b2,
        "alt3_u": (A1 + s.b1) * p - s.b1 * (s.alpha1 + 1),
        "alt3_v": (A2 + s.b2) * p - A2 * (s.alpha1 + 1),
        "alt4_u": (A1 + s.b1) * q - A1 * (s.alpha2 + 1),
        "alt4_v": (A2 + s.b2) * q - s.b2 * (s.alpha2 + 1),
    }
    if found is not None:
        m.update({"sigma_lower_gap": sigma - interval[0], "sigma_upper_gap": interval[1] - sigma})
    sing1 = _between(lo1, s.alpha1, -1)
    sing2 = _between(lo2, s.alpha2, -1)
    reg1 = _between(-1, s.alpha1, p - 1)
    reg2 = _between(-1, s.alpha2, q - 1)
    crit1, crit2 = _eq(s.alpha1, -1), _eq(s.alpha2, -1)
    matches = {}
    if sing1 and sing2 and m["alt1_u"] > 0 and m["alt1_v"] > 0:
        matches["Alt1"] = dict(gamma_u=g1, gamma_v=g2, regularity=C0ALPHA)
    if reg1 and reg2 and m["alt2_u"] > 0 and m["alt2_v"] > 0:
        matches["Alt2"] = dict(gamma_u=1.0, gamma_v=1.0, regularity=C1ALPHA)
    if sing1 and reg2 and m["alt3_u"] > 0 and m["alt3_v"] > 0:
        matches["Alt3"] = dict(gamma_u=g1, gamma_v=1.0, regularity=C0ALPHA)
    if reg1 and sing2 and m["alt4_u"] > 0 and m["alt4_v"] > 0:
        matches["Alt4"] = dict(gamma_u=1.0, gamma_v=g2, regularity=C0ALPHA)
    # logarithmic limiting cases; second condition read with +b2 as in the regular case
    crit_v = (A2 + s.b2) * q - s.b2 * (s.alpha2 + 1)
    m["log_i_v"] = crit_v
    if crit1 and m["alt4_u"] > 0 and sing2 and crit_v > 0:
        matches["Log-i"] = dict(gamma_u=1.0, gamma_v=g2, log_correction_u=1.0 / p, regularity=C0ALPHA)
    if crit1 and crit2 and m["alt2_u"] > 0 and m["alt2_v"] > 0:
        matches["Log-ii"] = dict(gamma_u=1.0, gamma_v=1.0, log_correction_u=1.0 / p,
                                 log_correction_v=1.0 / q, regularity=C0ALPHA)
    if crit1 and m["alt2_u"] > 0 and reg2 and m["alt2_v"] > 0:
        matches["Log-iii"] = dict(gamma_u=1.0, gamma_v=1.0, log_correction_u=1.0 / p, regularity=C0ALPHA)
    cands = [t for t in COMPETITION_ORDER if t in matches]
    if found is None:
        why = f"empty sigma window (regime conditions alone give {cands[0]})" if cands else "empty sigma window"
        return RegimeReport(False, INFEASIBLE, family="competition", margins=m,
                            candidates=tuple(cands), reason=why)
    if not cands:
        return RegimeReport(False, INFEASIBLE, family="competition", sigma=sigma, sigma_interval=interval,
                            margins=m, reason="no regime hypotheses hold")
    tag = cands[0]
    f = dict(matches[tag], delta_u=s.alpha1, delta_v=s.alpha2)
    return RegimeReport(True, tag, family="competition", sigma=sigma, sigma_interval=interval,
                        margins=m, candidates=tuple(cands), **f)


def classify(spec, epsilon: float = DEFAULT_EPSILON) -> RegimeReport:
    if isinstance(spec, SystemSpec):
        return classify_regime(spec, epsilon)
    if isinstance(spec, AbsorptionSpec):
        return classify_absorption(spec, epsilon)
    if isinstance(spec, CompetitionSpec):
        return classify_competition(spec)
    raise TypeError(f"unsupported spec type {type(spec).__name__}")
