"""Slowly varying log-power factors L(t) = prod_n (log_n(A/t))^{mu_n}.

log_n is the n-fold iterated natural logarithm.  The factors enter the
singular weights K(x) = d(x)^{-k} L(d(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError


def _iterated_logs(x, depth: int):
    """Return [log_1(x), ..., log_depth(x)] for scalar or array x."""
    out = []
    cur = np.asarray(x, dtype=float)
    for _ in range(depth):
        cur = np.log(cur)
        out.append(cur)
    return out


@dataclass(frozen=True)
class LogPowerFactor:
    A: float = 10.0
    mus: tuple = ()
    D: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mus", tuple(float(m) for m in self.mus))
        if self.D <= 0:
            raise DomainError("diameter must be positive")
        if not self.A > 2.0 * self.D:
            raise DomainError(f"need A > 2D, got A={self.A}, D={self.D}")
        m = len(self.mus)
        if m:
            # iterated logs decrease in t, so checking t = 2D covers (0, 2D]
            logs = _iterated_logs(self.A / (2.0 * self.D), m)
            for n, val in enumerate(logs, start=1):
                need = 0.0 if n == m else 1.0
                if not float(val) > need:
                    raise DomainError(
                        f"log_{n}(A/2D) = {float(val):.6g} must exceed {need:g}; increase A")

    @property
    def trivial(self) -> bool:
        return len(self.mus) == 0

    def _check_t(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0) or np.any(t > self.D):
            raise DomainError(f"t must lie in (0, {self.D}]")
        return t

    def log_L(self, t):
        """ln L(t), computed without forming L (stable for tiny t)."""
        t = self._check_t(t)
        if self.trivial:
            return np.zeros_like(t) if t.ndim else 0.0
        total = 0.0
        for mu, lg in zip(self.mus, _iterated_logs(self.A / t, len(self.mus))):
            total = total + mu * np.log(lg)
        return total if np.ndim(total) else float(total)

    def power(self, lam: float) -> "LogPowerFactor":
        """L^lam, again a log-power factor with the same A."""
        return LogPowerFactor(self.A, tuple(lam * m for m in self.mus), self.D)


def eval_L(L: LogPowerFactor, t):
    if L.trivial:
        L._check_t(t)
        return 1.0 if np.ndim(t) == 0 else np.ones(np.shape(t))
    val = np.exp(L.log_L(t))
    return float(val) if np.ndim(val) == 0 else val


def eval_L_unchecked(L: LogPowerFactor, t: np.ndarray) -> np.ndarray:
    """Vectorised L on (0, 2D]; entries with t <= 0 return 1.

    Boundary nodes carry d = 0 and are never used, so a neutral value is safe.
    """
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    if L.trivial:
        return out
    pos = t > 0
    acc = np.zeros(int(pos.sum()))
    for mu, lg in zip(L.mus, _iterated_logs(L.A / t[pos], len(L.mus))):
        acc += mu * np.log(lg)
    out[pos] = np.exp(acc)
    return out


def combine(*pairs) -> "callable":
    """Product of powers of factors, ``combine((L1, a), (L2, b))`` -> t -> L1^a L2^b."""
    def weight(t):
        out = np.ones_like(np.asarray(t, dtype=float))
        for L, e in pairs:
            if e != 0 and not L.trivial:
                out = out * eval_L_unchecked(L, t) ** e
        return out
    return weight


def integral_L_over_t(L: LogPowerFactor, t: float, upper: float) -> float:
    """Adaptive quadrature of int_t^upper L(s)/s ds, done in y = ln(1/s)."""
    if not 0 < t < upper:
        raise DomainError(f"need 0 < t < upper, got t={t}, upper={upper}")
    if upper > 2.0 * L.D * (1 + 1e-12):
        raise DomainError(f"upper limit {upper} exceeds 2D = {2.0 * L.D}")
    if L.trivial:
        return math.log(upper / t)
    lo, hi = -math.log(upper), -math.log(t)

    def integrand(y):
        s = math.exp(-y)
        acc = 0.0
        for mu, lg in zip(L.mus, _iterated_logs(L.A / s, len(L.mus))):
            acc += mu * math.log(float(lg))
        return math.exp(acc)

    val, _ = integrate.quad(integrand, lo, hi, epsrel=1e-10, epsabs=0.0, limit=200)
    return float(val)
