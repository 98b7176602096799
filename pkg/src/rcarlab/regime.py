"""Scaling regimes of the joint aggregate: which normalization and which limit
law apply for given ``(alpha, beta, N, n)``."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import limit_laws as ll
from .exceptions import UnsupportedRegime
from .mixing import MixingLaw, kappa_alpha
from .stable_core import StableLaw, cf_levy

__all__ = ["RegimeCase", "LimitLaw", "RegimeReport", "classify", "regime_table", "is_unsupported"]


class RegimeCase(str, enum.Enum):
    I_MU_INF_BETA_GT1 = "I_mu_inf_beta_gt1"
    I_MU_INF_BETA_EQ1 = "I_mu_inf_beta_eq1"
    I_MU_INF_BETA_LT1 = "I_mu_inf_beta_lt1"
    I_MU_ZERO = "I_mu_zero"
    I_INTERMEDIATE = "I_intermediate"
    II_MU_INF = "II_mu_inf"
    II_MU_ZERO = "II_mu_zero"
    II_INTERMEDIATE = "II_intermediate"
    III_SHORT_MEMORY = "III_short_memory"
    UNSUPPORTED = "Unsupported"


# Table-style family name and stability index of each limit
_FAMILY = {
    RegimeCase.I_MU_INF_BETA_GT1: "α-stable",
    RegimeCase.I_MU_INF_BETA_EQ1: "α-stable",
    RegimeCase.I_MU_INF_BETA_LT1: "(αβ)-stable",
    RegimeCase.I_MU_ZERO: "β-stable",
    RegimeCase.I_INTERMEDIATE: "intermediate Poisson",
    RegimeCase.II_MU_INF: "(αβ)-stable",
    RegimeCase.II_MU_ZERO: "α-stable",
    RegimeCase.II_INTERMEDIATE: "(αβ)-stable + α-stable",
    RegimeCase.III_SHORT_MEMORY: "α-stable",
    RegimeCase.UNSUPPORTED: "unsupported",
}


def is_unsupported(alpha: float, beta: float) -> bool:
    return alpha == beta or (alpha < beta and beta == 1.0)


@dataclass(frozen=True)
class LimitLaw:
    """A limit law bound to its parameters; ``cf(theta, tau)`` evaluates the
    marginal characteristic function at time ``tau``."""

    name: str
    family: str
    index: Optional[float]
    alpha: float
    beta: float
    psi1: float
    law: StableLaw
    mu: Optional[float] = None

    def cf(self, theta, tau: float = 1.0, quad: Optional[ll.QuadratureSpec] = None):
        th = np.asarray(theta, dtype=float)
        a, b, p, law = self.alpha, self.beta, self.psi1, self.law
        q = quad or ll.QuadratureSpec()
        if self.name == "Lambda":
            return ll.cf_Lambda(th, [tau], a, b, p, law, q)
        if self.name == "V1*tau":
            return ll.cf_V1(th * tau, a, p, law)
        if self.name == "V*tau":
            return ll.cf_V(th * tau, a, b, p, law)
        if self.name == "W":
            return ll.cf_W(th[..., None] if th.ndim else [float(th)], [tau], a, b, p, law)
        if self.name == "Z":
            return ll.cf_Z(th * self.mu ** (1.0 / a), [tau / self.mu], a, b, p, law, q)
        kap = kappa_alpha(MixingLaw(b, p), a) ** (1.0 / a)
        levy = cf_levy(kap * th, tau, law)
        if self.name == "zeta":
            return levy
        if self.name == "V*tau+zeta":
            return ll.cf_V(self.mu ** (1.0 / a - 1.0) * th * tau, a, b, p, law) * levy
        raise ValueError(f"unknown limit law {self.name}")

    def to_dict(self) -> dict:
        return {"name": self.name, "family": self.family, "index": self.index, "mu": self.mu}


@dataclass(frozen=True)
class RegimeReport:
    case: RegimeCase
    mu_proxy: float
    gamma: Optional[float]
    normalization: float
    limit_law: Optional[LimitLaw]

    @property
    def family(self) -> str:
        return _FAMILY[self.case]

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "mu_proxy": self.mu_proxy,
            "gamma": self.gamma,
            "normalization": self.normalization,
            "family": self.family,
            "limit_law": self.limit_law.to_dict() if self.limit_law else None,
        }


def classify(alpha: float, beta: float, N: int, n: int, mu_threshold: float = 4.0,
             law: Optional[StableLaw] = None, psi1: Optional[float] = None,
             strict: bool = True) -> RegimeReport:
    """Classify ``(alpha, beta, N, n)`` and bind the normalization ``A_{N,n}`` and limit law.

    ``law`` defaults to the symmetric law with ``omega = 1`` and ``psi1``
    to ``beta`` (pure power mixing).  The excluded cases ``alpha == beta``
    and ``alpha < beta == 1`` raise :class:`UnsupportedRegime`, or return a
    report with case ``Unsupported`` and NaN normalization when
    ``strict=False``.
    """
    if not (0.0 < alpha <= 2.0) or not beta > 0.0:
        raise ValueError("need 0 < alpha <= 2 and beta > 0")
    if N < 2 or n < 2:
        raise ValueError("need N, n >= 2")
    if not mu_threshold > 1.0:
        raise ValueError("mu_threshold must exceed 1")
    if is_unsupported(alpha, beta):
        if strict:
            raise UnsupportedRegime(f"alpha={alpha}, beta={beta} is excluded from the limit theory")
        return RegimeReport(RegimeCase.UNSUPPORTED, float("nan"), None, float("nan"), None)
    law = law if law is not None else StableLaw.symmetric(alpha)
    if law.alpha != alpha:
        raise ValueError("law.alpha must equal alpha")
    psi1 = float(beta if psi1 is None else psi1)
    N = float(N)
    n = float(n)
    a, b = alpha, beta

    def bind(name, index, mu=None):
        return LimitLaw(name, "", index, a, b, psi1, law, mu)

    gamma = None
    if b < a:
        proxy = N ** (1.0 / b) / n
        if proxy > mu_threshold:
            if b > 1.0:
                case, A, lim = RegimeCase.I_MU_INF_BETA_GT1, N ** (1 / a) * n ** (1 - (b - 1) / a), bind("Lambda", a)
            elif b == 1.0:
                case, A, lim = RegimeCase.I_MU_INF_BETA_EQ1, (N * math.log(N / n)) ** (1 / a) * n, bind("V1*tau", a)
            else:
                case, A, lim = RegimeCase.I_MU_INF_BETA_LT1, N ** (1 / (a * b)) * n, bind("V*tau", a * b)
        elif proxy < 1.0 / mu_threshold:
            case, A, lim = RegimeCase.I_MU_ZERO, N ** (1 / b) * n ** (1 / a), bind("W", b)
        else:
            case, A, lim = RegimeCase.I_INTERMEDIATE, N ** (1 / b) * n ** (1 / a), bind("Z", None, proxy)
    elif b < 1.0:
        gamma = (1.0 - a) / (1.0 - b)
        proxy = N ** (1.0 / (gamma * b)) / n
        if proxy > mu_threshold:
            case, A, lim = RegimeCase.II_MU_INF, N ** (1 / (a * b)) * n, bind("V*tau", a * b)
        elif proxy < 1.0 / mu_threshold:
            case, A, lim = RegimeCase.II_MU_ZERO, (N * n) ** (1 / a), bind("zeta", a)
        else:
            case, A, lim = RegimeCase.II_INTERMEDIATE, (N * n) ** (1 / a), bind("V*tau+zeta", None, proxy)
    else:
        proxy = N ** (1.0 / b) / n
        case, A, lim = RegimeCase.III_SHORT_MEMORY, (N * n) ** (1 / a), bind("zeta", a)
    lim = LimitLaw(lim.name, _FAMILY[case], lim.index, a, b, psi1, law, lim.mu)
    return RegimeReport(case, float(proxy), gamma, float(A), lim)


def regime_table(alphas, betas, N: int = 1000, n: int = 1000, mu_threshold: float = 4.0):
    """One report per ``(alpha, beta)`` pair, unsupported pairs included."""
    rows = []
    for a in alphas:
        for b in betas:
            rows.append(((float(a), float(b)),
                         classify(float(a), float(b), N, n, mu_threshold, strict=False)))
    return rows
