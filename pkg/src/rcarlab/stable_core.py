"""Innovation laws in the domain of normal attraction of an alpha-stable law.

A :class:`StableLaw` records the stability index ``alpha``, the tail constants
``c1`` (right) and ``c2`` (left) and, for ``alpha == 2``, the variance.  The
Levy exponent of the limiting stable process is ``|theta|**alpha * omega(theta)``
where ``omega`` depends on ``theta`` only through its sign.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidLawError

__all__ = [
    "Flavor",
    "StableLaw",
    "OmegaValue",
    "omega",
    "omega_value",
    "cf_levy",
    "sample_stable",
    "sample_innovation",
]


class Flavor(str, enum.Enum):
    EXACT_STABLE = "exact_stable"
    TWO_SIDED_PARETO = "two_sided_pareto"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class StableLaw:
    """Innovation law descriptor.

    Parameters
    ----------
    alpha : float
        Stability index in (0, 2].
    c1, c2 : float
        Right and left tail constants, ``x**alpha P(eps > x) -> c1`` and
        ``|x|**alpha P(eps <= x) -> c2``.  Ignored when ``alpha == 2``.
    variance : float
        ``E eps**2``; only used when ``alpha == 2``.
    flavor : Flavor
        Which concrete distribution realizes the law when sampling.
    """

    alpha: float
    c1: float = 0.0
    c2: float = 0.0
    variance: float = 1.0
    flavor: Flavor = Flavor.EXACT_STABLE

    def __post_init__(self):
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        a = self.alpha
        if not (0.0 < a <= 2.0):
            raise InvalidLawError(f"alpha must lie in (0, 2], got {a}")
        if a == 2.0:
            if self.flavor is not Flavor.GAUSSIAN:
                raise InvalidLawError("alpha = 2 requires the Gaussian flavor")
            if not (self.variance > 0.0 and math.isfinite(self.variance)):
                raise InvalidLawError("alpha = 2 requires a finite positive variance")
            return
        if self.flavor is Flavor.GAUSSIAN:
            raise InvalidLawError("the Gaussian flavor requires alpha = 2")
        if self.c1 < 0.0 or self.c2 < 0.0 or self.c1 + self.c2 <= 0.0:
            raise InvalidLawError("tail constants must be >= 0 with c1 + c2 > 0")
        if a == 1.0 and self.c1 != self.c2:
            raise InvalidLawError("alpha = 1 requires a symmetric law (c1 == c2)")

    # -- constructors -------------------------------------------------------

    @classmethod
    def gaussian(cls, variance: float = 1.0) -> "StableLaw":
        return cls(alpha=2.0, variance=variance, flavor=Flavor.GAUSSIAN)

    @classmethod
    def exact(cls, alpha: float, c1: float, c2: float) -> "StableLaw":
        if alpha == 2.0:
            raise InvalidLawError("use StableLaw.gaussian for alpha = 2")
        return cls(alpha=alpha, c1=c1, c2=c2, flavor=Flavor.EXACT_STABLE)

    @classmethod
    def pareto(cls, alpha: float, c1: float, c2: float) -> "StableLaw":
        return cls(alpha=alpha, c1=c1, c2=c2, flavor=Flavor.TWO_SIDED_PARETO)

    @classmethod
    def symmetric(cls, alpha: float, scale_omega: float = 1.0,
                  flavor: Flavor = Flavor.EXACT_STABLE) -> "StableLaw":
        """Symmetric law whose ``omega`` equals ``scale_omega`` (a positive real)."""
        if alpha == 2.0:
            return cls.gaussian(2.0 * scale_omega)
        c = scale_omega / (2.0 * _omega_factor(alpha))
        return cls(alpha=alpha, c1=c, c2=c, flavor=flavor)

    # -- derived quantities -------------------------------------------------

    @property
    def omega_plus(self) -> complex:
        """``omega(theta)`` for ``theta > 0``."""
        a = self.alpha
        if a == 2.0:
            return complex(0.5 * self.variance, 0.0)
        if a == 1.0:
            return complex((self.c1 + self.c2) * math.pi / 2.0, 0.0)
        g = math.gamma(2.0 - a) / (1.0 - a)
        return complex(g * (self.c1 + self.c2) * math.cos(a * math.pi / 2.0),
                       -g * (self.c1 - self.c2) * math.sin(a * math.pi / 2.0))

    @property
    def is_symmetric(self) -> bool:
        return self.alpha == 2.0 or self.c1 == self.c2

    @property
    def scale(self) -> float:
        """Scale ``sigma`` of the stable limit in the S1 parameterization."""
        a = self.alpha
        return self.omega_plus.real ** (1.0 / a)

    @property
    def skewness(self) -> float:
        if self.alpha == 2.0:
            return 0.0
        return (self.c1 - self.c2) / (self.c1 + self.c2)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "c1": self.c1, "c2": self.c2,
                "variance": self.variance, "flavor": self.flavor.value}


def _omega_factor(alpha: float) -> float:
    """``Re omega`` per unit of ``c1 + c2`` for alpha < 2."""
    if alpha == 1.0:
        return math.pi / 2.0
    return math.gamma(2.0 - alpha) / (1.0 - alpha) * math.cos(alpha * math.pi / 2.0)


class OmegaValue(NamedTuple):
    re: float
    im_sign_pos: float


def omega_value(law: StableLaw) -> OmegaValue:
    w = law.omega_plus
    return OmegaValue(w.real, w.imag)


def omega(theta, law: StableLaw):
    """``omega(theta)``; the value at ``theta == 0`` is the positive branch.

    Accepts scalars or arrays and returns a complex scalar or array.
    """
    w = law.omega_plus
    theta = np.asarray(theta, dtype=float)
    out = np.where(theta < 0.0, w.conjugate(), w)
    return complex(out) if out.ndim == 0 else out


def cf_levy(theta, tau, law: StableLaw):
    """Characteristic function ``E exp(i theta zeta(tau)) = exp(-tau |theta|^alpha omega(theta))``."""
    if np.any(np.asarray(tau) < 0.0):
        raise ValueError("tau must be non-negative")
    theta = np.asarray(theta, dtype=float)
    expo = np.asarray(tau, dtype=float) * np.abs(theta) ** law.alpha * omega(theta, law)
    out = np.exp(-expo)
    out = np.where(theta == 0.0, 1.0 + 0.0j, out)
    return complex(out) if out.ndim == 0 else out


def _cms_standard(alpha: float, skew: float, rng: np.random.Generator, size):
    """Chambers-Mallows-Stuck draw from S1(alpha, skew, 1, 0), alpha != 1."""
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    w = rng.standard_exponential(size)
    if skew == 0.0:
        return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
                * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))
    t = skew * math.tan(math.pi * alpha / 2.0)
    b = math.atan(t) / alpha
    s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    return (s * np.sin(alpha * (v + b)) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha))


def sample_stable(law: StableLaw, rng: np.random.Generator, size=None):
    """Exact draws of ``zeta(1)`` whose characteristic function is ``cf_levy(., 1, law)``."""
    if law.flavor is Flavor.TWO_SIDED_PARETO:
        raise InvalidLawError("sample_stable needs an exact-stable or Gaussian law; "
                              "use sample_innovation for Pareto innovations")
    a = law.alpha
    if a == 2.0:
        return rng.normal(0.0, math.sqrt(law.variance), size)
    if a == 1.0:
        v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
        return law.omega_plus.real * np.tan(v)
    return law.scale * _cms_standard(a, law.skewness, rng, size)


def pareto_threshold(law: StableLaw) -> float:
    """Smallest admissible start ``x0 >= 1`` of the exact power tails.

    The tail masses ``(c1 + c2) x0**-alpha`` leave room for a two-piece uniform
    core on ``(-x0, x0)`` that also absorbs the mean of the tails when
    ``alpha > 1``; ``x0`` is chosen so the tails use at most half the
    admissible mass.
    """
    a, c1, c2 = law.alpha, law.c1, law.c2
    need = c1 + c2
    if a > 1.0:
        need += 2.0 * abs(c1 - c2) * a / (a - 1.0)
    return max(1.0, (2.0 * need) ** (1.0 / a))


def _sample_pareto(law: StableLaw, rng: np.random.Generator, size):
    a, c1, c2 = law.alpha, law.c1, law.c2
    x0 = pareto_threshold(law)
    t = x0 ** (-a)
    q1, q2 = c1 * t, c2 * t
    core = 1.0 - q1 - q2
    if a > 1.0:
        # core halves uniform on (0, x0) and (-x0, 0); their mean offsets the tails
        diff = -2.0 * (c1 - c2) * a * x0 ** (1.0 - a) / ((a - 1.0) * x0)
    else:
        diff = 0.0
    p_plus = 0.5 * (core + diff)
    u = rng.random(size)
    r = rng.random(size)
    r = 1.0 - r  # (0, 1]
    mag_tail = x0 * r ** (-1.0 / a)
    mag_core = x0 * r
    out = np.where(u < q1, mag_tail,
          np.where(u < q1 + q2, -mag_tail,
          np.where(u < q1 + q2 + p_plus, mag_core, -mag_core)))
    return out if size is not None else float(out)


def sample_innovation(law: StableLaw, rng: np.random.Generator, size=None):
    """Draws of the innovation ``eps``.

    Exact-stable and Gaussian flavors delegate to :func:`sample_stable`.  The
    two-sided Pareto flavor has survival functions exactly ``c1 x**-alpha``
    and ``c2 |x|**-alpha`` beyond :func:`pareto_threshold`, a piecewise
    uniform core, zero mean for ``alpha > 1`` and symmetry at ``alpha == 1``.
    """
    if law.flavor is Flavor.TWO_SIDED_PARETO:
        return _sample_pareto(law, rng, size)
    return sample_stable(law, rng, size)
