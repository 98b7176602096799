"""Law of the random autoregressive coefficient ``a`` in [0, 1)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidLawError, NonIntegrable

__all__ = ["MixingShape", "MixingLaw", "sample_coefficient", "kappa_alpha"]


class MixingShape(str, enum.Enum):
    PURE_POWER = "pure_power"


@dataclass(frozen=True)
class MixingLaw:
    """Density ``phi(u) = psi(u) (1 - u)**(beta - 1)`` on [0, 1).

    Only the pure power shape ``phi(u) = beta (1 - u)**(beta - 1)`` is
    implemented, for which ``psi1 = beta``.
    """

    beta: float
    psi1: Optional[float] = None
    shape: MixingShape = MixingShape.PURE_POWER

    def __post_init__(self):
        object.__setattr__(self, "shape", MixingShape(self.shape))
        if not self.beta > 0.0:
            raise InvalidLawError(f"beta must be positive, got {self.beta}")
        if self.psi1 is None:
            object.__setattr__(self, "psi1", float(self.beta))
        elif abs(self.psi1 - self.beta) > 1e-12 * self.beta:
            raise InvalidLawError("the pure power shape normalizes psi1 = beta")

    def density(self, u):
        u = np.asarray(u, dtype=float)
        return np.where((u >= 0.0) & (u < 1.0), self.beta * (1.0 - u) ** (self.beta - 1.0), 0.0)

    def cdf(self, u):
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        return 1.0 - (1.0 - u) ** self.beta

    def to_dict(self) -> dict:
        return {"beta": self.beta, "psi1": self.psi1, "shape": self.shape.value}


def sample_coefficient(law: MixingLaw, rng: np.random.Generator, size=None):
    """Inverse-CDF draw ``a = 1 - U**(1/beta)`` with ``U`` uniform on (0, 1]."""
    u = 1.0 - rng.random(size)
    return 1.0 - u ** (1.0 / law.beta)


def kappa_alpha(law: MixingLaw, alpha: float) -> float:
    """``E (1 - a)**(-alpha) = beta / (beta - alpha)``, finite only for ``beta > alpha``."""
    if law.beta <= alpha:
        raise NonIntegrable(f"E(1-a)^(-alpha) diverges for beta={law.beta} <= alpha={alpha}")
    return law.beta / (law.beta - alpha)
