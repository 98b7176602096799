"""Trajectory simulation of the intermediate process ``Z`` from its Poisson
representation.

``Z(tau)`` is a sum over the points ``x_k`` of a Poisson process with
intensity ``psi1 x**(beta-1) dx`` of independent integrated OU processes

    z(tau; x) = int f_tau(x, s) d zeta(s) = (Y0 (1 - e^{-x tau}) + int_0^tau (1 - e^{-x(tau-s)}) d zeta(s)) / x,

where ``Y0 = int_{s<=0} e^{x s} d zeta(s)`` has the exact law
``(alpha x)**(-1/alpha) zeta(1)``.  On ``(0, tau]`` the stochastic integral is
discretized into cells whose weights are the cell-wise ``alpha``-means of the
kernel, so every marginal ``z(tau_j; x)`` has its exact law.

Points below ``x_min`` are dropped (their expected number and moment
contribution are below the tolerance).  Points above ``x_max`` are infinitely
many; their sum is replaced by an alpha-stable Levy process with the same
first-order Levy exponent ``psi1 x_max**(beta-alpha) / (alpha - beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import InvalidLawError, TruncationError
from .limit_laws import _pow_log_integral
from .seeding import substream
from .stable_core import Flavor, StableLaw, sample_stable

__all__ = [
    "PoissonSimSpec",
    "default_x_min",
    "simulate_elementary_z",
    "simulate_Z",
    "simulate_Z_replicates",
]


def _driving_law(law: StableLaw) -> StableLaw:
    """Exact-stable law with the same Levy exponent as ``law``."""
    if law.flavor is Flavor.TWO_SIDED_PARETO:
        return StableLaw.exact(law.alpha, law.c1, law.c2)
    return law


def default_x_min(alpha: float, beta: float, psi1: float, tau_max: float, tol: float) -> float:
    """Lower cut so that points below it are negligible.

    Requires both the expected number of points ``psi1 x**beta / beta`` and
    the moment bound ``psi1 tau**p (alpha x)**(-p/alpha) x**beta / (beta - p/alpha)``
    with ``p = alpha beta / 2`` to stay below ``tol``.
    """
    if not (tol > 0 and tau_max > 0):
        raise TruncationError("tolerance and tau_max must be positive")
    x_count = (tol * beta / psi1) ** (1.0 / beta)
    p = alpha * beta / 2.0
    q = beta - p / alpha  # = beta / 2
    coef = psi1 * tau_max ** p * alpha ** (-p / alpha) / q
    x_moment = (tol / coef) ** (1.0 / q)
    x = min(x_count, x_moment)
    if not (x > 1e-300) or not math.isfinite(x):
        raise TruncationError(f"x_min underflows for alpha={alpha}, beta={beta}, tol={tol}")
    return x


@dataclass(frozen=True)
class PoissonSimSpec:
    """Parameters of a ``Z`` simulation.

    ``x_min`` defaults to :func:`default_x_min` at ``trunc_tol``; ``x_max``
    defaults to 50.  ``dt`` is the base step, refined to ``0.1/x`` for fast
    rates.  ``residual`` adds the stable stand-in for points above ``x_max``.
    """

    alpha: float
    beta: float
    psi1: float = 1.0
    tau_grid: tuple = (1.0,)
    x_min: Optional[float] = None
    x_max: float = 50.0
    dt: float = 0.01
    seed: int = 0
    law: Optional[StableLaw] = None
    trunc_tol: float = 1e-6
    residual: bool = True

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (0.0 < b < a <= 2.0):
            raise ValueError("need 0 < beta < alpha <= 2")
        if not self.psi1 >= 0.0:
            raise ValueError("psi1 must be non-negative")
        taus = tuple(float(t) for t in np.atleast_1d(self.tau_grid))
        object.__setattr__(self, "tau_grid", taus)
        t = np.asarray(taus)
        if t.size == 0 or np.any(t < 0) or np.any(np.diff(t) <= 0):
            raise ValueError("tau_grid must be non-negative and strictly increasing")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        law = self.law if self.law is not None else StableLaw.symmetric(a)
        if law.alpha != a:
            raise InvalidLawError("law.alpha must equal alpha")
        object.__setattr__(self, "law", law)
        if self.x_min is None and self.psi1 > 0:
            object.__setattr__(self, "x_min", default_x_min(a, b, self.psi1, max(t.max(), 1e-12), self.trunc_tol))
        elif self.x_min is None:
            object.__setattr__(self, "x_min", 1e-12)
        if not (0.0 < self.x_min < self.x_max < math.inf):
            raise TruncationError(f"need 0 < x_min < x_max < inf, got {self.x_min}, {self.x_max}")

    @property
    def expected_points(self) -> float:
        b = self.beta
        return self.psi1 * (self.x_max ** b - self.x_min ** b) / b

    @property
    def residual_rate(self) -> float:
        """Scale**alpha per unit time of the stand-in for points above ``x_max``."""
        a, b = self.alpha, self.beta
        return self.psi1 * self.x_max ** (b - a) / (a - b)


def _F(r, x, alpha):
    """``int_0^r (1 - e^{-x u})**alpha du`` for arrays ``r >= 0`` and broadcastable ``x``."""
    r, x = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(x, dtype=float))
    y = -np.expm1(-x * r)
    H, G, small = _pow_log_integral(y.ravel(), alpha, np.exp(-x * r).ravel())
    H = H.reshape(y.shape)
    G = G.reshape(y.shape)
    small = small.reshape(y.shape)
    return np.where(small, H / x, r - G / x)


def _grid(taus: np.ndarray, q: int):
    """Cell boundaries on (0, tau_d] with ``ceil(q L_j / tau_d)`` equal cells in each interval."""
    edges = [np.zeros(1)]
    prev = 0.0
    tmax = taus[-1]
    for t in taus:
        L = t - prev
        if L > 0:
            m = max(1, math.ceil(q * L / tmax - 1e-9))
            edges.append(np.linspace(prev, t, m + 1)[1:])
        prev = t
    return np.concatenate(edges)


def _weights(x, taus, edges, alpha):
    """``(P, d, m)`` cell weights ``w`` with ``w**alpha h = int_cell (1 - e^{-x(tau_j - s)})**alpha ds``.

    The increment scale ``h**(1/alpha)`` is folded into the returned weights.
    """
    x = np.asarray(x, dtype=float)[:, None, None]
    t = taus[None, :, None]
    h = np.diff(edges)[None, None, :]
    inside = edges[1:][None, None, :] <= t + 1e-12
    Fe = _F(np.clip(t - edges[None, None, :], 0.0, None), x, alpha)
    mass = np.clip(Fe[..., :-1] - Fe[..., 1:], 0.0, None)
    return np.where(inside, mass ** (1.0 / alpha), 0.0)


def _steps_for(x, dt, tmax):
    step = np.minimum(dt, 0.1 / np.asarray(x, dtype=float))
    raw = np.maximum(1.0, np.ceil(tmax / step))
    return (2 ** np.ceil(np.log2(raw))).astype(np.int64)


def _elementary_batch(x, taus, law, y0, xi, edges):
    """``z(tau_j; x)`` for points sharing one cell grid; ``xi`` has shape ``(P, m)``."""
    a = law.alpha
    taus = np.asarray(taus, dtype=float)
    W = _weights(x, taus, edges, a)
    inner = np.einsum("pdm,pm->pd", W, xi)
    past = -np.expm1(-np.outer(x, taus)) * y0[:, None]
    return (past + inner) / np.asarray(x)[:, None]


def simulate_elementary_z(x: float, tau_grid, law: StableLaw, dt: float,
                          rng: np.random.Generator) -> np.ndarray:
    """One draw of ``(z(tau_j; x))_j`` on ``tau_grid``."""
    if not x > 0:
        raise ValueError("x must be positive")
    taus = np.asarray(tau_grid, dtype=float)
    law = _driving_law(law)
    out = np.zeros(taus.size)
    pos = taus > 0
    if not pos.any():
        return out
    tp = taus[pos]
    q = int(_steps_for([x], dt, tp[-1])[0])
    edges = _grid(tp, q)
    y0 = (law.alpha * x) ** (-1.0 / law.alpha) * np.atleast_1d(sample_stable(law, rng, 1))
    xi = np.atleast_2d(sample_stable(law, rng, edges.size - 1))
    out[pos] = _elementary_batch(np.array([x]), tp, law, y0, xi, edges)[0]
    return out


def _draw_replicate(spec: PoissonSimSpec, rng: np.random.Generator, taus: np.ndarray):
    """Random inputs of one replicate in a fixed order: count, rates, starts,
    cell innovations per point, residual increments."""
    law = _driving_law(spec.law)
    b = spec.beta
    k = int(rng.poisson(spec.expected_points)) if spec.psi1 > 0 else 0
    lo, hi = spec.x_min ** b, spec.x_max ** b
    x = (lo + rng.random(k) * (hi - lo)) ** (1.0 / b)
    y0 = (spec.alpha * x) ** (-1.0 / spec.alpha) * np.atleast_1d(sample_stable(law, rng, k))
    q = _steps_for(x, spec.dt, taus[-1]) if k else np.zeros(0, dtype=np.int64)
    sizes = [_grid(taus, int(qq)).size - 1 for qq in q]
    xi = np.atleast_1d(sample_stable(law, rng, int(sum(sizes)))) if k else np.zeros(0)
    res = np.atleast_1d(sample_stable(law, rng, taus.size)) if spec.residual else None
    return x, y0, q, np.split(xi, np.cumsum(sizes)[:-1]) if k else [], res


def simulate_Z_replicates(spec: PoissonSimSpec, M: int, first_replicate: int = 0) -> np.ndarray:
    """``M`` independent trajectories on ``spec.tau_grid``, shape ``(M, d)``.

    Replicate ``r`` uses substream ``(spec.seed, first_replicate + r)``.
    """
    taus_all = np.asarray(spec.tau_grid, dtype=float)
    out = np.zeros((M, taus_all.size))
    pos = taus_all > 0
    if not pos.any() or M == 0:
        return out
    taus = taus_all[pos]
    law = _driving_law(spec.law)
    owners, xs, y0s, qs, xis = [], [], [], [], []
    for r in range(M):
        g = substream(spec.seed, first_replicate + r)
        x, y0, q, xi, res = _draw_replicate(spec, g, taus)
        owners.extend([r] * x.size)
        xs.append(x)
        y0s.append(y0)
        qs.append(q)
        xis.extend(xi)
        if res is not None:
            dts = np.diff(np.concatenate([[0.0], taus]))
            out[r, pos] += np.cumsum((spec.residual_rate * dts) ** (1.0 / spec.alpha) * res)
    if not owners:
        return out
    owners = np.asarray(owners)
    xs = np.concatenate(xs)
    y0s = np.concatenate(y0s)
    qs = np.concatenate(qs)
    contrib = np.zeros((xs.size, taus.size))
    for qq in np.unique(qs):
        idx = np.nonzero(qs == qq)[0]
        edges = _grid(taus, int(qq))
        for chunk in np.array_split(idx, max(1, idx.size * edges.size // 2_000_000 + 1)):
            xi = np.stack([xis[i] for i in chunk])
            contrib[chunk] = _elementary_batch(xs[chunk], taus, law, y0s[chunk], xi, edges)
    sums = np.zeros((M, taus.size))
    np.add.at(sums, owners, contrib)
    out[:, pos] += sums
    return out


def simulate_Z(spec: PoissonSimSpec, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """One trajectory of ``Z`` on ``spec.tau_grid``.

    Without ``rng`` this is replicate 0 of :func:`simulate_Z_replicates`.
    """
    if rng is None:
        return simulate_Z_replicates(spec, 1)[0]
    taus_all = np.asarray(spec.tau_grid, dtype=float)
    out = np.zeros(taus_all.size)
    pos = taus_all > 0
    if not pos.any():
        return out
    taus = taus_all[pos]
    law = _driving_law(spec.law)
    x, y0, q, xi, res = _draw_replicate(spec, rng, taus)
    for i in range(x.size):
        edges = _grid(taus, int(q[i]))
        out[pos] += _elementary_batch(x[i:i + 1], taus, law, y0[i:i + 1], xi[i][None, :], edges)[0]
    if res is not None:
        dts = np.diff(np.concatenate([[0.0], taus]))
        out[pos] += np.cumsum((spec.residual_rate * dts) ** (1.0 / spec.alpha) * res)
    return out
