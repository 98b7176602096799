"""Stationary RCAR(1) paths and the joint aggregate ``S_{N,n}(tau)``.

Each path ``i`` has its own coefficient ``a_i`` and follows
``X_i(t) = a_i X_i(t-1) + eps_i(t)`` from a stationary start.  The aggregate
sums ``X_i(t)`` over ``i <= N`` and ``1 <= t <= [n tau]``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import InvalidLawError
from .mixing import MixingLaw, sample_coefficient
from .seeding import substream
from .stable_core import Flavor, StableLaw, sample_innovation, sample_stable

__all__ = [
    "PanelSpec",
    "AggregateSample",
    "ma_weight",
    "truncation_length",
    "stationary_start",
    "simulate_path",
    "aggregate",
    "simulate_aggregates",
    "panel_mean_series",
    "simulate_panel",
    "panel_autocov",
]

MAX_TRUNCATION = 10_000_000
_START_MODES = ("auto", "exact", "truncated")


@dataclass(frozen=True)
class PanelSpec:
    """Experiment description for the joint aggregate.

    ``start`` selects the stationary start: ``"exact"`` draws ``X(0)`` from
    its stationary law (exact-stable and Gaussian innovations only),
    ``"truncated"`` sums the moving average up to ``truncation_length``,
    and ``"auto"`` picks exact whenever it is available.
    """

    innovation: StableLaw
    mixing: MixingLaw
    N: int
    n: int
    taus: tuple = (1.0,)
    seed: int = 0
    burn_in_tol: float = 1e-8
    start: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(float(t) for t in np.atleast_1d(self.taus)))
        if int(self.N) != self.N or self.N < 1 or int(self.n) != self.n or self.n < 1:
            raise ValueError("N and n must be positive integers")
        t = np.asarray(self.taus)
        if t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("taus must be positive and strictly increasing")
        if not (0.0 < self.burn_in_tol < 1.0):
            raise ValueError("burn_in_tol must lie in (0, 1)")
        if self.start not in _START_MODES:
            raise ValueError(f"start must be one of {_START_MODES}")
        if self.start == "exact" and self.innovation.flavor is Flavor.TWO_SIDED_PARETO:
            raise InvalidLawError("exact stationary start needs exact-stable or Gaussian innovations")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def checkpoints(self) -> np.ndarray:
        """Time indices ``[n tau_j]``."""
        return np.array([math.floor(self.n * t + 1e-9) for t in self.taus], dtype=np.int64)


@dataclass
class AggregateSample:
    values: np.ndarray
    replicate_id: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("aggregate values must be finite")


def ma_weight(a: float, n: int, s: int) -> float:
    """``c_n(a, s) = sum_{t=1}^n a**(t-s) 1(s <= t)``."""
    if not (0.0 <= a < 1.0):
        raise ValueError("a must lie in [0, 1)")
    if s > n:
        return 0.0
    if a == 0.0:
        return 1.0 if 1 <= s <= n else 0.0
    lo = max(s, 1) - s
    hi = n + 1 - s
    # (a^lo - a^hi) / (1 - a), written to keep precision for a near 1
    return a ** lo * -math.expm1((hi - lo) * math.log(a)) / (1.0 - a)


def truncation_length(a: float, tol: float) -> int:
    """``M(a) = ceil(log tol / log a)`` capped at ``MAX_TRUNCATION``; 0 for ``a == 0``."""
    if a <= 0.0:
        return 0
    m = math.ceil(math.log(tol) / math.log(a))
    return int(min(max(m, 0), MAX_TRUNCATION))


def _use_exact(law: StableLaw, start: str) -> bool:
    if start == "exact":
        return True
    if start == "truncated":
        return False
    return law.flavor is not Flavor.TWO_SIDED_PARETO


def stationary_start(a, law: StableLaw, rng: np.random.Generator, burn_in_tol: float = 1e-8,
                     start: str = "auto"):
    """Draw ``X(0)`` for each coefficient in ``a``.

    Exact mode uses ``X(0) =_d (1 - a**alpha)**(-1/alpha) zeta(1)``, valid for
    strictly stable innovations.  Truncated mode sums
    ``sum_{k=0}^{M(a)} a**k eps(-k)`` path by path.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if _use_exact(law, start):
        z = sample_stable(law, rng, a.shape)
        with np.errstate(divide="ignore"):
            gap = -np.expm1(law.alpha * np.log(a))  # 1 - a**alpha
        return z * gap ** (-1.0 / law.alpha)
    out = np.empty_like(a)
    block = 1 << 16
    for i, ai in enumerate(a):
        m = truncation_length(ai, burn_in_tol)
        total = 0.0
        k0 = 0
        while k0 <= m:
            k1 = min(m + 1, k0 + block)
            eps = np.atleast_1d(sample_innovation(law, rng, k1 - k0))
            total += float(np.dot(ai ** np.arange(k0, k1, dtype=float), eps)) if ai > 0 else float(eps[0])
            k0 = k1
        out[i] = total
    return out


def _chunk_rows(N: int) -> int:
    return max(1, min(1024, (1 << 18) // N))


def _run_paths(gens: Sequence[np.random.Generator], law: StableLaw, mixing: Optional[MixingLaw],
               N: int, T: int, burn_in_tol: float, start: str, a_fixed=None,
               checkpoints=None, keep_series=False):
    """Simulate ``N`` paths of length ``T`` for each generator in ``gens``.

    Per generator the draws are, in order: ``N`` coefficients (unless
    ``a_fixed``), ``N`` starting values, then innovations in blocks of
    ``_chunk_rows(N)`` time steps.  Returns running sums over paths and
    time at ``checkpoints`` (shape ``(R, len(checkpoints))``) and, when
    ``keep_series``, the per-time sums over paths (shape ``(R, T)``).
    """
    R = len(gens)
    if a_fixed is None:
        a = np.stack([np.atleast_1d(sample_coefficient(mixing, g, N)) for g in gens])
    else:
        a = np.broadcast_to(np.asarray(a_fixed, dtype=float), (R, N)).copy()
    x = np.stack([stationary_start(a[r], law, g, burn_in_tol, start) for r, g in enumerate(gens)])
    cps = np.asarray(checkpoints if checkpoints is not None else [], dtype=np.int64)
    out = np.zeros((R, cps.size))
    series = np.empty((R, T)) if keep_series else None
    running = np.zeros(R)
    out[:, cps == 0] = 0.0
    rows = _chunk_rows(N)
    t = 0
    while t < T:
        h = min(rows, T - t)
        eps = np.stack([np.reshape(sample_innovation(law, g, (h, N)), (h, N)) for g in gens], axis=1)
        for k in range(h):
            x = a * x + eps[k]
            row = x.sum(axis=1)
            running = running + row
            t += 1
            if keep_series:
                series[:, t - 1] = row
            hit = cps == t
            if hit.any():
                out[:, hit] = running[:, None]
    return out, series


def simulate_path(a: float, n: int, innovation: StableLaw, burn_in_tol: float,
                  rng: np.random.Generator, start: str = "auto") -> np.ndarray:
    """One stationary path ``X(1), ..., X(n)`` for a fixed coefficient ``a``."""
    if not (0.0 <= a < 1.0):
        raise ValueError("a must lie in [0, 1)")
    _, series = _run_paths([rng], innovation, None, 1, int(n), burn_in_tol, start,
                           a_fixed=[a], keep_series=True)
    return series[0]


def aggregate(spec: PanelSpec, rng: Optional[np.random.Generator] = None,
              replicate_id: int = 0) -> AggregateSample:
    """``S_{N,n}(tau_j)`` for every ``tau_j`` of ``spec``.

    Without an explicit ``rng`` the substream ``(spec.seed, replicate_id)`` is used.
    """
    g = rng if rng is not None else substream(spec.seed, replicate_id)
    cps = spec.checkpoints
    out, _ = _run_paths([g], spec.innovation, spec.mixing, spec.N, int(cps.max()),
                        spec.burn_in_tol, spec.start, checkpoints=cps)
    return AggregateSample(out[0], replicate_id)


def _batch(spec: PanelSpec, ids: Sequence[int]) -> np.ndarray:
    gens = [substream(spec.seed, i) for i in ids]
    cps = spec.checkpoints
    out, _ = _run_paths(gens, spec.innovation, spec.mixing, spec.N, int(cps.max()),
                        spec.burn_in_tol, spec.start, checkpoints=cps)
    return out


def simulate_aggregates(spec: PanelSpec, M: int, workers: int = 1,
                        first_replicate: int = 0) -> np.ndarray:
    """``M`` independent replicates of :func:`aggregate`, shape ``(M, len(taus))``.

    Replicate ``r`` always uses substream ``(spec.seed, first_replicate + r)``
    and the result does not depend on ``workers``.
    """
    if M < 1:
        raise ValueError("M must be positive")
    size = max(1, min(M, (1 << 17) // spec.N))
    ids = list(range(first_replicate, first_replicate + M))
    batches = [ids[i:i + size] for i in range(0, M, size)]
    workers = max(1, min(int(workers), len(batches), os.cpu_count() or 1))
    if workers == 1:
        parts = [_batch(spec, b) for b in batches]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_batch, [spec] * len(batches), batches))
    return np.concatenate(parts, axis=0)


def panel_mean_series(innovation: StableLaw, mixing: MixingLaw, N: int, n: int,
                      rng: np.random.Generator, burn_in_tol: float = 1e-8,
                      start: str = "auto") -> np.ndarray:
    """Cross-sectional mean ``N**-1 sum_i X_i(t)`` for ``t = 1..n``."""
    _, series = _run_paths([rng], innovation, mixing, int(N), int(n), burn_in_tol, start,
                           keep_series=True)
    return series[0] / N


def simulate_panel(innovation: StableLaw, mixing: MixingLaw, N: int, n: int,
                   rng: np.random.Generator, burn_in_tol: float = 1e-8,
                   start: str = "auto") -> tuple[np.ndarray, np.ndarray]:
    """All ``N`` paths over ``t = 1..n``: returns ``(a, X)`` with ``X`` of shape ``(n, N)``.

    Consumes ``rng`` exactly as :func:`panel_mean_series` does.
    """
    N, n = int(N), int(n)
    a = np.atleast_1d(sample_coefficient(mixing, rng, N))
    x = stationary_start(a, innovation, rng, burn_in_tol, start)
    out = np.empty((n, N))
    rows = _chunk_rows(N)
    t = 0
    while t < n:
        h = min(rows, n - t)
        eps = np.reshape(sample_innovation(innovation, rng, (h, N)), (h, N))
        for k in range(h):
            x = a * x + eps[k]
            out[t] = x
            t += 1
    return a, out


def panel_autocov(X: np.ndarray, max_lag: int, center: bool = False) -> np.ndarray:
    """Cross-sectional mean of the per-path biased autocovariances of ``X`` (shape ``(n, N)``)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not (0 <= max_lag < n):
        raise ValueError("max_lag must lie in [0, n)")
    if center:
        X = X - X.mean(axis=0)
    m = 1 << int(math.ceil(math.log2(2 * n)))
    f = np.fft.rfft(X, m, axis=0)
    acf = np.fft.irfft(np.abs(f) ** 2, m, axis=0)[: max_lag + 1]
    return acf.mean(axis=1) / n
