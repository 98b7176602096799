"""Verification toolkit: empirical characteristic functions, tail indices,
CF inversion and autocovariance fits."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .exceptions import FitError, NumericalFailure
from .limit_laws import CFGrid, QuadratureSpec

__all__ = [
    "SampleSet",
    "DegenerateSampleWarning",
    "default_theta_grid",
    "empirical_cf",
    "cf_distance",
    "hill_index",
    "invert_cf_cdf",
    "sample_autocov",
    "loglog_slope",
]


class DegenerateSampleWarning(UserWarning):
    pass


@dataclass
class SampleSet:
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size == 0:
            raise ValueError("sample set is empty")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample values must be finite")

    def __len__(self):
        return self.values.size


def _values(samples) -> np.ndarray:
    return samples.values if isinstance(samples, SampleSet) else SampleSet(samples).values


def default_theta_grid() -> np.ndarray:
    """61 equispaced points on [-3, 3]."""
    return np.linspace(-3.0, 3.0, 61)


def empirical_cf(samples, thetas=None, block: int = 1 << 16) -> CFGrid:
    """Mean of ``exp(i theta X_m)`` at each ``theta``."""
    x = _values(samples)
    if x.size < 2:
        raise ValueError("empirical_cf needs at least two samples")
    th = default_theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    acc = np.zeros(th.size, dtype=complex)
    for i in range(0, x.size, block):
        acc += np.exp(1j * np.outer(th, x[i:i + block])).sum(axis=1)
    vals = acc / x.size
    vals[th == 0.0] = 1.0
    return CFGrid(th, vals, "empirical")


def cf_distance(a: CFGrid, b: CFGrid) -> float:
    """Sup distance between two CF grids sharing the same thetas."""
    if a.thetas.shape != b.thetas.shape or not np.array_equal(a.thetas, b.thetas):
        raise ValueError("CF grids have different theta points")
    return float(np.max(np.abs(a.values - b.values)))


def hill_index(samples, k: Optional[int] = None) -> float:
    """Hill estimate of the tail index from the ``k`` largest ``|X|``.

    ``k`` defaults to ``ceil(sqrt(M))``.  A sample whose top order statistics
    coincide returns 0 with a :class:`DegenerateSampleWarning`.
    """
    x = np.abs(_values(samples))
    m = x.size
    if k is None:
        k = math.ceil(math.sqrt(m))
    if k < 1 or 2 * k >= m:
        raise ValueError(f"need 1 <= k < M/2, got k={k}, M={m}")
    top = np.partition(x, m - k - 1)[m - k - 1:]
    ref = top.min()  # the (k+1)-th largest
    if ref <= 0.0 or np.all(top == ref):
        warnings.warn("degenerate sample: top order statistics are equal", DegenerateSampleWarning)
        return 0.0
    logs = np.log(np.sort(top)[1:]) - math.log(ref)
    mean = logs.mean()
    if mean <= 0.0:
        warnings.warn("degenerate sample: top order statistics are equal", DegenerateSampleWarning)
        return 0.0
    return float(1.0 / mean)


def invert_cf_cdf(cf: Callable[[float], complex], x: float,
                  quad: QuadratureSpec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-11)) -> float:
    """Gil-Pelaez inversion ``1/2 - (1/pi) int_0^inf Im(e^{-itx} cf(t)) / t dt``."""

    def integrand(t):
        if t == 0.0:
            return 0.0
        return (np.exp(-1j * t * x) * cf(t)).imag / t

    # the integrand is finite at 0, so split there and let quad work on (0, inf)
    val, err, *rest = integrate.quad(integrand, 0.0, 1.0, epsabs=quad.abs_tol,
                                     epsrel=quad.rel_tol, limit=quad.max_subdivisions, full_output=1)
    tail, err2, *rest2 = integrate.quad(integrand, 1.0, np.inf, epsabs=quad.abs_tol,
                                        epsrel=quad.rel_tol, limit=quad.max_subdivisions, full_output=1)
    total_err = err + err2
    if total_err > 1e3 * max(quad.abs_tol, quad.rel_tol * abs(val + tail)):
        raise NumericalFailure("CF inversion did not converge", total_err)
    p = 0.5 - (val + tail) / math.pi
    return float(min(1.0, max(0.0, p)))


def sample_autocov(series, max_lag: int, center: bool = True) -> np.ndarray:
    """Biased autocovariance ``gamma(h)`` for ``h = 0..max_lag``.

    With ``center=False`` the series is taken to have known mean zero.
    """
    x = np.asarray(series, dtype=float)
    n = x.size
    if not (0 <= max_lag < n):
        raise ValueError("max_lag must lie in [0, len(series))")
    if center:
        x = x - x.mean()
    m = 1 << int(math.ceil(math.log2(2 * n)))
    f = np.fft.rfft(x, m)
    acf = np.fft.irfft(f * np.conj(f), m)[: max_lag + 1]
    return acf / n


def loglog_slope(lags, values) -> float:
    """Least-squares slope of ``log values`` against ``log lags``."""
    lags = np.asarray(lags, dtype=float)
    v = np.asarray(values, dtype=float)
    if lags.shape != v.shape or lags.size < 2:
        raise FitError("need at least two matching (lag, value) pairs")
    if np.any(v <= 0.0) or np.any(lags <= 0.0):
        raise FitError("log-log fit requires positive lags and values")
    slope, _ = np.polyfit(np.log(lags), np.log(v), 1)
    return float(slope)
