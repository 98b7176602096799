"""Characteristic functions and constants of the limit laws of the joint aggregate.

Everything here is deterministic.  The central object is the kernel

    f_tau(x, s) = int_0^tau exp(-x (t - s)) 1(s <= t) dt

of an integrated Ornstein-Uhlenbeck process with rate ``x``.  The
characteristic functions of the stable process ``Lambda`` and of the
intermediate process ``Z`` are integrals over ``x`` of the Levy exponent

    K(x) = int_R |sum_j theta_j f_{tau_j}(x, s)|^alpha omega(.) ds.

Internally ``K`` is evaluated in the scaled form ``x**alpha K(x)``, which
stays bounded at both ends of the ``x`` axis.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .exceptions import NumericalFailure
from .stable_core import StableLaw, cf_levy, omega

__all__ = [
    "QuadratureSpec",
    "CFGrid",
    "f_tau",
    "kernel_alpha_norm",
    "scaled_exponent",
    "kappa_lambda",
    "kappa_lambda_integral",
    "kappa_V",
    "kappa_W",
    "cf_V",
    "cf_W",
    "cf_V1",
    "cf_Lambda",
    "cov_Lambda2",
    "sigma2_beta",
    "cf_Z",
    "cf_Z_scaled",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 400
    x_split: float = 1.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be at least 10")
        if not self.x_split > 0:
            raise ValueError("x_split must be positive")

    @classmethod
    def nested(cls) -> "QuadratureSpec":
        """Looser preset for two-level quadrature (multi-time characteristic functions)."""
        return cls(rel_tol=1e-6, abs_tol=1e-9)


DEFAULT_QUAD = QuadratureSpec()


@dataclass
class CFGrid:
    thetas: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.thetas.shape[0] != self.values.shape[0]:
            raise ValueError("thetas and values must have the same length")


# ---------------------------------------------------------------------------
# kernel


def f_tau(x, s, tau):
    """Closed form of the integrated OU kernel ``f_tau(x, s)``."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        past = np.exp(x * np.minimum(s, 0.0)) * (-np.expm1(-x * tau)) / x
        inside = -np.expm1(-x * (tau - s)) / x
    out = np.where(s <= 0.0, past, np.where(s <= tau, inside, 0.0))
    return float(out) if out.ndim == 0 else out


_SERIES_TERMS = 60  # 2**-60 < 1e-18, enough for arguments up to 1/2


@functools.lru_cache(maxsize=64)
def _series_coefficients(alpha: float):
    """Power-series coefficients used by :func:`_pow_log_integral`.

    ``head[k] = 1/(k + alpha + 1)`` gives ``H(y) = y**(alpha+1) sum_k head[k] y**k``;
    ``tail[k-1] = -binom(alpha, k) (-1)**k / k`` gives
    ``int_0^w (1 - (1-u)**alpha)/u du = sum_k tail[k-1] w**k``.
    """
    k = np.arange(_SERIES_TERMS, dtype=float)
    head = 1.0 / (k + alpha + 1.0)
    kk = np.arange(1, _SERIES_TERMS + 1, dtype=float)
    binom = special.binom(alpha, kk)
    tail = -binom * (-1.0) ** kk / kk
    return head, tail


def _horner(coef, z):
    acc = np.full_like(z, coef[-1])
    for c in coef[-2::-1]:
        acc = acc * z + c
    return acc


def _pow_log_integral(y, alpha, w=None):
    """``H(y) = int_0^y v**alpha / (1 - v) dv`` and its complement, vectorized.

    Returns ``(H, G, small)`` where ``small = y <= 1/2``; ``H`` is valid on
    ``small`` and ``G(y) = -log(1-y) - H(y) = int_0^y (1 - v**alpha)/(1 - v) dv``
    on the rest, computed as ``G(1) - sum_k tail[k] w**k`` with ``w = 1 - y``
    (pass ``w`` directly when it is known more accurately than ``1 - y``).
    """
    y = np.asarray(y, dtype=float)
    w = 1.0 - y if w is None else np.asarray(w, dtype=float)
    head, tail = _series_coefficients(float(alpha))
    small = y <= 0.5
    H = np.zeros_like(y)
    G = np.zeros_like(y)
    if np.any(small):
        ys = y[small]
        H[small] = ys ** (alpha + 1.0) * _horner(head, ys)
    big = ~small
    if np.any(big):
        wb = w[big]
        g1 = special.digamma(alpha + 1.0) + np.euler_gamma
        G[big] = g1 - wb * _horner(tail, wb)
    return H, G, small


def kernel_alpha_norm(x, tau, alpha, scaled=False):
    """``int_R |f_tau(x, s)|**alpha ds`` (times ``x**alpha`` when ``scaled``).

    Closed form ``(1-e^{-x tau})^alpha / (alpha x^{1+alpha})
    + x^{-alpha} int_0^tau (1 - e^{-x s})^alpha ds``; ``x`` may be ``inf``
    in scaled mode, where the value tends to ``tau``.
    """
    x = np.asarray(x, dtype=float)
    tau = float(tau)
    shape = x.shape
    x = np.atleast_1d(x).astype(float)
    out = np.zeros_like(x)
    if tau == 0.0:
        return out.reshape(shape) if shape else float(out[0])
    inf = np.isinf(x)
    xf = np.where(inf, 1.0, x)
    y = -np.expm1(-xf * tau)
    H, G, small = _pow_log_integral(y, alpha, np.exp(-xf * tau))
    inner = np.where(small, H / xf, tau - G / xf)  # int_0^tau (1 - e^{-xs})^alpha ds
    scaled_val = y ** alpha / (alpha * xf) + inner
    scaled_val = np.where(inf, tau, scaled_val)
    if scaled:
        out = scaled_val
    else:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.where(inf, 0.0, scaled_val * xf ** (-alpha))
    return out.reshape(shape) if shape else float(out[0])


def _piece_integral(A, B, x, L, alpha, quad_opts):
    """``int_0^L |A - B e^{-x r}|^alpha dr`` split by sign.

    Returns ``(positive_part, negative_part)``.
    """
    def sgn_add(val, sign, acc):
        if sign > 0:
            acc[0] += val
        elif sign < 0:
            acc[1] += val

    acc = [0.0, 0.0]
    if L <= 0.0:
        return 0.0, 0.0
    if B == 0.0 or math.isinf(x):
        sgn_add(abs(A) ** alpha * L, np.sign(A), acc)
        return tuple(acc)
    if A == 0.0:
        val = abs(B) ** alpha * (-math.expm1(-alpha * x * L)) / (alpha * x)
        sgn_add(val, -np.sign(B), acc)
        return tuple(acc)
    R = min(L, 50.0 / x)
    if R < L:
        sgn_add(abs(A) ** alpha * (L - R), np.sign(A), acc)

    def w(r):
        return A - B * math.exp(-x * r)

    rstar = math.log(B / A) / x if B / A > 1.0 else -1.0
    if 0.0 < rstar < R:
        def ratio(r):
            d = r - rstar
            if d == 0.0:
                return abs(A) ** alpha * x ** alpha
            return abs(A) ** alpha * (abs(math.expm1(-x * d)) / abs(d)) ** alpha
        left, _ = integrate.quad(ratio, 0.0, rstar, weight="alg", wvar=(0.0, alpha), **quad_opts)
        right, _ = integrate.quad(ratio, rstar, R, weight="alg", wvar=(alpha, 0.0), **quad_opts)
        # w has the sign of A for r > rstar and the opposite sign before
        sgn_add(left, -np.sign(A), acc)
        sgn_add(right, np.sign(A), acc)
    else:
        val, _ = integrate.quad(lambda r: abs(w(r)) ** alpha, 0.0, R, **quad_opts)
        mid = w(0.5 * R)
        sgn_add(val, np.sign(mid), acc)
    return tuple(acc)


def _scaled_parts(x, thetas, taus, alpha, quad_opts):
    """Positive/negative parts of ``x**alpha K(x)`` for a general time vector."""
    pos = neg = 0.0
    d = len(taus)
    if math.isinf(x):
        D = 0.0
    else:
        D = float(sum(th * -math.expm1(-x * t) for th, t in zip(thetas, taus)))
        part = abs(D) ** alpha / (alpha * x)
        if D > 0:
            pos += part
        elif D < 0:
            neg += part
    prev = 0.0
    for k in range(d):
        tk = taus[k]
        A = float(sum(thetas[k:]))
        if math.isinf(x):
            B = 0.0
        else:
            B = float(sum(thetas[j] * math.exp(-x * (taus[j] - tk)) for j in range(k, d)))
        p, q = _piece_integral(A, B, x, tk - prev, alpha, quad_opts)
        pos += p
        neg += q
        prev = tk
    return pos, neg


def scaled_exponent(x, thetas, taus, law: StableLaw, quad: QuadratureSpec = DEFAULT_QUAD):
    """``x**alpha * int_R |sum_j theta_j f_{tau_j}(x,s)|^alpha omega(.) ds`` as a complex number.

    ``thetas`` and ``taus`` are 1-d sequences of equal length with ``taus``
    ascending.  One-time inputs use the closed-form kernel norm.
    """
    thetas = [float(t) for t in np.atleast_1d(thetas)]
    taus = [float(t) for t in np.atleast_1d(taus)]
    w = law.omega_plus
    if len(taus) == 1:
        th = thetas[0]
        k = kernel_alpha_norm(x, taus[0], law.alpha, scaled=True)
        return abs(th) ** law.alpha * (w if th >= 0 else w.conjugate()) * k
    opts = {"epsabs": quad.abs_tol * 1e-2, "epsrel": quad.rel_tol * 1e-2, "limit": quad.max_subdivisions}
    pos, neg = _scaled_parts(float(x), thetas, taus, law.alpha, opts)
    return pos * w + neg * w.conjugate()


# ---------------------------------------------------------------------------
# constants


def kappa_lambda(lam: float, alpha: float, beta: float, psi1: float) -> float:
    """``psi1 Gamma(1 - lam) / ((lam alpha / beta)**lam beta)``."""
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    return psi1 * math.gamma(1.0 - lam) / ((lam * alpha / beta) ** lam * beta)


def kappa_lambda_integral(lam, alpha, beta, psi1, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Direct quadrature of ``psi1 int_0^inf (1 - exp(-(lam alpha/beta)^-1 x^(-beta/lam))) x^(beta-1) dx``."""
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    c = beta / (lam * alpha)
    p = beta / lam

    def integrand(u):  # x = e^u
        arg = math.log(c) - p * u
        if arg > 700.0:
            return math.exp(beta * u)
        if arg < -40.0:
            return math.exp(arg + beta * u)
        return math.exp(math.log(-math.expm1(-math.exp(arg))) + beta * u)

    # integrand peaks where c e^{-pu} ~ 1
    u0 = math.log(c) / p
    opts = {"epsabs": 0.0, "epsrel": quad.rel_tol * 1e-2, "limit": quad.max_subdivisions}
    lo, e1 = integrate.quad(integrand, -np.inf, u0, **opts)
    hi, e2 = integrate.quad(integrand, u0, np.inf, **opts)
    return psi1 * (lo + hi)


def kappa_V(alpha, beta, psi1):
    """``kappa_{beta, alpha, beta} = psi1 Gamma(1 - beta) / (alpha**beta beta)``."""
    return psi1 * math.gamma(1.0 - beta) / (alpha ** beta * beta)


def kappa_W(alpha, beta, psi1):
    """``kappa_{beta/alpha, alpha, beta} = psi1 Gamma(1 - beta/alpha) / beta``."""
    return psi1 * math.gamma(1.0 - beta / alpha) / beta


# ---------------------------------------------------------------------------
# stable and sub-stable laws


def _cpow(z, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(p * np.log(np.asarray(z, dtype=complex)))


def cf_V(theta, alpha, beta, psi1, law: StableLaw):
    """Characteristic function of the (alpha beta)-stable variable ``V``, ``0 < beta < 1``."""
    if not (0.0 < beta < 1.0):
        raise ValueError("cf_V requires 0 < beta < 1")
    theta = np.asarray(theta, dtype=float)
    kap = kappa_lambda(beta, alpha, beta, psi1)
    out = np.exp(-kap * np.abs(theta) ** (alpha * beta) * _cpow(omega(theta, law), beta))
    out = np.where(theta == 0.0, 1.0 + 0.0j, out)
    return complex(out) if out.ndim == 0 else out


def cf_W(thetas, taus, alpha, beta, psi1, law: StableLaw):
    """Joint characteristic function of the sub-stable process ``W`` at ``taus``.

    ``thetas`` may be 1-d (one point) or 2-d with one row per evaluation point.
    """
    if not (0.0 < beta < alpha):
        raise ValueError("cf_W requires 0 < beta < alpha")
    th = np.asarray(thetas, dtype=float)
    single = th.ndim <= 1
    th = np.atleast_2d(th)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(np.diff(taus) < 0) or np.any(taus < 0):
        raise ValueError("taus must be ascending and non-negative")
    kap = kappa_lambda(beta / alpha, alpha, beta, psi1)
    dt = np.diff(np.concatenate([[0.0], taus]))
    tails = np.cumsum(th[:, ::-1], axis=1)[:, ::-1]  # sum_{j >= i} theta_j
    inner = np.sum(dt[None, :] * np.abs(tails) ** alpha * omega(tails, law), axis=1)
    out = np.exp(-kap * _cpow(inner, beta / alpha))
    out = np.where(np.all(th == 0.0, axis=1), 1.0 + 0.0j, out)
    return complex(out[0]) if single else out


def cf_V1(theta, alpha, psi1, law: StableLaw):
    """``exp(-(psi1/alpha) |theta|^alpha omega(theta))`` for ``alpha > 1``."""
    if not alpha > 1.0:
        raise ValueError("cf_V1 requires alpha > 1")
    theta = np.asarray(theta, dtype=float)
    out = np.exp(-(psi1 / alpha) * np.abs(theta) ** alpha * omega(theta, law))
    out = np.where(theta == 0.0, 1.0 + 0.0j, out)
    return complex(out) if out.ndim == 0 else out


def sigma2_beta(beta, psi1, variance):
    return psi1 * math.gamma(beta - 1.0) * variance / ((2.0 - beta) * (3.0 - beta))


def cov_Lambda2(tau1, tau2, beta, psi1, variance):
    """Covariance of the Gaussian limit ``Lambda_{2,beta}`` (fractional Brownian motion)."""
    if not (1.0 < beta < 2.0):
        raise ValueError("cov_Lambda2 requires 1 < beta < 2")
    h2 = 3.0 - beta
    s2 = sigma2_beta(beta, psi1, variance)
    return 0.5 * s2 * (tau1 ** h2 + tau2 ** h2 - abs(tau1 - tau2) ** h2)


# ---------------------------------------------------------------------------
# integrals over the rate axis


def _cexpm1(z):
    """``exp(z) - 1`` for complex ``z`` without cancellation."""
    z = np.asarray(z, dtype=complex)
    a, b = z.real, z.imag
    return np.expm1(a) * np.exp(1j * b) - 2.0 * np.sin(0.5 * b) ** 2 + 1j * np.sin(b)


def _outer(fn_left, fn_right, n_out, quad: QuadratureSpec, beta, alpha, what):
    """Sum of the integrals over ``u = log x`` in (-inf, log x_split] and ``t = x^(beta-alpha)``."""
    u_hi = math.log(quad.x_split)
    u_lo = max(-700.0, u_hi - 45.0 / beta)
    pts = list(np.arange(u_lo, u_hi, 2.0)[1:])
    opts = dict(epsabs=quad.abs_tol, epsrel=quad.rel_tol, norm="max", limit=quad.max_subdivisions)
    left, err_l, info_l = integrate.quad_vec(fn_left, u_lo, u_hi, points=pts or None,
                                             full_output=True, **opts)
    t_hi = quad.x_split ** (beta - alpha)
    right, err_r, info_r = integrate.quad_vec(fn_right, 0.0, t_hi, full_output=True, **opts)
    total = left + right
    err = err_l + err_r
    scale = max(float(np.max(np.abs(total))) if n_out else 0.0, 1.0)
    if not (info_l.success and info_r.success) and err > 100.0 * max(quad.abs_tol, quad.rel_tol * scale):
        raise NumericalFailure(f"{what}: outer quadrature did not converge", err)
    return total, u_lo, err


def _prepare_points(thetas, taus):
    th = np.asarray(thetas, dtype=float)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0) or np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be positive and strictly increasing")
    d = taus.size
    if th.ndim == 0:
        th = th.reshape(1, 1)
        single = True
    elif th.ndim == 1 and d > 1:
        if th.size != d:
            raise ValueError("thetas must match taus in length")
        th = th[None, :]
        single = True
    elif th.ndim == 1:
        th = th[:, None]
        single = th.shape[0] == 1 and np.ndim(thetas) == 0
    else:
        single = False
        if th.shape[1] != d:
            raise ValueError("thetas rows must match taus in length")
    return th, taus, single


def _exponent_vector(x, th, taus, law, quad):
    """``x**alpha K(x)`` for every row of ``th``; vectorized for one time point."""
    if taus.size == 1:
        k = kernel_alpha_norm(x, taus[0], law.alpha, scaled=True)
        col = th[:, 0]
        return np.abs(col) ** law.alpha * omega(col, law) * k
    return np.array([scaled_exponent(x, row, taus, law, quad) for row in th])


def _linear_integral(th, taus, alpha, beta, law, quad, what):
    """``int_0^inf x^(beta-1) K(x) dx`` for every row (requires 1 < beta < alpha)."""
    inner_quad = quad

    def left(u):  # x = e^u, integrand K(x) x^beta = Kt * x^(beta - alpha)
        x = math.exp(u)
        return _exponent_vector(x, th, taus, law, inner_quad) * math.exp((beta - alpha) * u)

    def right(t):  # x = t^{-1/(alpha-beta)}
        x = math.inf if t <= 0.0 else t ** (-1.0 / (alpha - beta))
        return _exponent_vector(x, th, taus, law, inner_quad) / (alpha - beta)

    total, u_lo, _ = _outer(left, right, th.shape[0], quad, beta, alpha, what)
    # below u_lo the integrand ~ const * e^{(beta - 1) u} with Kt ~ |D|^alpha/(alpha x)
    x_lo = math.exp(u_lo)
    edge = _exponent_vector(x_lo, th, taus, law, inner_quad) * x_lo ** (beta - alpha)
    total = total + edge / (beta - 1.0)
    return total


def cf_Lambda(thetas, taus, alpha, beta, psi1, law: StableLaw, quad: QuadratureSpec = DEFAULT_QUAD):
    """Joint characteristic function of the alpha-stable process ``Lambda_{alpha,beta}``.

    Requires ``1 < beta < alpha``.  ``thetas``: scalar, a vector matching
    ``taus`` (one joint point) or an ``(m, d)`` array of points; a 1-d vector
    with a single ``tau`` is treated as ``m`` marginal points.
    """
    if not (1.0 < beta < alpha):
        raise ValueError("cf_Lambda requires 1 < beta < alpha")
    th, taus, single = _prepare_points(thetas, taus)
    integral = _linear_integral(th, taus, alpha, beta, law, quad, "cf_Lambda")
    out = np.exp(-psi1 * integral)
    out = np.where(np.all(th == 0.0, axis=1), 1.0 + 0.0j, out)
    return complex(out[0]) if single else out


def _z_log_cf(th, taus, alpha, beta, law, quad):
    """``int_0^inf (exp(-K(x)) - 1) x^(beta-1) dx`` for every row of ``th``."""

    def left(u):
        x = math.exp(u)
        k = _exponent_vector(x, th, taus, law, quad) * math.exp(-alpha * u)
        return _cexpm1(-k) * math.exp(beta * u)

    def right(t):
        if t <= 0.0:
            return -_exponent_vector(math.inf, th, taus, law, quad) / (alpha - beta)
        x = t ** (-1.0 / (alpha - beta))
        kt = _exponent_vector(x, th, taus, law, quad)
        s = x ** (-alpha)
        z = kt * s
        small = np.abs(z) < 1e-4
        series = -kt + 0.5 * kt * z - kt * z * z / 6.0
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            full = _cexpm1(-z) / s
        val = np.where(small, series, full)
        return val / (alpha - beta)

    total, u_lo, _ = _outer(left, right, th.shape[0], quad, beta, alpha, "cf_Z")
    x_lo = math.exp(u_lo)
    k_lo = _exponent_vector(x_lo, th, taus, law, quad) * x_lo ** (-alpha)
    total = total + _cexpm1(-k_lo) * x_lo ** beta / beta
    return total


def cf_Z(thetas, taus, alpha, beta, psi1, law: StableLaw, quad: QuadratureSpec = DEFAULT_QUAD):
    """Joint characteristic function of the intermediate process ``Z_{alpha,beta}``.

    Requires ``0 < beta < alpha``; argument conventions as in :func:`cf_Lambda`.
    """
    if not (0.0 < beta < alpha):
        raise ValueError("cf_Z requires 0 < beta < alpha")
    if law.alpha != alpha:
        raise ValueError("law.alpha must equal alpha")
    th, taus, single = _prepare_points(thetas, taus)
    out = np.exp(psi1 * _z_log_cf(th, taus, alpha, beta, law, quad))
    out = np.where(np.all(th == 0.0, axis=1), 1.0 + 0.0j, out)
    return complex(out[0]) if single else out


def cf_Z_scaled(thetas, taus, scale, alpha, beta, psi1, law: StableLaw, c: float,
                quad: QuadratureSpec = DEFAULT_QUAD):
    """Characteristic function of ``scale * Z(c tau)``, the rescaled process used in
    the small/large-scale limits."""
    th = np.asarray(thetas, dtype=float) * scale
    return cf_Z(th, np.asarray(taus, dtype=float) * c, alpha, beta, psi1, law, quad)
