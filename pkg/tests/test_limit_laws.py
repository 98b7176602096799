import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from rcarlab import limit_laws as ll
from rcarlab.stable_core import StableLaw, cf_levy

from conftest import THETAS
from oracles import fbm_covariance_quadrature

SYM15 = StableLaw.symmetric(1.5)
SKEW15 = StableLaw.exact(1.5, 2.0, 0.5)
GAUSS = StableLaw.gaussian(1.0)


# -- kernel ----------------------------------------------------------------


def test_f_tau_examples():
    assert ll.f_tau(1.0, 2.0, 1.0) == 0.0
    assert ll.f_tau(1.0, 0.5, 1.0) == pytest.approx(1 - math.exp(-0.5), rel=1e-15)
    assert ll.f_tau(2.0, -1.0, 1.0) == pytest.approx(math.exp(-2) * (1 - math.exp(-2)) / 2, rel=1e-15)
    assert ll.f_tau(1.0, 0.5, 1.0) == pytest.approx(0.39347, abs=1e-5)
    # the closed form evaluates to 0.0585098, i.e. 0.05851 to five places
    assert ll.f_tau(2.0, -1.0, 1.0) == pytest.approx(0.05851, abs=1e-5)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(1e-3, 1e3), s=st.floats(-10, 10), tau=st.floats(0, 5))
def test_f_tau_matches_integral_and_range(x, s, tau):
    v = ll.f_tau(x, s, tau)
    assert -1e-300 <= v <= min(tau, 1 / x) * (1 + 1e-12)
    lo = max(s, 0.0)
    ref = 0.0 if lo >= tau else integrate.quad(lambda t: math.exp(-x * (t - s)), lo, tau,
                                               epsabs=1e-300, epsrel=1e-12)[0]
    assert v == pytest.approx(ref, rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("x,tau,alpha", [(0.01, 1.0, 1.5), (1.0, 1.0, 0.7), (30.0, 2.0, 1.9),
                                         (1e-5, 3.0, 0.4), (200.0, 0.5, 1.2)])
def test_kernel_alpha_norm_matches_quadrature(x, tau, alpha):
    past = (-math.expm1(-x * tau)) ** alpha / (alpha * x ** (1 + alpha))
    inside = integrate.quad(lambda s: ll.f_tau(x, s, tau) ** alpha, 0, tau, epsrel=1e-12, epsabs=0)[0]
    assert ll.kernel_alpha_norm(x, tau, alpha) == pytest.approx(past + inside, rel=1e-10)
    assert ll.kernel_alpha_norm(x, tau, alpha, scaled=True) == pytest.approx(
        x ** alpha * (past + inside), rel=1e-10)


# -- constants -------------------------------------------------------------


def test_kappa_examples():
    assert ll.kappa_lambda(0.5, 2.0, 0.5, 1.0) == pytest.approx(
        float(mp.gamma(0.5) / (mp.sqrt(2) * 0.5)), rel=1e-14)
    assert ll.kappa_lambda(0.5, 2.0, 0.5, 1.0) == pytest.approx(2.50663, abs=1e-5)
    assert ll.kappa_lambda(0.5, 2.0, 1.0, 1.0) == pytest.approx(float(mp.sqrt(mp.pi)), rel=1e-14)
    assert ll.kappa_lambda(0.5, 2.0, 1.0, 1.0) == pytest.approx(1.77245, abs=1e-5)
    with pytest.raises(ValueError):
        ll.kappa_lambda(1.0, 1.5, 0.6, 1.0)


def test_kappa_integral_form():
    v = ll.kappa_lambda_integral(0.4, 1.5, 0.6, 2.0)
    assert v == pytest.approx(ll.kappa_lambda(0.4, 1.5, 0.6, 2.0), rel=1e-8)


@settings(max_examples=50, deadline=None)
@given(alpha=st.floats(0.1, 2.0), frac=st.floats(0.05, 0.95), psi1=st.floats(0.1, 5))
def test_kappa_specializations(alpha, frac, psi1):
    beta = alpha * frac
    if beta < 1:
        assert ll.kappa_V(alpha, beta, psi1) == pytest.approx(
            ll.kappa_lambda(beta, alpha, beta, psi1), rel=1e-12)
    assert ll.kappa_W(alpha, beta, psi1) == pytest.approx(
        ll.kappa_lambda(beta / alpha, alpha, beta, psi1), rel=1e-12)


# -- sub-stable laws -------------------------------------------------------


def test_cf_V_examples():
    assert ll.cf_V(0.0, 1.5, 0.5, 1.0, SYM15) == 1.0
    v = ll.cf_V(1.0, 2.0, 0.5, 1.0, GAUSS)
    assert v == pytest.approx(math.exp(-2.50663 * math.sqrt(0.5)), rel=1e-5)
    assert v == pytest.approx(math.exp(-float(mp.sqrt(mp.pi))), rel=1e-13)
    with pytest.raises(ValueError):
        ll.cf_V(1.0, 1.5, 1.0, 1.0, SYM15)


@pytest.mark.parametrize("alpha,beta", [(1.5, 0.5), (0.8, 0.6), (2.0, 0.3)])
def test_cf_V_stability_index(alpha, beta):
    law = StableLaw.symmetric(alpha)
    th = np.linspace(-2, 2, 9)
    lhs = ll.cf_V(th, alpha, beta, 1.3, law) ** 2
    rhs = ll.cf_V(2 ** (1 / (alpha * beta)) * th, alpha, beta, 1.3, law)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-15)


def test_cf_W_examples():
    assert ll.cf_W([0.0, 0.0], [0.5, 1.0], 1.5, 0.5, 1.0, SYM15) == 1.0
    tau, th = 1.7, 0.8
    k = ll.kappa_lambda(0.5 / 1.5, 1.5, 0.5, 1.0)
    w = SKEW15.omega_plus
    expected = np.exp(-k * tau ** (0.5 / 1.5) * th ** 0.5 * w ** (0.5 / 1.5))
    assert ll.cf_W([th], [tau], 1.5, 0.5, 1.0, SKEW15) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(ValueError):
        ll.cf_W([1.0], [1.0], 1.5, 1.5, 1.0, SYM15)


@settings(max_examples=50, deadline=None)
@given(t1=st.floats(-3, 3), t2=st.floats(-3, 3), c=st.floats(0.05, 20))
def test_cf_W_self_similar(t1, t2, c):
    taus = np.array([0.4, 1.1])
    lhs = ll.cf_W([t1, t2], c * taus, 1.5, 0.7, 1.0, SKEW15)
    rhs = ll.cf_W(c ** (1 / 1.5) * np.array([t1, t2]), taus, 1.5, 0.7, 1.0, SKEW15)
    assert abs(lhs - rhs) < 1e-12


def test_cf_V1_examples():
    assert ll.cf_V1(0.0, 1.5, 1.0, SYM15) == 1.0
    assert ll.cf_V1(2.0, 2.0, 1.0, GAUSS) == pytest.approx(math.exp(-1.0), rel=1e-14)
    with pytest.raises(ValueError):
        ll.cf_V1(1.0, 1.0, 1.0, StableLaw.symmetric(1.0))


def test_cf_V_tends_to_cf_V1():
    beta = 0.999
    for alpha, law in ((1.5, SYM15), (1.5, SKEW15), (2.0, GAUSS)):
        scaled = ll.cf_V((1 - beta) ** (1 / (alpha * beta)) * THETAS, alpha, beta, beta, law)
        assert np.max(np.abs(scaled - ll.cf_V1(THETAS, alpha, beta, law))) < 1e-2


# -- Gaussian fBm limit ----------------------------------------------------


def test_cov_Lambda2_examples():
    assert ll.cov_Lambda2(1.0, 1.0, 1.5, 1.0, 1.0) == pytest.approx(float(mp.gamma(0.5) / 0.75), rel=1e-14)
    assert ll.cov_Lambda2(1.0, 1.0, 1.5, 1.0, 1.0) == pytest.approx(2.36327, abs=1e-5)
    assert ll.cov_Lambda2(1.0, 0.0, 1.5, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        ll.cov_Lambda2(1.0, 1.0, 2.0, 1.0, 1.0)


@pytest.mark.parametrize("t1,t2,beta", [(0.7, 1.6, 1.4), (1.0, 1.0, 1.1), (2.0, 0.3, 1.9)])
def test_cov_Lambda2_double_quadrature(t1, t2, beta):
    val = fbm_covariance_quadrature(t1, t2, beta, psi1=0.8, variance=2.5)
    assert val == pytest.approx(ll.cov_Lambda2(t1, t2, beta, 0.8, 2.5), rel=1e-5)


# -- Lambda ----------------------------------------------------------------


def test_cf_Lambda_origin_and_gaussian_variance():
    assert ll.cf_Lambda([0.0, 0.0], [0.5, 1.0], 1.5, 1.2, 1.0, SYM15) == 1.0
    th = np.array([0.3, 1.0, 2.0])
    v = ll.cf_Lambda(th, [1.3], 2.0, 1.5, 1.0, GAUSS)
    np.testing.assert_allclose(-2 * np.log(v.real), th ** 2 * ll.cov_Lambda2(1.3, 1.3, 1.5, 1.0, 1.0),
                               rtol=1e-5)


def test_cf_Lambda_self_similar():
    alpha, beta, c = 1.5, 1.2, 2.0
    H = 1 - (beta - 1) / alpha
    th = np.array([-1.5, 0.4, 2.0])
    lhs = ll.cf_Lambda(th, [c * 0.8], alpha, beta, 1.0, SKEW15)
    rhs = ll.cf_Lambda(c ** H * th, [0.8], alpha, beta, 1.0, SKEW15)
    assert np.max(np.abs(lhs - rhs)) < 1e-6


def test_cf_Lambda_joint_gaussian():
    taus = [0.5, 1.0]
    th = np.array([[0.7, -1.2], [1.0, 0.4]])
    v = ll.cf_Lambda(th, taus, 2.0, 1.6, 1.0, GAUSS, ll.QuadratureSpec.nested())
    C = np.array([[ll.cov_Lambda2(a, b, 1.6, 1.0, 1.0) for b in taus] for a in taus])
    expected = np.exp(-0.5 * np.einsum("mi,ij,mj->m", th, C, th))
    np.testing.assert_allclose(v.real, expected, rtol=1e-5)


# -- Z ---------------------------------------------------------------------


def test_cf_Z_origin():
    assert ll.cf_Z(0.0, [1.0], 1.5, 0.5, 1.0, SYM15) == 1.0
    assert ll.cf_Z([0.0, 0.0], [0.3, 1.0], 1.5, 0.5, 1.0, SYM15) == 1.0


def test_cf_Z_aggregate_similarity():
    alpha, beta, N = 1.5, 0.5, 3
    th = np.array([-2.0, 0.5, 1.7])
    lhs = ll.cf_Z(th, [1.0 / N ** (1 / beta)], alpha, beta, 1.0, SKEW15)
    rhs = ll.cf_Z(N ** (-1 / (alpha * beta) - 1 / beta) * th, [1.0], alpha, beta, 1.0, SKEW15) ** N
    assert np.max(np.abs(lhs - rhs)) < 1e-8


@pytest.mark.parametrize("alpha,beta,law", [(1.5, 0.5, SKEW15), (1.8, 1.3, StableLaw.symmetric(1.8)),
                                            (0.8, 0.4, StableLaw.exact(0.8, 0.2, 1.0)),
                                            (2.0, 1.5, GAUSS)])
def test_cf_Z_modulus_and_hermitian(alpha, beta, law):
    th = np.linspace(0.25, 3.0, 12)
    v = ll.cf_Z(th, [1.0], alpha, beta, 1.0, law)
    w = ll.cf_Z(-th, [1.0], alpha, beta, 1.0, law)
    assert np.all(np.abs(v) <= 1 + 1e-12)
    np.testing.assert_allclose(w, np.conj(v), atol=1e-12)


def test_all_evaluators_modulus_and_hermitian():
    th = np.linspace(0.1, 3, 8)
    checks = [
        lambda t: ll.cf_V(t, 1.5, 0.5, 1.0, SKEW15),
        lambda t: ll.cf_W(t[:, None], [1.0], 1.5, 0.5, 1.0, SKEW15),
        lambda t: ll.cf_V1(t, 1.5, 1.0, SKEW15),
        lambda t: ll.cf_Lambda(t, [1.0], 1.5, 1.2, 1.0, SKEW15),
        lambda t: cf_levy(t, 1.0, SKEW15),
    ]
    for f in checks:
        v, w = f(th), f(-th)
        assert np.all(np.abs(v) <= 1 + 1e-12)
        np.testing.assert_allclose(w, np.conj(v), atol=1e-12)


def test_cf_Z_validation():
    with pytest.raises(ValueError):
        ll.cf_Z(1.0, [1.0], 1.5, 1.5, 1.0, SYM15)
    with pytest.raises(ValueError):
        ll.cf_Z([1.0, 1.0], [1.0, 0.5], 1.5, 0.5, 1.0, SYM15)
    with pytest.raises(ValueError):
        ll.cf_Lambda(1.0, [1.0], 1.5, 0.9, 1.0, SYM15)
