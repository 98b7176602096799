import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from rcarlab.exceptions import UnsupportedRegime
from rcarlab.regime import RegimeCase, classify, is_unsupported, regime_table

MU_INF = {RegimeCase.I_MU_INF_BETA_GT1, RegimeCase.I_MU_INF_BETA_EQ1, RegimeCase.I_MU_INF_BETA_LT1,
          RegimeCase.II_MU_INF}
MU_ZERO = {RegimeCase.I_MU_ZERO, RegimeCase.II_MU_ZERO}


def test_example_mu_infinite_beta_below_one():
    r = classify(1.5, 0.5, 10 ** 4, 10)
    assert r.case is RegimeCase.I_MU_INF_BETA_LT1
    assert r.mu_proxy == pytest.approx(1e7, rel=1e-12)
    assert r.normalization == pytest.approx(10 ** (16 / 3) * 10, rel=1e-12)
    assert r.limit_law.name == "V*tau"
    assert r.gamma is None


def test_example_case_two_intermediate():
    n = 10_000
    r = classify(0.5, 0.75, int(round(n ** 1.5)), n)
    assert r.gamma == pytest.approx(2.0)
    assert r.mu_proxy == pytest.approx(1.0, rel=1e-9)
    assert r.case is RegimeCase.II_INTERMEDIATE
    assert r.limit_law.name == "V*tau+zeta"
    assert r.normalization == pytest.approx((n ** 2.5) ** 2, rel=1e-9)


@pytest.mark.parametrize("N,n", [(2, 2), (10 ** 6, 3), (5, 10 ** 6)])
def test_example_short_memory(N, n):
    r = classify(1.5, 2.0, N, n)
    assert r.case is RegimeCase.III_SHORT_MEMORY
    assert r.normalization == pytest.approx((N * n) ** (2 / 3), rel=1e-12)
    assert r.limit_law.name == "zeta"
    assert r.family == "α-stable"


def test_unsupported():
    for a, b in ((1.5, 1.5), (0.5, 1.0), (0.8, 1.0)):
        assert is_unsupported(a, b)
        with pytest.raises(UnsupportedRegime):
            classify(a, b, 100, 100)
        r = classify(a, b, 100, 100, strict=False)
        assert r.case is RegimeCase.UNSUPPORTED and math.isnan(r.normalization)
    assert not is_unsupported(1.5, 1.0)


def test_input_validation():
    with pytest.raises(ValueError):
        classify(2.5, 1.0, 10, 10)
    with pytest.raises(ValueError):
        classify(1.5, 0.5, 1, 10)


def _table_index(alpha, beta, mu_branch):
    """Stability index of the limit as listed in the regime table."""
    if beta < alpha:
        if mu_branch == "inf":
            return alpha * beta if beta < 1 else alpha
        return beta if mu_branch == "zero" else None
    if beta < 1:
        return {"inf": alpha * beta, "zero": alpha}.get(mu_branch)
    return alpha


@settings(max_examples=400, deadline=None)
@given(alpha=st.sampled_from([0.3, 0.5, 0.8, 1.0, 1.2, 1.5, 1.8, 2.0]),
       beta=st.sampled_from([0.2, 0.4, 0.6, 0.75, 0.9, 1.0, 1.3, 1.7, 2.5, 3.0]),
       logN=st.floats(0.7, 14), logn=st.floats(0.7, 14))
def test_partition_and_table_agreement(alpha, beta, logN, logn):
    assume(not is_unsupported(alpha, beta))
    N, n = int(math.exp(logN)), int(math.exp(logn))
    assume(N >= 2 and n >= 2)
    r = classify(alpha, beta, N, n)
    assert r.normalization > 0 and math.isfinite(r.normalization)
    assert (r.gamma is not None) == (alpha < beta < 1)
    branch = "inf" if r.case in MU_INF else "zero" if r.case in MU_ZERO else "mid"
    if beta > max(alpha, 1):
        assert r.case is RegimeCase.III_SHORT_MEMORY
    else:
        lo, hi = 1 / 4.0, 4.0
        assert (branch == "inf") == (r.mu_proxy > hi)
        assert (branch == "zero") == (r.mu_proxy < lo)
    expected = _table_index(alpha, beta, branch if r.case is not RegimeCase.III_SHORT_MEMORY else "inf")
    if expected is None:
        assert r.limit_law.index is None
    else:
        assert r.limit_law.index == pytest.approx(expected)


@settings(max_examples=200, deadline=None)
@given(alpha=st.sampled_from([0.5, 1.2, 1.5, 2.0]), beta=st.sampled_from([0.3, 0.6, 0.9, 1.0, 1.4]),
       n=st.integers(2, 10 ** 5), N1=st.integers(2, 10 ** 6), N2=st.integers(2, 10 ** 6))
def test_monotone_in_N(alpha, beta, n, N1, N2):
    assume(not is_unsupported(alpha, beta))
    lo, hi = sorted((N1, N2))
    a, b = classify(alpha, beta, lo, n), classify(alpha, beta, hi, n)
    assert not (a.case in MU_INF and b.case in MU_ZERO)
    assert b.mu_proxy >= a.mu_proxy


def test_regime_table_grid():
    rows = regime_table([0.5, 1.5, 2.0], [0.5, 1.2, 2.5])
    assert len(rows) == 9
    d = {k: r for k, r in rows}
    assert d[(1.5, 2.5)].family == "α-stable"
    assert d[(0.5, 0.5)].case is RegimeCase.UNSUPPORTED
    assert all(r.family for _, r in rows)


def test_limit_cf_binding():
    th = np.linspace(-2, 2, 5)
    r = classify(1.5, 2.5, 200, 200)
    v = r.limit_law.cf(th)
    np.testing.assert_allclose(v, np.exp(-2.5 * np.abs(th) ** 1.5), rtol=1e-12)
    w = classify(1.5, 0.5, 2000, 2000).limit_law.cf(th)  # intermediate band
    assert abs(w[2] - 1) < 1e-15 and np.all(np.abs(w) <= 1)
