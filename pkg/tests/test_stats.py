import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from rcarlab.exceptions import FitError
from rcarlab.limit_laws import CFGrid
from rcarlab.stable_core import StableLaw, cf_levy, sample_stable
from rcarlab.stats import (DegenerateSampleWarning, SampleSet, cf_distance, default_theta_grid,
                           empirical_cf, hill_index, invert_cf_cdf, loglog_slope, sample_autocov)

from conftest import THETAS


def test_default_grid():
    g = default_theta_grid()
    assert g.size == 61 and g[0] == -3 and g[-1] == 3 and 0.0 in g


def test_empirical_cf_constant_sample():
    e = empirical_cf(np.full(10, 0.7), THETAS)
    np.testing.assert_allclose(e.values, np.exp(1j * THETAS * 0.7), rtol=0, atol=1e-15)
    assert e.values[THETAS == 0.0][0] == 1.0


def test_empirical_cf_gaussian():
    x = np.random.default_rng(1).standard_normal(100_000)
    v = empirical_cf(x, [1.0]).values[0]
    assert abs(v - math.exp(-0.5)) < 3 * math.sqrt(2 / 1e5)


def test_empirical_cf_hermitian_and_errors():
    x = np.random.default_rng(2).standard_cauchy(1000)
    a = empirical_cf(x, THETAS).values
    b = empirical_cf(x, -THETAS).values
    np.testing.assert_allclose(b, np.conj(a), atol=1e-14)
    assert np.all(np.abs(a) <= 1 + 1e-15)
    with pytest.raises(ValueError):
        empirical_cf([1.0], THETAS)
    with pytest.raises(ValueError):
        SampleSet([])
    with pytest.raises(ValueError):
        SampleSet([1.0, np.inf])


def test_cf_distance_examples():
    a = CFGrid(THETAS, np.ones(61))
    assert cf_distance(a, a) == 0.0
    assert cf_distance(a, CFGrid(THETAS, -np.ones(61))) == 2.0
    with pytest.raises(ValueError):
        cf_distance(a, CFGrid(THETAS + 0.1, np.ones(61)))
    law = StableLaw.exact(1.5, 1.0, 1.0)
    x = sample_stable(law, np.random.default_rng(3), 100_000)
    assert cf_distance(empirical_cf(x, THETAS), CFGrid(THETAS, cf_levy(THETAS, 1.0, law))) < 0.02


_cplx = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(vals=st.lists(st.tuples(_cplx, _cplx, _cplx), min_size=1, max_size=20))
def test_cf_distance_is_metric(vals):
    th = np.arange(len(vals), dtype=float)
    a, b, c = (CFGrid(th, np.array([v[i] for v in vals])) for i in range(3))
    assert cf_distance(a, b) == cf_distance(b, a)
    assert cf_distance(a, a) == 0.0
    assert cf_distance(a, c) <= cf_distance(a, b) + cf_distance(b, c) + 1e-15


def test_hill_pareto():
    x = np.random.default_rng(4).pareto(1.0, 1_000_000) + 1.0
    assert 0.95 <= hill_index(x, 10_000) <= 1.05


def test_hill_stable():
    x = sample_stable(StableLaw.exact(1.5, 1.0, 1.0), np.random.default_rng(5), 1_000_000)
    assert 1.35 <= hill_index(x, 5000) <= 1.65


def test_hill_degenerate_and_errors():
    with pytest.warns(DegenerateSampleWarning):
        assert hill_index(np.full(100, 2.0), 10) == 0.0
    with pytest.raises(ValueError):
        hill_index(np.arange(10.0), 5)
    with pytest.raises(ValueError):
        hill_index(np.arange(10.0), 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hill_index(np.arange(1.0, 101.0))  # default k = 10


def test_invert_symmetric_at_zero():
    law = StableLaw.exact(1.3, 1.0, 1.0)
    assert invert_cf_cdf(lambda t: cf_levy(t, 1.0, law), 0.0) == pytest.approx(0.5, abs=1e-9)


def test_invert_gaussian():
    p = invert_cf_cdf(lambda t: math.exp(-t * t / 2), 1.959964)
    assert p == pytest.approx(0.975, abs=1e-6)
    assert p == pytest.approx(sps.norm.cdf(1.959964), abs=1e-9)


def test_invert_cauchy():
    # omega = (c1 + c2) pi / 2 = 1/2 is a Cauchy law with scale 1/2
    law = StableLaw.exact(1.0, 1 / (2 * math.pi), 1 / (2 * math.pi))
    x = 0.5 * math.tan(math.pi / 4)
    p = invert_cf_cdf(lambda t: cf_levy(t, 1.0, law), x)
    assert p == pytest.approx(0.5 + math.atan(x / 0.5) / math.pi, abs=1e-6)


def test_invert_skewed_stable_against_scipy():
    # S1 parameters: scale omega_re^(1/alpha), skewness (c1 - c2)/(c1 + c2)
    law = StableLaw.exact(1.5, 1.5, 0.5)
    ref = sps.levy_stable(1.5, law.skewness, scale=law.scale)
    ref.dist.parameterization = "S1"
    for x in (-2.0, 0.3, 1.7):
        assert invert_cf_cdf(lambda t: cf_levy(t, 1.0, law), x) == pytest.approx(ref.cdf(x), abs=1e-5)


def test_invert_monotone():
    law = StableLaw.exact(0.8, 0.7, 0.3)
    xs = np.linspace(-5, 5, 21)
    p = [invert_cf_cdf(lambda t: cf_levy(t, 1.0, law), x) for x in xs]
    assert np.all(np.diff(p) >= -1e-9)
    assert 0 <= min(p) and max(p) <= 1


def test_autocov_iid():
    x = np.random.default_rng(6).standard_normal(100_000)
    g = sample_autocov(x, 5)
    assert g[0] == pytest.approx(x.var(), rel=1e-12)
    assert abs(g[1]) < 3 / math.sqrt(x.size)
    brute = np.mean((x[:-1] - x.mean()) * (x[1:] - x.mean())) * (x.size - 1) / x.size
    assert g[1] == pytest.approx(brute, rel=1e-9)


def test_loglog_slope():
    lags = np.arange(5, 101)
    assert loglog_slope(lags, lags ** -0.5) == pytest.approx(-0.5, abs=1e-12)
    with pytest.raises(FitError):
        loglog_slope(lags, np.where(lags == 50, -1.0, 1.0))
    with pytest.raises(FitError):
        loglog_slope([1.0], [1.0])
