import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from sbm_mf.exceptions import DivergenceError, DomainError
from sbm_mf.numerics import BetaParams, digamma, kl_beta, kl_categorical, log_gamma

mpmath.mp.dps = 40


def test_digamma_special_values():
    # oracle values: mpmath at 40 digits
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-12)
    assert digamma(0.5) == pytest.approx(-1.9635100260214235, abs=1e-12)
    assert float(-mpmath.euler - 2 * mpmath.log(2)) == pytest.approx(-1.9635100260214235, abs=1e-16)


def test_digamma_matches_high_precision_oracle():
    xs = np.concatenate([np.geomspace(1e-3, 1e6, 400), np.linspace(0.5, 12, 97)])
    got = digamma(xs)
    want = np.array([float(mpmath.digamma(mpmath.mpf(float(x)))) for x in xs])
    assert np.max(np.abs(got - want)) <= 1e-10


@given(st.floats(min_value=1e-3, max_value=1e5))
def test_digamma_recurrence(x):
    assert digamma(x + 1.0) - digamma(x) == pytest.approx(1.0 / x, rel=1e-9, abs=1e-10)


def test_digamma_log_bracket():
    xs = np.linspace(0.5001, 50, 2000)
    psi = digamma(xs)
    assert np.all(psi > np.log(xs - 0.5))
    assert np.all(psi < np.log(xs))


def test_digamma_scalar_and_array_types():
    assert isinstance(digamma(2.0), float)
    assert digamma(np.array([1.0, 2.0])).shape == (2,)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_digamma_domain(bad):
    with pytest.raises(DomainError):
        digamma(bad)


def test_log_gamma_values():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-15)
    for x in [1e-3, 0.7, 3.3, 17.0, 1e4]:
        want = float(mpmath.loggamma(mpmath.mpf(x)))
        assert log_gamma(x) == pytest.approx(want, rel=1e-12)
        assert log_gamma(x + 1) - log_gamma(x) == pytest.approx(math.log(x), rel=1e-9, abs=1e-12)
    with pytest.raises(DomainError):
        log_gamma(0.0)


def test_kl_categorical():
    assert kl_categorical([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert kl_categorical([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.6931471806, abs=1e-10)
    with pytest.raises(DivergenceError):
        kl_categorical([0.5, 0.5], [1.0, 0.0])


def _kl_beta_quad(a, b):
    pa, pb = stats.beta(a.alpha, a.beta), stats.beta(b.alpha, b.beta)
    f = lambda x: pa.pdf(x) * (pa.logpdf(x) - pb.logpdf(x))
    lo, hi = pa.ppf(1e-14), pa.isf(1e-14)
    val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-10, points=[pa.mean()])
    return val


def test_kl_beta_closed_form_example():
    a, b = BetaParams(2.0, 1.0), BetaParams(1.0, 1.0)
    assert kl_beta(a, b) == pytest.approx(math.log(2) - 0.5, abs=1e-12)
    assert _kl_beta_quad(a, b) == pytest.approx(math.log(2) - 0.5, abs=1e-9)
    assert kl_beta(BetaParams(2, 3), BetaParams(2, 3)) == 0.0


def test_kl_beta_against_quadrature():
    rng = np.random.default_rng(5)
    for _ in range(25):
        a = BetaParams(*rng.uniform(0.5, 50, size=2))
        b = BetaParams(*rng.uniform(0.5, 50, size=2))
        assert kl_beta(a, b) == pytest.approx(_kl_beta_quad(a, b), abs=1e-6)


@settings(max_examples=200)
@given(st.tuples(*[st.floats(0.05, 200)] * 4))
def test_kl_beta_nonnegative(v):
    assert kl_beta(BetaParams(v[0], v[1]), BetaParams(v[2], v[3])) >= 0.0


def test_beta_params_validation():
    with pytest.raises(ValueError):
        BetaParams(0.0, 1.0)
    assert BetaParams(3.0, 1.0).mean == 0.75
