import math

import mpmath
import numpy as np
import pytest

from sbm_mf import (
    DomainError,
    RegimeError,
    chernoff_identity_check,
    contraction_and_budget,
    minimax_bound,
    rate_report,
    renyi_I,
    t_lambda_star,
)

mpmath.mp.dps = 40


def oracle_I(p, q):
    p, q = mpmath.mpf(p), mpmath.mpf(q)
    return float(-2 * mpmath.log(mpmath.sqrt(p * q) + mpmath.sqrt((1 - p) * (1 - q))))


def grid():
    g = [(m + 1) / 51 for m in range(50)]
    return [(p, q) for p in g for q in g if q < p]


def test_renyi_values():
    # high-precision oracle; 0.0672574 (not 0.0672663)
    assert renyi_I(0.3, 0.1) == pytest.approx(0.0672573693808755, rel=1e-12)
    assert 400 * renyi_I(0.1, 0.02) == pytest.approx(13.0092, abs=1e-3)
    assert renyi_I(0.3, 0.3) == pytest.approx(0.0, abs=1e-15)
    for p, q in [(0.9, 0.01), (0.05, 0.04), (0.5, 0.1)]:
        assert renyi_I(p, q) == pytest.approx(oracle_I(p, q), rel=1e-12)
    for bad in [(0.0, 0.1), (1.0, 0.1), (0.3, -0.1)]:
        with pytest.raises(DomainError):
            renyi_I(*bad)


def test_t_lambda_star_values():
    t, lam = t_lambda_star(0.5, 0.1)
    assert t == pytest.approx(1.0986122886681098, rel=1e-14)
    assert lam == pytest.approx(math.log(0.9 / 0.5) / math.log(9.0), rel=1e-14)
    with pytest.raises(DomainError):
        t_lambda_star(0.1, 0.3)


def test_lambda_star_inside_interval():
    for p, q in grid():
        _, lam = t_lambda_star(p, q)
        assert q < lam < p


def test_chernoff_identities_on_grid():
    assert max(chernoff_identity_check(p, q) for p, q in grid()) <= 1e-12


def test_renyi_bounds_small_p():
    for p, q in grid():
        if p <= 0.1:
            I = renyi_I(p, q)
            assert (p - q) ** 2 / (4 * p) <= I <= (p - q) ** 2 / p


def test_renyi_upper_bound_needs_comparable_p_q():
    # the upper bound is asymptotic in p, q of the same order; it fails as q/p -> 0
    p, q = 0.1, 1e-6
    assert renyi_I(p, q) > (p - q) ** 2 / p


def test_minimax_bound():
    assert minimax_bound(100, 2, 1.0, 0.1) == pytest.approx(100 * math.exp(-5), rel=1e-14)
    assert minimax_bound(100, 2, 1.0, 0.1) == pytest.approx(0.6737946999085467, rel=1e-14)
    assert minimax_bound(90, 3, 0.5, 0.2) == pytest.approx(90 * math.exp(-3), rel=1e-14)


def test_contraction_and_budget():
    # snr = n I / (w k (n/nbar)^2) = 100*0.8/(1*2*4) = 10
    c_n, s0 = contraction_and_budget(100, 2, 0.8, 1.0, 50.0)
    assert c_n == pytest.approx(0.31622776601683794, rel=1e-14)
    assert s0 == pytest.approx(40.0 / math.log(10.0), rel=1e-14)
    with pytest.raises(RegimeError):
        contraction_and_budget(100, 2, 0.01, 1.0, 50.0)


def test_rate_report_desk_regime():
    r = rate_report(400, 2, 0.1, 0.02, nbar_min=200.0)
    assert r.c_n == pytest.approx(0.78418, abs=1e-5)
    assert r.s0 == pytest.approx(13.378, abs=1e-3)
    assert set(r.to_dict()) >= {"I", "t_star", "lambda_star", "minimax_bound", "c_n", "s0"}
    weak = rate_report(400, 2, 0.03, 0.02, nbar_min=200.0)
    assert weak.c_n is None and weak.s0 is None


def test_renyi_symmetric_and_midpoint_lambda():
    for p, q in grid()[::37]:
        assert renyi_I(p, q) == pytest.approx(renyi_I(q, p), rel=1e-14)
    assert t_lambda_star(0.7, 0.3)[1] == pytest.approx(0.5, rel=1e-14)


def test_minimax_bound_shape():
    assert minimax_bound(50, 3, 0.8, 0.0) == 50.0
    values = [minimax_bound(200, 4, 1.0, I) for I in np.linspace(0, 1, 20)]
    assert np.all(np.diff(values) < 0)


def test_contraction_spec_example_and_scaling():
    c_n, _ = contraction_and_budget(800, 2, 0.1, 1.0, 400.0)
    assert c_n == pytest.approx(1 / math.sqrt(10), rel=1e-14)
    c2, _ = contraction_and_budget(800, 2, 0.2, 1.0, 400.0)
    assert c2 == pytest.approx(c_n / math.sqrt(2), rel=1e-14)
