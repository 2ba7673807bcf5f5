import math

import mpmath as mp
import numpy as np
import pytest

from landauspec import asymptotics as asy
from landauspec import symbols as sy


def test_mu_from_weight():
    assert asy.mu_from_weight(1.0, 1.0, 2.0) == 1.0
    assert asy.mu_from_weight(3.0, 0.5, 2.0) == 3.0
    assert asy.mu_from_weight(1.0, 2.0, 1.0) == 4.0
    with pytest.raises(ValueError):
        asy.mu_from_weight(-1.0, 1.0, 1.0)


def test_predict_compact():
    k = np.array([2.0, 10.0, 100.0])
    # b cap^2 / 2 = 1 kills the log factor
    assert np.allclose(asy.predict_compact(k, 2.0, 1.0), -k * np.log(k) + k)
    # capacity scaling: doubling cap adds k ln 4
    d = asy.predict_compact(k, 2.0, 2.0) - asy.predict_compact(k, 2.0, 1.0)
    assert np.allclose(d, k * math.log(4.0))
    assert asy.predict_compact(math.e, 2.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_coeffs_f_first_equals_mu():
    for beta, mu in [(0.5, 1.0), (0.5, 1.3), (0.3, 0.4), (0.75, 2.0)]:
        f = asy.coeffs_f(beta, mu)
        assert f[0] == pytest.approx(mu, abs=1e-8)


def test_coeffs_f_index_range():
    assert len(asy.coeffs_f(0.5, 1.0)) == 1      # j < 2
    assert len(asy.coeffs_f(2.0 / 3.0, 1.0)) == 2   # j < 3
    assert len(asy.coeffs_f(0.75, 1.0)) == 3     # j < 4


def test_coeffs_sample_at_zero():
    # implicit solves at eps = 0: s_< = 1 with F = 1, s_> solves beta mu s^beta = 1
    assert asy._f_sample(0.0, 0.5, 1.3) == pytest.approx(1.0, rel=1e-14)
    beta, mu = 2.0, 1.0
    s = (beta * mu) ** (-1 / beta)
    assert asy._g_sample(0.0, beta, mu) == pytest.approx(
        mu * s ** beta - math.log(s), rel=1e-14)


def test_coeffs_g_envelope_identity():
    for beta, mu in [(2.0, 1.0), (1.5, 0.7), (3.0, 2.0)]:
        g = asy.coeffs_g(beta, mu)
        assert g[0] == pytest.approx((beta * mu) ** (-1.0 / beta), abs=1e-8)
    assert len(asy.coeffs_g(2.0, 1.0)) == 1      # j < 2
    assert len(asy.coeffs_g(1.5, 0.7)) == 2      # j < 3


def test_coeffs_against_mpmath_taylor_oracle():
    # independent oracle: arbitrary-precision Taylor coefficients of the
    # implicit functions via mpmath differentiation
    mp.mp.dps = 40

    def f_mp(eps, beta, mu):
        s = mp.findroot(lambda s: s - 1 + eps * beta * mu * s**beta, mp.mpf(1))
        return s - mp.log(s) + eps * mu * s**beta

    beta, mu = 2.0 / 3.0, 0.7
    f = asy.coeffs_f(beta, mu)
    for j, fj in enumerate(f, start=1):
        oracle = mp.diff(lambda e: f_mp(e, beta, mu), 0, j) / mp.factorial(j)
        assert fj == pytest.approx(float(oracle), abs=2e-8)

    def g_mp(eps, beta, mu):
        s = mp.findroot(lambda s: beta * mu * s**beta - 1 + eps * s,
                        mp.mpf(beta * mu) ** (-1 / beta))
        return mu * s**beta - mp.log(s) + eps * s

    beta, mu = 1.5, 0.7
    g = asy.coeffs_g(beta, mu)
    for j, gj in enumerate(g, start=1):
        oracle = mp.diff(lambda e: g_mp(e, beta, mu), 0, j) / mp.factorial(j)
        assert gj == pytest.approx(float(oracle), abs=2e-8)


def test_coeffs_grid_invariance():
    # halving the base step moves the extracted coefficients below 1e-8
    f1 = asy.coeffs_f(0.75, 1.2, h0=1e-2)
    f2 = asy.coeffs_f(0.75, 1.2, h0=5e-3)
    assert np.abs(f1 - f2).max() < 1e-8
    g1 = asy.coeffs_g(1.5, 1.2, h0=1e-2)
    g2 = asy.coeffs_g(1.5, 1.2, h0=5e-3)
    assert np.abs(g1 - g2).max() < 1e-8


def test_predict_exp_branches():
    k = np.array([4.0, 25.0])
    assert np.allclose(asy.predict_exp(k, 1.0, 1.0), -k * math.log(2.0))
    # beta = 1/2: single term -mu sqrt(k)
    assert np.allclose(asy.predict_exp(k, 0.5, 1.3), -1.3 * np.sqrt(k), atol=1e-7)
    # beta = 2: -(1/2) k ln k + ((1 - ln 2)/2) k - g1 sqrt(k)
    g1 = 2.0 ** -0.5
    expect = -0.5 * k * np.log(k) + 0.5 * (1 - math.log(2.0)) * k - g1 * np.sqrt(k)
    assert np.allclose(asy.predict_exp(k, 2.0, 1.0), expect, atol=1e-7)
    with pytest.raises(ValueError):
        asy.predict_exp(5, -1.0, 1.0)


def test_predict_counting():
    v = sy.radial_symbol(sy.power(2.0))
    assert asy.predict_counting(1e-2, v) == pytest.approx(49.5)
    assert asy.predict_counting(2.0, v) == 0.0
    lams = np.linspace(1e-3, 1e-2, 9)
    vals = [asy.predict_counting(l, v) for l in lams]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_exp_model_from_profile():
    m = asy.exp_model_from_profile(sy.gaussian(1.0), 2.0)
    assert m.beta == 1.0 and m.mu == 1.0
    m2 = asy.exp_model_from_profile(sy.exp_beta(1.0, 0.5), 2.0)
    assert m2.beta == 0.5 and m2.mu == 1.0
    with pytest.raises(sy.UnsupportedProfileError):
        asy.exp_model_from_profile(sy.power(2.0), 1.0)


def test_compare_series_exact_model():
    model = asy.exp_model(1.0, 1.0)
    ks = np.arange(0, 40)
    log_eigs = model.predict_log(np.maximum(ks, 1))
    rep = asy.compare_series(model, (2, 39), log_eigs=log_eigs)
    assert np.abs(rep.residuals).max() == 0.0


def test_compare_series_constant_offset():
    # eigs = (1+mu)^-(k+1): residual is the constant -ln(1+mu)
    mu = 1.0
    ks = np.arange(0, 60)
    eigs = (1 + mu) ** -(ks + 1.0)
    rep = asy.compare_series(asy.exp_model(1.0, mu), (2, 59), eigs=eigs)
    assert np.ptp(rep.residuals) < 1e-12
    assert rep.residuals[0] == pytest.approx(-math.log1p(mu), rel=1e-12)
    assert rep.max_over_lnk <= math.log1p(mu) / math.log(2.0) + 1e-12


def test_compare_series_validation():
    model = asy.exp_model(1.0, 1.0)
    with pytest.raises(ValueError):
        asy.compare_series(model, (2, 10), eigs=np.zeros(20))
    with pytest.raises(ValueError):
        asy.compare_series(model, (2, 50), eigs=np.ones(10))
    with pytest.raises(ValueError):
        asy.compare_series(model, (2, 5), eigs=np.ones(10), log_eigs=np.ones(10))


def test_compare_series_incomplete_gamma_windows():
    # compact-law residual shrinks, normalized by k, across dyadic windows
    from landauspec.specfun import log_gammainc_lower
    b, R = 2.0, 1.0
    ks = np.arange(0, 201)
    log_eigs = np.array([-np.inf] + [
        log_gammainc_lower(k + 1.0, b * R * R / 2.0) for k in ks[1:]])
    rep = asy.compare_series(asy.compact_model(b, R), (25, 200), log_eigs=log_eigs)
    stats = rep.window_stats([(25, 50), (50, 100), (100, 200)], norm="k")
    assert stats[0] > stats[1] > stats[2]


def test_dyadic_windows():
    assert asy.dyadic_windows(25, 400) == [(25, 50), (50, 100), (100, 200), (200, 400)]
    assert asy.dyadic_windows(100, 150) == [(100, 150)]
