import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from granpack import distributions as dist
from granpack.errors import DomainError

gammas = st.builds(dist.Gamma, st.floats(0.3, 30.0), st.floats(0.05, 10.0))
lognormals = st.builds(dist.Lognormal, st.floats(-2.0, 2.0), st.floats(0.05, 1.2))
weibulls = st.builds(dist.Weibull, st.floats(0.5, 10.0), st.floats(0.05, 10.0))
hyperbolics = st.builds(dist.Hyperbolic, st.floats(-3.0, 3.0), st.floats(0.1, 20.0),
                        st.floats(0.05, 5.0), st.floats(-5.0, 5.0))
models = st.one_of(gammas, lognormals, weibulls, hyperbolics)


def scipy_twin(m):
    """The same law built from scipy.stats (an independent implementation)."""
    if isinstance(m, dist.Gamma):
        return stats.gamma(m.shape, scale=m.scale)
    if isinstance(m, dist.Lognormal):
        return stats.lognorm(m.sigma, scale=math.exp(m.mu))
    if isinstance(m, dist.Weibull):
        return stats.weibull_min(m.shape, scale=m.scale)
    return stats.genhyperbolic(1.0, m.alpha * m.delta, m.beta * m.delta, loc=m.mu, scale=m.delta)


def probe_points(m):
    tw = scipy_twin(m)
    return tw.ppf(np.array([0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99]))


def test_hyperbolic_density_at_origin():
    # e^-1 / (2 K1(1)) for pi=0, zeta=delta=1, mu=0
    assert dist.pdf(dist.Hyperbolic(0, 1, 1, 0), 0.0) == pytest.approx(math.exp(-1) / (2 * 0.6019072301972346), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(models)
def test_pdf_matches_scipy(m):
    x = probe_points(m)
    assert np.allclose(dist.pdf(m, x), scipy_twin(m).pdf(x), rtol=1e-7, atol=0)


@settings(max_examples=40, deadline=None)
@given(models)
def test_cdf_matches_scipy(m):
    x = probe_points(m)
    assert np.allclose(dist.cdf(m, x), scipy_twin(m).cdf(x), rtol=1e-6, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(models)
def test_moments_match_scipy(m):
    tw = scipy_twin(m)
    assert dist.mean(m) == pytest.approx(tw.mean(), rel=1e-7, abs=1e-9)
    assert dist.variance(m) == pytest.approx(tw.var(), rel=1e-6)


@settings(max_examples=30, deadline=None)
@given(hyperbolics)
def test_hyperbolic_moments_by_quadrature(m):
    f = lambda x: dist.pdf(m, x)
    lo, hi = dist.ppf(m, 1e-14), dist.ppf(m, 1 - 1e-14)
    mass = integrate.quad(f, lo, hi, limit=400, points=[dist.mode(m)])[0]
    mu1 = integrate.quad(lambda x: x * f(x), lo, hi, limit=400, points=[dist.mode(m)])[0]
    mu2 = integrate.quad(lambda x: (x - mu1) ** 2 * f(x), lo, hi, limit=400, points=[dist.mode(m)])[0]
    assert mass == pytest.approx(1.0, abs=1e-8)
    assert dist.mean(m) == pytest.approx(mu1, rel=1e-6, abs=1e-8)
    assert dist.variance(m) == pytest.approx(mu2, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(models)
def test_mode_maximizes_density(m):
    x0, boundary = dist.mode(m, return_flag=True)
    if boundary:
        assert x0 == 0.0 and m.shape < 1
        return
    h = 1e-4 * max(1.0, abs(x0), math.sqrt(dist.variance(m)))
    assert dist.log_pdf(m, x0) >= dist.log_pdf(m, x0 - h)
    assert dist.log_pdf(m, x0) >= dist.log_pdf(m, x0 + h)


@settings(max_examples=60, deadline=None)
@given(models, st.floats(1e-6, 1 - 1e-6))
def test_ppf_inverts_cdf(m, q):
    x = dist.ppf(m, q)
    assert dist.cdf(m, x) == pytest.approx(q, abs=1e-9)


@given(st.floats(-3, 3), st.floats(0.05, 20), st.floats(0.05, 5), st.floats(-5, 5))
def test_hyperbolic_parametrizations_round_trip(pi, zeta, delta, mu):
    ab = dist.convert_hyperbolic((pi, zeta, delta, mu), "to_alpha_beta")
    back = dist.convert_hyperbolic(ab, "to_pi_zeta")
    assert back == pytest.approx((pi, zeta, delta, mu), rel=1e-9, abs=1e-12)
    m = dist.Hyperbolic(pi, zeta, delta, mu)
    assert m.alpha == pytest.approx(ab[0]) and m.beta == pytest.approx(ab[1], abs=1e-12)
    assert m.gamma == pytest.approx(math.sqrt(ab[0] ** 2 - ab[1] ** 2), rel=1e-9)


def test_hyperbolic_log_density_is_hyperbola():
    # the asymptotes have slopes (beta -+ alpha) in x
    m = dist.Hyperbolic(0.7, 2.0, 0.5, 1.0)
    for x, slope in ((60.0, m.beta - m.alpha), (-60.0, m.beta + m.alpha)):
        d = (dist.log_pdf(m, x + 1e-3) - dist.log_pdf(m, x - 1e-3)) / 2e-3
        assert d == pytest.approx(slope, rel=1e-4)


def test_weibull_uses_scale():
    m = dist.Weibull(2.0, 3.0)
    assert dist.cdf(m, 3.0) == pytest.approx(1 - math.exp(-1))


@pytest.mark.parametrize("bad", [
    lambda: dist.Gamma(0.0, 1.0), lambda: dist.Gamma(1.0, -1.0), lambda: dist.Lognormal(0.0, 0.0),
    lambda: dist.Weibull(-1.0, 1.0), lambda: dist.Hyperbolic(0.0, 0.0, 1.0, 0.0),
    lambda: dist.Hyperbolic(0.0, 1.0, 1.0, math.nan),
    lambda: dist.convert_hyperbolic((1.0, 1.0, 1.0, 0.0), "to_pi_zeta"),
])
def test_invalid_parameters(bad):
    with pytest.raises(DomainError):
        bad()


def test_positive_support_outside():
    for m in (dist.Gamma(2, 1), dist.Lognormal(0, 1), dist.Weibull(2, 1)):
        assert dist.pdf(m, -1.0) == 0.0 and dist.cdf(m, -1.0) == 0.0


@settings(max_examples=25, deadline=None)
@given(hyperbolics, st.integers(0, 2**32 - 1))
def test_hyperbolic_sampler_ks(m, seed):
    x = dist.sample(m, 4000, np.random.default_rng(seed))
    assert stats.kstest(x, lambda v: scipy_twin(m).cdf(v)).pvalue > 1e-4


@pytest.mark.parametrize("pi", [-3.0, 0.0, 2.5])
@pytest.mark.parametrize("zeta", [0.05, 1.0, 50.0])
def test_envelope_acceptance_bounded(pi, zeta):
    _, _, _, _, areas = dist._hyperbolic_envelope(dist.Hyperbolic(pi, zeta, 1.0, 0.0))
    u = np.linspace(-400, 400, 400001)
    target = np.trapezoid(np.exp(-zeta * (math.hypot(1, pi) * np.hypot(1, u) - pi * u) + zeta), u)
    assert target / areas.sum() > 0.3


def test_sampling_deterministic():
    m = dist.Hyperbolic(0.4, 1.3, 0.8, 2.0)
    a = dist.sample(m, 1000, np.random.default_rng(9))
    b = dist.sample(m, 1000, np.random.default_rng(9))
    assert np.array_equal(a, b)


@given(models)
def test_json_round_trip(m):
    obj = dist.model_to_json(m, 10.0, 1.0, ell_floor=0.5)
    back, meta = dist.model_from_json(obj)
    assert back == m and meta["log_base"] == 10.0 and meta["ell_floor"] == 0.5


@settings(max_examples=40, deadline=None)
@given(hyperbolics)
def test_hyperbolic_log_density_concave(m):
    x = np.linspace(m.mu - 30 * m.delta, m.mu + 30 * m.delta, 2001)
    second = np.diff(dist.log_pdf(m, x), 2)
    assert np.all(second <= 1e-12 * np.abs(dist.log_pdf(m, x)).max())
