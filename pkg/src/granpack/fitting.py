"""Maximum-likelihood fits, chi-square goodness of fit and model selection."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from . import distributions as dist
from .errors import DegenerateSample, EmptySample, NoConvergedFit, NonConvergence, TooFewSamples
from .special import bessel_k_ratios, chi2_sf, kolmogorov_sf, log_bessel_k

log = logging.getLogger(__name__)

# cheapest sampler first; breaks ties between near-equal p-values
COST_ORDER = ("lognormal", "weibull", "gamma", "hyperbolic")
TIE_WINDOW = 1e-3
SHIFT_MARGIN = 1e-6


@dataclass(frozen=True)
class FitConfig:
    tol: float = 1e-8
    max_iter: int = 10_000
    strict: bool = False


@dataclass
class FitResult:
    model: dist.SizeModel
    log_likelihood: float
    converged: bool
    iterations: int
    initial_log_likelihood: float = float("nan")
    shift: float = 0.0

    @property
    def family(self):
        return self.model.family


@dataclass
class GofResult:
    statistic: float
    degrees_of_freedom: int
    p_value: float
    bin_count: int
    observed: np.ndarray = field(default=None, repr=False)


@dataclass
class ModelSelection:
    candidates: list
    chosen: int
    rule_applied: str

    @property
    def best(self):
        return self.candidates[self.chosen][0]


def _params_to_model(family, params):
    cls = dist.family_class(family)
    if isinstance(params, dist.SizeModel.__args__):
        return params
    if isinstance(params, dict):
        return cls(**params)
    return cls(*params)


def _check_sample(sample):
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise EmptySample("likelihood of an empty sample")
    return x


def neg_log_likelihood(family, params, sample):
    """Negative log-likelihood; ``+inf`` for invalid parameters or points off the support."""
    x = _check_sample(sample)
    try:
        model = _params_to_model(family, params)
    except dist.DomainError:
        return math.inf
    lp = dist.log_pdf(model, x)
    if np.any(np.isneginf(lp)):
        return math.inf
    return float(-np.sum(lp))


def nll_gradient(family, params, sample):
    """Analytic gradient of the negative log-likelihood (two-parameter families).

    Parameter order is that of the dataclass: (shape, scale) for gamma and
    Weibull, (mu, sigma) for lognormal.
    """
    x = _check_sample(sample)
    model = _params_to_model(family, params)
    n = x.size
    if isinstance(model, dist.Gamma):
        a, lam = model.shape, model.scale
        return np.array([
            -np.sum(np.log(x)) + n * math.log(lam) + n * special.digamma(a),
            -np.sum(x) / lam**2 + n * a / lam,
        ])
    if isinstance(model, dist.Lognormal):
        r = np.log(x) - model.mu
        s = model.sigma
        return np.array([-np.sum(r) / s**2, n / s - np.sum(r * r) / s**3])
    if isinstance(model, dist.Weibull):
        a, lam = model.shape, model.scale
        z = np.log(x / lam)
        eaz = np.exp(a * z)
        return np.array([-np.sum(1.0 / a + z - z * eaz), (a / lam) * np.sum(1.0 - eaz)])
    raise NotImplementedError(f"no analytic gradient for {model.family}")


# -- per-family estimators -------------------------------------------------------

def _fit_lognormal(x, config):
    lx = np.log(x)
    mu = float(lx.mean())
    sigma = float(np.sqrt(np.mean((lx - mu) ** 2)))
    return dist.Lognormal(mu, sigma), 0, True, None


def _fit_gamma(x, config):
    lx_mean = float(np.mean(np.log(x)))
    m = float(x.mean())
    s = math.log(m) - lx_mean
    if not s > 0:
        raise DegenerateSample("sample has no spread in log scale")
    # closed-form starting point, then Newton on log(a) - digamma(a) = s
    a = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    init = dist.Gamma(a, m / a)
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        f = math.log(a) - special.digamma(a) - s
        fp = 1.0 / a - special.polygamma(1, a)
        step = f / fp
        a_new = a - step
        if a_new <= 0:
            a_new = a / 2.0
        done = abs(a_new - a) <= config.tol * max(1.0, a)
        a = a_new
        if done:
            converged = True
            break
    return dist.Gamma(a, m / a), it, converged, init


def _fit_weibull(x, config):
    lx = np.log(x)
    lx_mean = float(lx.mean())
    t = lx - lx.max()
    sd = float(lx.std())
    if not sd > 0:
        raise DegenerateSample("sample has no spread in log scale")
    a = math.pi / (math.sqrt(6.0) * sd)

    def scale_for(a):
        return math.exp(lx.max()) * float(np.mean(np.exp(a * t))) ** (1.0 / a)

    init = dist.Weibull(a, scale_for(a))
    converged = False
    it = 0
    lo, hi = 0.0, math.inf
    for it in range(1, config.max_iter + 1):
        w = np.exp(a * t)
        sw = w.sum()
        m1 = float(np.sum(w * t) / sw)
        m2 = float(np.sum(w * t * t) / sw)
        # profile score in the shape; the shift by max(log x) cancels
        g = m1 - 1.0 / a - (lx_mean - lx.max())
        gp = (m2 - m1 * m1) + 1.0 / a**2
        if g > 0:
            hi = min(hi, a)
        else:
            lo = max(lo, a)
        a_new = a - g / gp
        if not lo < a_new < hi:
            a_new = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * a
        done = abs(a_new - a) <= config.tol * max(1.0, a)
        a = a_new
        if done:
            converged = True
            break
    return dist.Weibull(a, scale_for(a)), it, converged, init


def hyperbolic_moment_start(x):
    """Moment-matched symmetric hyperbolic law used to start the simplex search."""
    m = float(x.mean())
    s = float(x.std())
    z = (x - m) / s
    excess = float(np.mean(z**4)) - 3.0
    excess = min(max(excess, 0.02), 2.98)

    def kurt_gap(logzeta):
        r2, r3 = bessel_k_ratios(math.exp(logzeta))
        return 3.0 * r3 / (r2 * r2) - 3.0 - excess

    lo, hi = math.log(1e-4), math.log(1e4)
    if kurt_gap(hi) > 0:
        logzeta = hi
    elif kurt_gap(lo) < 0:
        logzeta = lo
    else:
        logzeta = optimize.brentq(kurt_gap, lo, hi, xtol=1e-10)
    zeta = math.exp(logzeta)
    r2, _ = bessel_k_ratios(zeta)
    delta = s * math.sqrt(zeta / r2)
    return dist.Hyperbolic(0.0, zeta, delta, m)


def _hyperbolic_mean_nll(theta, z):
    pi, logzeta, logdelta, mu = theta
    if not (abs(logzeta) < 30 and abs(logdelta) < 30 and abs(pi) < 1e4):
        return math.inf
    zeta, delta = math.exp(logzeta), math.exp(logdelta)
    u = (z - mu) / delta
    rt = math.hypot(1.0, pi)
    core = float(np.mean(rt * np.hypot(1.0, u) - pi * u))
    return zeta * core + math.log(2.0 * delta * rt) + log_bessel_k(1, zeta)


def _fit_hyperbolic(x, config):
    init = hyperbolic_moment_start(x)
    m = float(x.mean())
    s = float(x.std())
    z = (x - m) / s
    theta = np.array([init.pi, math.log(init.zeta), math.log(init.delta / s), (init.mu - m) / s])
    steps = np.diag([0.5, 0.5, 0.25, 0.25])
    total_it = 0
    converged = False
    best = _hyperbolic_mean_nll(theta, z)
    for _ in range(5):
        simplex = np.vstack([theta, theta + steps])
        res = optimize.minimize(
            _hyperbolic_mean_nll, theta, args=(z,), method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": config.tol, "fatol": 1e-12,
                     "maxiter": max(1, config.max_iter - total_it), "maxfev": 4 * config.max_iter},
        )
        total_it += res.nit
        improved = res.fun < best - 1e-12
        theta, best = res.x, min(best, res.fun)
        converged = bool(res.success)
        # restart from the optimum with a fresh small simplex until it stops moving
        steps = np.diag([0.05, 0.05, 0.02, 0.02])
        if not converged or not improved or total_it >= config.max_iter:
            break
    pi, logzeta, logdelta, mu = theta
    model = dist.Hyperbolic(float(pi), math.exp(logzeta), s * math.exp(logdelta), m + s * mu)
    return model, total_it, converged, init


_FITTERS = {
    "lognormal": _fit_lognormal,
    "gamma": _fit_gamma,
    "weibull": _fit_weibull,
    "hyperbolic": _fit_hyperbolic,
}


def fit_mle(sample, family, config=FitConfig()):
    """Maximum-likelihood fit of one family to ``sample``.

    Positive-support families require strictly positive data; shift the
    sample beforehand (see :func:`fit_candidates`).
    """
    x = _check_sample(sample)
    cls = dist.family_class(family)
    if family not in _FITTERS:
        raise ValueError(f"family {family!r} cannot be fitted")
    if x.size < 10 * cls.n_params:
        raise TooFewSamples(f"{family} fit needs at least {10 * cls.n_params} points, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateSample("constant sample")
    if family != "hyperbolic" and np.any(x <= 0):
        raise DegenerateSample(f"{family} support is (0, inf); sample has non-positive values")
    model, iterations, converged, init = _FITTERS[family](x, config)
    if not converged:
        msg = f"{family} fit did not converge in {iterations} iterations"
        if config.strict:
            raise NonConvergence(msg)
        log.warning(msg)
    ll = -neg_log_likelihood(family, model, x)
    init_ll = -neg_log_likelihood(family, init, x) if init is not None else ll
    return FitResult(model, ll, converged, iterations, init_ll)


# -- goodness of fit -------------------------------------------------------------

def gof_bin_count(M):
    return min(math.ceil(M / 5), max(6, math.ceil(2.0 * M**0.4)))


def chi_square_gof(sample, model, bin_rule="equal_probability", n_params=None):
    """Pearson chi-square test on bins of equal probability under ``model``."""
    if bin_rule != "equal_probability":
        raise ValueError(f"unknown bin rule {bin_rule!r}")
    x = _check_sample(sample)
    M = x.size
    if M < 50:
        raise TooFewSamples(f"chi-square test needs at least 50 points, got {M}")
    B = gof_bin_count(M)
    p = model.n_params if n_params is None else n_params
    df = B - 1 - p
    if df < 1:
        raise TooFewSamples(f"{B} bins leave no degrees of freedom for {p} parameters")
    edges = dist.ppf(model, np.arange(1, B) / B)
    observed = np.bincount(np.searchsorted(edges, x, side="right"), minlength=B)
    expected = M / B
    stat = float(np.sum((observed - expected) ** 2) / expected)
    return GofResult(stat, df, chi2_sf(stat, df), B, observed)


def ks_gof(sample, model):
    """Kolmogorov-Smirnov statistic and asymptotic p-value."""
    x = np.sort(_check_sample(sample))
    n = x.size
    F = dist.cdf(model, x)
    d = max(float(np.max(np.arange(1, n + 1) / n - F)), float(np.max(F - np.arange(n) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


# -- selection -------------------------------------------------------------------

def select_best(candidates):
    """Pick the converged candidate with the highest p-value.

    Candidates within ``TIE_WINDOW`` of the best p-value are tied and the
    one with the cheapest sampler (``COST_ORDER``) wins.
    """
    candidates = list(candidates)
    usable = [i for i, (fit, _) in enumerate(candidates) if fit.converged]
    if not usable:
        raise NoConvergedFit("no candidate fit converged")
    top = max(candidates[i][1].p_value for i in usable)
    tied = [i for i in usable if candidates[i][1].p_value >= top - TIE_WINDOW]
    chosen = min(tied, key=lambda i: (COST_ORDER.index(candidates[i][0].family), -candidates[i][1].p_value))
    return ModelSelection(candidates, chosen, "highest_p" if len(tied) == 1 else "cost_tiebreak")


def log_shift(values):
    """Offset subtracted before fitting positive-support laws.

    Zero when every value is already positive; otherwise the minimum minus a
    small margin, so the shifted data start just above 0.
    """
    lo = float(np.min(values))
    return 0.0 if lo > 0 else lo - SHIFT_MARGIN


def fit_candidates(values, families=dist.FAMILIES, config=FitConfig()):
    """Fit and test every family on ``values``, then select the best one.

    Positive-support laws see ``values - shift``; the hyperbolic law is
    fitted on the raw values. Each FitResult records the shift it used.
    """
    values = _check_sample(values)
    shift = log_shift(values)
    candidates = []
    for family in families:
        data = values if family == "hyperbolic" else values - shift
        fit = fit_mle(data, family, config)
        fit.shift = 0.0 if family == "hyperbolic" else shift
        gof = chi_square_gof(data, fit.model)
        log.info("%s: loglik=%.4f p=%.4g", family, fit.log_likelihood, gof.p_value)
        candidates.append((fit, gof))
    return select_best(candidates)
