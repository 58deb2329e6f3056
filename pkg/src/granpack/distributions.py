"""Candidate size laws: gamma, lognormal, Weibull and hyperbolic.

Every law is a small frozen dataclass holding its parameters; the module
level functions (``pdf``, ``cdf``, ``mean``, ``sample``...) dispatch on the
record type. A ``Constant`` point mass is also provided for degenerate
radius models; it cannot be fitted.

Conventions
-----------
* Gamma: shape ``alpha``, scale ``lam`` (rate ``1/lam``).
* Weibull: shape ``alpha``, scale ``lam``; density
  ``(alpha/lam) (x/lam)^(alpha-1) exp(-(x/lam)^alpha)``.
* Hyperbolic: the (pi, zeta, delta, mu) parametrization, with (alpha, beta)
  available as derived attributes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Union

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NonFinite, QuadratureFailure, RejectionStall
from .special import bessel_k_ratios, gammainc_vec, log_bessel_k

FAMILIES = ("gamma", "lognormal", "weibull", "hyperbolic")


def _coerce(obj):
    for f in fields(obj):
        object.__setattr__(obj, f.name, float(getattr(obj, f.name)))


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class Gamma:
    shape: float
    scale: float

    family = "gamma"
    n_params = 2

    def __post_init__(self):
        _coerce(self)
        _positive("gamma shape", self.shape)
        _positive("gamma scale", self.scale)

    @property
    def rate(self):
        return 1.0 / self.scale


@dataclass(frozen=True)
class Lognormal:
    mu: float
    sigma: float

    family = "lognormal"
    n_params = 2

    def __post_init__(self):
        _coerce(self)
        _finite("lognormal mu", self.mu)
        _positive("lognormal sigma", self.sigma)


@dataclass(frozen=True)
class Weibull:
    shape: float
    scale: float

    family = "weibull"
    n_params = 2

    def __post_init__(self):
        _coerce(self)
        _positive("Weibull shape", self.shape)
        _positive("Weibull scale", self.scale)


@dataclass(frozen=True)
class Hyperbolic:
    """Hyperbolic law in the (pi, zeta, delta, mu) parametrization.

    ``pi`` is the asymmetry, ``zeta`` the peakedness, ``delta`` the scale and
    ``mu`` the location (abscissa where the log-density asymptotes cross).
    """

    pi: float
    zeta: float
    delta: float
    mu: float

    family = "hyperbolic"
    n_params = 4

    def __post_init__(self):
        _coerce(self)
        _finite("hyperbolic pi", self.pi)
        _positive("hyperbolic zeta", self.zeta)
        _positive("hyperbolic delta", self.delta)
        _finite("hyperbolic mu", self.mu)

    @property
    def gamma(self):
        return self.zeta / self.delta

    @property
    def beta(self):
        return self.pi * self.zeta / self.delta

    @property
    def alpha(self):
        return self.zeta / self.delta * math.hypot(1.0, self.pi)

    @classmethod
    def from_alpha_beta(cls, alpha, beta, delta, mu):
        pi, zeta, delta, mu = convert_hyperbolic((alpha, beta, delta, mu), "to_pi_zeta")
        return cls(pi, zeta, delta, mu)


@dataclass(frozen=True)
class Constant:
    """Point mass at ``value``; used for degenerate (zero-variance) radii."""

    value: float

    family = "constant"
    n_params = 1

    def __post_init__(self):
        _coerce(self)
        _finite("constant value", self.value)


SizeModel = Union[Gamma, Lognormal, Weibull, Hyperbolic, Constant]

_CLASSES = {c.family: c for c in (Gamma, Lognormal, Weibull, Hyperbolic, Constant)}


def family_class(name):
    try:
        return _CLASSES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}") from None


def positive_support(model):
    return not isinstance(model, Hyperbolic)


def convert_hyperbolic(params, direction):
    """Switch between the (alpha, beta, delta, mu) and (pi, zeta, delta, mu) forms.

    ``direction`` is ``"to_pi_zeta"`` or ``"to_alpha_beta"``.
    """
    a, b, delta, mu = (float(p) for p in params)
    if direction == "to_pi_zeta":
        alpha, beta = a, b
        if not (alpha > 0 and abs(beta) < alpha):
            raise DomainError(f"need 0 <= |beta| < alpha, got alpha={alpha}, beta={beta}")
        _positive("delta", delta)
        g = math.sqrt((alpha - beta) * (alpha + beta))
        return beta / g, delta * g, delta, mu
    if direction == "to_alpha_beta":
        pi, zeta = a, b
        _positive("zeta", zeta)
        _positive("delta", delta)
        g = zeta / delta
        return g * math.hypot(1.0, pi), g * pi, delta, mu
    raise ValueError(f"unknown direction {direction!r}")


# -- densities ---------------------------------------------------------------

def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(np.reshape(arr, -1)[0]) if scalar else arr


def _hyperbolic_log_norm(m):
    return math.log(2.0 * m.delta * math.hypot(1.0, m.pi)) + log_bessel_k(1, m.zeta)


def _log_pdf_array(model, x):
    if isinstance(model, Hyperbolic):
        u = (x - model.mu) / model.delta
        core = math.hypot(1.0, model.pi) * np.hypot(1.0, u) - model.pi * u
        return -model.zeta * core - _hyperbolic_log_norm(model)
    if isinstance(model, Constant):
        raise DomainError("a point mass has no density")

    out = np.full(x.shape, -np.inf)
    pos = x > 0
    xp = x[pos]
    if isinstance(model, Gamma):
        a, lam = model.shape, model.scale
        out[pos] = (a - 1.0) * np.log(xp) - xp / lam - a * math.log(lam) - math.lgamma(a)
    elif isinstance(model, Lognormal):
        lx = np.log(xp)
        z = (lx - model.mu) / model.sigma
        out[pos] = -lx - math.log(model.sigma) - 0.5 * math.log(2 * math.pi) - 0.5 * z * z
    elif isinstance(model, Weibull):
        a, lam = model.shape, model.scale
        lz = np.log(xp / lam)
        out[pos] = math.log(a / lam) + (a - 1.0) * lz - np.exp(a * lz)
    else:
        raise DomainError(f"unsupported model {model!r}")
    if not isinstance(model, Lognormal) and model.shape == 1.0:
        # exponential case: the density is 1/scale at the origin
        out[x == 0] = -math.log(model.scale)
    return out


def log_pdf(model, x):
    """Log-density; ``-inf`` outside the support."""
    arr, scalar = _as_array(x)
    return _ret(_log_pdf_array(model, arr), scalar)


def pdf(model, x):
    arr, scalar = _as_array(x)
    lp = _log_pdf_array(model, arr)
    if np.isnan(lp).any() or np.isposinf(lp).any():
        raise NonFinite(f"density of {model!r} is not finite at some points")
    return _ret(np.exp(lp), scalar)


# -- distribution function and quantiles --------------------------------------

_QUAD_ABS_TOL = 1e-10


def _hyperbolic_cdf_scalar(model, x):
    if math.isinf(x):
        return 0.0 if x < 0 else 1.0
    # integrate in units of the mode and standard deviation so quad sees a unit-scale problem
    centre = mode(model)
    scale = math.sqrt(variance(model))
    logc = _hyperbolic_log_norm(model)
    rt = math.hypot(1.0, model.pi)

    def dens(v):
        u = (centre + scale * v - model.mu) / model.delta
        return scale * math.exp(-model.zeta * (rt * math.hypot(1.0, u) - model.pi * u) - logc)

    v = (x - centre) / scale
    if v <= 0:
        val, err = integrate.quad(dens, -np.inf, v, epsabs=1e-12, epsrel=1e-12, limit=200)
    else:
        val, err = integrate.quad(dens, v, np.inf, epsabs=1e-12, epsrel=1e-12, limit=200)
        val = 1.0 - val
    if not err <= _QUAD_ABS_TOL:
        raise QuadratureFailure(f"hyperbolic cdf quadrature error {err:.2e} at x={x}")
    return min(1.0, max(0.0, val))


def _cdf_array(model, x):
    if isinstance(model, Gamma):
        out = np.zeros(x.shape)
        pos = x > 0
        out[pos] = gammainc_vec(model.shape, x[pos] / model.scale)
        return out
    if isinstance(model, Lognormal):
        out = np.zeros(x.shape)
        pos = x > 0
        z = (np.log(x[pos]) - model.mu) / (model.sigma * math.sqrt(2.0))
        out[pos] = 0.5 * special.erfc(-z)
        return out
    if isinstance(model, Weibull):
        out = np.zeros(x.shape)
        pos = x > 0
        out[pos] = -np.expm1(-((x[pos] / model.scale) ** model.shape))
        return out
    if isinstance(model, Hyperbolic):
        flat = np.array([_hyperbolic_cdf_scalar(model, float(v)) for v in x.ravel()])
        return flat.reshape(x.shape)
    if isinstance(model, Constant):
        return (x >= model.value).astype(float)
    raise DomainError(f"unsupported model {model!r}")


def cdf(model, x):
    arr, scalar = _as_array(x)
    return _ret(_cdf_array(model, arr), scalar)


_EPS_X = np.finfo(float).eps


def ppf(model, q, tol=1e-12, max_iter=200):
    """Quantile function by safeguarded Newton iteration inside a bisection bracket.

    Each step takes the Newton update when it stays inside the current
    bracket and bisects otherwise, so convergence is never worse than plain
    bisection.
    """
    q = np.asarray(q, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    if np.any((q <= 0) | (q >= 1)):
        raise DomainError("quantile levels must lie strictly inside (0, 1)")
    if isinstance(model, Constant):
        return _ret(np.full(q.shape, model.value), scalar)

    m = mean(model)
    s = math.sqrt(variance(model)) or 1.0
    if positive_support(model):
        lo = np.zeros(q.shape)
        hi = np.full(q.shape, m + s)
        while True:
            low_hi = _cdf_array(model, hi) < q
            if not low_hi.any():
                break
            hi[low_hi] = 2.0 * hi[low_hi]
    else:
        step = s
        lo = np.full(q.shape, m - step)
        hi = np.full(q.shape, m + step)
        while True:
            bad_lo = _cdf_array(model, lo) > q
            bad_hi = _cdf_array(model, hi) < q
            if not (bad_lo.any() or bad_hi.any()):
                break
            step *= 2.0
            lo[bad_lo] = m - step
            hi[bad_hi] = m + step

    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = _cdf_array(model, x) - q
        lo = np.where(fx < 0, x, lo)
        hi = np.where(fx > 0, x, hi)
        dens = np.exp(_log_pdf_array(model, x))
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - fx / dens
        ok = np.isfinite(newton) & (newton > lo) & (newton < hi)
        x_new = np.where(ok, newton, 0.5 * (lo + hi))
        # relative in probability and in x, so far-tail quantiles near 0 resolve
        done = (np.abs(fx) <= tol * np.minimum(q, 1.0 - q)) | (hi - lo <= 4 * _EPS_X * np.abs(x)) | (hi <= lo)
        x = np.where(done, x, x_new)
        if done.all():
            break
    return _ret(x, scalar)


# -- moments -------------------------------------------------------------------

def mean(model):
    if isinstance(model, Gamma):
        return model.shape * model.scale
    if isinstance(model, Lognormal):
        return math.exp(model.mu + 0.5 * model.sigma**2)
    if isinstance(model, Weibull):
        return model.scale * math.gamma(1.0 + 1.0 / model.shape)
    if isinstance(model, Hyperbolic):
        r2, _ = bessel_k_ratios(model.zeta)
        return model.mu + model.delta * model.pi * r2
    if isinstance(model, Constant):
        return model.value
    raise DomainError(f"unsupported model {model!r}")


def variance(model):
    if isinstance(model, Gamma):
        return model.shape * model.scale**2
    if isinstance(model, Lognormal):
        s2 = model.sigma**2
        return math.expm1(s2) * math.exp(2.0 * model.mu + s2)
    if isinstance(model, Weibull):
        g1 = math.gamma(1.0 + 1.0 / model.shape)
        g2 = math.gamma(1.0 + 2.0 / model.shape)
        return model.scale**2 * (g2 - g1 * g1)
    if isinstance(model, Hyperbolic):
        r2, r3 = bessel_k_ratios(model.zeta)
        return model.delta**2 * (r2 / model.zeta + model.pi**2 * (r3 - r2 * r2))
    if isinstance(model, Constant):
        return 0.0
    raise DomainError(f"unsupported model {model!r}")


def mode(model, return_flag=False):
    """Mode of the law.

    For gamma and Weibull with shape below 1 the density is unbounded at the
    origin; 0 is returned and, with ``return_flag=True``, the second element
    of the result is ``True`` to mark the boundary case.
    """
    boundary = False
    if isinstance(model, Gamma):
        if model.shape >= 1.0:
            value = (model.shape - 1.0) * model.scale
        else:
            value, boundary = 0.0, True
    elif isinstance(model, Lognormal):
        value = math.exp(model.mu - model.sigma**2)
    elif isinstance(model, Weibull):
        a = model.shape
        if a > 1.0:
            value = model.scale * ((a - 1.0) / a) ** (1.0 / a)
        else:
            value, boundary = 0.0, a < 1.0
    elif isinstance(model, Hyperbolic):
        value = model.mu + model.delta * model.pi
    elif isinstance(model, Constant):
        value = model.value
    else:
        raise DomainError(f"unsupported model {model!r}")
    return (value, boundary) if return_flag else value


# -- sampling ------------------------------------------------------------------

_STALL_RATE = 1e-4


def _hyperbolic_envelope(model):
    """Three-piece envelope of the standardized log-density.

    Works in ``u = (x - mu) / delta`` with the log-density shifted so that
    its maximum (at ``u = pi``) is 0. The flat middle piece spans the points
    where the log-density has dropped by 1; outside, the tangent lines at
    those points bound the (concave) log-density.
    """
    pi, zeta = model.pi, model.zeta
    rt = math.hypot(1.0, pi)
    c = 1.0 + 1.0 / zeta
    half = rt * math.sqrt((c - 1.0) * (c + 1.0))
    u_l, u_r = c * pi - half, c * pi + half

    def slope(u):
        return -zeta * (rt * u / math.hypot(1.0, u) - pi)

    s_l, s_r = slope(u_l), slope(u_r)
    areas = np.array([math.exp(-1.0) / s_l, u_r - u_l, math.exp(-1.0) / -s_r])
    return u_l, u_r, s_l, s_r, areas


def _sample_hyperbolic(model, n, rng):
    u_l, u_r, s_l, s_r, areas = _hyperbolic_envelope(model)
    probs = areas / areas.sum()
    rt = math.hypot(1.0, model.pi)
    out = np.empty(n)
    filled = 0
    proposed = 0
    batch = max(64, int(1.3 * n))
    while filled < n:
        piece = rng.choice(3, size=batch, p=probs)
        e = rng.standard_exponential(batch)
        w = rng.random(batch)
        u = np.where(piece == 0, u_l - e / s_l, np.where(piece == 1, u_l + w * (u_r - u_l), u_r + e / -s_r))
        env = np.where(piece == 0, -1.0 + s_l * (u - u_l), np.where(piece == 1, 0.0, -1.0 + s_r * (u - u_r)))
        logh = -model.zeta * (rt * np.hypot(1.0, u) - model.pi * u) + model.zeta
        accept = np.log(rng.random(batch)) <= logh - env
        got = u[accept]
        take = min(got.size, n - filled)
        out[filled:filled + take] = got[:take]
        filled += take
        proposed += batch
        if proposed >= 1_000_000 and filled < _STALL_RATE * proposed:
            raise RejectionStall(f"hyperbolic acceptance rate {filled / proposed:.2e} is below {_STALL_RATE}")
    return model.mu + model.delta * out


def sample(model, n, rng):
    """Draw ``n`` i.i.d. variates using the generator ``rng``."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.empty(0)
    if isinstance(model, Gamma):
        return rng.gamma(model.shape, model.scale, size=n)
    if isinstance(model, Lognormal):
        return np.exp(model.mu + model.sigma * rng.standard_normal(n))
    if isinstance(model, Weibull):
        u = rng.random(n)
        return model.scale * (-np.log1p(-u)) ** (1.0 / model.shape)
    if isinstance(model, Hyperbolic):
        return _sample_hyperbolic(model, n, rng)
    if isinstance(model, Constant):
        return np.full(n, model.value)
    raise DomainError(f"unsupported model {model!r}")


# -- serialization -------------------------------------------------------------

def params_dict(model):
    return {f.name: float(getattr(model, f.name)) for f in fields(model)}


def model_to_json(model, log_base=math.e, ref_diameter_mm=0.001, **extra):
    """JSON-ready record ``{family, params, log_base, ref_diameter_mm, ...}``."""
    out = {
        "family": model.family,
        "params": params_dict(model),
        "log_base": float(log_base),
        "ref_diameter_mm": float(ref_diameter_mm),
    }
    out.update(extra)
    return out


def model_from_json(obj):
    """Inverse of :func:`model_to_json`; returns ``(model, metadata)``."""
    cls = family_class(obj["family"])
    model = cls(**{k: float(v) for k, v in obj["params"].items()})
    meta = {k: v for k, v in obj.items() if k not in ("family", "params")}
    return model, meta
