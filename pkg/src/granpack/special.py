"""Special functions needed by the size laws and the goodness-of-fit test.

Modified Bessel functions of the second kind (integer orders 0..3) follow
Temme's method: a power series for ``x < 2`` and Steed's continued fraction
for ``x >= 2``, producing K0 and K1, with higher orders from the upward
recurrence ``K_{n+1} = K_{n-1} + (2n/x) K_n`` (stable in that direction).

The regularized incomplete gamma function uses the classical split: the
power series for ``x < a + 1`` and a modified-Lentz continued fraction
otherwise.
"""
import math
import sys

import numpy as np

from .errors import DomainError, NonConvergence

_EPS = 1e-16
_EULER = 0.5772156649015329
_MAXIT = 10_000
_TINY = sys.float_info.min / _EPS


def _k01_scaled(x):
    """Return ``(e^x K0(x), e^x K1(x))`` for ``x > 0``."""
    if x < 2.0:
        half = 0.5 * x
        ff = -math.log(half) - _EULER
        p = q = 0.5
        c = 1.0
        d = half * half
        s0 = ff
        s1 = p
        for i in range(1, _MAXIT):
            ff = (i * ff + p + q) / (i * i)
            c *= d / i
            p /= i
            q /= i
            term = c * ff
            s0 += term
            s1 += c * (p - i * ff)
            if abs(term) < abs(s0) * _EPS:
                break
        scale = math.exp(x)
        return s0 * scale, s1 * (2.0 / x) * scale

    # Steed's CF2 with mu = 0
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, _MAXIT):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise NonConvergence(f"Bessel continued fraction failed at x={x}")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_k_scaled(order, x):
    """Exponentially scaled ``e^x K_order(x)`` for integer ``order`` in 0..3."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"bessel_k requires finite x > 0, got {x}")
    if order not in (0, 1, 2, 3):
        raise DomainError(f"unsupported Bessel order {order}")
    km, k = _k01_scaled(x)
    if order == 0:
        return km
    for n in range(1, order):
        km, k = k, km + (2.0 * n / x) * k
    return k


def bessel_k(order, x):
    """Modified Bessel function of the second kind ``K_order(x)``.

    Underflows to 0.0 for very large ``x``; use :func:`log_bessel_k` there.
    """
    return bessel_k_scaled(order, x) * math.exp(-float(x))


def log_bessel_k(order, x):
    return math.log(bessel_k_scaled(order, x)) - float(x)


def bessel_k_ratios(x):
    """Return ``(K2/K1, K3/K1)`` at ``x``, free of under/overflow."""
    k1 = bessel_k_scaled(1, x)
    return bessel_k_scaled(2, x) / k1, bessel_k_scaled(3, x) / k1


def _gamma_series(a, x):
    gln = math.lgamma(a)
    ap = a
    term = total = 1.0 / a
    for _ in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - gln)
    raise NonConvergence(f"incomplete gamma series failed (a={a}, x={x})")


def _gamma_contfrac(a, x):
    gln = math.lgamma(a)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - gln) * h
    raise NonConvergence(f"incomplete gamma continued fraction failed (a={a}, x={x})")


def _check_gamma_args(a, x):
    a = float(a)
    x = float(x)
    if not a > 0.0 or not math.isfinite(a):
        raise DomainError(f"incomplete gamma requires a > 0, got {a}")
    if not x >= 0.0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x}")
    return a, x


def regularized_incomplete_gamma(a, x):
    """Lower regularized incomplete gamma ``P(a, x)``."""
    a, x = _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_contfrac(a, x))


def regularized_incomplete_gamma_upper(a, x):
    """Upper regularized incomplete gamma ``Q(a, x) = 1 - P(a, x)``.

    Computed directly in the upper tail so that tiny values keep their
    relative accuracy.
    """
    a, x = _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_contfrac(a, x))


gammainc_vec = np.vectorize(regularized_incomplete_gamma, otypes=[float])


def chi2_sf(statistic, df):
    """Survival function of the chi-square law with ``df`` degrees of freedom."""
    if statistic < 0:
        raise DomainError("chi-square statistic must be non-negative")
    return regularized_incomplete_gamma_upper(0.5 * df, 0.5 * statistic)


def kolmogorov_sf(t):
    """Asymptotic Kolmogorov survival function ``P(sqrt(n) D_n > t)``."""
    if t <= 0.0:
        return 1.0
    if t < 1.0:
        # theta-function form converges fast for small t
        cdf = 0.0
        for j in range(1, 51):
            cdf += math.exp(-((2 * j - 1) ** 2) * math.pi**2 / (8.0 * t * t))
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / t * cdf))
    total = 0.0
    for j in range(1, 101):
        term = 2.0 * (-1) ** (j - 1) * math.exp(-2.0 * j * j * t * t)
        total += term
        if abs(term) < 1e-18:
            break
    return min(1.0, max(0.0, total))
