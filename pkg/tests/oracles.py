"""Independent reference implementations used only by the tests."""
import math

import mpmath
import numpy as np

mpmath.mp.dps = 120


def k_series(nu, x):
    """K_n(x) from the ascending series of I_n and the log-series form of K_n.

    Built from scratch in 120-digit arithmetic; no Bessel routine is used.
    """
    x = mpmath.mpf(x)
    h = x / 2
    psi = lambda m: -mpmath.euler + sum(mpmath.mpf(1) / j for j in range(1, m))  # digamma at integers
    first = sum(mpmath.factorial(nu - k - 1) / mpmath.factorial(k) * (-(h**2)) ** k for k in range(nu)) / 2 * h ** (-nu)
    ival = lambda: h**nu * mpmath.nsum(lambda k: (h**2) ** k / (mpmath.factorial(k) * mpmath.factorial(nu + k)), [0, mpmath.inf])
    tail = mpmath.nsum(
        lambda k: (psi(int(k) + 1) + psi(nu + int(k) + 1)) * (h**2) ** k / (mpmath.factorial(k) * mpmath.factorial(nu + k)),
        [0, mpmath.inf],
    )
    return first + (-1) ** (nu + 1) * mpmath.log(h) * ival() + (-1) ** nu / 2 * h**nu * tail


def k_asymptotic(nu, x, terms=60):
    """Large-argument expansion, used only where it is accurate (x >= 30)."""
    x = mpmath.mpf(x)
    mu = 4 * nu**2
    total, term = mpmath.mpf(1), mpmath.mpf(1)
    for k in range(1, terms):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8 * x)
        total += term
    return mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.exp(-x) * total


def brute_ssi_equal(r, side, j_max, rng):
    """Plain SSI of equal disks in a square until one disk fails ``j_max`` times.

    Written without any of the package's code: candidates are drawn one
    at a time over the admissible centre square and tested against every
    placed disk.
    """
    xs, ys = [], []
    while True:
        for _ in range(j_max):
            x, y = rng.uniform(r, side - r, 2)
            if not xs or np.min((np.array(xs) - x) ** 2 + (np.array(ys) - y) ** 2) >= 4 * r * r:
                xs.append(x)
                ys.append(y)
                break
        else:
            return len(xs) * math.pi * r * r / (side * side)
