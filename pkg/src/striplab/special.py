"""Special functions used throughout: the double-exponential weight
f_theta(x) = exp(-theta*x - exp(-x)), digamma/trigamma, and tail helpers."""

from __future__ import annotations

import math

import numpy as np

from .errors import ParamDomain

EULER_GAMMA = 0.5772156649015328606

# Bernoulli numbers B_2..B_14 for the asymptotic digamma/trigamma series.
_BERN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)


def log_gamma_weight(theta, x):
    """log f_theta(x) = -theta*x - exp(-x), elementwise.

    Never overflows for x >= -700; underflow to -inf is a legal value.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return -theta * x - np.exp(-x)


def log_gamma_weight_bound_const(theta: float) -> float:
    """C_theta with f_theta(x) <= C_theta * exp(-theta*|x|) for all real x."""
    if theta <= 0:
        raise ParamDomain("theta must be > 0 for the exponential bound")
    return max(1.0, math.exp(2 * theta * math.log(2 * theta) - 2 * theta))


def digamma(z):
    """Digamma psi(z) for z > 0, abs error < 1e-12.

    Recurrence psi(z) = psi(z+1) - 1/z lifts the argument above 12, then
    the asymptotic series in 1/z^2 applies.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ParamDomain("digamma requires z > 0")
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    acc = np.zeros_like(z)
    while True:
        small = z < 12.0
        if not small.any():
            break
        acc[small] -= 1.0 / z[small]
        z[small] += 1.0
    inv2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    term = inv2.copy()
    for k, b in enumerate(_BERN, start=1):
        series += b / (2 * k) * term
        term *= inv2
    out = acc + np.log(z) - 0.5 / z - series
    return float(out[0]) if scalar else out


def trigamma(z):
    """Trigamma psi'(z) for z > 0, abs error < 1e-12."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ParamDomain("trigamma requires z > 0")
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    acc = np.zeros_like(z)
    while True:
        small = z < 12.0
        if not small.any():
            break
        acc[small] += 1.0 / (z[small] * z[small])
        z[small] += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = np.zeros_like(z)
    term = inv * inv2
    for b in _BERN:
        series += b * term
        term *= inv2
    out = acc + inv + 0.5 * inv2 + series
    return float(out[0]) if scalar else out


def kolmogorov_sf(t: float, terms: int = 100) -> float:
    """P(sup|Brownian bridge| > t): 2 * sum_k (-1)^(k-1) exp(-2 k^2 t^2)."""
    if t <= 0:
        return 1.0
    s = 0.0
    for k in range(1, terms + 1):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * t * t)
        s += term
        if abs(term) < 1e-16:
            break
    return min(1.0, max(0.0, s))
