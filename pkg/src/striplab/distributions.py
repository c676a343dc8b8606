"""Base distributions: Geom(a) on {0,1,2,...} and log-inverse-gamma."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaincc, gammaln

from .errors import ParamDomain
from .rng import as_generator


def geom_pmf(a, k):
    """P(X = k) = (1-a) a^k for k >= 0; exact when a is a Fraction."""
    if isinstance(k, (int, np.integer)):
        if k < 0:
            return a * 0
        return (1 - a) * a**k
    k = np.asarray(k)
    out = np.where(k >= 0, (1 - a) * np.asarray(a, dtype=float) ** np.maximum(k, 0), 0.0)
    return out


def sample_geom(a: float, rng, size=None):
    """Draw Geom(a) variates: P(X=k) = (1-a) a^k, k in {0, 1, ...}."""
    if not 0 < a < 1:
        raise ParamDomain(f"geometric parameter must be in (0,1), got {a}")
    gen = as_generator(rng)
    return gen.geometric(1.0 - a, size=size) - 1


def sample_log_inv_gamma(theta: float, rng, size=None):
    """Draw Y with density f_theta(y)/Gamma(theta), f_theta(y) = exp(-theta*y - exp(-y)).

    exp(-Y) ~ Gamma(theta, 1), so Y = -log(Gamma(theta) variate); the log is
    taken immediately, keeping everything finite even for tiny theta.
    """
    if theta <= 0:
        raise ParamDomain(f"log-inverse-gamma parameter must be > 0, got {theta}")
    gen = as_generator(rng)
    return -np.log(gen.gamma(theta, size=size))


def log_inv_gamma_logpdf(theta: float, y):
    """log density of log Ga^{-1}(theta): -theta*y - exp(-y) - log Gamma(theta)."""
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore"):
        return -theta * y - np.exp(-y) - gammaln(theta)


def log_inv_gamma_cdf(theta: float, y):
    """P(Y <= y) for Y ~ log Ga^{-1}(theta) = P(Gamma(theta) >= exp(-y))."""
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore"):
        return gammaincc(theta, np.exp(-y))


def inv_gamma_cdf(theta: float, x):
    """P(X <= x) for X ~ Ga^{-1}(theta): regularized upper incomplete gamma at 1/x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = gammaincc(theta, 1.0 / x[pos])
    return out
