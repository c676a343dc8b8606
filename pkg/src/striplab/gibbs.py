"""Two-layer Gibbs weights, summation/integral identities, push-block
kernels, and partition functions for both strip models.

Geometric identities are carried in exact rational arithmetic; the
log-gamma analogues are verified by tanh-sinh quadrature plus pointwise
change-of-variables checks.  The push-block kernels are implemented in
their factorized form (first coordinate explicit, second coordinate a
truncated-geometric or log-concave one-dimensional law); the weight
preservation checks then certify them against the defining local
equations computed independently.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import ParamDomain, ShockRegion
from .exactmath import geom_series_finite, geom_series_upper_tail, interlace, skew_schur_1var
from .params import Model, ModelParams
from .paths import DownRightPath, MoveKind, Step, apply_local_move, tau1_move_sequence
from .quadrature import axis_window, tanh_sinh, tanh_sinh_nd
from .rng import as_generator


# ---------------------------------------------------------------------------
# two-layer configuration weights


@dataclass(frozen=True)
class TwoLayerConfig:
    """Values on the doubled, rotated copy of a down-right path."""

    path: DownRightPath
    lam1: np.ndarray  # first (upper) layer, length N+1
    lam2: np.ndarray  # second (lower) layer, length N+1


def _edge_pairs(path: DownRightPath):
    """Per step j: ((upper end, lower end) in layer-1, same in layer-2,
    (first-layer, second-layer) dashed pair), as index pairs into 0..N."""
    out = []
    for j, s in enumerate(path.steps, start=1):
        if s is Step.RIGHT:
            solid = (j, j - 1)
            dashed = (j - 1, j)  # (first-layer index, second-layer index)
        else:
            solid = (j - 1, j)
            dashed = (j, j - 1)
        out.append((solid, dashed))
    return out


def log_wt_two_layer(config: TwoLayerConfig, params: ModelParams) -> float:
    """log of the product of solid, dashed and arc weights (-inf allowed)."""
    lam1 = np.asarray(config.lam1, dtype=float)
    lam2 = np.asarray(config.lam2, dtype=float)
    labels = config.path.edge_labels(params)
    c1, c2 = params.left_boundary, params.right_boundary
    geometric = params.model is Model.GEOMETRIC_LPP
    total = 0.0
    for ((hi, lo), (d1, d2)), lab in zip(_edge_pairs(config.path), labels):
        for lam in (lam1, lam2):
            x, y = lam[hi], lam[lo]
            if geometric:
                if x < y:
                    return -math.inf
                total += (x - y) * math.log(lab)
            else:
                total += -lab * (x - y) - math.exp(-(x - y))
        x, y = lam1[d1], lam2[d2]
        if geometric:
            if x < y:
                return -math.inf
        else:
            total += -math.exp(-(x - y))
    if geometric:
        total += (lam1[0] - lam2[0]) * math.log(c1) + (lam1[-1] - lam2[-1]) * math.log(c2)
    else:
        total += -c1 * (lam1[0] - lam2[0]) - c2 * (lam1[-1] - lam2[-1])
    return total


# ---------------------------------------------------------------------------
# geometric skew Cauchy / Littlewood identities (exact)


def wt_cauchy_kappa(lam, mu, kappa, a, b):
    """Weight of the pre-move bulk diagram: s_{lam/kappa}(a) s_{mu/kappa}(b)."""
    return skew_schur_1var(lam[0], lam[1], kappa[0], kappa[1], a) * skew_schur_1var(
        mu[0], mu[1], kappa[0], kappa[1], b
    )


def wt_cauchy_pi(lam, mu, pi, a, b):
    """Weight of the post-move bulk diagram: s_{pi/lam}(b) s_{pi/mu}(a)."""
    return skew_schur_1var(pi[0], pi[1], lam[0], lam[1], b) * skew_schur_1var(
        pi[0], pi[1], mu[0], mu[1], a
    )


def cauchy_sides_geometric(lam, mu, a, b):
    """Closed-form (lhs, rhs) of the length-2 skew Cauchy identity.

    lhs = sum over kappa interlacing below both lam and mu,
    rhs = sum over pi interlacing above both; requires |ab| < 1.
    """
    if not abs(a * b) < 1:
        raise ParamDomain(f"need |ab| < 1, got {a * b}")
    l1, l2 = lam
    m1, m2 = mu
    lo1, hi1 = max(l2, m2), min(l1, m1)
    lo2 = min(l2, m2)
    big1 = max(l1, m1)
    ab = a * b
    lhs = (
        a ** (l1 + l2)
        * b ** (m1 + m2)
        * geom_series_finite(ab, -hi1, -lo1)
        * geom_series_upper_tail(ab, -lo2)
    )
    rhs = (
        a ** (-(m1 + m2))
        * b ** (-(l1 + l2))
        * geom_series_upper_tail(ab, big1)
        * geom_series_finite(ab, lo1, hi1)
    )
    return lhs, rhs


def check_cauchy_geometric(lam, mu, a, b):
    """(lhs, rhs) as exact values (Fractions in -> Fractions out)."""
    return cauchy_sides_geometric(lam, mu, a, b)


def cauchy_lhs_brute(lam, mu, a, b, trunc: int):
    """Truncated double sum for the lhs plus an exact bound on the cut tail."""
    l1, l2 = lam
    m1, m2 = mu
    lo1, hi1 = max(l2, m2), min(l1, m1)
    lo2 = min(l2, m2)
    total = a * 0
    for k1 in range(lo1, hi1 + 1):
        for k2 in range(lo2 - trunc, lo2 + 1):
            total += wt_cauchy_kappa(lam, mu, (k1, k2), a, b)
    ab = a * b
    tail = (
        a ** (l1 + l2)
        * b ** (m1 + m2)
        * geom_series_finite(ab, -hi1, -lo1)
        * geom_series_upper_tail(ab, trunc + 1 - lo2)
    )
    return total, tail


def cauchy_bijection_pairs(lam, mu, kappa):
    """The change of variables mapping a lhs kappa-term to a rhs pi-term."""
    l1, l2 = lam
    m1, m2 = mu
    k1, k2 = kappa
    pi1 = -k2 + max(l1, m1) + min(l2, m2)
    pi2 = -k1 + max(l2, m2) + min(l1, m1)
    return (pi1, pi2)


def wt_littlewood_lambda(kappa, lam, c, a):
    """Pre-move left-boundary diagram weight: c^(lam1-lam2) s_{kappa/lam}(a)."""
    k1, k2 = kappa
    l1, l2 = lam
    if not interlace(l1, l2, k1, k2):
        return c * 0
    return c ** (l1 - l2) * a ** ((k1 - l1) + (k2 - l2))


def wt_littlewood_pi(kappa, pi, c, a):
    """Post-move left-boundary diagram weight: c^(pi1-pi2) s_{pi/kappa}(a)."""
    k1, k2 = kappa
    p1, p2 = pi
    if not interlace(k1, k2, p1, p2):
        return c * 0
    return c ** (p1 - p2) * a ** ((p1 - k1) + (p2 - k2))


def littlewood_sides_geometric(kappa, a, c):
    """Closed-form (lhs, rhs) of the length-2 skew Littlewood identity."""
    if not abs(a * c) < 1:
        raise ParamDomain(f"need |ac| < 1, got {a * c}")
    k1, k2 = kappa
    if c == 0:
        val = a ** (k1 - k2)
        return val, val
    lhs = (
        a ** (k1 + k2)
        * geom_series_finite(c / a, k2, k1)
        * geom_series_upper_tail(c * a, -k2)
    )
    rhs = (
        a ** (-(k1 + k2))
        * geom_series_upper_tail(c * a, k1)
        * geom_series_finite(a / c, k2, k1)
    )
    return lhs, rhs


def check_littlewood_geometric(kappa, a, c):
    """(lhs, rhs) as exact values (Fractions in -> Fractions out)."""
    return littlewood_sides_geometric(kappa, a, c)


def littlewood_lhs_brute(kappa, a, c, trunc: int):
    k1, k2 = kappa
    total = a * 0
    for l1 in range(k2, k1 + 1):
        for l2 in range(k2 - trunc, k2 + 1):
            total += wt_littlewood_lambda(kappa, (l1, l2), c, a)
    tail = (
        a ** (k1 + k2)
        * geom_series_finite(c / a, k2, k1)
        * geom_series_upper_tail(c * a, trunc + 1 - k2)
    )
    return total, tail


def littlewood_bijection_pairs(kappa, lam):
    """lambda-term -> pi-term change of variables (indices mod 2)."""
    k1, k2 = kappa
    l1, l2 = lam
    return (-l2 + k1 + k2, -l1 + k1 + k2)


# ---------------------------------------------------------------------------
# log-gamma Cauchy / Littlewood identities (quadrature)


def log_wt_cauchy_kappa_lg(lam, mu, k1, k2, alpha, beta):
    l1, l2 = lam
    m1, m2 = mu
    return (
        -alpha * (l1 + l2 - k1 - k2)
        - beta * (m1 + m2 - k1 - k2)
        - np.exp(-(l1 - k1))
        - np.exp(-(k1 - l2))
        - np.exp(-(l2 - k2))
        - np.exp(-(m1 - k1))
        - np.exp(-(k1 - m2))
        - np.exp(-(m2 - k2))
    )


def log_wt_cauchy_pi_lg(lam, mu, p1, p2, alpha, beta):
    l1, l2 = lam
    m1, m2 = mu
    return (
        -alpha * (p1 + p2 - m1 - m2)
        - beta * (p1 + p2 - l1 - l2)
        - np.exp(-(p1 - l1))
        - np.exp(-(l1 - p2))
        - np.exp(-(p2 - l2))
        - np.exp(-(p1 - m1))
        - np.exp(-(m1 - p2))
        - np.exp(-(p2 - m2))
    )


def _cauchy_lg_boxes(lam, mu, alpha, beta, side: str, tol: float = 1e-12):
    vals = [*lam, *mu]
    lo, hi = min(vals), max(vals)
    rate = alpha + beta
    if side == "lhs":
        # kappa1 double-exp guarded both ways; kappa2 decays like e^{rate*k2} below
        return [axis_window(lo, hi, None, None, tol), axis_window(lo, hi, rate, None, tol)]
    # pi1 decays at the pure rate above the hull; pi2 double-exp guarded
    return [axis_window(lo, hi, None, rate, tol), axis_window(lo, hi, None, None, tol)]


def check_cauchy_lg(lam, mu, alpha, beta, tol: float = 1e-8):
    """Integrate both sides of the log-gamma Cauchy identity; returns
    (lhs, rhs, relative error)."""
    if alpha + beta <= 0:
        raise ParamDomain("need alpha + beta > 0")
    lhs = tanh_sinh_nd(
        lambda k1, k2: np.exp(log_wt_cauchy_kappa_lg(lam, mu, k1, k2, alpha, beta)),
        _cauchy_lg_boxes(lam, mu, alpha, beta, "lhs"),
        tol=tol * 0.1,
    )
    rhs = tanh_sinh_nd(
        lambda p1, p2: np.exp(log_wt_cauchy_pi_lg(lam, mu, p1, p2, alpha, beta)),
        _cauchy_lg_boxes(lam, mu, alpha, beta, "rhs"),
        tol=tol * 0.1,
    )
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return lhs, rhs, rel


def cauchy_lg_substitution(lam, mu, k1, k2):
    """kappa -> pi change of variables making the integrands equal pointwise."""
    l1, l2 = lam
    m1, m2 = mu
    p1 = -k2 + np.logaddexp(l1, m1) - np.logaddexp(-l2, -m2)
    p2 = -k1 + np.logaddexp(l2, m2) - np.logaddexp(-l1, -m1)
    return p1, p2


def log_wt_littlewood_lambda_lg(kappa, l1, l2, u, alpha):
    k1, k2 = kappa
    return (
        -alpha * (k1 + k2 - l1 - l2)
        - u * (l1 - l2)
        - np.exp(-(k1 - l1))
        - np.exp(-(l1 - k2))
        - np.exp(-(k2 - l2))
    )


def log_wt_littlewood_pi_lg(kappa, p1, p2, u, alpha):
    k1, k2 = kappa
    return (
        -alpha * (p1 + p2 - k1 - k2)
        - u * (p1 - p2)
        - np.exp(-(p1 - k1))
        - np.exp(-(k1 - p2))
        - np.exp(-(p2 - k2))
    )


def _littlewood_lg_boxes(kappa, u, alpha, side: str, tol: float = 1e-12):
    k1, k2 = kappa
    rate = alpha + u
    if side == "lhs":
        # lambda1 double-exp guarded; lambda2 decays like e^{rate*l2} below
        return [axis_window(k2, k1, None, None, tol), axis_window(k2, k1, rate, None, tol)]
    return [axis_window(k2, k1, None, rate, tol), axis_window(k2, k1, None, None, tol)]


def check_littlewood_lg(kappa, u, alpha, tol: float = 1e-8):
    """Integrate both sides of the log-gamma Littlewood identity; returns
    (lhs, rhs, relative error)."""
    if alpha + u <= 0:
        raise ParamDomain("need u + alpha > 0")
    lhs = tanh_sinh_nd(
        lambda l1, l2: np.exp(log_wt_littlewood_lambda_lg(kappa, l1, l2, u, alpha)),
        _littlewood_lg_boxes(kappa, u, alpha, "lhs"),
        tol=tol * 0.1,
    )
    rhs = tanh_sinh_nd(
        lambda p1, p2: np.exp(log_wt_littlewood_pi_lg(kappa, p1, p2, u, alpha)),
        _littlewood_lg_boxes(kappa, u, alpha, "rhs"),
        tol=tol * 0.1,
    )
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return lhs, rhs, rel


def littlewood_lg_substitution(kappa, l1, l2):
    k1, k2 = kappa
    return (-l2 + k1 + k2, -l1 + k1 + k2)


# ---------------------------------------------------------------------------
# geometric push-block kernels


def kernel_bulk_geom_pmf(pi, lam, mu, a, b):
    """Transition pmf of the bulk push-block update, factorized:
    pi1 = max(lam1, mu1) + Geom(ab); pi2 truncated-geometric with ratio ab
    on [max(lam2, mu2), min(lam1, mu1)]."""
    p1, p2 = pi
    big1 = max(lam[0], mu[0])
    lo, hi = max(lam[1], mu[1]), min(lam[0], mu[0])
    zero = a * 0
    if p1 < big1 or not (lo <= p2 <= hi):
        return zero
    ab = a * b
    return (1 - ab) * ab ** (p1 - big1) * ab**p2 / geom_series_finite(ab, lo, hi)


def sample_kernel_bulk_geom(lam1, lam2, mu1, mu2, a, b, rng, size=None):
    """Vectorized sampler for the bulk kernel given arrays of conditioning values."""
    gen = as_generator(rng)
    ab = a * b
    big1 = np.maximum(lam1, mu1)
    pi1 = big1 + (gen.geometric(1.0 - ab, size=size) - 1)
    lo = np.maximum(lam2, mu2)
    hi = np.minimum(lam1, mu1)
    pi2 = _sample_trunc_geom(ab, lo, hi, gen)
    return pi1, pi2


def _sample_trunc_geom(ratio, lo, hi, gen):
    """pi ~ ratio^pi on integer range [lo, hi] (elementwise ranges)."""
    lo = np.asarray(lo)
    hi = np.asarray(hi)
    width = hi - lo
    u = gen.random(size=lo.shape)
    if ratio == 1.0:
        return lo + np.floor(u * (width + 1)).astype(int).clip(0, width)
    # inverse CDF of sum_{k=0..width} ratio^k starting at lo
    total = 1.0 - ratio ** (width + 1.0)
    k = np.floor(np.log1p(-u * total) / math.log(ratio)).astype(int)
    return lo + np.clip(k, 0, width)


def kernel_left_geom_pmf(pi, kappa, c1, a):
    """Left-boundary kernel: pi1 = kappa1 + Geom(a c1); pi2 on [kappa2, kappa1]
    with ratio a/c1."""
    p1, p2 = pi
    k1, k2 = kappa
    zero = a * 0
    if p1 < k1 or not (k2 <= p2 <= k1):
        return zero
    ac = a * c1
    r = a / c1
    return (1 - ac) * ac ** (p1 - k1) * r**p2 / geom_series_finite(r, k2, k1)


def kernel_right_geom_pmf(pi, kappa, a, c2):
    """Right-boundary kernel: identical form with c2 in place of c1."""
    return kernel_left_geom_pmf(pi, kappa, c2, a)


def sample_kernel_left_geom(kappa1, kappa2, c1, a, rng, size=None):
    gen = as_generator(rng)
    pi1 = np.asarray(kappa1) + (gen.geometric(1.0 - a * c1, size=size) - 1)
    pi2 = _sample_trunc_geom(a / c1, np.asarray(kappa2), np.asarray(kappa1), gen)
    return pi1, pi2


# ---------------------------------------------------------------------------
# log-gamma push-block kernels


def _logconcave_grid(logpdf, lo, hi, nodes=4096):
    x = np.linspace(lo, hi, nodes)
    lp = logpdf(x)
    m = lp.max()
    p = np.exp(lp - m)
    z = np.trapezoid(p, x)
    return x, p / z, m + math.log(z)


class KernelBulkLG:
    """Bulk push-block kernel for the log-gamma model, factorized into a
    closed-form first coordinate and a log-concave second coordinate."""

    def __init__(self, lam, mu, alpha, beta, nodes: int = 4096, pad: float = 25.0):
        if alpha + beta <= 0:
            raise ParamDomain("need alpha + beta > 0")
        self.lam, self.mu = lam, mu
        self.alpha, self.beta = alpha, beta
        self.theta = alpha + beta
        self.log_s = np.logaddexp(lam[0], mu[0])
        vals = [lam[0], lam[1], mu[0], mu[1]]
        self._grid_x, self._grid_p, self._log_z2 = _logconcave_grid(
            self._logpdf2_unnorm, min(vals) - pad, max(vals) + pad, nodes
        )

    def _logpdf2_unnorm(self, p2):
        l1, l2 = self.lam
        m1, m2 = self.mu
        with np.errstate(over="ignore"):
            return (
                -self.theta * p2
                - np.exp(p2 - l1)
                - np.exp(p2 - m1)
                - np.exp(l2 - p2)
                - np.exp(m2 - p2)
            )

    def logpdf(self, pi):
        p1, p2 = pi
        lp1 = (
            -self.theta * (p1 - self.log_s)
            - np.exp(-(p1 - self.log_s))
            - gammaln(self.theta)
        )  # log inv-gamma density of p1 - log(e^lam1 + e^mu1)
        return lp1 + self._logpdf2_unnorm(p2) - self._log_z2

    def sample(self, rng, size=None):
        gen = as_generator(rng)
        pi1 = self.log_s - np.log(gen.gamma(self.theta, size=size))
        pi2 = self._sample2(gen, size)
        return pi1, pi2

    def _sample2(self, gen, size):
        cdf = np.cumsum(self._grid_p)
        cdf /= cdf[-1]
        u = gen.random(size=size)
        idx = np.searchsorted(cdf, u)
        return self._grid_x[np.clip(idx, 0, len(self._grid_x) - 1)]


class KernelLeftLG:
    """Left-boundary push-block kernel (use boundary=v for the right one)."""

    def __init__(self, kappa, u, alpha, nodes: int = 4096, pad: float = 25.0):
        if alpha + u <= 0:
            raise ParamDomain("need alpha + u > 0")
        self.kappa = kappa
        self.u, self.alpha = u, alpha
        self.theta = alpha + u
        self._grid_x, self._grid_p, self._log_z2 = _logconcave_grid(
            self._logpdf2_unnorm, kappa[1] - pad, kappa[0] + pad, nodes
        )

    def _logpdf2_unnorm(self, p2):
        k1, k2 = self.kappa
        with np.errstate(over="ignore"):
            return (self.u - self.alpha) * p2 - np.exp(p2 - k1) - np.exp(k2 - p2)

    def logpdf(self, pi):
        p1, p2 = pi
        k1 = self.kappa[0]
        lp1 = -self.theta * (p1 - k1) - np.exp(-(p1 - k1)) - gammaln(self.theta)
        return lp1 + self._logpdf2_unnorm(p2) - self._log_z2

    def sample(self, rng, size=None):
        gen = as_generator(rng)
        pi1 = self.kappa[0] - np.log(gen.gamma(self.theta, size=size))
        return pi1, self._sample2(gen, size)

    def _sample2(self, gen, size):
        cdf = np.cumsum(self._grid_p)
        cdf /= cdf[-1]
        u = gen.random(size=size)
        idx = np.searchsorted(cdf, u)
        return self._grid_x[np.clip(idx, 0, len(self._grid_x) - 1)]


def kernel_normalization_lg(kernel, tol: float = 1e-6) -> float:
    """Independent 2-d quadrature of exp(kernel.logpdf); should be 1."""
    if isinstance(kernel, KernelBulkLG):
        vals = [*kernel.lam, *kernel.mu]
        center = kernel.log_s
    else:
        vals = list(kernel.kappa)
        center = kernel.kappa[0]
    box1 = axis_window(min(vals), max(center, max(vals)), None, kernel.theta)
    box2 = axis_window(min(vals), max(vals), None, None)
    return tanh_sinh_nd(
        lambda p1, p2: np.exp(kernel.logpdf((p1, p2))), [box1, box2], tol=tol * 1e-2
    )


def kernel_normalization_geom(kernel: str, inputs, a, c_or_b, trunc: int = 200):
    """Exact normalization of a geometric kernel in its *defining* form
    post-move weight / (sum of pre-move weights): truncated pi1 sum plus the
    closed-form geometric tail.  Equals 1 exactly iff the Cauchy (resp.
    Littlewood) identity holds; Fractions in -> Fraction out."""
    if kernel == "bulk":
        lam, mu = inputs
        b = c_or_b
        lhs, _ = cauchy_sides_geometric(lam, mu, a, b)
        lo, hi = max(lam[1], mu[1]), min(lam[0], mu[0])
        big1 = max(lam[0], mu[0])
        ratio = a * b

        def u_def(p1, p2):
            return wt_cauchy_pi(lam, mu, (p1, p2), a, b) / lhs

    else:
        kappa = inputs
        c = c_or_b
        lhs, _ = littlewood_sides_geometric(kappa, a, c)
        lo, hi = kappa[1], kappa[0]
        big1 = kappa[0]
        ratio = a * c

        def u_def(p1, p2):
            return wt_littlewood_pi(kappa, (p1, p2), c, a) / lhs

    total = a * 0
    for p1 in range(big1, big1 + trunc):
        for p2 in range(lo, hi + 1):
            total += u_def(p1, p2)
    # each unit increase of pi1 beyond the box multiplies the row by ratio
    tail = sum(u_def(big1 + trunc, p2) for p2 in range(lo, hi + 1)) / (1 - ratio)
    return total + tail


# ---------------------------------------------------------------------------
# two-layer push-block chain


def two_layer_tau1_step(config: TwoLayerConfig, params: ModelParams, rng_first, rng_second) -> TwoLayerConfig:
    """One tau_1 sweep of push-block updates on a two-layer configuration.

    First-layer coordinates consume variates from rng_first only and the
    second layer from rng_second, so a dynamics chain driven by the same
    rng_first stream couples exactly (the first-layer marginal of this
    chain *is* the passage-time / free-energy recurrence).
    """
    gen1 = as_generator(rng_first)
    gen2 = as_generator(rng_second)
    geometric = params.model is Model.GEOMETRIC_LPP
    path = config.path
    lam1 = np.array(config.lam1, dtype=float)
    lam2 = np.array(config.lam2, dtype=float)
    for move in tau1_move_sequence(config.path):
        labels = path.edge_labels(params)
        j = move.index
        if move.kind is MoveKind.BULK:
            a_lab, b_lab = labels[j - 1], labels[j]
            lam = (lam1[j - 1], lam2[j - 1])
            mu = (lam1[j + 1], lam2[j + 1])
            if geometric:
                big1 = max(lam[0], mu[0])
                p1 = big1 + (gen1.geometric(1.0 - a_lab * b_lab) - 1)
                p2 = _sample_trunc_geom(
                    a_lab * b_lab,
                    np.asarray(int(max(lam[1], mu[1]))),
                    np.asarray(int(min(lam[0], mu[0]))),
                    gen2,
                )
            else:
                kern = KernelBulkLG(lam, mu, a_lab, b_lab)
                p1 = kern.log_s - math.log(gen1.gamma(a_lab + b_lab))
                p2 = kern._sample2(gen2, None)
        elif move.kind is MoveKind.LEFT_BOUNDARY:
            a_lab = labels[0]
            kappa = (lam1[1], lam2[1])
            if geometric:
                p1 = kappa[0] + (gen1.geometric(1.0 - a_lab * params.left_boundary) - 1)
                p2 = _sample_trunc_geom(
                    a_lab / params.left_boundary,
                    np.asarray(int(kappa[1])),
                    np.asarray(int(kappa[0])),
                    gen2,
                )
            else:
                kern = KernelLeftLG(kappa, params.left_boundary, a_lab)
                p1 = kappa[0] - math.log(gen1.gamma(a_lab + params.left_boundary))
                p2 = kern._sample2(gen2, None)
        else:
            a_lab = labels[-1]
            kappa = (lam1[-2], lam2[-2])
            if geometric:
                p1 = kappa[0] + (gen1.geometric(1.0 - a_lab * params.right_boundary) - 1)
                p2 = _sample_trunc_geom(
                    a_lab / params.right_boundary,
                    np.asarray(int(kappa[1])),
                    np.asarray(int(kappa[0])),
                    gen2,
                )
            else:
                kern = KernelLeftLG(kappa, params.right_boundary, a_lab)
                p1 = kappa[0] - math.log(gen1.gamma(a_lab + params.right_boundary))
                p2 = kern._sample2(gen2, None)
        lam1[j] = p1
        lam2[j] = float(p2)
        path = apply_local_move(path, move)
    return TwoLayerConfig(path, lam1, lam2)


# ---------------------------------------------------------------------------
# weight preservation (the defining equations of the local kernels)


def weight_preservation_geom(kind: str, inputs, a, b_or_c, pi):
    """residual = U(pi | inputs) * (sum of pre-move weights) - post-move weight,
    all exact; zero certifies the kernel against its defining equation."""
    if kind == "bulk":
        lam, mu = inputs
        b = b_or_c
        lhs_sum, _ = cauchy_sides_geometric(lam, mu, a, b)
        u = kernel_bulk_geom_pmf(pi, lam, mu, a, b)
        return u * lhs_sum - wt_cauchy_pi(lam, mu, pi, a, b)
    kappa = inputs
    c = b_or_c
    lhs_sum, _ = littlewood_sides_geometric(kappa, a, c)
    u = kernel_left_geom_pmf(pi, kappa, c, a)
    return u * lhs_sum - wt_littlewood_pi(kappa, pi, c, a)


def weight_preservation_lg(kind: str, inputs, alpha, beta_or_u, pi, tol: float = 1e-6):
    """Relative residual of U(pi|inputs) * integral(pre-move wt) vs post-move wt."""
    if kind == "bulk":
        lam, mu = inputs
        beta = beta_or_u
        lhs = tanh_sinh_nd(
            lambda k1, k2: np.exp(log_wt_cauchy_kappa_lg(lam, mu, k1, k2, alpha, beta)),
            _cauchy_lg_boxes(lam, mu, alpha, beta, "lhs"),
            tol=tol * 1e-2,
        )
        kern = KernelBulkLG(lam, mu, alpha, beta)
        pred = math.exp(kern.logpdf(pi)) * lhs
        target = math.exp(log_wt_cauchy_pi_lg(lam, mu, pi[0], pi[1], alpha, beta))
        return abs(pred - target) / max(target, 1e-300)
    kappa = inputs
    u = beta_or_u
    lhs = tanh_sinh_nd(
        lambda l1, l2: np.exp(log_wt_littlewood_lambda_lg(kappa, l1, l2, u, alpha)),
        _littlewood_lg_boxes(kappa, u, alpha, "lhs"),
        tol=tol * 1e-2,
    )
    kern = KernelLeftLG(kappa, u, alpha)
    pred = math.exp(kern.logpdf(pi)) * lhs
    target = math.exp(log_wt_littlewood_pi_lg(kappa, pi[0], pi[1], u, alpha))
    return abs(pred - target) / max(target, 1e-300)


# ---------------------------------------------------------------------------
# partition functions


def partition_z_upper_bound(params: ModelParams) -> float:
    """Schur-sum bound: (1-c1c2)^-1 prod (1-a_i c1)^-1 (1-a_i c2)^-1
    prod_{i<j} (1-a_i a_j)^-1."""
    a = params.bulk
    c1, c2 = params.left_boundary, params.right_boundary
    if c1 * c2 >= 1:
        raise ShockRegion("bound requires c1*c2 < 1")
    out = 1.0 / (1.0 - c1 * c2)
    for i, ai in enumerate(a):
        out /= (1.0 - ai * c1) * (1.0 - ai * c2)
        for aj in a[i + 1 :]:
            out /= 1.0 - ai * aj
    return out


def _algebra_mul_f(terms: dict, f) -> dict:
    """Multiply normal-ordered sum-of-monomials on the right by F(f)."""
    out: dict = defaultdict(lambda: 0)

    def rec(fs, gs, coeff):
        if not gs:
            out[(fs + (f,), gs)] += coeff
            return
        g = gs[-1]
        rest = gs[:-1]
        scale = coeff / (1 - g * f)
        out[(fs, gs)] += scale  # keep the G(g) factor, absorb F
        rec(fs, rest, scale)  # push F past G(g)
        out[(fs, rest)] += -scale  # identity correction

    for (fs, gs), coeff in terms.items():
        rec(fs, gs, coeff)
    return dict(out)


def _algebra_mul_g(terms: dict, g) -> dict:
    return {(fs, gs + (g,)): coeff for (fs, gs), coeff in terms.items()}


def partition_z_geometric(params: ModelParams, path: DownRightPath = None, exact_values=None):
    """Exact partition function of the two-layer Gibbs measure with one pinned
    vertex, via the shift-operator algebra; any down-right path.

    With exact_values = (bulk tuple, c1, c2) as Fractions the result is an
    exact rational; otherwise a float.  Requires the fan region c1*c2 < 1.
    """
    if params.model is not Model.GEOMETRIC_LPP:
        raise ParamDomain("geometric partition function requested for wrong model")
    if exact_values is not None:
        b_of = lambda idx: Fraction(exact_values[0][(idx - 1) % params.n])
        c1, c2 = Fraction(exact_values[1]), Fraction(exact_values[2])
        one = Fraction(1)
    else:
        b_of = params.bulk_at
        c1, c2 = params.left_boundary, params.right_boundary
        one = 1.0
    if c1 * c2 >= 1:
        raise ShockRegion(f"partition function infinite at c1*c2 = {c1 * c2} >= 1")
    if path is None:
        from .paths import horizontal_path

        path = horizontal_path(params.n)
    labels = []
    for (n, m), s in zip(path.vertices(), path.steps):
        labels.append(b_of(n + 1) if s is Step.RIGHT else b_of(m))
    terms = {((), ()): one}
    for lab in labels:
        terms = _algebra_mul_f(terms, lab)
        terms = _algebra_mul_g(terms, lab)
    total = one * 0
    for (fs, gs), coeff in terms.items():
        val = coeff / (1 - c1 * c2)
        for f in fs:
            val /= 1 - f * c1
        for g in gs:
            val /= 1 - g * c2
        total += val
    return total


def partition_z_geometric_matrix(params: ModelParams, path: DownRightPath, trunc: int) -> float:
    """Truncated-matrix oracle for partition_z_geometric (monotone from below)."""
    c1, c2 = params.left_boundary, params.right_boundary
    if c1 * c2 >= 1:
        raise ShockRegion("partition function infinite in the shock region")
    n_idx = np.arange(trunc)
    labels = []
    for (n, m), s in zip(path.vertices(), path.steps):
        labels.append(params.bulk_at(n + 1) if s is Step.RIGHT else params.bulk_at(m))
    w = c1**n_idx
    v = c2**n_idx
    vec = w
    for b in labels:
        mat = np.zeros((trunc, trunc))
        for n in range(trunc):
            for n2 in range(trunc):
                lo = max(0, n2 - n)
                mat[n, n2] = sum(b ** (2 * x + n - n2) for x in range(lo, n2 + 1))
        vec = vec @ mat
    return float(vec @ v)


def partition_z_lg_n1(params: ModelParams, tol: float = 1e-6):
    """Two-layer normalization at N=1 by 3-d quadrature, and the closed form
    Gamma(u+v) Gamma(alpha+v) Gamma(u+alpha)."""
    if params.model is not Model.LOG_GAMMA or params.n != 1:
        raise ParamDomain("this normalization is the N=1 log-gamma case")
    u, v = params.left_boundary, params.right_boundary
    alpha = params.bulk[0]
    if u + v <= 0:
        raise ShockRegion(f"partition function infinite at u+v = {u + v} <= 0")
    closed = math.exp(gammaln(u + v) + gammaln(alpha + v) + gammaln(u + alpha))

    # Integrate over the per-edge differences (unit Jacobian):
    # s = lam1(1)-lam1(0), t = lam2(1)-lam2(0), y = lam1(0)-lam2(1); the left
    # arc gap is t+y and the right arc gap is s+y, so the two-layer weight
    # splits as g1(s) g2(t) g3(y) and the triple integral is the product of
    # three tanh-sinh quadratures over the same tensor grid.
    def g1(s):
        return np.exp(-(alpha + v) * s - np.exp(-s))

    def g2(t):
        return np.exp(-(alpha + u) * t - np.exp(-t))

    def g3(y):
        return np.exp(-(u + v) * y - np.exp(-y))

    q = tol * 1e-2
    val = (
        tanh_sinh(g1, *axis_window(0.0, 0.0, None, alpha + v), tol=q)
        * tanh_sinh(g2, *axis_window(0.0, 0.0, None, alpha + u), tol=q)
        * tanh_sinh(g3, *axis_window(0.0, 0.0, None, u + v), tol=q)
    )
    return val, closed


def partition_z(params: ModelParams, path: DownRightPath = None, tol: float = 1e-8, trunc: int = None):
    """Dispatcher: exact operator-algebra value for the geometric model
    (error bound 0), quadrature for log-gamma N=1.  Returns (value, bound)."""
    if params.model is Model.GEOMETRIC_LPP:
        val = partition_z_geometric(params, path)
        return float(val), 0.0
    if params.n == 1:
        val, closed = partition_z_lg_n1(params, tol=max(tol, 1e-10))
        return val, abs(val - closed)
    raise ParamDomain("log-gamma partition function implemented for N = 1")
