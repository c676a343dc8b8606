"""Weighted two-sample statistics, ESS, bootstrap p-values, discrete TV."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import AllZeroWeights, EmptySample
from .rng import as_generator
from .special import kolmogorov_sf


def ess(weights) -> float:
    """Effective sample size (sum w)^2 / sum w^2 of nonnegative weights."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise EmptySample("ess of empty weight vector")
    if np.any(w < 0):
        raise AllZeroWeights("weights must be nonnegative")
    s1 = w.sum()
    if s1 <= 0:
        raise AllZeroWeights("all weights are zero")
    return float(s1 * s1 / np.sum(w * w))


def ess_from_log(log_weights) -> float:
    lw = np.asarray(log_weights, dtype=float)
    if lw.size == 0:
        raise EmptySample("ess of empty weight vector")
    m = lw.max()
    if not np.isfinite(m):
        raise AllZeroWeights("all log-weights are -inf")
    w = np.exp(lw - m)
    return float(w.sum() ** 2 / np.sum(w * w))


@dataclass(frozen=True)
class WeightedEcdf:
    """Sorted support with normalized cumulative weights."""

    values: np.ndarray
    cumweights: np.ndarray

    @classmethod
    def from_sample(cls, x, weights=None) -> "WeightedEcdf":
        x = np.asarray(x, dtype=float)
        if x.size == 0:
            raise EmptySample("empty sample")
        if weights is None:
            w = np.full(x.shape, 1.0 / x.size)
        else:
            w = np.asarray(weights, dtype=float)
            tot = w.sum()
            if tot <= 0:
                raise AllZeroWeights("all weights are zero")
            w = w / tot
        order = np.argsort(x, kind="stable")
        return cls(x[order], np.cumsum(w[order]))

    def __call__(self, t):
        idx = np.searchsorted(self.values, t, side="right")
        cw = np.concatenate([[0.0], self.cumweights])
        return cw[idx]


def ks_statistic(x1, x2, w1=None, w2=None) -> float:
    """Sup-norm distance between two weighted empirical CDFs."""
    f1 = WeightedEcdf.from_sample(x1, w1)
    f2 = WeightedEcdf.from_sample(x2, w2)
    grid = np.concatenate([f1.values, f2.values])
    return float(np.max(np.abs(f1(grid) - f2(grid))))


def _bootstrap_ks_null(pool_w, n1, n2, n_boot, gen, bins: int = 2048):
    """Null KS statistics: both samples redrawn from the pooled weighted law.

    The pooled support (already sorted) is aggregated into at most `bins`
    contiguous cells, so each resample is one multinomial plus a cumsum;
    the induced discretization of the null statistic is below 1/bins.
    """
    k = pool_w.size
    if k > bins:
        edges = np.linspace(0, k, bins + 1).astype(int)
        cell_w = np.add.reduceat(pool_w, edges[:-1])
    else:
        cell_w = pool_w
    cell_w = np.maximum(cell_w, 0)
    cell_w = cell_w / cell_w.sum()
    c1 = gen.multinomial(n1, cell_w, size=n_boot)
    c2 = gen.multinomial(n2, cell_w, size=n_boot)
    e1 = np.cumsum(c1, axis=1) * (1.0 / n1)
    e2 = np.cumsum(c2, axis=1) * (1.0 / n2)
    return np.max(np.abs(e1 - e2), axis=1)


def ks_two_sample(x1, x2, w1=None, w2=None, n_boot: int = 1000, rng=0):
    """Weighted two-sample KS statistic with a pooled-bootstrap p-value.

    The statistic is the sup-distance between the weighted ECDFs.  Under
    the null the pooled weighted empirical law is resampled; resample
    sizes are the rounded ESS of each sample, which keeps the test
    calibrated when weights are uneven.
    """
    gen = as_generator(rng)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.size == 0 or x2.size == 0:
        raise EmptySample("ks_two_sample needs nonempty samples")
    stat = ks_statistic(x1, x2, w1, w2)
    n1 = int(round(ess(w1))) if w1 is not None else x1.size
    n2 = int(round(ess(w2))) if w2 is not None else x2.size
    n1, n2 = max(n1, 2), max(n2, 2)
    pool = np.concatenate([x1, x2])
    pw = np.concatenate(
        [
            (np.full(x1.shape, 1.0 / x1.size) if w1 is None else np.asarray(w1, float) / np.sum(w1)),
            (np.full(x2.shape, 1.0 / x2.size) if w2 is None else np.asarray(w2, float) / np.sum(w2)),
        ]
    )
    pw /= pw.sum()
    order = np.argsort(pool, kind="stable")
    null = _bootstrap_ks_null(pw[order], n1, n2, n_boot, gen)
    p = (1.0 + np.sum(null >= stat - 1e-15)) / (n_boot + 1.0)
    return stat, float(p)


def ks_one_sample(x, cdf, weights=None):
    """Weighted one-sample KS against an exact CDF callable; asymptotic p-value
    uses the ESS as the effective sample count."""
    f = WeightedEcdf.from_sample(x, weights)
    target = np.asarray(cdf(f.values), dtype=float)
    cw = np.concatenate([[0.0], f.cumweights])
    d_hi = np.max(np.abs(cw[1:] - target))
    d_lo = np.max(np.abs(cw[:-1] - target))
    stat = float(max(d_hi, d_lo))
    n_eff = ess(weights) if weights is not None else f.values.size
    return stat, kolmogorov_sf(np.sqrt(n_eff) * stat)


def tv_discrete(p, q) -> float:
    """Total variation (1/2) sum |p - q| between two pmf tables.

    Tables are dicts keyed by support points (any hashable) or equal-length
    arrays over a common support enumeration.
    """
    if isinstance(p, dict) or isinstance(q, dict):
        keys = set(p) | set(q)
        return 0.5 * float(sum(abs(float(p.get(k, 0.0)) - float(q.get(k, 0.0))) for k in keys))
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * float(np.sum(np.abs(p - q)))


def chi2_gof(counts, probs):
    """Pearson chi-square goodness-of-fit; p-value via the regularized
    upper incomplete gamma Q(df/2, stat/2)."""
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    n = counts.sum()
    expected = n * probs
    keep = expected > 0
    stat = float(np.sum((counts[keep] - expected[keep]) ** 2 / expected[keep]))
    df = int(keep.sum()) - 1
    return stat, float(gammaincc(df / 2.0, stat / 2.0))


def bootstrap_se(values, weights=None, n_boot: int = 200, rng=0):
    """Bootstrap standard error of the (weighted) mean."""
    gen = as_generator(rng)
    v = np.asarray(values, dtype=float)
    n = v.size
    means = np.empty(n_boot)
    if weights is None:
        for b in range(n_boot):
            idx = gen.integers(0, n, size=n)
            means[b] = v[idx].mean()
        est = v.mean()
    else:
        w = np.asarray(weights, dtype=float)
        for b in range(n_boot):
            idx = gen.integers(0, n, size=n)
            means[b] = np.average(v[idx], weights=w[idx])
        est = np.average(v, weights=w)
    return float(est), float(means.std(ddof=1))
