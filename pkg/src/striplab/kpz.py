"""Intermediate-disorder rescaling of the log-gamma stationary law, the
Hariya-Yor Brownian-pair target, the universal large-scale limit, and
convergence diagnostics.

Scalings: alpha = 1/2 + 1/eps, N = round(L/eps), and the rescaled walks
B_i(eps*j) = -j*log(eps) + L_i(j).  The target is a Brownian pair with
drifts (-v, +v) reweighted by (integral_0^L exp(-(B1-B2)) ds)^-(u+v);
the endpoint tilt of the original reweighting is absorbed by the drifts
(Cameron-Martin), so only the integral factor remains as a weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamDomain
from .params import ModelParams, log_gamma_params
from .rng import as_generator
from .special import digamma, trigamma  # noqa: F401  (re-exported: used in centering)
from .stationary import WeightedWalks, sample_stationary_is
from .stats import bootstrap_se, ks_two_sample


def intermediate_disorder_params(epsilon: float, L: float) -> ModelParams:
    """Log-gamma parameters at the intermediate-disorder point: alpha = 1/2 + 1/eps,
    N = round(L/eps); boundary parameters are attached by the caller."""
    if epsilon <= 0 or L <= 0:
        raise ParamDomain("need epsilon > 0 and L > 0")
    n = int(round(L / epsilon))
    if n < 1:
        raise ParamDomain("L/epsilon must round to at least 1")
    return n, 0.5 + 1.0 / epsilon


@dataclass(frozen=True)
class ScaledProcess:
    """Weighted rescaled walk pairs on the grid x = eps*j, j = 0..N."""

    epsilon: float
    grid: np.ndarray  # (N+1,)
    b1: np.ndarray  # (n, N+1), b1[:, 0] = 0 shifted by the centering only
    b2: np.ndarray
    log_weights: np.ndarray


def rescale_stationary(walks: WeightedWalks, epsilon: float, L: float, params: ModelParams = None) -> ScaledProcess:
    """Apply the centering -eps^-1 x log(eps): B_i(eps j) = -j log(eps) + L_i(j)."""
    n_steps = walks.l1.shape[1]
    if params is not None:
        n_expect, alpha_expect = intermediate_disorder_params(epsilon, L)
        if params.n != n_expect or abs(params.bulk[0] - alpha_expect) > 1e-9:
            raise ParamDomain(
                f"params (N={params.n}, alpha={params.bulk[0]}) inconsistent with "
                f"eps={epsilon}, L={L} (want N={n_expect}, alpha={alpha_expect})"
            )
    j = np.arange(n_steps + 1)
    centering = -j * math.log(epsilon)
    zero = np.zeros((walks.n, 1))
    b1 = np.concatenate([zero, walks.l1], axis=1) + centering
    b2 = np.concatenate([zero, walks.l2], axis=1) + centering
    return ScaledProcess(epsilon, epsilon * j, b1, b2, walks.log_weights.copy())


@dataclass(frozen=True)
class BrownianPairSample:
    """Weighted Brownian pairs on a uniform grid of [0, L]."""

    grid: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    log_weights: np.ndarray


def _brownian_pair(n: int, grid_m: int, L: float, drift1: float, drift2: float, gen):
    dx = L / grid_m
    z1 = gen.standard_normal((n, grid_m)) * math.sqrt(dx) + drift1 * dx
    z2 = gen.standard_normal((n, grid_m)) * math.sqrt(dx) + drift2 * dx
    zero = np.zeros((n, 1))
    return (
        np.concatenate([zero, np.cumsum(z1, axis=1)], axis=1),
        np.concatenate([zero, np.cumsum(z2, axis=1)], axis=1),
    )


def _log_trapezoid_exp(diff: np.ndarray, dx: float) -> np.ndarray:
    """log of the trapezoid rule applied to exp(diff) row-wise."""
    logw = np.full(diff.shape[1], math.log(dx))
    logw[0] += math.log(0.5)
    logw[-1] += math.log(0.5)
    z = diff + logw
    m = z.max(axis=1, keepdims=True)
    return m[:, 0] + np.log(np.sum(np.exp(z - m), axis=1))


def sample_hariya_yor(
    u: float, v: float, L: float, grid_m: int, n: int, rng, chunk: int = 20000
) -> BrownianPairSample:
    """Importance-weighted samples of the reweighted Brownian pair.

    Proposal: independent Brownian motions with drifts (-v, +v); residual
    log-weight -(u+v) * log trapezoid(exp(-(B1-B2))).  Sampled in chunks so
    n * grid_m never exceeds memory.
    """
    if grid_m < 2:
        raise ParamDomain("need grid_m >= 2")
    gen = as_generator(rng)
    dx = L / grid_m
    b1_parts, b2_parts, lw_parts = [], [], []
    done = 0
    while done < n:
        m = min(chunk, n - done)
        b1, b2 = _brownian_pair(m, grid_m, L, -v, v, gen)
        lw = -(u + v) * _log_trapezoid_exp(-(b1 - b2), dx)
        b1_parts.append(b1)
        b2_parts.append(b2)
        lw_parts.append(lw)
        done += m
    grid = np.linspace(0.0, L, grid_m + 1)
    return BrownianPairSample(
        grid, np.concatenate(b1_parts), np.concatenate(b2_parts), np.concatenate(lw_parts)
    )


def hariya_yor_marginals(
    u: float, v: float, L: float, grid_m: int, n: int, rng, at, chunk: int = 20000
):
    """Values of B1 at the requested x's plus log-weights, streaming chunks."""
    gen = as_generator(rng)
    dx = L / grid_m
    idx = [int(round(x / L * grid_m)) for x in at]
    vals = np.empty((n, len(idx)))
    lws = np.empty(n)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        b1, b2 = _brownian_pair(m, grid_m, L, -v, v, gen)
        lws[done : done + m] = -(u + v) * _log_trapezoid_exp(-(b1 - b2), dx)
        vals[done : done + m] = b1[:, idx]
        done += m
    return vals, lws


def sample_universal_limit(u_t: float, v_t: float, n: int, rng, grid_m: int = 1024, chunk: int = 20000):
    """Weighted pairs on [0,1] targeting the universal large-scale law:
    drifts (-v_t, +v_t), log-weight (u_t+v_t) * min over the grid of B1-B2."""
    gen = as_generator(rng)
    b1_parts, b2_parts, lw_parts = [], [], []
    done = 0
    while done < n:
        m = min(chunk, n - done)
        b1, b2 = _brownian_pair(m, grid_m, 1.0, -v_t, v_t, gen)
        lw = (u_t + v_t) * np.min(b1 - b2, axis=1)
        b1_parts.append(b1)
        b2_parts.append(b2)
        lw_parts.append(lw)
        done += m
    grid = np.linspace(0.0, 1.0, grid_m + 1)
    return BrownianPairSample(
        grid, np.concatenate(b1_parts), np.concatenate(b2_parts), np.concatenate(lw_parts)
    )


def universal_rescale(walks: WeightedWalks, epsilon: float, mean: float, sigma: float) -> ScaledProcess:
    """Large-scale rescaling onto [0, 1]: B_i(eps j) = sqrt(eps)/sigma * (L_i(j) - mean*j).

    mean/sigma are the increment mean and standard deviation of the walk's
    reference law (a/(1-a) and sqrt(a)/(1-a) for Geom(a); -digamma(alpha)
    and sqrt(trigamma(alpha)) for the log-gamma model).
    """
    n_steps = walks.l1.shape[1]
    j = np.arange(n_steps + 1)
    scale = math.sqrt(epsilon) / sigma
    zero = np.zeros((walks.n, 1))
    b1 = scale * (np.concatenate([zero, walks.l1], axis=1) - mean * j)
    b2 = scale * (np.concatenate([zero, walks.l2], axis=1) - mean * j)
    return ScaledProcess(epsilon, epsilon * j, b1, b2, walks.log_weights.copy())


def universal_boundary_geometric(u_t: float, v_t: float, epsilon: float, a: float):
    """Boundary parameters c1 = exp(-u_t sqrt(eps)/sigma), c2 = exp(-v_t sqrt(eps)/sigma)
    for the geometric model's large-scale limit."""
    sigma = math.sqrt(a) / (1.0 - a)
    return math.exp(-u_t * math.sqrt(epsilon) / sigma), math.exp(-v_t * math.sqrt(epsilon) / sigma)


def universal_boundary_log_gamma(u_t: float, v_t: float, epsilon: float, alpha: float):
    """Boundary parameters u = u_t sqrt(eps)/sigma, v = v_t sqrt(eps)/sigma."""
    sigma = math.sqrt(trigamma(alpha))
    return u_t * math.sqrt(epsilon) / sigma, v_t * math.sqrt(epsilon) / sigma


def convergence_diagnostic(
    eps_list,
    u: float,
    v: float,
    L: float,
    n: int,
    rng,
    grid_m: int = 1024,
    marg_fracs=(0.25, 0.5, 1.0),
    n_boot: int = 300,
    hy_sample=None,
):
    """Per-epsilon weighted KS distances between rescaled stationary marginals
    and the Brownian-pair target, plus normalization-constant estimates.

    Returns a list of row dicts: eps, x, ks, ks_p, z_est, z_se and the
    reference z_hy, z_hy_se (shared across rows).
    """
    gen = as_generator(rng)
    at = [f * L for f in marg_fracs]
    if hy_sample is None:
        hy_vals, hy_lw = hariya_yor_marginals(u, v, L, grid_m, n, gen, at)
    else:
        hy_vals, hy_lw = hy_sample
    hy_w = np.exp(hy_lw - hy_lw.max())
    z_hy, z_hy_se = bootstrap_se(np.exp(hy_lw), n_boot=n_boot, rng=gen)
    rows = []
    for eps in eps_list:
        n_steps, alpha = intermediate_disorder_params(eps, L)
        params = log_gamma_params(n_steps, alpha, u, v)
        walks = sample_stationary_is(params, n, gen, proposal="tilted")
        scaled = rescale_stationary(walks, eps, L, params)
        w = np.exp(scaled.log_weights - scaled.log_weights.max())
        # discrete normalization estimate: mean residual weight under the
        # tilted proposal (the weights *are* the residual factors)
        z_est, z_se = bootstrap_se(np.exp(walks.log_weights), n_boot=n_boot, rng=gen)
        for x, hy_col in zip(at, hy_vals.T):
            j = int(round(x / L * n_steps))
            ks, p = ks_two_sample(scaled.b1[:, j], hy_col, w1=w, w2=hy_w, n_boot=n_boot, rng=gen)
            rows.append(
                {
                    "eps": eps,
                    "x": x,
                    "ks": ks,
                    "ks_p": p,
                    "z_est": z_est,
                    "z_se": z_se,
                    "z_hy": z_hy,
                    "z_hy_se": z_hy_se,
                }
            )
    return rows
