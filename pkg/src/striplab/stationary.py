"""Claimed stationary measures for both strip models.

The target laws are exponential reweightings of a pair of independent
increment random walks:

  geometric:  weight (c1 c2)^(max_j (L2(j)-L1(j-1))) * c2^(L1(N)-L2(N))
  log-gamma:  weight (sum_j exp(L2(j)-L1(j-1)))^-(u+v) * exp(-v(L1(N)-L2(N)))

Samplers are self-normalized importance sampling with proposals that
absorb as much of the weight as the parameter region allows, an exact
small-N enumerator for the geometric law, and the zero-mode sampler that
re-attaches the gap between the two layers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .distributions import sample_geom, sample_log_inv_gamma
from .errors import DegenerateWeights, ParamDomain, ShockRegion, TruncationTooSmall
from .params import Model, ModelParams
from .rng import as_generator
from .stats import ess_from_log


# ---------------------------------------------------------------------------
# reweighting functionals


def _l1_prev(l1: np.ndarray) -> np.ndarray:
    """(L1(0), ..., L1(N-1)) with L1(0) = 0, vectorized over leading axes."""
    return np.concatenate([np.zeros(l1.shape[:-1] + (1,)), l1[..., :-1]], axis=-1)


def log_v_lpp(l1, l2, c1: float, c2: float):
    """log of (c1 c2)^(max_j (L2(j)-L1(j-1))) * c2^(L1(N)-L2(N))."""
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    gap = np.max(l2 - _l1_prev(l1), axis=-1)
    return gap * math.log(c1 * c2) + (l1[..., -1] - l2[..., -1]) * math.log(c2)


def log_v_lgg(l1, l2, u: float, v: float):
    """log of (sum_j exp(L2(j)-L1(j-1)))^-(u+v) * exp(-v(L1(N)-L2(N)))."""
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    d = l2 - _l1_prev(l1)
    m = np.max(d, axis=-1, keepdims=True)
    lse = m[..., 0] + np.log(np.sum(np.exp(d - m), axis=-1))
    return -(u + v) * lse - v * (l1[..., -1] - l2[..., -1])


# ---------------------------------------------------------------------------
# importance sampling


@dataclass(frozen=True)
class WeightedWalks:
    """n weighted samples of the walk pair; walks are cumulative, L(0)=0 implied."""

    l1: np.ndarray  # (n, N)
    l2: np.ndarray  # (n, N)
    log_weights: np.ndarray  # (n,)

    @property
    def n(self) -> int:
        return self.l1.shape[0]

    def normalized_weights(self) -> np.ndarray:
        w = np.exp(self.log_weights - self.log_weights.max())
        return w / w.sum()

    def ess(self) -> float:
        return ess_from_log(self.log_weights)


def _choose_proposal(params: ModelParams) -> str:
    b = params.bulk
    c1, c2 = params.left_boundary, params.right_boundary
    if params.model is Model.GEOMETRIC_LPP:
        # tilting by c2 kills the endpoint factor, but in the shock region
        # c1*c2 > 1 it makes the residual weight's second moment infinite
        if c1 * c2 <= 1.0 and all(bj / c2 < 1.0 for bj in b):
            return "tilted"
        return "symmetric"
    if min(b) - c2 > 0:
        return "tilted"
    return "symmetric"


def sample_stationary_is(
    params: ModelParams,
    n: int,
    rng,
    proposal: str = "auto",
    ess_floor: float = 50.0,
    labels=None,
) -> WeightedWalks:
    """Importance-weighted samples targeting the stationary walk-pair law.

    proposal: 'auto' (default), 'tilted' or 'symmetric'.  labels overrides
    the horizontal-path edge labels (defaults to the bulk parameters).
    Raises DegenerateWeights when the ESS falls below ess_floor.
    """
    if n < 1:
        raise ParamDomain("need n >= 1 samples")
    gen = as_generator(rng)
    b = np.asarray(labels if labels is not None else params.bulk, dtype=float)
    c1, c2 = params.left_boundary, params.right_boundary
    if proposal == "auto":
        proposal = _choose_proposal(params)
    if params.model is Model.GEOMETRIC_LPP:
        if proposal == "tilted":
            x1 = np.stack([sample_geom(bj * c2, gen, size=n) for bj in b], axis=1)
            x2 = np.stack([sample_geom(bj / c2, gen, size=n) for bj in b], axis=1)
            l1, l2 = np.cumsum(x1, axis=1), np.cumsum(x2, axis=1)
            gap = np.max(l2 - _l1_prev(l1), axis=-1)
            logw = gap * math.log(c1 * c2)
        else:
            x1 = np.stack([sample_geom(bj, gen, size=n) for bj in b], axis=1)
            x2 = np.stack([sample_geom(bj, gen, size=n) for bj in b], axis=1)
            l1, l2 = np.cumsum(x1, axis=1), np.cumsum(x2, axis=1)
            logw = log_v_lpp(l1, l2, c1, c2)
    else:
        u, v = c1, c2
        if proposal == "tilted":
            if min(b) - v <= 0:
                raise ParamDomain("tilted log-gamma proposal needs min(alpha) - v > 0")
            x1 = np.stack([sample_log_inv_gamma(bj + v, gen, size=n) for bj in b], axis=1)
            x2 = np.stack([sample_log_inv_gamma(bj - v, gen, size=n) for bj in b], axis=1)
            l1, l2 = np.cumsum(x1, axis=1), np.cumsum(x2, axis=1)
            d = l2 - _l1_prev(l1)
            m = np.max(d, axis=-1, keepdims=True)
            logw = -(u + v) * (m[..., 0] + np.log(np.sum(np.exp(d - m), axis=-1)))
        else:
            x1 = np.stack([sample_log_inv_gamma(bj, gen, size=n) for bj in b], axis=1)
            x2 = np.stack([sample_log_inv_gamma(bj, gen, size=n) for bj in b], axis=1)
            l1, l2 = np.cumsum(x1, axis=1), np.cumsum(x2, axis=1)
            logw = log_v_lgg(l1, l2, u, v)
    out = WeightedWalks(l1, l2, logw)
    if out.ess() < ess_floor:
        raise DegenerateWeights(f"ESS {out.ess():.1f} below floor {ess_floor}")
    return out


# ---------------------------------------------------------------------------
# exact enumeration (geometric, small N)


@dataclass(frozen=True)
class PmfTable:
    """pmf of the L1 walk on the truncated increment box [0, M]^N."""

    table: dict  # L1 tuple -> probability
    tail_bound: float
    trunc: int

    def marginal(self, j: int) -> dict:
        """pmf of L1(j) (1-based coordinate)."""
        out: dict = {}
        for l1, p in self.table.items():
            k = l1[j - 1]
            out[k] = out.get(k, 0) + p
        return out


def _tail_majorant(params: ModelParams):
    """A pointwise upper bound Vbar >= V whose weight w = Vbar * P(walks)
    contracts by a factor < 1 whenever any single increment grows by one.

    Shock region (q = c1 c2 >= 1):  Vbar = c2^L1(N) c1^L2(N); ratios b*c2, b*c1.
    Fan region (q < 1): the gap max_j(L2(j)-L1(j-1)) dominates the convex
    combination theta*L2(1) + (1-theta)*(L2(N)-L1(N-1)); choosing
    s = q^(1-theta) inside (max(q, b*c2), min(1, c2/b)) -- a nonempty window
    whenever b*c1 < 1 and b^2 < 1 -- makes every coordinate ratio < 1.

    Returns (log_vbar(l1_row, cum2, l2_last), rho_max).
    """
    b = max(params.bulk)
    c1, c2 = params.left_boundary, params.right_boundary
    q = c1 * c2
    if q >= 1.0:
        rho = max(b * c1, b * c2)

        def log_vbar(l1_row, cum2, l2_last):
            return l1_row[-1] * math.log(c2) + l2_last * math.log(c1)

        return log_vbar, rho
    lo = max(q, b * c2)
    hi = min(1.0, c2 / b)
    s = math.sqrt(lo * hi)
    theta = 1.0 - math.log(s) / math.log(q) if q != s else 0.0
    rho = max(b * c1, b * c2, b * s / c2, b * c2 / s)

    def log_vbar(l1_row, cum2, l2_last):
        l1_nm1 = l1_row[-2] if len(l1_row) > 1 else 0.0
        combo = theta * cum2[:, 0] + (1.0 - theta) * (l2_last - l1_nm1)
        return combo * math.log(q) + (l1_row[-1] - l2_last) * math.log(c2)

    return log_vbar, rho


def exact_pmf_lpp_smallN(
    params: ModelParams, trunc: int, exact: bool = False, labels=None, exact_values=None
) -> PmfTable:
    """Brute-force pmf of L1 under the geometric stationary law.

    Sums the reweighted walk-pair weights over the increment box
    [0, trunc]^(2N); the returned tail_bound is a rigorous bound on the
    probability mass outside the box, from the capped-coordinate geometric
    ratios.  exact=True carries Fractions end-to-end (small N/trunc only);
    exact_values may supply (bulk tuple, c1, c2) as Fractions directly.
    """
    if params.model is not Model.GEOMETRIC_LPP:
        raise ParamDomain("exact enumeration implemented for the geometric model")
    if params.n > 4:
        raise ParamDomain("exact enumeration supports N <= 4")
    log_vbar, rho = _tail_majorant(params)
    if rho >= 1.0:  # cannot happen under valid params; defensive
        raise TruncationTooSmall(f"tail ratio rho={rho:.3f} must be < 1 for a certified bound")
    n_strip = params.n
    m = trunc
    if exact_values is not None:
        exact = True
        b = [Fraction(x) for x in exact_values[0]]
        c1, c2 = Fraction(exact_values[1]), Fraction(exact_values[2])
    elif exact:
        b = [Fraction(x).limit_denominator(10**12) for x in (labels or params.bulk)]
        c1 = Fraction(params.left_boundary).limit_denominator(10**12)
        c2 = Fraction(params.right_boundary).limit_denominator(10**12)
    else:
        b = [float(x) for x in (labels or params.bulk)]
        c1, c2 = params.left_boundary, params.right_boundary
    q = c1 * c2

    xs = list(itertools.product(range(m + 1), repeat=n_strip))

    if exact:
        table, s_box, s_bd_bar = _enumerate_exact(xs, b, c2, q, n_strip, m, log_vbar)
    else:
        table, s_box, s_bd_bar = _enumerate_float(xs, b, c2, q, n_strip, m, log_vbar)
    # capped-coordinate bound: mass outside the box <= (boundary-slice mass
    # under the majorant) * ((1-rho)^(-2N) - 1)
    blowup = (1 / (1 - rho)) ** (2 * n_strip) - 1
    tail = s_bd_bar * blowup * (1 + 1e-12)
    if exact:
        # rational upper bound on the relative tail keeps the table exact
        rel = Fraction(tail / float(s_box) * (1 + 1e-9)).limit_denominator(10**18) + Fraction(1, 10**15)
        denom = s_box * (1 + rel)
        tail_bound = float(rel / (1 + rel))
    else:
        denom = s_box + tail
        tail_bound = tail / denom
    out = {k: v / denom for k, v in table.items()}
    return PmfTable(out, float(tail_bound), m)


def _enumerate_exact(xs, b, c2, q, n_strip, m, log_vbar):
    def walk_weight(incs):
        w = 1
        for bj, x in zip(b, incs):
            w = w * (1 - bj) * bj**x
        return w

    bf = np.array([float(x) for x in b])
    cum2 = np.array([list(itertools.accumulate(x2)) for x2 in xs], dtype=float)
    lw2 = np.array(xs, dtype=float) @ np.log(bf) + np.sum(np.log1p(-bf))
    bd2 = np.array([max(x2) == m for x2 in xs])
    table: dict = {}
    s_box = 0
    s_bd_bar = 0.0  # majorant mass of configs with some increment == m (float)
    for x1 in xs:
        l1 = tuple(itertools.accumulate(x1))
        p1 = walk_weight(x1)
        row = 0
        for x2 in xs:
            l2 = tuple(itertools.accumulate(x2))
            gap = max(l2[j] - (l1[j - 1] if j > 0 else 0) for j in range(n_strip))
            row += walk_weight(x2) * q**gap * c2 ** (l1[-1] - l2[-1])
        contrib = p1 * row
        table[l1] = contrib
        s_box += contrib
        wbar = np.exp(lw2 + log_vbar(np.array(l1, dtype=float), cum2, cum2[:, -1]))
        if max(x1) == m:
            s_bd_bar += float(p1) * float(wbar.sum())
        else:
            s_bd_bar += float(p1) * float(wbar[bd2].sum())
    return table, s_box, s_bd_bar


def _enumerate_float(xs, b, c2, q, n_strip, m, log_vbar):
    b = np.asarray(b, dtype=float)
    inc = np.array(xs, dtype=np.int64)  # (K, N)
    cum = np.cumsum(inc, axis=1)
    log_walk = inc @ np.log(b) + np.sum(np.log1p(-b))
    w2 = np.exp(log_walk)  # walk weights of every X2 block
    bd2 = inc.max(axis=1) == m
    l2_last = cum[:, -1].astype(float)
    log_q, log_c2 = math.log(q), math.log(c2)
    table = {}
    s_box = 0.0
    s_bd_bar = 0.0
    for x1, l1row, lw1 in zip(xs, cum, log_walk):
        l1_prev = np.concatenate([[0], l1row[:-1]])
        gap = np.max(cum - l1_prev, axis=1)
        wgt = w2 * np.exp(gap * log_q + (l1row[-1] - l2_last) * log_c2)
        p1 = math.exp(lw1)
        contrib = p1 * float(wgt.sum())
        table[tuple(l1row)] = contrib
        s_box += contrib
        wbar = w2 * np.exp(log_vbar(l1row.astype(float), cum.astype(float), l2_last))
        if max(x1) == m:
            s_bd_bar += p1 * float(wbar.sum())
        else:
            s_bd_bar += p1 * float(wbar[bd2].sum())
    return table, s_box, s_bd_bar


def exact_pmf_lpp_n1(params: ModelParams, labels=None) -> dict:
    """Closed form at N = 1: the L1 marginal is exactly Geom(b*c2),
    independent of c1.  Returns a callable-free dict builder helper."""
    if params.n != 1:
        raise ParamDomain("closed form is for N = 1")
    b = (labels or params.bulk)[0]
    r = b * params.right_boundary
    return {"ratio": r, "pmf": lambda k: (1 - r) * r**k}


# ---------------------------------------------------------------------------
# log-gamma density and N = 1 normalization


def pdf_lgg_smallN(params: ModelParams, l1, l2, labels=None):
    """Unnormalized log-density of the stationary walk-pair law at (L1, L2)."""
    if params.model is not Model.LOG_GAMMA:
        raise ParamDomain("log-gamma density requested for a geometric model")
    b = np.asarray(labels if labels is not None else params.bulk, dtype=float)
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    x1 = np.diff(np.concatenate([np.zeros(l1.shape[:-1] + (1,)), l1], axis=-1), axis=-1)
    x2 = np.diff(np.concatenate([np.zeros(l2.shape[:-1] + (1,)), l2], axis=-1), axis=-1)
    with np.errstate(over="ignore"):
        walk = np.sum(-b * x1 - np.exp(-x1) - gammaln(b), axis=-1) + np.sum(
            -b * x2 - np.exp(-x2) - gammaln(b), axis=-1
        )
    return walk + log_v_lgg(l1, l2, params.left_boundary, params.right_boundary)


def lgg_norm_constant_n1(params: ModelParams) -> float:
    """Closed-form normalizer E[V] = Gamma(alpha+v)Gamma(alpha+u)/Gamma(alpha)^2
    of the stationary walk-pair law at N = 1."""
    if params.n != 1:
        raise ParamDomain("closed form is for N = 1")
    alpha = params.bulk[0]
    u, v = params.left_boundary, params.right_boundary
    return math.exp(
        gammaln(alpha + v) + gammaln(alpha + u) - 2 * gammaln(alpha)
    )


# ---------------------------------------------------------------------------
# zero mode


def sample_delta(walks: WeightedWalks, params: ModelParams, rng) -> np.ndarray:
    """Sample the inter-layer gap Delta given the walk pair.

    Geometric (needs c1*c2 < 1):  Delta = max_j(L2(j)-L1(j-1)) + Geom(c1 c2).
    Log-gamma (needs u+v > 0):    exp(-Delta) * sum_j exp(L2(j)-L1(j-1))
                                  ~ Gamma(u+v).
    """
    gen = as_generator(rng)
    l1, l2 = walks.l1, walks.l2
    d = l2 - _l1_prev(l1)
    if params.model is Model.GEOMETRIC_LPP:
        q = params.left_boundary * params.right_boundary
        if q >= 1:
            raise ShockRegion(f"zero-mode law has infinite mass at c1*c2 = {q} >= 1")
        gap = np.max(d, axis=-1).astype(int)
        return gap + sample_geom(q, gen, size=walks.n)
    uv = params.left_boundary + params.right_boundary
    if uv <= 0:
        raise ShockRegion(f"zero-mode law has infinite mass at u+v = {uv} <= 0")
    m = np.max(d, axis=-1, keepdims=True)
    log_s = m[..., 0] + np.log(np.sum(np.exp(d - m), axis=-1))
    t = gen.gamma(uv, size=walks.n)
    return log_s - np.log(t)


# ---------------------------------------------------------------------------
# MCMC fallback


def metropolis_stationary(
    params: ModelParams,
    n: int,
    rng,
    sweeps: int = 600,
    step: float = 1.0,
    labels=None,
) -> WeightedWalks:
    """Single-coordinate random-walk Metropolis on the 2N increments,
    targeting the same law as sample_stationary_is; fallback for ESS
    collapse.  Runs n parallel chains for `sweeps` full sweeps and returns
    their final states as unit-weight samples."""
    gen = as_generator(rng)
    b = np.asarray(labels if labels is not None else params.bulk, dtype=float)
    nn = params.n
    c1, c2 = params.left_boundary, params.right_boundary
    geometric = params.model is Model.GEOMETRIC_LPP

    def logpost(x1, x2):
        l1, l2 = np.cumsum(x1, axis=-1), np.cumsum(x2, axis=-1)
        if geometric:
            base = np.sum((x1 + x2) * np.log(b), axis=-1)
            return base + log_v_lpp(l1, l2, c1, c2)
        with np.errstate(over="ignore"):
            base = np.sum(-b * x1 - np.exp(-x1) - b * x2 - np.exp(-x2), axis=-1)
        return base + log_v_lgg(l1, l2, c1, c2)

    if geometric:
        x = np.zeros((n, 2 * nn), dtype=np.int64)
    else:
        x = np.zeros((n, 2 * nn))
    cur = logpost(x[:, :nn], x[:, nn:])
    for _ in range(sweeps):
        for coord in range(2 * nn):
            prop = x.copy()
            if geometric:
                # symmetric integer steps; off-support proposals get -inf target
                delta = gen.integers(1, 3, size=n) * (2 * gen.integers(0, 2, size=n) - 1)
                prop[:, coord] = x[:, coord] + delta
            else:
                prop[:, coord] = x[:, coord] + step * gen.standard_normal(n)
            cand = logpost(prop[:, :nn], prop[:, nn:])
            if geometric:
                cand = np.where(prop[:, coord] < 0, -np.inf, cand)
            accept = np.log(gen.random(n)) < cand - cur
            x[accept] = prop[accept]
            cur = np.where(accept, cand, cur)
    l1 = np.cumsum(x[:, :nn], axis=1).astype(float)
    l2 = np.cumsum(x[:, nn:], axis=1).astype(float)
    return WeightedWalks(l1, l2, np.zeros(n))
