import math
from fractions import Fraction

import numpy as np
import pytest

from striplab import gibbs
from striplab.distributions import inv_gamma_cdf
from striplab.errors import ParamDomain, ShockRegion
from striplab.exactmath import geom_series_finite
from striplab.params import geometric_params, log_gamma_params
from striplab.paths import DownRightPath, Step, horizontal_path
from striplab.quadrature import tanh_sinh
from striplab.rng import RngStream
from striplab.stats import ks_one_sample

R, D = Step.RIGHT, Step.DOWN


# ---------------------------------------------------------------------------
# two-layer weights


def test_two_layer_weight_trivial_config():
    p = geometric_params(3, 0.5, 1.0, 1.0)
    cfg = gibbs.TwoLayerConfig(horizontal_path(3), np.zeros(4), np.zeros(4))
    assert gibbs.log_wt_two_layer(cfg, p) == 0.0


def test_two_layer_weight_translation_invariant():
    gen = RngStream(0).generator
    pg = geometric_params(3, 0.5, 0.9, 0.8)
    pl = log_gamma_params(3, 1.0, 0.4, 0.7)
    path = DownRightPath((1, 1), (R, D, R))
    for _ in range(100):
        lam2 = np.sort(gen.integers(0, 6, size=4))[::-1].astype(float)
        lam1 = lam2 + gen.integers(0, 5, size=4)
        cfg = gibbs.TwoLayerConfig(path, lam1, lam2)
        shifted = gibbs.TwoLayerConfig(path, lam1 + 7, lam2 + 7)
        assert gibbs.log_wt_two_layer(cfg, pg) == gibbs.log_wt_two_layer(shifted, pg)
        lam1r = gen.normal(size=4)
        lam2r = gen.normal(size=4)
        cfg = gibbs.TwoLayerConfig(path, lam1r, lam2r)
        shifted = gibbs.TwoLayerConfig(path, lam1r + 7.5, lam2r + 7.5)
        # real-valued shifts are exact up to float rounding of the differences
        assert abs(gibbs.log_wt_two_layer(cfg, pl) - gibbs.log_wt_two_layer(shifted, pl)) < 1e-9


def test_two_layer_weight_zero_on_solid_decrease():
    p = geometric_params(2, 0.5, 0.9, 0.9)
    lam1 = np.array([2.0, 1.0, 3.0])  # first-layer decrease along a Right step
    lam2 = np.array([0.0, 0.0, 0.0])
    cfg = gibbs.TwoLayerConfig(horizontal_path(2), lam1, lam2)
    assert gibbs.log_wt_two_layer(cfg, p) == -math.inf


# ---------------------------------------------------------------------------
# geometric Cauchy / Littlewood


def test_cauchy_geometric_spec_example():
    lhs, rhs = gibbs.check_cauchy_geometric((1, 0), (0, 0), Fraction(1, 2), Fraction(1, 2))
    assert lhs == rhs


def test_cauchy_geometric_random_exact():
    gen = RngStream(1).generator
    for _ in range(100):
        l2, m2 = gen.integers(-6, 6, size=2)
        lam = (int(l2 + gen.integers(0, 6)), int(l2))
        mu = (int(m2 + gen.integers(0, 6)), int(m2))
        a = Fraction(int(gen.integers(1, 10)), 10)
        b = Fraction(int(gen.integers(1, 10)), 10)
        lhs, rhs = gibbs.check_cauchy_geometric(lam, mu, a, b)
        assert lhs == rhs


def test_cauchy_geometric_near_radius():
    lhs, rhs = gibbs.check_cauchy_geometric((1, 0), (0, 0), Fraction(99, 100), Fraction(1, 1))
    assert lhs == rhs  # ab = 0.99, still exactly equal


def test_cauchy_brute_force_agrees():
    lam, mu = (3, 0), (2, 1)
    a, b = Fraction(1, 2), Fraction(1, 3)
    lhs, _ = gibbs.check_cauchy_geometric(lam, mu, a, b)
    partial, tail = gibbs.cauchy_lhs_brute(lam, mu, a, b, 60)
    assert abs(lhs - partial) <= tail


def test_cauchy_term_bijection():
    lam, mu = (3, 0), (2, 1)
    a, b = Fraction(2, 5), Fraction(1, 2)
    count = 0
    for k1 in range(max(lam[1], mu[1]), min(lam[0], mu[0]) + 1):
        for k2 in range(-15, min(lam[1], mu[1]) + 1):
            w = gibbs.wt_cauchy_kappa(lam, mu, (k1, k2), a, b)
            if w == 0:
                continue
            pi = gibbs.cauchy_bijection_pairs(lam, mu, (k1, k2))
            assert gibbs.wt_cauchy_pi(lam, mu, pi, a, b) == w
            count += 1
    assert count > 10


def test_littlewood_geometric_examples():
    lhs, rhs = gibbs.check_littlewood_geometric((0, 0), Fraction(1, 3), Fraction(1))
    assert lhs == rhs
    lhs, rhs = gibbs.check_littlewood_geometric((5, -2), Fraction(2, 5), Fraction(2))
    assert lhs == rhs  # ac = 0.8 < 1


def test_littlewood_degenerate_c_zero():
    kappa = (3, -1)
    lhs, rhs = gibbs.check_littlewood_geometric(kappa, Fraction(2, 5), Fraction(0))
    assert lhs == rhs == Fraction(2, 5) ** (kappa[0] - kappa[1])


def test_littlewood_brute_force_and_bijection():
    kappa = (4, -2)
    a, c = Fraction(2, 5), Fraction(3, 2)
    lhs, _ = gibbs.check_littlewood_geometric(kappa, a, c)
    partial, tail = gibbs.littlewood_lhs_brute(kappa, a, c, 80)
    assert abs(lhs - partial) <= tail
    for l1 in range(kappa[1], kappa[0] + 1):
        for l2 in range(kappa[1] - 10, kappa[1] + 1):
            w = gibbs.wt_littlewood_lambda(kappa, (l1, l2), c, a)
            if w == 0:
                continue
            pi = gibbs.littlewood_bijection_pairs(kappa, (l1, l2))
            assert gibbs.wt_littlewood_pi(kappa, pi, c, a) == w


def test_cauchy_domain_guard():
    with pytest.raises(ParamDomain):
        gibbs.check_cauchy_geometric((0, 0), (0, 0), Fraction(2), Fraction(1))


# ---------------------------------------------------------------------------
# log-gamma Cauchy / Littlewood


def test_cauchy_lg_quadrature_and_symmetry():
    lhs, rhs, rel = gibbs.check_cauchy_lg((0.0, 0.0), (0.0, 0.0), 1.0, 1.0)
    assert rel < 1e-8
    # alpha = beta: swapping lam and mu leaves the common value unchanged
    v1, _, _ = gibbs.check_cauchy_lg((0.7, -0.2), (0.1, -0.9), 0.8, 0.8)
    v2, _, _ = gibbs.check_cauchy_lg((0.1, -0.9), (0.7, -0.2), 0.8, 0.8)
    assert abs(v1 - v2) / abs(v1) < 1e-9


def test_cauchy_lg_pointwise_substitution():
    gen = RngStream(2).generator
    lam, mu = (0.5, -0.3), (0.9, -1.1)
    alpha, beta = 0.8, 1.1
    pts = gen.uniform(-2, 2, size=(1000, 2))
    la = gibbs.log_wt_cauchy_kappa_lg(lam, mu, pts[:, 0], pts[:, 1], alpha, beta)
    p1, p2 = gibbs.cauchy_lg_substitution(lam, mu, pts[:, 0], pts[:, 1])
    lb = gibbs.log_wt_cauchy_pi_lg(lam, mu, p1, p2, alpha, beta)
    assert np.max(np.abs(la - lb)) < 1e-12


def test_littlewood_lg_quadrature_translation_and_pointwise():
    lhs, rhs, rel = gibbs.check_littlewood_lg((0.0, 0.0), 1.0, 1.0)
    assert rel < 1e-8
    a1, _, _ = gibbs.check_littlewood_lg((0.8, -0.4), 0.6, 0.9)
    a2, _, _ = gibbs.check_littlewood_lg((0.8 + 3.0, -0.4 + 3.0), 0.6, 0.9)
    assert abs(a1 - a2) / abs(a1) < 1e-8  # both sides translation invariant
    gen = RngStream(3).generator
    pts = gen.uniform(-2, 2, size=(1000, 2))
    kap = (0.8, -0.5)
    la = gibbs.log_wt_littlewood_lambda_lg(kap, pts[:, 0], pts[:, 1], 0.6, 0.9)
    q1, q2 = gibbs.littlewood_lg_substitution(kap, pts[:, 0], pts[:, 1])
    lb = gibbs.log_wt_littlewood_pi_lg(kap, q1, q2, 0.6, 0.9)
    assert np.max(np.abs(la - lb)) < 1e-12


# ---------------------------------------------------------------------------
# kernels


def test_geom_bulk_kernel_normalizes_exactly():
    gen = RngStream(4).generator
    for _ in range(10):
        l2 = int(gen.integers(-4, 4))
        lam = (l2 + int(gen.integers(0, 5)), l2)
        mu2 = int(gen.integers(lam[1] - 3, lam[0] + 1))
        mu = (int(gen.integers(max(mu2, lam[1]), lam[0] + 4)), mu2)
        a = Fraction(int(gen.integers(1, 10)), 10)
        b = Fraction(int(gen.integers(1, 10)), 10)
        assert gibbs.kernel_normalization_geom("bulk", (lam, mu), a, b) == 1
    assert gibbs.kernel_normalization_geom("left", (2, -1), Fraction(1, 3), Fraction(3, 2)) == 1


def test_geom_bulk_first_layer_marginal_exact():
    # sum over pi2 of the kernel pmf = (1-ab)(ab)^(pi1 - max(lam1, mu1))
    lam, mu = (3, 0), (2, 1)
    a, b = Fraction(2, 5), Fraction(1, 2)
    ab = a * b
    for p1 in range(3, 10):
        total = sum(
            gibbs.kernel_bulk_geom_pmf((p1, p2), lam, mu, a, b)
            for p2 in range(max(lam[1], mu[1]), min(lam[0], mu[0]) + 1)
        )
        assert total == (1 - ab) * ab ** (p1 - 3)


def test_geom_left_first_layer_marginal_exact():
    kappa = (2, -1)
    a, c1 = Fraction(1, 3), Fraction(3, 2)
    ac = a * c1
    for p1 in range(2, 9):
        total = sum(gibbs.kernel_left_geom_pmf((p1, p2), kappa, c1, a) for p2 in range(-1, 3))
        assert total == (1 - ac) * ac ** (p1 - 2)


def test_geom_kernel_translation_invariance():
    lam, mu = (3, 0), (2, 1)
    a, b = Fraction(2, 5), Fraction(1, 2)
    x = 5
    for p1 in range(3, 8):
        for p2 in range(1, 3):
            lhs = gibbs.kernel_bulk_geom_pmf((p1, p2), lam, mu, a, b)
            rhs = gibbs.kernel_bulk_geom_pmf(
                (p1 + x, p2 + x), (lam[0] + x, lam[1] + x), (mu[0] + x, mu[1] + x), a, b
            )
            assert lhs == rhs


def test_geom_samplers_match_pmf():
    lam, mu = (3, 0), (2, 1)
    a, b = 0.4, 0.5
    n = 200000
    p1, p2 = gibbs.sample_kernel_bulk_geom(
        np.full(n, lam[0]), np.full(n, lam[1]), np.full(n, mu[0]), np.full(n, mu[1]), a, b, RngStream(5), size=n
    )
    from striplab.stats import chi2_gof

    # joint check via the factorized pmf on a small box
    af, bf = Fraction(2, 5), Fraction(1, 2)
    box1 = range(3, 12)
    box2 = range(1, 3)
    counts = []
    probs = []
    for q1 in box1:
        for q2 in box2:
            counts.append(int(np.sum((p1 == q1) & (p2 == q2))))
            probs.append(float(gibbs.kernel_bulk_geom_pmf((q1, q2), lam, mu, af, bf)))
    counts.append(n - sum(counts))
    probs.append(1.0 - sum(probs))
    stat, pv = chi2_gof(np.array(counts), np.array(probs))
    assert pv > 0.01


def test_lg_kernels_normalize():
    kern = gibbs.KernelBulkLG((0.5, -0.5), (0.2, -1.0), 0.8, 0.9)
    assert abs(gibbs.kernel_normalization_lg(kern) - 1.0) < 1e-6
    kernl = gibbs.KernelLeftLG((0.7, -0.4), 0.5, 1.0)
    assert abs(gibbs.kernel_normalization_lg(kernl) - 1.0) < 1e-6


def test_lg_left_first_layer_marginal_ks():
    # exp(pi1 - kappa1) ~ InvGamma(alpha + u) on 1e5 draws
    kern = gibbs.KernelLeftLG((0.7, -0.4), 0.5, 1.0)
    p1, _ = kern.sample(RngStream(6), size=100000)
    stat, pv = ks_one_sample(np.exp(p1 - 0.7), lambda x: inv_gamma_cdf(1.5, x))
    assert pv > 0.01


def test_lg_bulk_first_layer_is_log_s_plus_inv_gamma():
    lam, mu = (0.5, -0.5), (0.2, -1.0)
    kern = gibbs.KernelBulkLG(lam, mu, 0.8, 0.9)
    p1, _ = kern.sample(RngStream(7), size=100000)
    s = np.logaddexp(lam[0], mu[0])
    stat, pv = ks_one_sample(np.exp(p1 - s), lambda x: inv_gamma_cdf(1.7, x))
    assert pv > 0.01


def test_lg_kernel_translation_invariance():
    lam, mu = (0.5, -0.5), (0.2, -1.0)
    k0 = gibbs.KernelBulkLG(lam, mu, 0.8, 0.9)
    k1 = gibbs.KernelBulkLG((lam[0] + 2.0, lam[1] + 2.0), (mu[0] + 2.0, mu[1] + 2.0), 0.8, 0.9)
    for pi in [(1.0, 0.0), (0.3, -0.8)]:
        assert abs(k0.logpdf(pi) - k1.logpdf((pi[0] + 2.0, pi[1] + 2.0))) < 1e-9


# ---------------------------------------------------------------------------
# weight preservation


def test_weight_preservation_geometric_exact():
    gen = RngStream(8).generator
    for _ in range(50):
        l2 = int(gen.integers(-4, 4))
        lam = (l2 + int(gen.integers(0, 5)), l2)
        mu2 = int(gen.integers(lam[1] - 3, lam[0] + 1))
        mu = (int(gen.integers(max(mu2, lam[1]), lam[0] + 4)), mu2)
        a = Fraction(int(gen.integers(1, 10)), 10)
        b = Fraction(int(gen.integers(1, 10)), 10)
        pi = (
            max(lam[0], mu[0]) + int(gen.integers(0, 5)),
            int(gen.integers(max(lam[1], mu[1]), min(lam[0], mu[0]) + 1)),
        )
        assert gibbs.weight_preservation_geom("bulk", (lam, mu), a, b, pi) == 0
        kappa = lam
        pi = (kappa[0] + int(gen.integers(0, 5)), int(gen.integers(kappa[1], kappa[0] + 1)))
        c = Fraction(int(gen.integers(1, 10)), 10)
        assert gibbs.weight_preservation_geom("left", kappa, a, c, pi) == 0


def test_weight_preservation_lg():
    res = gibbs.weight_preservation_lg("bulk", ((0.5, -0.5), (0.2, -1.0)), 0.8, 0.9, (1.1, 0.0))
    assert res < 1e-6
    res = gibbs.weight_preservation_lg("left", (0.7, -0.4), 1.0, 0.5, (1.2, 0.1))
    assert res < 1e-6


# ---------------------------------------------------------------------------
# partition functions


def test_partition_z_path_independent_and_bounded():
    p = geometric_params(3, (0.3, 0.25, 0.2), 0.9, 0.9)
    paths = [
        horizontal_path(3),
        DownRightPath((1, 1), (D, R, R)),
        DownRightPath((1, 1), (R, D, R)),
        DownRightPath((2, 2), (D, D, R)),
        DownRightPath((2, 2), (R, D, D)),
    ]
    vals = [gibbs.partition_z_geometric(p, pp) for pp in paths]
    for v in vals[1:]:
        assert abs(v - vals[0]) / vals[0] < 1e-12
    assert vals[0] <= gibbs.partition_z_upper_bound(p)
    zmat = gibbs.partition_z_geometric_matrix(p, paths[0], 200)
    assert zmat <= vals[0] * (1 + 1e-12)
    assert abs(zmat - vals[0]) / vals[0] < 1e-10


def test_partition_z_exact_rational():
    p = geometric_params(2, 0.5, 0.5, 0.5)
    z = gibbs.partition_z_geometric(
        p, exact_values=((Fraction(1, 2), Fraction(1, 2)), Fraction(1, 2), Fraction(1, 2))
    )
    assert isinstance(z, Fraction)
    zf = gibbs.partition_z_geometric(p)
    assert abs(float(z) - zf) < 1e-12


def test_partition_z_shock_raises():
    p = geometric_params(2, 0.4, 1.5, 1.5)
    with pytest.raises(ShockRegion):
        gibbs.partition_z_geometric(p)
    pl = log_gamma_params(1, 1.0, -0.6, 0.1)
    with pytest.raises(ShockRegion):
        gibbs.partition_z_lg_n1(pl)


def test_partition_z_lg_n1_closed_form():
    p = log_gamma_params(1, 1.0, 0.5, 0.5)
    val, closed = gibbs.partition_z_lg_n1(p)
    assert closed == pytest.approx(math.pi / 4, rel=1e-12)  # Gamma(1)Gamma(1.5)^2
    assert abs(val - closed) / closed < 1e-8


def test_zero_mode_gamma_identity_quadrature():
    # int exp(-(u+v)D - exp(-D) S) dD = Gamma(u+v) S^-(u+v)
    from scipy.special import gammaln

    for uv, s in [(1.0, 1.0), (0.7, 2.5), (2.3, 0.4)]:
        val = tanh_sinh(
            lambda d: np.exp(-uv * d - np.exp(-d) * s),
            -40.0 / uv - math.log(s),
            40.0 - math.log(s),
            tol=1e-12,
        )
        closed = math.exp(gammaln(uv) - uv * math.log(s))
        assert abs(val - closed) / closed < 1e-8


# ---------------------------------------------------------------------------
# two-layer chain coupling


def test_two_layer_first_layer_couples_with_dynamics():
    from striplab.lpp import LppState, lpp_tau1_step
    from striplab.lg import LgState, lg_tau1_step

    pg = geometric_params(3, 0.4, 0.9, 0.8)
    ph = horizontal_path(3)
    for trial in range(20):
        lam1 = np.array([3.0, 4, 4, 6])
        lam2 = np.array([0.0, 1, 2, 2])
        cfg = gibbs.TwoLayerConfig(ph, lam1, lam2)
        out = gibbs.two_layer_tau1_step(cfg, pg, RngStream(100 + trial), RngStream(900 + trial))
        dyn = lpp_tau1_step(LppState(ph, lam1.copy()), pg, RngStream(100 + trial))
        assert np.array_equal(out.lam1, dyn.values.astype(float))
        assert np.all(out.lam1 >= out.lam2)  # stays in the signature cone
    pl = log_gamma_params(3, 1.0, 0.5, 0.7)
    for trial in range(10):
        lam1 = np.array([0.5, 0.7, 1.0, 1.2])
        lam2 = np.array([-0.5, -0.2, 0.0, 0.3])
        cfg = gibbs.TwoLayerConfig(ph, lam1, lam2)
        out = gibbs.two_layer_tau1_step(cfg, pl, RngStream(200 + trial), RngStream(800 + trial))
        dyn = lg_tau1_step(LgState(ph, lam1.copy()), pl, RngStream(200 + trial))
        assert np.allclose(out.lam1, dyn.values, atol=1e-12, rtol=0)


def test_trunc_geom_sampler_all_ratio_regimes():
    from striplab.gibbs import _sample_trunc_geom, sample_kernel_left_geom
    from striplab.stats import chi2_gof

    gen = RngStream(30).generator
    # ratio > 1 (left/right kernels with c < a)
    lo, hi, ratio = -1, 4, 1.8
    draws = _sample_trunc_geom(ratio, np.full(200000, lo), np.full(200000, hi), gen)
    total = sum(ratio**k for k in range(hi - lo + 1))
    probs = np.array([ratio**k / total for k in range(hi - lo + 1)])
    _, p = chi2_gof(np.bincount(draws - lo, minlength=hi - lo + 1), probs)
    assert p > 0.01
    # ratio == 1 (uniform)
    draws = _sample_trunc_geom(1.0, np.full(100000, 2), np.full(100000, 5), gen)
    _, p = chi2_gof(np.bincount(draws - 2, minlength=4), np.full(4, 0.25))
    assert p > 0.01
    # joint left-kernel law at a / c1 > 1 against the exact pmf
    k1, k2 = 2, -1
    p1, p2 = sample_kernel_left_geom(
        np.full(200000, k1), np.full(200000, k2), 0.3, 0.5, RngStream(31), size=200000
    )
    af, cf = Fraction(1, 2), Fraction(3, 10)
    counts, probs = [], []
    for q1 in range(k1, k1 + 8):
        for q2 in range(k2, k1 + 1):
            counts.append(int(np.sum((p1 == q1) & (p2 == q2))))
            probs.append(float(gibbs.kernel_left_geom_pmf((q1, q2), (k1, k2), cf, af)))
    counts.append(200000 - sum(counts))
    probs.append(1.0 - sum(probs))
    _, p = chi2_gof(np.array(counts), np.array(probs))
    assert p > 0.01


def test_geom_series_helper_edge_cases():
    assert geom_series_finite(Fraction(1), 2, 5) == 4
    assert geom_series_finite(Fraction(0), -2, 3) == 1
    assert geom_series_finite(Fraction(1, 2), 5, 2) == 0
