"""The exact identities behind the two-layer Gibbs construction.

The push-block kernels preserve local Gibbs weights because of a pair of
summation identities on length-2 signatures (and their integral analogues
for the log-gamma weights).  The geometric versions hold exactly in rational
arithmetic; the log-gamma versions are verified by tanh-sinh quadrature and
by a pointwise change of variables.
"""

from fractions import Fraction

import numpy as np

from striplab import gibbs

print("geometric skew-Cauchy identity, exact rationals:")
lam, mu = (3, 0), (2, 1)
a, b = Fraction(1, 2), Fraction(1, 3)
lhs, rhs = gibbs.check_cauchy_geometric(lam, mu, a, b)
print(f"  lam={lam} mu={mu} a={a} b={b}:  lhs = rhs = {lhs}  (equal: {lhs == rhs})")

lhs, rhs = gibbs.check_cauchy_geometric((1, 0), (0, 0), Fraction(99, 100), Fraction(1, 1))
print(f"  near the radius of convergence ab = 0.99: equal: {lhs == rhs}")

print("\ngeometric skew-Littlewood identity:")
for kappa, aa, cc in [((0, 0), Fraction(1, 3), Fraction(1)), ((5, -2), Fraction(2, 5), Fraction(2))]:
    lhs, rhs = gibbs.check_littlewood_geometric(kappa, aa, cc)
    print(f"  kappa={kappa} a={aa} c={cc}:  equal: {lhs == rhs}")

print("\nterm-by-term bijection (the change of variables behind the identity):")
lam, mu = (3, 0), (2, 1)
pairs = 0
for k1 in range(max(lam[1], mu[1]), min(lam[0], mu[0]) + 1):
    for k2 in range(-12, min(lam[1], mu[1]) + 1):
        wl = gibbs.wt_cauchy_kappa(lam, mu, (k1, k2), a, b)
        if wl == 0:
            continue
        pi = gibbs.cauchy_bijection_pairs(lam, mu, (k1, k2))
        assert wl == gibbs.wt_cauchy_pi(lam, mu, pi, a, b)
        pairs += 1
print(f"  {pairs} terms mapped with equal weights")

print("\nlog-gamma analogues by quadrature:")
lhs, rhs, rel = gibbs.check_cauchy_lg((1.3, -0.4), (0.2, -1.0), 0.7, 0.9)
print(f"  Cauchy:     lhs = {lhs:.10e}, rel err = {rel:.2e}")
lhs, rhs, rel = gibbs.check_littlewood_lg((1.5, -0.7), 0.4, 0.8)
print(f"  Littlewood: lhs = {lhs:.10e}, rel err = {rel:.2e}")

rng = np.random.default_rng(0)
pts = rng.uniform(-2, 2, size=(1000, 2))
la = gibbs.log_wt_cauchy_kappa_lg((0.5, -0.3), (0.9, -1.1), pts[:, 0], pts[:, 1], 0.8, 1.1)
p1, p2 = gibbs.cauchy_lg_substitution((0.5, -0.3), (0.9, -1.1), pts[:, 0], pts[:, 1])
lb = gibbs.log_wt_cauchy_pi_lg((0.5, -0.3), (0.9, -1.1), p1, p2, 0.8, 1.1)
print(f"  pointwise substitution identity, max |log lhs - log rhs| = {np.max(np.abs(la - lb)):.2e}")

print("\nkernel normalization and weight preservation:")
s = gibbs.kernel_normalization_geom("bulk", ((3, 0), (2, 1)), Fraction(2, 5), Fraction(1, 2))
print(f"  geometric bulk kernel total mass (exact): {s}")
res = gibbs.weight_preservation_geom("bulk", ((3, 0), (2, 1)), Fraction(2, 5), Fraction(1, 2), (4, 1))
print(f"  geometric bulk preservation residual (exact): {res}")
kern = gibbs.KernelBulkLG((0.5, -0.5), (0.2, -1.0), 0.8, 0.9)
print(f"  log-gamma bulk kernel integrates to {gibbs.kernel_normalization_lg(kern):.12f}")
r = gibbs.weight_preservation_lg("bulk", ((0.5, -0.5), (0.2, -1.0)), 0.8, 0.9, (1.1, 0.0))
print(f"  log-gamma bulk preservation relative residual: {r:.2e}")
