"""Intermediate-disorder limit: the log-gamma stationary law converges to the
reweighted-Brownian-pair (Hariya-Yor) law of the open KPZ equation.

With alpha = 1/2 + 1/eps and N = L/eps, the centered free-energy walks
converge to the Brownian pair weighted by (int_0^L e^{-(B1-B2)})^-(u+v);
the same large-scale limit also attracts the geometric model.
"""

import math

import numpy as np

from striplab import kpz, stationary, stats
from striplab.params import geometric_params
from striplab.rng import RngStream
from striplab.special import digamma, trigamma

u = v = 1.0
L = 1.0
n = 20_000

print("KS distance of rescaled stationary marginals to the Brownian-pair target:")
rows = kpz.convergence_diagnostic([0.2, 0.1, 0.05], u, v, L, n, RngStream(1), grid_m=512, n_boot=200)
print(f"  {'eps':>6} {'x':>6} {'KS':>8} {'p':>7}   Z(eps) vs Z_target")
for r in rows:
    print(
        f"  {r['eps']:6.2f} {r['x']:6.2f} {r['ks']:8.4f} {r['ks_p']:7.3f}   "
        f"{r['z_est']:.4f} +- {r['z_se']:.4f}  vs  {r['z_hy']:.4f} +- {r['z_hy_se']:.4f}"
    )

print("\nthe centering matches the digamma asymptotics -Psi(alpha+v) = log(eps) - eps*v + O(eps^2):")
for eps in (0.2, 0.1, 0.05):
    alpha = 0.5 + 1.0 / eps
    lhs = -digamma(alpha + v) - math.log(eps)
    print(f"  eps={eps:5.2f}: -Psi(alpha+v) - log eps = {lhs:+.5f}  vs  -eps*v = {-eps * v:+.5f}")
    assert abs(lhs + eps * v) < 2 * eps**2

print("\nuniversal large-scale limit (weights exp((u~+v~) min(B1-B2))):")
ut = vt = 1.0
eps = 0.05
nn = int(round(1 / eps))
ref = kpz.sample_universal_limit(ut, vt, n, RngStream(2), grid_m=1024)
wref = np.exp(ref.log_weights - ref.log_weights.max())

from striplab.params import log_gamma_params

alpha = 4.0
uu, vv = kpz.universal_boundary_log_gamma(ut, vt, eps, alpha)
pl = log_gamma_params(nn, alpha, uu, vv)
sl = stationary.sample_stationary_is(pl, n, RngStream(3))
scl = kpz.universal_rescale(sl, eps, -digamma(alpha), math.sqrt(trigamma(alpha)))
wl = np.exp(scl.log_weights - scl.log_weights.max())

a = 0.5
c1, c2 = kpz.universal_boundary_geometric(ut, vt, eps, a)
pg = geometric_params(nn, a, c1, c2)
sg = stationary.sample_stationary_is(pg, n, RngStream(4))
scg = kpz.universal_rescale(sg, eps, a / (1 - a), math.sqrt(a) / (1 - a))
wg = np.exp(scg.log_weights - scg.log_weights.max())

for xf in (0.5, 1.0):
    jj, jr = int(round(xf * nn)), int(round(xf * 1024))
    ks_l, _ = stats.ks_two_sample(scl.b1[:, jj], ref.b1[:, jr], w1=wl, w2=wref, n_boot=100, rng=RngStream(7))
    ks_g, _ = stats.ks_two_sample(scg.b1[:, jj], ref.b1[:, jr], w1=wg, w2=wref, n_boot=100, rng=RngStream(8))
    print(f"  x={xf}: log-gamma KS = {ks_l:.4f}, geometric KS = {ks_g:.4f}")
print("(the geometric model carries an O(sqrt(eps)) drift bias ~ 0.22 at eps = 0.05,")
print(" so its distance is visibly larger at this resolution; both decrease with eps)")
