"""Truncated matrix-product representation of the geometric stationary law.

The stationary weight of an increment configuration factorizes as
w^T (prod_i M_{x_i}[b_i]) v where the M's are truncated-Toeplitz matrices
indexed by first-layer increments and the inter-layer gap plays the role
of the matrix index.  The matrices satisfy a quadratic exchange algebra
with the boundary vectors w(n) = c1^n, v(n) = c2^n; verify_quadratic_algebra
checks every relation on a block where truncation error is certified.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParamDomain, ShockRegion, TruncationTooSmall
from .gibbs import partition_z_geometric
from .params import Model, ModelParams
from .paths import DownRightPath, Step


def build_m(x: int, a: float, trunc_k: int, direction: str = "right") -> np.ndarray:
    """M_x^->[a](n, n') = a^(2x + n - n') 1{n' >= x} 1{x + n - n' >= 0};
    the down matrix is its transpose."""
    if not 0 < a < 1:
        raise ParamDomain(f"need a in (0,1), got {a}")
    if x < 0 or trunc_k < 1:
        raise ParamDomain("need x >= 0 and trunc_k >= 1")
    n = np.arange(trunc_k)[:, None]
    n2 = np.arange(trunc_k)[None, :]
    with np.errstate(over="ignore"):
        mat = a ** (2 * x + n - n2) * (n2 >= x) * (x + n - n2 >= 0)
    if direction == "right":
        return mat
    if direction == "down":
        return mat.T.copy()
    raise ParamDomain(f"direction must be 'right' or 'down', got {direction}")


def boundary_vectors(c1: float, c2: float, trunc_k: int):
    n = np.arange(trunc_k)
    return c1**n, c2**n


def shift_matrices(trunc_k: int):
    """Lower shift S(n,n') = 1{n = n'+1} and upper shift T(n,n') = 1{n' = n+1}."""
    s = np.eye(trunc_k, k=-1)
    return s, s.T.copy()


def toeplitz_factorization(x: int, a: float, trunc_k: int) -> np.ndarray:
    """(sum_k a^k S^k) a^x T^x, truncation-exact against build_m on the
    top-left (K-x) x (K-x) block."""
    s, t = shift_matrices(trunc_k)
    geom = np.zeros((trunc_k, trunc_k))
    power = np.eye(trunc_k)
    for k in range(trunc_k):
        geom += a**k * power
        power = power @ s
    return geom @ (a**x * np.linalg.matrix_power(t, x))


def verify_quadratic_algebra(
    a: float, b: float, c1: float, c2: float, trunc_k: int, x_max: int, tol: float = 1e-10
) -> dict:
    """Max residual of every exchange-algebra relation on the certified block.

    Returns a dict relation-name -> max abs residual over x, y <= x_max,
    evaluated on the top-left (K//2) x (K//2) block.  Support bounds make
    the matrix products exact there except for geometric tails bounded by
    (a c1)^K-type factors, which are checked against tol.
    """
    for name, prod in (("ab", a * b), ("ac1", a * c1), ("ac2", a * c2), ("bc1", b * c1), ("bc2", b * c2)):
        if prod >= 1:
            raise ParamDomain(f"need {name} < 1, got {prod}")
    k = trunc_k
    block = k // 2
    if block + 2 * x_max + 2 >= k:
        raise TruncationTooSmall("trunc_k too small for the requested x_max and block")
    tail_scale = max((a * c1) ** k, (a * c2) ** k, (a * b) ** k, (b * c1) ** k, (b * c2) ** k)
    if tail_scale / (1 - max(a * b, a * c1, a * c2, b * c1, b * c2)) > tol * 1e-3:
        raise TruncationTooSmall(f"geometric tails {tail_scale:.2e} not below tol {tol}")
    res = {key: 0.0 for key in ("bulk", "left", "right", "cauchy_matrix", "littlewood_w", "littlewood_v", "eigen_w", "eigen_v", "shift")}
    w, v = boundary_vectors(c1, c2, k)
    blk = np.s_[:block, :block]

    # commutation relation for the bulk step
    for x in range(x_max + 1):
        mx = build_m(x, a, k)
        for y in range(x_max + 1):
            my_down = build_m(y, b, k, "down")
            lhs = (mx @ my_down)[blk]
            acc = np.zeros((block, block))
            for z in range(max(0, y - x), block + x_max + 1):
                acc += (build_m(z, b, k, "down") @ build_m(x - y + z, a, k))[blk]
            rhs = (a * b) ** min(x, y) * (1 - a * b) * acc
            res["bulk"] = max(res["bulk"], float(np.max(np.abs(lhs - rhs))))

    # boundary relations
    sum_w_right = np.zeros(k)
    for y in range(k):
        sum_w_right += w @ build_m(y, a, k)
    sum_down_v = np.zeros(k)
    for y in range(k):
        sum_down_v += build_m(y, a, k, "down") @ v
    for x in range(x_max + 1):
        lhs = (w @ build_m(x, a, k, "down"))[:block]
        rhs = ((a * c1) ** x * (1 - a * c1) * sum_w_right)[:block]
        res["left"] = max(res["left"], float(np.max(np.abs(lhs - rhs))))
        lhs = (build_m(x, a, k) @ v)[:block]
        rhs = ((a * c2) ** x * (1 - a * c2) * sum_down_v)[:block]
        res["right"] = max(res["right"], float(np.max(np.abs(lhs - rhs))))

    # matrix forms of the Cauchy and Littlewood identities (z ranges so that
    # both matrix indices z and z+d stay nonnegative)
    for d in range(-x_max, x_max + 1):
        acc_l = np.zeros((block, block))
        acc_r = np.zeros((block, block))
        for z in range(max(0, -d), block + 2 * x_max + 1):
            acc_l += (build_m(z, a, k, "down") @ build_m(z + d, b, k))[blk]
            acc_r += (build_m(z + d, b, k) @ build_m(z, a, k, "down"))[blk]
        res["cauchy_matrix"] = max(res["cauchy_matrix"], float(np.max(np.abs(acc_l - acc_r))))
    sum_w_down = np.zeros(k)
    for y in range(k):
        sum_w_down += w @ build_m(y, a, k, "down")
    res["littlewood_w"] = float(np.max(np.abs((sum_w_right - sum_w_down)[:block])))
    sum_right_v = np.zeros(k)
    for y in range(k):
        sum_right_v += build_m(y, a, k) @ v
    res["littlewood_v"] = float(np.max(np.abs((sum_down_v - sum_right_v)[:block])))

    # eigenrelations and the shift identity
    s, t = shift_matrices(k)
    res["eigen_w"] = float(np.max(np.abs((w @ s - c1 * w)[: k - 1])))
    res["eigen_v"] = float(np.max(np.abs((t @ v - c2 * v)[: k - 1])))
    for x in range(x_max + 1):
        for y in range(x_max + 1):
            lhs = np.linalg.matrix_power(t, x) @ np.linalg.matrix_power(s, y)
            rhs = np.linalg.matrix_power(t, max(x - y, 0)) @ np.linalg.matrix_power(s, max(y - x, 0))
            inner = k - max(x, y)
            res["shift"] = max(res["shift"], float(np.max(np.abs((lhs - rhs)[:inner, :inner]))))
    return res


def _majorant_rates(params: ModelParams):
    bmax = max(params.bulk)
    c1, c2 = params.left_boundary, params.right_boundary
    slack = min(1.05, 0.999 / max(bmax, 1e-9))
    m_fwd = max(c1, slack * bmax)
    m_bwd = max(c2, slack * bmax)
    if m_fwd * bmax >= 1 or m_bwd * bmax >= 1 or m_fwd * m_bwd >= 1:
        raise TruncationTooSmall("cannot certify truncation: majorant rates reach 1")
    return m_fwd, m_bwd


def mpa_pmf(path: DownRightPath, xs, params: ModelParams, trunc_k: int = None, tol: float = 1e-10):
    """Stationary probability of the increment configuration xs along the path,
    as w^T (prod M_{x_i}[b_i]) v / Z with a certified truncation bound.

    Returns (pmf, error_bound).  Requires the fan region c1*c2 < 1.
    """
    if params.model is not Model.GEOMETRIC_LPP:
        raise ParamDomain("matrix-product law implemented for the geometric model")
    c1, c2 = params.left_boundary, params.right_boundary
    if c1 * c2 >= 1:
        raise ShockRegion("matrix-product normalization infinite at c1*c2 >= 1")
    xs = [int(x) for x in xs]
    if len(xs) != path.n or any(x < 0 for x in xs):
        raise ParamDomain("need one nonnegative increment per path step")
    labels = path.edge_labels(params)
    dirs = ["right" if s is Step.RIGHT else "down" for s in path.steps]

    m_fwd, m_bwd = _majorant_rates(params)
    # forward/backward majorant constants: f_i(n) <= D_i m_fwd^n, g_i(n) <= C_i m_bwd^n
    d_consts = [1.0]
    for x, bi, di in zip(xs, labels, dirs):
        d = d_consts[-1]
        if di == "right":
            d_consts.append(d * (bi / m_fwd) ** x / (1 - bi * m_fwd))
        else:
            d_consts.append(d * (bi * m_fwd) ** x * m_fwd / (m_fwd - bi))
    c_consts = [1.0]
    for x, bi, di in zip(xs[::-1], labels[::-1], dirs[::-1]):
        c = c_consts[-1]
        if di == "right":
            c_consts.append(c * (bi * m_bwd) ** x * m_bwd / (m_bwd - bi))
        else:
            c_consts.append(c * (bi / m_bwd) ** x / (1 - bi * m_bwd))
    c_consts = c_consts[::-1]
    z = float(partition_z_geometric(params, path))
    sum_dc = sum(dc * cc for dc, cc in zip(d_consts, c_consts))

    def bound_at(k):
        return sum_dc * (m_fwd * m_bwd) ** k / (1 - m_fwd * m_bwd) / z

    k = trunc_k or max(60, sum(xs) + 40)
    if trunc_k is None and math.isfinite(tol):
        while bound_at(k) > tol and k < 20000:
            k = int(k * 1.5) + 1
    bound = bound_at(k)
    if bound > tol:
        raise TruncationTooSmall(f"certified bound {bound:.2e} exceeds tol {tol}")

    w, v = boundary_vectors(c1, c2, k)
    vec = w
    for x, bi, di in zip(xs, labels, dirs):
        vec = vec @ build_m(x, bi, k, di)
    numer = float(vec @ v)
    return numer / z, bound


def mpa_pmf_table(path: DownRightPath, params: ModelParams, box: int, trunc_k: int = None):
    """All increment configurations with entries in [0, box]; returns a dict
    tuple(xs) -> probability (spec's truncated-box normalization check)."""
    import itertools

    out = {}
    for xs in itertools.product(range(box + 1), repeat=path.n):
        out[xs], _ = mpa_pmf(path, xs, params, trunc_k=trunc_k, tol=math.inf)
    return out
