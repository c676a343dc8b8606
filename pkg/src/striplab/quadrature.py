"""Tanh-sinh (double-exponential) quadrature on decay-sized windows.

Integrands here decay at least exponentially in every direction, so each
axis is integrated on a finite window sized from its decay rate: a side
with pure-exponential rate r gets padding ~ 38/r beyond the hull of the
integrand's O(1) region, which keeps the discarded analytic tail below
tolerance *and* keeps the ratio of window width to feature scale roughly
constant, so a fixed refinement depth suffices.  Double-exponentially
guarded sides behave like rate >= 1.5.  The rule refines by halving the
step until two successive levels agree.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureFailure

_T_MAX = 4.0
DE_RATE = 1.5  # conservative stand-in rate for double-exponential guards


def axis_window(hull_lo: float, hull_hi: float, rate_lo=None, rate_hi=None, tol: float = 1e-12):
    """Window (lo, hi) whose cut tails are below tol relative to the bump.

    rate_lo/rate_hi are the pure-exponential decay rates beyond the hull on
    each side; None means a double-exponential guard.
    """
    width = -math.log(tol) + 9.0
    r_lo = DE_RATE if rate_lo is None else max(float(rate_lo), 0.05)
    r_hi = DE_RATE if rate_hi is None else max(float(rate_hi), 0.05)
    return (hull_lo - width / r_lo, hull_hi + width / r_hi)


def _nodes_weights(level: int):
    """Tanh-sinh abscissas/weights on [-1, 1]; step halves per level."""
    step = 0.5 / (2**level)
    t = np.arange(-int(_T_MAX / step), int(_T_MAX / step) + 1) * step
    st = np.sinh(t)
    x = np.tanh(0.5 * math.pi * st)
    w = (0.5 * math.pi) * np.cosh(t) / np.cosh(0.5 * math.pi * st) ** 2 * step
    keep = 1.0 - np.abs(x) > 1e-17
    return x[keep], w[keep]


def _converged(val, deltas, tol) -> bool:
    """Step-halving acceptance: the last correction is below tolerance, or the
    standard double-exponential error model delta_L^2/delta_{L-1} is well below."""
    if not deltas:
        return False
    scale = max(abs(val), 1e-300)
    if deltas[-1] <= tol * scale:
        return True
    if len(deltas) >= 2 and deltas[-2] > 0:
        return deltas[-1] ** 2 / deltas[-2] <= 0.1 * tol * scale
    return False


def tanh_sinh(f, lo: float, hi: float, tol: float = 1e-10, max_level: int = 8):
    """Integrate a vectorized callable on [lo, hi] to relative tolerance tol."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    prev = None
    val = None
    deltas = []
    for level in range(2, max_level + 1):
        x, w = _nodes_weights(level)
        val = half * float(np.sum(w * f(mid + half * x)))
        if prev is not None:
            deltas.append(abs(val - prev))
            if _converged(val, deltas, tol):
                return val
        prev = val
    raise QuadratureFailure(
        f"tanh-sinh did not converge to rel tol {tol} on [{lo}, {hi}]",
        residual=deltas[-1] if deltas else None,
    )


def _tensor_value(f, axes, max_elems: int = 4_000_000) -> float:
    """Weighted tensor contraction of f over the product grid, evaluated in
    chunks along the first axis so memory stays bounded."""
    d = len(axes)
    xs = [a[0] for a in axes]
    ws = [a[1] for a in axes]
    if d == 1:
        return float(np.sum(ws[0] * f(xs[0])))
    rest = 1
    for x in xs[1:]:
        rest *= x.size
    chunk = max(1, max_elems // rest)
    total = 0.0
    for start in range(0, xs[0].size, chunk):
        sl = xs[0][start : start + chunk]
        grids = [sl.reshape((-1,) + (1,) * (d - 1))]
        for ax in range(1, d):
            shape = [1] * d
            shape[ax] = -1
            grids.append(xs[ax].reshape(shape))
        vals = f(*grids)
        for ax in range(d - 1, 0, -1):
            vals = np.tensordot(vals, ws[ax], axes=([ax], [0]))
        total += float(np.dot(vals, ws[0][start : start + chunk]))
    return total


def tanh_sinh_nd(f, boxes, tol: float = 1e-10, max_level: int = 9, min_level: int = 3):
    """Tensor-product tanh-sinh over a list of (lo, hi) windows.

    f takes d broadcastable arrays and returns values on the product grid.
    """
    prev = None
    val = None
    deltas = []
    for level in range(min_level, max_level + 1):
        x, w = _nodes_weights(level)
        axes = []
        for lo, hi in boxes:
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            axes.append((mid + half * x, half * w))
        val = _tensor_value(f, axes)
        if prev is not None:
            deltas.append(abs(val - prev))
            if _converged(val, deltas, tol):
                return val
        prev = val
    raise QuadratureFailure(
        f"{len(boxes)}-d tanh-sinh did not converge to rel tol {tol}",
        residual=deltas[-1] if deltas else None,
    )
