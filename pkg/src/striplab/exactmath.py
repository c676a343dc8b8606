"""Exact rational helpers for the geometric-model identities.

Everything here works on fractions.Fraction (arbitrary-precision integer
pairs) so that geometric sums evaluate with zero rounding error.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParamDomain


def geom_series_finite(r: Fraction, lo: int, hi: int) -> Fraction:
    """sum_{i=lo}^{hi} r^i, exact; zero when hi < lo. Handles r == 1 and r == 0."""
    if hi < lo:
        return Fraction(0)
    r = Fraction(r)
    if r == 1:
        return Fraction(hi - lo + 1)
    if r == 0:
        # 0^0 = 1 by convention; only the i = 0 term survives.
        return Fraction(1) if lo <= 0 <= hi else Fraction(0)
    return (r**lo - r ** (hi + 1)) / (1 - r)


def geom_series_upper_tail(r: Fraction, lo: int) -> Fraction:
    """sum_{i >= lo} r^i, exact; requires |r| < 1."""
    r = Fraction(r)
    if not abs(r) < 1:
        raise ParamDomain(f"tail needs |r| < 1, got {r}")
    return r**lo / (1 - r)


def interlace(mu1, mu2, lam1, lam2) -> bool:
    """mu interlaces lambda (horizontal-strip order): lam1 >= mu1 >= lam2 >= mu2."""
    return lam1 >= mu1 >= lam2 >= mu2


def skew_schur_1var(lam1, lam2, mu1, mu2, a):
    """One-variable skew Schur on length-2 signatures:
    a^(|lam|-|mu|) if mu interlaces lam, else 0."""
    if not interlace(mu1, mu2, lam1, lam2):
        return Fraction(0) if isinstance(a, Fraction) else 0.0
    return a ** ((lam1 - mu1) + (lam2 - mu2))
