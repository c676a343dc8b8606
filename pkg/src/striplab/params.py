"""Model parameters for the strip models and their domain validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Tuple

from .errors import ParamDomain


class Model(enum.Enum):
    GEOMETRIC_LPP = "geometric_lpp"
    LOG_GAMMA = "log_gamma"


@dataclass(frozen=True)
class ModelParams:
    """Bulk and boundary parameters of a width-n strip model.

    For the geometric model `bulk` holds a_1..a_N in (0,1) and the
    boundaries are c1, c2 > 0; for the log-gamma model `bulk` holds
    alpha_1..alpha_N and the boundaries are u, v.  `fan_region` records
    whether c1*c2 < 1 (resp. u+v > 0); it is set by validate_params.
    """

    model: Model
    n: int
    bulk: Tuple[float, ...]
    left_boundary: float
    right_boundary: float
    fan_region: bool = False

    def bulk_at(self, index: int) -> float:
        """Cyclic bulk parameter a_index for 1-based index (a_{j+kN} = a_j)."""
        return self.bulk[(index - 1) % self.n]

    @property
    def homogeneous(self) -> bool:
        return all(b == self.bulk[0] for b in self.bulk)


def validate_params(raw: ModelParams) -> ModelParams:
    """Check the model's strict inequalities; return params with fan_region set.

    Raises ParamDomain naming the violated inequality and its indices.
    """
    if raw.n < 1:
        raise ParamDomain(f"strip width n must be >= 1, got {raw.n}")
    if len(raw.bulk) != raw.n:
        raise ParamDomain(f"expected {raw.n} bulk parameters, got {len(raw.bulk)}")
    a = raw.bulk
    c1, c2 = raw.left_boundary, raw.right_boundary
    if raw.model is Model.GEOMETRIC_LPP:
        if c1 <= 0 or c2 <= 0:
            raise ParamDomain(f"boundary parameters must be positive: c1={c1}, c2={c2}")
        for i, ai in enumerate(a):
            if ai <= 0:
                raise ParamDomain(f"a[{i + 1}] = {ai} must be > 0")
        for i, ai in enumerate(a):
            for j, aj in enumerate(a):
                if ai * aj >= 1:
                    raise ParamDomain(f"a[{i + 1}]*a[{j + 1}] = {ai * aj} >= 1")
            if ai * c1 >= 1:
                raise ParamDomain(f"a[{i + 1}]*c1 = {ai * c1} >= 1")
            if ai * c2 >= 1:
                raise ParamDomain(f"a[{i + 1}]*c2 = {ai * c2} >= 1")
        fan = c1 * c2 < 1
    elif raw.model is Model.LOG_GAMMA:
        for i, ai in enumerate(a):
            for j, aj in enumerate(a):
                if ai + aj <= 0:
                    raise ParamDomain(f"alpha[{i + 1}]+alpha[{j + 1}] = {ai + aj} <= 0")
            if ai + c1 <= 0:
                raise ParamDomain(f"alpha[{i + 1}]+u = {ai + c1} <= 0")
            if ai + c2 <= 0:
                raise ParamDomain(f"alpha[{i + 1}]+v = {ai + c2} <= 0")
        fan = c1 + c2 > 0
    else:  # pragma: no cover
        raise ParamDomain(f"unknown model {raw.model}")
    return replace(raw, fan_region=fan)


def geometric_params(n: int, a, c1: float, c2: float) -> ModelParams:
    bulk = tuple([float(a)] * n) if isinstance(a, (int, float)) else tuple(float(x) for x in a)
    return validate_params(ModelParams(Model.GEOMETRIC_LPP, n, bulk, float(c1), float(c2)))


def log_gamma_params(n: int, alpha, u: float, v: float) -> ModelParams:
    bulk = tuple([float(alpha)] * n) if isinstance(alpha, (int, float)) else tuple(float(x) for x in alpha)
    return validate_params(ModelParams(Model.LOG_GAMMA, n, bulk, float(u), float(v)))
