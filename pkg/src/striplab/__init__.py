"""striplab: stationary measures for geometric LPP and the log-gamma polymer
on a strip, with two-layer Gibbs machinery, a matrix-product representation,
and the open-KPZ (Hariya-Yor) limit."""

from .errors import (
    AllZeroWeights,
    DegenerateWeights,
    EmptySample,
    InadmissibleMove,
    ParamDomain,
    QuadratureFailure,
    ShockRegion,
    StripLabError,
    TruncationTooSmall,
)
from .params import Model, ModelParams, geometric_params, log_gamma_params, validate_params
from .paths import DownRightPath, LocalMove, MoveKind, Step, apply_local_move, horizontal_path
from .rng import RngStream

__all__ = [
    "AllZeroWeights",
    "DegenerateWeights",
    "DownRightPath",
    "EmptySample",
    "InadmissibleMove",
    "LocalMove",
    "Model",
    "ModelParams",
    "MoveKind",
    "ParamDomain",
    "QuadratureFailure",
    "RngStream",
    "ShockRegion",
    "Step",
    "StripLabError",
    "TruncationTooSmall",
    "apply_local_move",
    "geometric_params",
    "horizontal_path",
    "log_gamma_params",
    "validate_params",
]

__version__ = "0.1.0"
