"""Log-gamma polymer free energy on the strip, carried in log-domain.

The partition-function recurrence z = varpi*(west + south) becomes
h = log(varpi) + logaddexp(h_west, h_south) for the free energy h = log z;
varpi is inverse-gamma with parameter alpha_n+alpha_m (bulk),
alpha_m+u (left) or alpha_m+v (right).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distributions import sample_log_inv_gamma
from .errors import InadmissibleMove, ParamDomain
from .params import Model, ModelParams
from .paths import (
    DownRightPath,
    LocalMove,
    MoveKind,
    apply_local_move,
    horizontal_path,
    tau1_move_sequence,
    updated_vertex,
)
from .rng import as_generator


@dataclass(frozen=True)
class LgState:
    """Free energies along a down-right path; values has shape (..., N+1)."""

    path: DownRightPath
    values: np.ndarray

    def increments(self) -> np.ndarray:
        return self.values[..., 1:] - self.values[..., :1]


def _weight_param(path: DownRightPath, move: LocalMove, params: ModelParams) -> float:
    n, m = updated_vertex(path, move)
    if move.kind is MoveKind.LEFT_BOUNDARY:
        return params.bulk_at(m) + params.left_boundary
    if move.kind is MoveKind.RIGHT_BOUNDARY:
        return params.bulk_at(m) + params.right_boundary
    return params.bulk_at(n) + params.bulk_at(m)


def lg_local_update(state: LgState, move: LocalMove, params: ModelParams, rng) -> LgState:
    """One local move: h_new = log(varpi) + logaddexp(west, south) (bulk),
    log(varpi) + neighbor (boundaries)."""
    if params.model is not Model.LOG_GAMMA:
        raise ParamDomain("log-gamma dynamics require log-gamma parameters")
    if not state.path.is_admissible(move):
        raise InadmissibleMove(f"{move.kind.value} move at {move.index}")
    v = state.values
    shape = v.shape[:-1]
    logw = sample_log_inv_gamma(_weight_param(state.path, move, params), rng, size=shape or None)
    j = move.index
    new = np.array(v, copy=True)
    if move.kind is MoveKind.LEFT_BOUNDARY:
        new[..., 0] = logw + v[..., 1]
    elif move.kind is MoveKind.RIGHT_BOUNDARY:
        new[..., -1] = logw + v[..., -2]
    else:
        new[..., j] = logw + np.logaddexp(v[..., j - 1], v[..., j + 1])
    return LgState(apply_local_move(state.path, move), new)


def lg_tau1_step(state: LgState, params: ModelParams, rng) -> LgState:
    if state.path.steps == horizontal_path(state.path.n, state.path.anchor[0]).steps:
        return _tau1_horizontal(state, params, rng)
    cur = state
    for move in tau1_move_sequence(state.path):
        cur = lg_local_update(cur, move, params, rng)
    return cur


def _tau1_horizontal(state: LgState, params: ModelParams, rng) -> LgState:
    gen = as_generator(rng)
    k = state.path.anchor[0]
    n = state.path.n
    v = state.values
    shape = v.shape[:-1]
    a_row = params.bulk_at(k + 1)
    new = np.empty_like(v)
    new[..., 0] = sample_log_inv_gamma(a_row + params.left_boundary, gen, size=shape or None) + v[..., 1]
    for j in range(1, n):
        lw = sample_log_inv_gamma(a_row + params.bulk_at(k + 1 + j), gen, size=shape or None)
        new[..., j] = lw + np.logaddexp(new[..., j - 1], v[..., j + 1])
    new[..., n] = (
        sample_log_inv_gamma(a_row + params.right_boundary, gen, size=shape or None) + new[..., n - 1]
    )
    return LgState(state.path.translate(1), new)


def run_increment_chain_lg(init, params: ModelParams, k_steps: int, rng, keep_path: bool = False):
    """Evolve centered free-energy increments on the horizontal path."""
    gen = as_generator(rng)
    init = np.asarray(init, dtype=float)
    vals = np.concatenate([np.zeros(init.shape[:-1] + (1,)), init], axis=-1)
    state = LgState(horizontal_path(params.n), vals)
    traj = [state.increments().copy()] if keep_path else None
    for _ in range(k_steps):
        state = lg_tau1_step(state, params, gen)
        state = replace(state, values=state.values - state.values[..., :1])
        if keep_path:
            traj.append(state.increments().copy())
    if keep_path:
        return np.stack(traj, axis=0)
    return state.increments()


def evolve_increments_lg(incr: np.ndarray, params: ModelParams, rng, shift: int = 0) -> np.ndarray:
    """One tau_1 step acting on centered increments (vectorized over rows)."""
    incr = np.atleast_2d(np.asarray(incr, dtype=float))
    vals = np.concatenate([np.zeros((incr.shape[0], 1)), incr], axis=1)
    state = LgState(horizontal_path(params.n, k=shift), vals)
    out = lg_tau1_step(state, params, rng)
    return out.increments()
