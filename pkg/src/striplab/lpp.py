"""Geometric last-passage percolation on the strip.

The passage-time recurrence is G = omega + max(west, south) in the bulk,
with single-neighbor variants on the two boundaries; omega is geometric
with parameter a_n*a_m (bulk), a_m*c1 (left) or a_m*c2 (right).  Weights
are sampled lazily per local update; only the frontier is ever stored.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distributions import sample_geom
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
class LppState:
    """Passage times along a down-right path; values has shape (..., N+1)."""

    path: DownRightPath
    values: np.ndarray

    def increments(self) -> np.ndarray:
        return self.values[..., 1:] - self.values[..., :1]


def _weight_param(path: DownRightPath, move: LocalMove, params: ModelParams) -> float:
    n, m = updated_vertex(path, move)
    if move.kind is MoveKind.LEFT_BOUNDARY:
        return params.bulk_at(m) * params.left_boundary
    if move.kind is MoveKind.RIGHT_BOUNDARY:
        return params.bulk_at(m) * params.right_boundary
    return params.bulk_at(n) * params.bulk_at(m)


def lpp_local_update(state: LppState, move: LocalMove, params: ModelParams, rng) -> LppState:
    """One local move: new vertex value = omega + max(west, south) (bulk),
    omega + south (left boundary), omega + west (right boundary)."""
    if params.model is not Model.GEOMETRIC_LPP:
        raise ParamDomain("lpp dynamics require geometric parameters")
    if not state.path.is_admissible(move):
        raise InadmissibleMove(f"{move.kind.value} move at {move.index}")
    v = state.values
    shape = v.shape[:-1]
    omega = sample_geom(_weight_param(state.path, move, params), rng, size=shape or None)
    j = move.index
    new = np.array(v, copy=True)
    if move.kind is MoveKind.LEFT_BOUNDARY:
        new[..., 0] = omega + v[..., 1]
    elif move.kind is MoveKind.RIGHT_BOUNDARY:
        new[..., -1] = omega + v[..., -2]
    else:
        new[..., j] = omega + np.maximum(v[..., j - 1], v[..., j + 1])
    return LppState(apply_local_move(state.path, move), new)


def lpp_tau1_step(state: LppState, params: ModelParams, rng) -> LppState:
    """Advance the state to the diagonally shifted path tau_1 P."""
    if state.path.steps == horizontal_path(state.path.n, state.path.anchor[0]).steps:
        return _tau1_horizontal(state, params, rng)
    cur = state
    for move in tau1_move_sequence(state.path):
        cur = lpp_local_update(cur, move, params, rng)
    return cur


def _tau1_horizontal(state: LppState, params: ModelParams, rng) -> LppState:
    """Vectorized tau_1 on a horizontal path: left move, bulk sweep, right move."""
    gen = as_generator(rng)
    k = state.path.anchor[0]
    n = state.path.n
    v = state.values
    shape = v.shape[:-1]
    a_row = params.bulk_at(k + 1)
    new = np.empty_like(v)
    new[..., 0] = sample_geom(a_row * params.left_boundary, gen, size=shape or None) + v[..., 1]
    for j in range(1, n):
        om = sample_geom(a_row * params.bulk_at(k + 1 + j), gen, size=shape or None)
        new[..., j] = om + np.maximum(new[..., j - 1], v[..., j + 1])
    new[..., n] = sample_geom(a_row * params.right_boundary, gen, size=shape or None) + new[..., n - 1]
    return LppState(state.path.translate(1), new)


def run_increment_chain(init, params: ModelParams, k_steps: int, rng, keep_path: bool = False):
    """Evolve centered increments (G(p_j) - G(p_0))_{j=1..N} on the horizontal
    path for k_steps tau_1 steps.

    init may be shape (N,) or (replicas, N); replicas evolve independently
    off a shared stream.  Returns the final increments, or the whole
    trajectory (k_steps+1, ..., N) when keep_path is True.
    """
    gen = as_generator(rng)
    init = np.asarray(init)
    if np.any(init < 0):
        raise ParamDomain("geometric increment state must stay in Z_{>=0}^N")
    vals = np.concatenate([np.zeros(init.shape[:-1] + (1,), dtype=init.dtype), init], axis=-1)
    state = LppState(horizontal_path(params.n), vals)
    traj = [state.increments().copy()] if keep_path else None
    for _ in range(k_steps):
        state = lpp_tau1_step(state, params, gen)
        # recenter so values stay O(increments) over long runs
        state = replace(state, values=state.values - state.values[..., :1])
        if keep_path:
            traj.append(state.increments().copy())
    if keep_path:
        return np.stack(traj, axis=0)
    return state.increments()


def evolve_increments_lpp(incr: np.ndarray, params: ModelParams, rng, shift: int = 0) -> np.ndarray:
    """One tau_1 step acting on centered increments (vectorized over rows).

    shift selects the horizontal path tau_shift P_h, so repeated calls with
    shift = 0, 1, ... follow the inhomogeneous label rotation.
    """
    incr = np.atleast_2d(np.asarray(incr))
    vals = np.concatenate([np.zeros((incr.shape[0], 1), dtype=incr.dtype), incr], axis=1)
    state = LppState(horizontal_path(params.n, k=shift), vals)
    out = lpp_tau1_step(state, params, rng)
    return out.increments()
