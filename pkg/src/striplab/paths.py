"""Down-right paths on the strip, their edge labels, and local moves.

A width-N strip is {(n, m) : 0 <= m <= n <= m+N}.  A down-right path runs
from a left-boundary vertex (m0, m0) to a right-boundary vertex, taking N
unit steps Right or Down.  Vertices are derived from (anchor, steps), so
the diagonal translate costs O(1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Tuple

from .errors import InadmissibleMove, ParamDomain
from .params import ModelParams


class Step(enum.Enum):
    RIGHT = "R"
    DOWN = "D"


class MoveKind(enum.Enum):
    BULK = "bulk"
    LEFT_BOUNDARY = "left"
    RIGHT_BOUNDARY = "right"


@dataclass(frozen=True)
class LocalMove:
    kind: MoveKind
    index: int  # position of the update vertex on the path (0..N)


@dataclass(frozen=True)
class DownRightPath:
    anchor: Tuple[int, int]  # up-left start (n0, m0), on the left boundary
    steps: Tuple[Step, ...]

    def __post_init__(self):
        n0, m0 = self.anchor
        if n0 != m0:
            raise ParamDomain(f"path must start on the left boundary, got {self.anchor}")
        n, m = n0, m0
        width = len(self.steps)
        for s in self.steps:
            if s is Step.RIGHT:
                n += 1
            else:
                m -= 1
            if not (0 <= m <= n <= m + width):
                raise ParamDomain("path leaves the strip")
        if n != m + width:
            raise ParamDomain("path must end on the right boundary")

    @property
    def n(self) -> int:
        return len(self.steps)

    def vertices(self) -> list[tuple[int, int]]:
        n, m = self.anchor
        out = [(n, m)]
        for s in self.steps:
            if s is Step.RIGHT:
                n += 1
            else:
                m -= 1
            out.append((n, m))
        return out

    def edge_labels(self, params: ModelParams) -> list[float]:
        """Label of step j: a_n for a Right step into column n, a_m for a Down
        step out of row m (indices cyclic with period N)."""
        out = []
        for (n, m), s in zip(self.vertices(), self.steps):
            if s is Step.RIGHT:
                out.append(params.bulk_at(n + 1))
            else:
                out.append(params.bulk_at(m))
        return out

    def translate(self, k: int) -> "DownRightPath":
        n0, m0 = self.anchor
        return replace(self, anchor=(n0 + k, m0 + k))

    def is_admissible(self, move: LocalMove) -> bool:
        j = move.index
        if move.kind is MoveKind.LEFT_BOUNDARY:
            return j == 0 and self.steps[0] is Step.RIGHT
        if move.kind is MoveKind.RIGHT_BOUNDARY:
            return j == self.n and self.steps[-1] is Step.DOWN
        return (
            1 <= j <= self.n - 1
            and self.steps[j - 1] is Step.DOWN
            and self.steps[j] is Step.RIGHT
        )


def horizontal_path(n: int, k: int = 0) -> DownRightPath:
    """The horizontal path tau_k P_h from (k, k) to (k+n, k)."""
    return DownRightPath((k, k), tuple([Step.RIGHT] * n))


def apply_local_move(path: DownRightPath, move: LocalMove) -> DownRightPath:
    """Apply one local move; exactly one vertex of the path changes."""
    if not path.is_admissible(move):
        raise InadmissibleMove(f"{move.kind.value} move at index {move.index} is not admissible")
    steps = list(path.steps)
    n0, m0 = path.anchor
    if move.kind is MoveKind.LEFT_BOUNDARY:
        steps[0] = Step.DOWN
        return DownRightPath((n0 + 1, m0 + 1), tuple(steps))
    if move.kind is MoveKind.RIGHT_BOUNDARY:
        steps[-1] = Step.RIGHT
        return DownRightPath(path.anchor, tuple(steps))
    j = move.index
    steps[j - 1], steps[j] = Step.RIGHT, Step.DOWN
    return DownRightPath(path.anchor, tuple(steps))


def updated_vertex(path: DownRightPath, move: LocalMove) -> tuple[int, int]:
    """Vertex created by the move (the one the local kernel samples)."""
    verts = path.vertices()
    n, m = verts[move.index]
    return (n + 1, m + 1)


def tau1_move_sequence(path: DownRightPath) -> list[LocalMove]:
    """An admissible move sequence realizing the diagonal shift tau_1,
    processing updated vertices in lexicographic (n, m) order."""
    target = path.translate(1)
    moves: list[LocalMove] = []
    cur = path
    pending = True
    while pending:
        pending = False
        candidates = []
        for j in range(cur.n + 1):
            for kind in (MoveKind.LEFT_BOUNDARY, MoveKind.BULK, MoveKind.RIGHT_BOUNDARY):
                mv = LocalMove(kind, j)
                if cur.is_admissible(mv):
                    nv = updated_vertex(cur, mv)
                    # only moves that stay within the tau_1 sweep
                    if nv in set(target.vertices()) or _below(nv, target):
                        candidates.append((nv, mv))
        candidates.sort(key=lambda t: t[0])
        for nv, mv in candidates:
            cur2 = apply_local_move(cur, mv)
            moves.append(mv)
            cur = cur2
            pending = True
            break
        if cur == target:
            return moves
    raise InadmissibleMove("could not realize tau_1 by local moves")  # pragma: no cover


def _below(v: tuple[int, int], path: DownRightPath) -> bool:
    """True when vertex v lies weakly below/left of the path."""
    verts = path.vertices()
    n, m = v
    for pn, pm in verts:
        if pn == n and m <= pm:
            return True
    return False
