import pytest

from striplab.errors import InadmissibleMove, ParamDomain
from striplab.params import geometric_params
from striplab.paths import (
    DownRightPath,
    LocalMove,
    MoveKind,
    Step,
    apply_local_move,
    horizontal_path,
    tau1_move_sequence,
    updated_vertex,
)

R, D = Step.RIGHT, Step.DOWN


def test_horizontal_path_geometry():
    p = horizontal_path(3, k=2)
    assert p.vertices() == [(2, 2), (3, 2), (4, 2), (5, 2)]
    assert p.translate(1).vertices() == [(3, 3), (4, 3), (5, 3), (6, 3)]


def test_path_validation():
    with pytest.raises(ParamDomain):
        DownRightPath((1, 0), (R, R))  # anchor off the left boundary
    with pytest.raises(ParamDomain):
        DownRightPath((0, 0), (D, R))  # leaves the strip (m = -1)
    with pytest.raises(ParamDomain):
        DownRightPath((0, 0), (R, R, D))  # would end off the right boundary if shape wrong
    DownRightPath((1, 1), (R, D, R))  # valid staircase


def test_edge_labels_cyclic_shift_under_translation():
    p = geometric_params(3, (0.1, 0.2, 0.3), 0.9, 0.9)
    ph = horizontal_path(3)
    assert ph.edge_labels(p) == [0.1, 0.2, 0.3]
    assert ph.translate(1).edge_labels(p) == [0.2, 0.3, 0.1]
    assert ph.translate(3).edge_labels(p) == [0.1, 0.2, 0.3]


def test_edge_labels_mixed_path():
    p = geometric_params(3, (0.1, 0.2, 0.3), 0.9, 0.9)
    path = DownRightPath((1, 1), (R, D, R))  # (1,1)->(2,1)->(2,0)->(3,0)
    # R into column 2 -> a_2; D out of row 1 -> a_1; R into column 3 -> a_3
    assert path.edge_labels(p) == [0.2, 0.1, 0.3]


def test_local_moves_change_exactly_one_vertex():
    path = DownRightPath((1, 1), (R, D, R))
    for kind, idx in [(MoveKind.LEFT_BOUNDARY, 0), (MoveKind.BULK, 2)]:
        mv = LocalMove(kind, idx)
        assert path.is_admissible(mv)
        new = apply_local_move(path, mv)
        diff = set(new.vertices()) ^ set(path.vertices())
        assert len(diff) == 2  # one vertex removed, one added


def test_left_boundary_move_lifts_start():
    ph = horizontal_path(3)
    new = apply_local_move(ph, LocalMove(MoveKind.LEFT_BOUNDARY, 0))
    assert new.anchor == (1, 1)
    assert new.steps[0] is D
    assert updated_vertex(ph, LocalMove(MoveKind.LEFT_BOUNDARY, 0)) == (1, 1)


def test_inadmissible_moves_raise():
    ph = horizontal_path(3)
    with pytest.raises(InadmissibleMove):
        apply_local_move(ph, LocalMove(MoveKind.BULK, 1))  # R-R corner
    with pytest.raises(InadmissibleMove):
        apply_local_move(ph, LocalMove(MoveKind.RIGHT_BOUNDARY, 3))  # last step is R


def test_tau1_composition_horizontal():
    ph = horizontal_path(3)
    seq = tau1_move_sequence(ph)
    # 1 left + (N-1) bulk + 1 right moves
    assert len(seq) == 4
    assert seq[0].kind is MoveKind.LEFT_BOUNDARY
    assert seq[-1].kind is MoveKind.RIGHT_BOUNDARY
    cur = ph
    for mv in seq:
        cur = apply_local_move(cur, mv)
    assert cur == ph.translate(1)


def test_tau1_composition_staircase():
    path = DownRightPath((2, 2), (R, R, D, D))
    seq = tau1_move_sequence(path)
    assert len(seq) == 5
    cur = path
    seen = []
    for mv in seq:
        seen.append(updated_vertex(cur, mv))
        cur = apply_local_move(cur, mv)
    assert cur == path.translate(1)
    assert seen == sorted(seen)  # lexicographic update order


def test_tau1_labels_cyclically_shifted():
    p = geometric_params(3, (0.1, 0.2, 0.3), 0.9, 0.9)
    ph = horizontal_path(3)
    cur = ph
    for mv in tau1_move_sequence(ph):
        cur = apply_local_move(cur, mv)
    assert cur.edge_labels(p) == [0.2, 0.3, 0.1]
