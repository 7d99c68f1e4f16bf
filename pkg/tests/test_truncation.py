import numpy as np
import pytest

from fredholm_pairs.hilbert import DimensionError, kernel_dim, numerical_rank
from fredholm_pairs.truncation import (
    SQUARE_CAVEAT,
    OperatorFamily,
    realize,
    realize_operator,
    stabilization_scan,
)


def test_family_validation():
    with pytest.raises(ValueError):
        OperatorFamily("bilateral-shift")
    with pytest.raises(ValueError):
        OperatorFamily("diagonal", shape="tall")
    with pytest.raises(ValueError):
        OperatorFamily("diagonal", rule="1/k^3")


def test_right_shift_square():
    S = realize(OperatorFamily("right-shift"), 3).S
    assert np.array_equal(S.entries, np.eye(3, k=-1))


def test_right_shift_rect_up():
    S = realize(OperatorFamily("right-shift", shape="rect-up"), 2).S
    assert S.shape == (3, 2)
    assert kernel_dim(S) == 0 and numerical_rank(S) == 2
    assert np.array_equal(S.entries, np.eye(3, 2, k=-1))


def test_left_shift_is_adjoint_of_right_shift():
    r = realize_operator(OperatorFamily("right-shift"), 5)
    l = realize_operator(OperatorFamily("left-shift"), 5)
    assert l == r.H


def test_diagonal_rule():
    S = realize(OperatorFamily("diagonal", rule="1/k"), 4).S
    assert np.allclose(S.entries, np.diag([1, 1 / 2, 1 / 3, 1 / 4]))
    w = realize(OperatorFamily("weighted-shift", rule="1/k^2", value=2.0), 3).S
    assert np.allclose(w.entries, np.diag([2.0, 0.5], k=-1))


def test_finite_rank_block_in_corner():
    fam = OperatorFamily("finite-rank-coupling", block=((1, 2), (3, 4), (5, 6)))
    assert np.array_equal(realize_operator(fam, 2).entries, [[1, 2], [3, 4]])
    big = realize_operator(fam, 4).entries
    assert np.array_equal(big[:3, :2], [[1, 2], [3, 4], [5, 6]]) and np.count_nonzero(big) == 6


def test_realize_rejects_bad_n_and_partner():
    with pytest.raises(ValueError):
        realize(OperatorFamily("zero"), 0)
    with pytest.raises(DimensionError):
        realize(OperatorFamily("right-shift", shape="rect-up"), 3, OperatorFamily("left-shift", shape="rect-up"))


def test_zero_partner_shape():
    pair = realize(OperatorFamily("right-shift", shape="rect-down"), 4)
    assert pair.T.shape == (5, 4)


def test_scan_right_shift_square():
    rep = stabilization_scan(OperatorFamily("right-shift"), n_range=range(1, 41))
    assert all((e["a"], e["c"], e["index"]) == (1, 1, 0) for e in rep.per_n)
    assert rep.stabilized and rep.limits == (1, 0, 1, 0, 0)
    assert SQUARE_CAVEAT in rep.caveats


def test_scan_right_shift_rect_up():
    rep = stabilization_scan(OperatorFamily("right-shift", shape="rect-up"), n_range=range(1, 41))
    assert all((e["a"], e["b"], e["c"], e["d"], e["index"]) == (0, 0, 1, 0, -1) for e in rep.per_n)
    assert rep.stabilized and rep.limits == (0, 0, 1, 0, -1)
    assert SQUARE_CAVEAT not in rep.caveats


def test_scan_left_shift_rect_down():
    rep = stabilization_scan(OperatorFamily("left-shift", shape="rect-down"), n_range=range(1, 21))
    assert rep.limits == (1, 0, 0, 0, 1)


def test_scan_diagonal():
    rep = stabilization_scan(OperatorFamily("diagonal", rule="1/k"), n_range=range(1, 41))
    assert all(e["a"] == 0 and e["index"] == 0 for e in rep.per_n)
    assert rep.stabilized


def test_scan_with_partner():
    fam = OperatorFamily("right-shift", shape="rect-up")
    partner = OperatorFamily("left-shift", shape="rect-down")
    rep = stabilization_scan(fam, partner, n_range=range(1, 11))
    assert all(e["index"] == -1 for e in rep.per_n)


def test_scan_not_stabilized_when_window_varies():
    # zero family: a = n and c = n grow with n
    rep = stabilization_scan(OperatorFamily("zero"), n_range=range(1, 6))
    assert not rep.stabilized and rep.limits is None
    assert rep.to_dict()["limits"] is None


def test_scan_argument_checks():
    fam = OperatorFamily("right-shift")
    with pytest.raises(ValueError):
        stabilization_scan(fam, n_range=[3, 2])
    with pytest.raises(ValueError):
        stabilization_scan(fam, n_range=range(1, 5), stable_window=1)


def test_scan_is_deterministic():
    fam = OperatorFamily("weighted-shift", shape="rect-up", rule="1/k")
    assert stabilization_scan(fam).to_dict() == stabilization_scan(fam).to_dict()
