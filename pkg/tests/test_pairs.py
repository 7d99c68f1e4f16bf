import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fredholm_pairs.checks import InconsistencyError, failed
from fredholm_pairs.hilbert import DimensionError, Operator, kernel_dim, operator_norm
from fredholm_pairs.pairs import (
    FredholmPair,
    ProductNotZeroError,
    analyze_pair,
    block_identity_residuals,
    build_block_U,
    build_laplacian_blocks,
    build_V,
    compress_pair,
    dual_pair,
    euler_index,
    pair_index,
    product_zero_characterizations,
    product_zero_decomposition,
    swap_pair,
    verify_pair,
)
from fredholm_pairs.sampling import random_pair, random_product_zero_pair

from oracles import exact_pair_dims

O = Operator
PROJ = O([[1, 0, 0], [0, 1, 0]])  # C^3 -> C^2


@pytest.fixture
def nil_pair(nilpotent):
    return FredholmPair(nilpotent, nilpotent)


@pytest.fixture
def proj_pair():
    return FredholmPair(PROJ, O.zeros(3, 2))


def test_shape_check():
    with pytest.raises(DimensionError):
        FredholmPair(O.zeros(2, 3), O.zeros(2, 3))


# analyze_pair

def test_analyze_nilpotent(nil_pair):
    an = analyze_pair(nil_pair)
    assert an.dims == exact_pair_dims([[0, 1], [0, 0]], [[0, 1], [0, 0]], 2, 2) == (0, 0, 0, 0)
    assert an.index == 0


def test_analyze_projection(proj_pair):
    an = analyze_pair(proj_pair)
    assert an.dims == exact_pair_dims(PROJ.entries.real.tolist(), [[0, 0]] * 3, 3, 2) == (1, 0, 0, 0)
    assert an.index == 1


def test_analyze_zero_pair():
    an = analyze_pair(FredholmPair(O.zeros(2, 2), O.zeros(2, 2)))
    assert an.dims == (2, 0, 2, 0) and an.index == 0


def test_analyze_identity_with_zero():
    an = analyze_pair(FredholmPair(O.identity(2), O.zeros(2, 2)))
    assert an.dims == exact_pair_dims([[1, 0], [0, 1]], [[0, 0], [0, 0]], 2, 2) == (0, 0, 0, 0)
    assert an.index == 0


small_int = st.integers(-2, 2)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_dims_match_exact_oracle(n1, n2, data):
    S = data.draw(st.lists(st.lists(small_int, min_size=n1, max_size=n1), min_size=n2, max_size=n2))
    T = data.draw(st.lists(st.lists(small_int, min_size=n2, max_size=n2), min_size=n1, max_size=n1))
    pair = FredholmPair(O(np.array(S, dtype=float).reshape(n2, n1)), O(np.array(T, dtype=float).reshape(n1, n2)))
    assert analyze_pair(pair).dims == exact_pair_dims(S, T, n1, n2)


# swap / dual

def test_swap(proj_pair, nil_pair):
    assert pair_index(swap_pair(proj_pair)) == -1
    assert swap_pair(swap_pair(proj_pair)) == proj_pair
    assert pair_index(swap_pair(nil_pair)) == 0


def test_dual(proj_pair):
    assert pair_index(dual_pair(proj_pair)) == 1
    zero = FredholmPair(O.zeros(3, 2), O.zeros(2, 3))
    d = dual_pair(zero)
    # T* now plays the role of S, so H1 stays the domain of the first map
    assert (d.dim_H1, d.dim_H2) == (2, 3)
    assert d == FredholmPair(O.zeros(3, 2), O.zeros(2, 3))
    assert pair_index(d) == pair_index(zero) == -1
    assert dual_pair(dual_pair(proj_pair)) == proj_pair


# compression

def test_compress_product_zero_is_identity(nil_pair):
    comp = compress_pair(nil_pair)
    assert comp.F1.dim == comp.F2.dim == 0
    assert np.allclose(np.abs(comp.S_c.entries), np.abs(nil_pair.S.entries))
    assert pair_index(comp.pair) == pair_index(nil_pair)


def test_compress_identity_and_projection():
    pair = FredholmPair(O.identity(2), O([[1, 0], [0, 0]]))
    an = analyze_pair(pair)
    assert (an.rank_TS, an.rank_ST) == (1, 1)
    comp = compress_pair(pair)
    assert comp.S_c.shape == comp.T_c.shape == (1, 1)
    # complement of span{e1} is span{e2}: S_c = [[1]], T_c = [[0]]
    assert abs(comp.S_c.entries[0, 0]) == pytest.approx(1.0)
    assert comp.T_c.entries[0, 0] == 0
    assert an.index == pair_index(comp.pair, scale=comp.scale) - an.rank_ST + an.rank_TS


def test_compress_zero_S(rng):
    pair = FredholmPair(O.zeros(3, 4), O(rng.standard_normal((4, 3))))
    comp = compress_pair(pair)
    assert comp.F1.dim == comp.F2.dim == 0


def test_compress_projections_are_coisometries(rng):
    comp = compress_pair(random_pair(rng, 8, min_dim=4))
    for P in (comp.P1, comp.P2):
        assert np.allclose(P.entries @ P.entries.conj().T, np.eye(P.rows))


# block operators

def test_blocks_zero():
    pair = FredholmPair(O.zeros(2, 3), O.zeros(3, 2))
    assert operator_norm(build_V(pair)) == 0
    assert all(operator_norm(b) == 0 for b in build_laplacian_blocks(pair))


def test_blocks_scalar():
    pair = FredholmPair(O([[1]]), O([[0]]))
    assert build_V(pair) == O([[0, 1], [1, 0]])
    lap1, lap2 = build_laplacian_blocks(pair)
    assert lap1 == O([[1]]) and lap2 == O([[1]])


def test_U_layout(rng):
    S, T = O(rng.standard_normal((3, 2))), O(rng.standard_normal((2, 3)))
    U = build_block_U(FredholmPair(S, T))
    assert np.array_equal(U.entries[:2, 2:], T.entries)
    assert np.array_equal(U.entries[2:, :2], S.entries)


def test_nilpotent_laplacian_kernel(nil_pair):
    lap1, _ = build_laplacian_blocks(nil_pair)
    assert kernel_dim(lap1) == analyze_pair(nil_pair).a == 0


def test_block_identities(rng):
    for _ in range(20):
        pair = random_pair(rng)
        res = block_identity_residuals(pair)
        assert res["V_self_adjoint"] == 0.0
        scale = 1 + operator_norm(pair.S) ** 2 + operator_norm(pair.T) ** 2
        assert max(res.values()) <= 1e-9 * scale


# product-zero decomposition

def test_decomposition_zero_scalar():
    dec = product_zero_decomposition(FredholmPair(O.zeros(1, 1), O.zeros(1, 1)))
    assert (dec.N1.dim, dec.N2.dim, dec.L1.dim, dec.L2.dim) == (1, 1, 0, 0)


def test_decomposition_nilpotent(nil_pair):
    dec = product_zero_decomposition(nil_pair)
    assert dec.N1.dim == dec.N2.dim == 0
    forward = nil_pair.S + nil_pair.T.H
    assert kernel_dim(forward) == 0
    assert not failed(dec.checks)


def test_decomposition_projection(proj_pair):
    dec = product_zero_decomposition(proj_pair)
    assert dec.N1.dim == 1 and dec.N2.dim == 0
    assert np.allclose(np.abs(dec.N1.basis[:, 0]), [0, 0, 1])


def test_decomposition_rejects_nonzero_products():
    with pytest.raises(ProductNotZeroError):
        product_zero_decomposition(FredholmPair(O.identity(2), O.identity(2)))


def test_decomposition_flags_rank_residual_conflict():
    # ||ST|| = 5e-10 passes the residual bound, yet rank(T) = 1 and N(S) = 0
    with pytest.raises(InconsistencyError):
        product_zero_decomposition(FredholmPair(O([[1.0]]), O([[5e-10]])))
    names = [c.name for c in failed(verify_pair(FredholmPair(O([[1.0]]), O([[5e-10]]))))]
    assert names == ["product-zero decomposition"]


def test_product_zero_identities(rng):
    for _ in range(50):
        pair, scale = random_product_zero_pair(rng)
        an = analyze_pair(pair, scale=scale)
        assert an.b == an.d == 0
        assert not failed(product_zero_characterizations(pair, scale=scale))
        dec = product_zero_decomposition(pair, scale=scale)
        assert (dec.N1.dim, dec.N2.dim) == (an.a, an.c)


# Euler operator

def test_euler_examples(proj_pair, nil_pair):
    assert euler_index(proj_pair) == (1, -1)
    assert euler_index(FredholmPair(O.zeros(3, 2), O.zeros(2, 3))) == (-1, 1)
    assert euler_index(nil_pair) == (0, 0)


def test_euler_identity_random(rng):
    for _ in range(100):
        pair = random_pair(rng)
        an = analyze_pair(pair)
        fwd, bwd = euler_index(pair)
        assert an.index == fwd == -bwd == pair.dim_H1 - pair.dim_H2


def test_verify_pair_all_pass(rng, proj_pair, nil_pair):
    for pair in [proj_pair, nil_pair] + [random_pair(rng) for _ in range(30)]:
        assert failed(verify_pair(pair)) == []
