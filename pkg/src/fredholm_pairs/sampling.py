"""Seeded random operators, pairs and chains."""

from __future__ import annotations

import numpy as np

from .chains import Chain
from .hilbert import DEFAULT_TOL, Operator, Tolerance, orthogonal_complement, range_
from .pairs import FredholmPair, compress_pair


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_operator(rng: np.random.Generator, rows: int, cols: int, rank: int | None = None) -> Operator:
    """Complex Gaussian matrix, optionally a product of rank-``rank`` factors."""
    if rank is None:
        return Operator(complex_gaussian(rng, rows, cols))
    rank = min(rank, rows, cols)
    return Operator(complex_gaussian(rng, rows, rank) @ complex_gaussian(rng, rank, cols))


def random_pair(rng: np.random.Generator, max_dim: int = 12, min_dim: int = 0) -> FredholmPair:
    """Pair with random dimensions and random (often deficient) ranks."""
    n1, n2 = (int(x) for x in rng.integers(min_dim, max_dim + 1, size=2))
    top = min(n1, n2)
    rS, rT = (int(x) for x in rng.integers(0, top + 1, size=2))
    return FredholmPair(random_operator(rng, n2, n1, rS), random_operator(rng, n1, n2, rT))


def random_product_zero_pair(
    rng: np.random.Generator, max_dim: int = 12, tol: Tolerance = DEFAULT_TOL
) -> tuple[FredholmPair, float]:
    """Compress a random pair; returns the product-zero pair and its rank scale."""
    comp = compress_pair(random_pair(rng, max_dim), tol)
    return comp.pair, comp.scale


def random_chain(
    rng: np.random.Generator,
    max_n: int = 5,
    max_dim: int = 6,
    exact: bool = False,
    tol: Tolerance = DEFAULT_TOL,
) -> Chain:
    """Random chain of top degree <= max_n.

    With ``exact=True`` every delta_p is precomposed with the projection onto
    the complement of R(delta_{p+1}), so consecutive products vanish up to rounding.
    """
    n = int(rng.integers(0, max_n + 1))
    dims = [int(x) for x in rng.integers(0, max_dim + 1, size=n + 1)]
    deltas: list[Operator] = [None] * n  # type: ignore[list-item]
    for p in range(n, 0, -1):
        rows, cols = dims[p - 1], dims[p]
        rank = int(rng.integers(0, min(rows, cols) + 1))
        d = random_operator(rng, rows, cols, rank)
        if exact and p < n:
            comp = orthogonal_complement(range_(deltas[p], tol)).basis
            d = Operator(d.entries @ comp @ comp.conj().T)
        deltas[p - 1] = d
    return Chain(dims, deltas)
