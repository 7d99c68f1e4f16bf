"""Fredholm chains 0 -> H_n -> ... -> H_1 -> H_0 -> 0.

A chain stores the space dimensions [dim H_0, ..., dim H_n] and the maps
[delta_1, ..., delta_n] with delta_p: H_p -> H_{p-1}. Outside 0..n the
spaces and maps are zero, and every accessor here honours that padding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .checks import Check, equal_ints, within
from .hilbert import (
    DEFAULT_TOL,
    DimensionError,
    Operator,
    Tolerance,
    adjoint,
    fredholm_index,
    kernel,
    kernel_dim,
    numerical_rank,
    operator_norm,
    quotient_dim,
    range_,
)
from .pairs import FredholmPair, analyze_pair, euler_operators


@dataclass(frozen=True, eq=False)
class Chain:
    dims: tuple[int, ...]
    deltas: tuple[Operator, ...]

    def __init__(self, dims: Sequence[int], deltas: Sequence[Operator] = ()):
        dims = tuple(int(d) for d in dims)
        deltas = tuple(deltas)
        if not dims:
            raise DimensionError("a chain needs at least H_0")
        if any(d < 0 for d in dims):
            raise DimensionError(f"negative space dimension in {list(dims)}")
        if len(deltas) != len(dims) - 1:
            raise DimensionError(
                f"{len(dims)} spaces need {len(dims) - 1} maps, got {len(deltas)}"
            )
        for p, delta in enumerate(deltas, start=1):
            if delta.shape != (dims[p - 1], dims[p]):
                raise DimensionError(
                    f"delta_{p} is {delta.rows}x{delta.cols}, expected "
                    f"{dims[p - 1]}x{dims[p]} (H_{p} -> H_{p - 1})"
                )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "deltas", deltas)

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    @property
    def minimal_n(self) -> int:
        """Largest p with H_p != 0 (0 for the zero chain)."""
        nonzero = [p for p, d in enumerate(self.dims) if d > 0]
        return nonzero[-1] if nonzero else 0

    def dim(self, p: int) -> int:
        return self.dims[p] if 0 <= p <= self.n else 0

    def delta(self, p: int) -> Operator:
        if 1 <= p <= self.n:
            return self.deltas[p - 1]
        return Operator.zeros(self.dim(p - 1), self.dim(p))

    def trimmed(self) -> "Chain":
        m = self.minimal_n
        return Chain(self.dims[: m + 1], self.deltas[:m])

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dims == other.dims and self.deltas == other.deltas

    def __hash__(self):
        return hash((self.dims, self.deltas))


@dataclass(frozen=True)
class ChainValidation:
    consecutive_ranks: tuple[int, ...]
    non_complex_degrees: tuple[int, ...]

    @property
    def is_complex(self) -> bool:
        return not self.non_complex_degrees


@dataclass(frozen=True)
class ChainAnalysis:
    per_degree: tuple[tuple[int, int], ...]
    index: int
    consecutive_ranks: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "per_degree": [
                {"p": p, "kernel_quotient_dim": k, "range_quotient_dim": r}
                for p, (k, r) in enumerate(self.per_degree)
            ],
            "index": self.index,
            "consecutive_ranks": list(self.consecutive_ranks),
        }


def chain_scale(ch: Chain) -> float:
    """Largest ||delta_p||; rank decisions across the chain are relative to it."""
    return max((operator_norm(d) for d in ch.deltas), default=0.0)


def validate_chain(ch: Chain, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> ChainValidation:
    """Ranks of delta_p delta_{p+1} for p = 1..n-1; nonzero ones are flagged."""
    scale = chain_scale(ch) if scale is None else scale
    ranks = tuple(
        numerical_rank(ch.delta(p) @ ch.delta(p + 1), tol, scale**2) for p in range(1, ch.n)
    )
    flagged = tuple(p for p, r in enumerate(ranks, start=1) if r > 0)
    return ChainValidation(ranks, flagged)


def analyze_chain(ch: Chain, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> ChainAnalysis:
    scale = chain_scale(ch) if scale is None else scale
    per_degree = []
    for p in range(ch.n + 1):
        n_p = kernel(ch.delta(p), tol, scale)
        r_next = range_(ch.delta(p + 1), tol, scale)
        per_degree.append((quotient_dim(n_p, r_next, tol), quotient_dim(r_next, n_p, tol)))
    index = sum((-1) ** p * (k - r) for p, (k, r) in enumerate(per_degree))
    return ChainAnalysis(tuple(per_degree), index, validate_chain(ch, tol, scale).consecutive_ranks)


def euler_characteristic(ch: Chain) -> int:
    return sum((-1) ** p * d for p, d in enumerate(ch.dims))


def _offsets(ch: Chain, parity: int) -> dict[int, int]:
    out, pos = {}, 0
    for p in range(parity, ch.n + 1, 2):
        out[p] = pos
        pos += ch.dims[p]
    return out


def summand_layout(ch: Chain) -> tuple[dict[int, int], dict[int, int]]:
    """Offsets of each H_p inside H1 (even p) and H2 (odd p), ascending p."""
    return _offsets(ch, 0), _offsets(ch, 1)


def chain_to_pair(ch: Chain) -> FredholmPair:
    """S = sum of even deltas: H1 -> H2, T = sum of odd deltas: H2 -> H1."""
    even, odd = summand_layout(ch)
    n1 = sum(ch.dims[p] for p in even)
    n2 = sum(ch.dims[p] for p in odd)
    S = _assemble(ch, (n2, n1), src=even, dst=odd, parity=0)
    T = _assemble(ch, (n1, n2), src=odd, dst=even, parity=1)
    return FredholmPair(S, T)


def _assemble(ch: Chain, shape, src: dict, dst: dict, parity: int) -> Operator:
    out = np.zeros(shape, dtype=np.complex128)
    for p in range(2 - parity, ch.n + 1, 2):
        d = ch.delta(p)
        r0, c0 = dst[p - 1], src[p]
        out[r0:r0 + d.rows, c0:c0 + d.cols] = d.entries
    return Operator(out)


def chain_laplacians(ch: Chain) -> list[Operator]:
    """Delta_p = delta_{p+1} delta_{p+1}* + delta_p* delta_p, p = 0..n."""
    out = []
    for p in range(ch.n + 1):
        up, down = ch.delta(p + 1), ch.delta(p)
        out.append(up @ adjoint(up) + adjoint(down) @ down)
    return out


def stitched_euler_operators(
    ch: Chain, tol: Tolerance = DEFAULT_TOL, scale: float | None = None
) -> tuple[Operator, Operator, int, int]:
    """Assemble the sums of delta_p + delta_{p+1}* over even and odd p.

    The even operator maps H1 -> H2 and the odd one H2 -> H1; both are
    built degree by degree, independently of :func:`chain_to_pair`.
    """
    scale = chain_scale(ch) if scale is None else scale
    even, odd = summand_layout(ch)
    n1 = sum(ch.dims[p] for p in even)
    n2 = sum(ch.dims[p] for p in odd)
    ops = []
    for parity, src, dst, shape in ((0, even, odd, (n2, n1)), (1, odd, even, (n1, n2))):
        out = np.zeros(shape, dtype=np.complex128)
        for p in range(parity, ch.n + 1, 2):
            c0 = src[p]
            down = ch.delta(p)
            if p - 1 >= 0:
                r0 = dst[p - 1]
                out[r0:r0 + down.rows, c0:c0 + down.cols] += down.entries
            up_adj = adjoint(ch.delta(p + 1))
            if p + 1 <= ch.n:
                r0 = dst[p + 1]
                out[r0:r0 + up_adj.rows, c0:c0 + up_adj.cols] += up_adj.entries
        ops.append(Operator(out))
    even_op, odd_op = ops
    return even_op, odd_op, fredholm_index(even_op, tol, scale), fredholm_index(odd_op, tol, scale)


def dual_chain(ch: Chain) -> Chain:
    """H'_p = H_{n-p}, delta'_p = delta_{n-p+1}*, with n minimal."""
    t = ch.trimmed()
    n = t.n
    dims = tuple(reversed(t.dims))
    deltas = tuple(adjoint(t.delta(n - p + 1)) for p in range(1, n + 1))
    return Chain(dims, deltas)


def verify_chain(ch: Chain, tol: Tolerance = DEFAULT_TOL) -> list[Check]:
    scale = chain_scale(ch)
    an = analyze_chain(ch, tol, scale)
    pair = chain_to_pair(ch)
    pan = analyze_pair(pair, tol, scale)
    even_op, odd_op, ind_even, ind_odd = stitched_euler_operators(ch, tol, scale)
    fwd, bwd = euler_operators(pair)
    dual = dual_chain(ch)
    n = ch.minimal_n

    checks = [
        equal_ints("index = Euler characteristic", an.index, euler_characteristic(ch)),
        equal_ints("index = ind(chain_to_pair)", an.index, pan.index),
        equal_ints("index = ind(even stitched)", an.index, ind_even),
        equal_ints("ind(even stitched) = -ind(odd stitched)", ind_even, -ind_odd),
        within("even stitched = S + T*", operator_norm(even_op.entries - fwd.entries), 0.0),
        within("odd stitched = T + S*", operator_norm(odd_op.entries - bwd.entries), 0.0),
        equal_ints(
            f"index = (-1)^{n} ind(dual chain)",
            an.index,
            (-1) ** n * analyze_chain(dual, tol, scale).index,
        ),
        equal_ints(
            "rank ST = sum over even p of rank delta_p delta_{p+1}",
            pan.rank_ST,
            sum(numerical_rank(ch.delta(p) @ ch.delta(p + 1), tol, scale**2) for p in range(0, ch.n + 1, 2)),
        ),
        equal_ints(
            "rank TS = sum over odd p of rank delta_p delta_{p+1}",
            pan.rank_TS,
            sum(numerical_rank(ch.delta(p) @ ch.delta(p + 1), tol, scale**2) for p in range(1, ch.n + 1, 2)),
        ),
    ]

    laps = chain_laplacians(ch)
    bound = tol.residual_atol * (1.0 + scale**2)
    for p, lap in enumerate(laps):
        m = lap.entries
        checks.append(within(f"Laplacian_{p} self-adjoint", operator_norm(m - m.conj().T), bound))
        lowest = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0]) if m.size else 0.0
        checks.append(within(f"Laplacian_{p} positive semidefinite", max(0.0, -lowest), bound))

    if all(r == 0 for r in an.consecutive_ranks):
        for p, lap in enumerate(laps):
            checks.append(
                equal_ints(f"dim N(Laplacian_{p}) = kernel quotient dim", kernel_dim(lap, tol, scale**2), an.per_degree[p][0])
            )
    return checks
