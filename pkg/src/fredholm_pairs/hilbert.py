"""Finite-dimensional Hilbert-space substrate.

Operators are dense complex matrices; subspaces carry orthonormal column
bases. Every dimension is decided by a relative singular-value threshold,
so all counts returned here are exact non-negative integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Shapes of operators or subspaces are incompatible."""


class ComputationError(RuntimeError):
    """A numerical kernel (SVD) failed to converge."""


@dataclass(frozen=True)
class Tolerance:
    rank_rtol: float = 1e-10
    residual_atol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rtol", "residual_atol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerance()


class Operator:
    """Dense complex matrix mapping C^cols -> C^rows.

    The entries are copied on construction and frozen, so operators can be
    shared freely.
    """

    __slots__ = ("_m",)

    def __init__(self, entries):
        m = np.array(entries, dtype=np.complex128)
        if m.ndim != 2:
            raise DimensionError(f"operator entries must be 2-D, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.setflags(write=False)
        self._m = m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Operator":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> "Operator":
        return cls(np.eye(n, dtype=np.complex128))

    @property
    def entries(self) -> np.ndarray:
        return self._m

    @property
    def rows(self) -> int:
        return self._m.shape[0]

    @property
    def cols(self) -> int:
        return self._m.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._m.shape

    @property
    def H(self) -> "Operator":
        return adjoint(self)

    def __matmul__(self, other: "Operator") -> "Operator":
        return compose(self, other)

    def __add__(self, other: "Operator") -> "Operator":
        return add(self, other)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_shape(self, other, "subtract")
        return Operator(self._m - other._m)

    def __neg__(self) -> "Operator":
        return Operator(-self._m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._m, other._m))

    def __hash__(self):
        return hash((self.shape, self._m.tobytes()))

    def __repr__(self) -> str:
        return f"Operator({self.rows}x{self.cols})"


class Subspace:
    """Subspace of C^ambient_dim stored as an orthonormal column basis."""

    __slots__ = ("_basis",)

    def __init__(self, basis, ambient_dim: int | None = None):
        b = np.array(basis, dtype=np.complex128)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.ndim != 2:
            raise DimensionError(f"basis must be 2-D, got shape {b.shape}")
        if ambient_dim is not None and b.shape[0] != ambient_dim:
            if b.size == 0:
                b = np.zeros((ambient_dim, 0), dtype=np.complex128)
            else:
                raise DimensionError(
                    f"basis has {b.shape[0]} rows, ambient_dim is {ambient_dim}"
                )
        if b.shape[1] > b.shape[0]:
            raise DimensionError("more basis vectors than the ambient dimension")
        gram = b.conj().T @ b
        if b.shape[1] and np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-10:
            raise ValueError("subspace basis columns are not orthonormal")
        b.setflags(write=False)
        self._basis = b

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize arbitrary spanning columns; rank decided by ``tol``."""
        v = np.array(vectors, dtype=np.complex128)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if ambient_dim is None:
            ambient_dim = v.shape[0]
        if v.size == 0:
            return cls.zero(ambient_dim)
        u, s, _ = _svd(v, full_matrices=False)
        r = _rank_from_singular_values(s, v.shape, tol)
        return cls(u[:, :r], ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=np.complex128), ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=np.complex128), ambient_dim)

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def ambient_dim(self) -> int:
        return self._basis.shape[0]

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    def projector(self) -> np.ndarray:
        return self._basis @ self._basis.conj().T

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _svd(a: np.ndarray, full_matrices: bool):
    try:
        return np.linalg.svd(a, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"SVD failed for {a.shape[0]}x{a.shape[1]} matrix: {exc}") from exc


def _rank_from_singular_values(
    s: np.ndarray, shape: tuple[int, int], tol: Tolerance, reference: float | None = None
) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    scale = s[0] if reference is None else reference
    threshold = tol.rank_rtol * max(shape) * scale
    return int(np.count_nonzero(s > threshold))


def _as_array(a) -> np.ndarray:
    return a.entries if isinstance(a, Operator) else np.asarray(a, dtype=np.complex128)


def _check_same_shape(a: Operator, b: Operator, what: str):
    if a.shape != b.shape:
        raise DimensionError(f"cannot {what} {a.rows}x{a.cols} and {b.rows}x{b.cols} operators")


def adjoint(a: Operator) -> Operator:
    return Operator(a.entries.conj().T)


def numerical_rank(a, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> int:
    """Count singular values above ``rank_rtol * max(m, n) * scale``.

    ``scale`` is the largest singular value unless ``reference`` is given.
    A reference is needed when ``a`` is itself a byproduct (a product or a
    compression) whose true size should be judged against its factors:
    rounding noise of 1e-16 would otherwise count as full rank.
    """
    m = _as_array(a)
    if m.size == 0:
        return 0
    s = _svd(m, full_matrices=False)[1]
    return _rank_from_singular_values(s, m.shape, tol, reference)


def singular_values(a) -> np.ndarray:
    m = _as_array(a)
    if m.size == 0:
        return np.zeros(0)
    return _svd(m, full_matrices=False)[1]


def kernel(a: Operator, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> Subspace:
    m = a.entries
    if a.cols == 0:
        return Subspace.zero(0)
    if a.rows == 0:
        return Subspace.full(a.cols)
    _, s, vh = _svd(m, full_matrices=True)
    r = _rank_from_singular_values(s, m.shape, tol, reference)
    return Subspace(vh[r:].conj().T, a.cols)


def range_(a: Operator, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> Subspace:
    m = a.entries
    if m.size == 0:
        return Subspace.zero(a.rows)
    u, s, _ = _svd(m, full_matrices=False)
    r = _rank_from_singular_values(s, m.shape, tol, reference)
    return Subspace(u[:, :r], a.rows)


def orthogonal_complement(x: Subspace) -> Subspace:
    n = x.ambient_dim
    if x.dim == 0:
        return Subspace.full(n)
    if x.dim == n:
        return Subspace.zero(n)
    u = _svd(x.basis, full_matrices=True)[0]
    return Subspace(u[:, x.dim:], n)


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(
            f"subspaces live in different spaces (C^{a.ambient_dim} vs C^{b.ambient_dim})"
        )


def subspace_sum_dim(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> int:
    _check_ambient(a, b)
    return numerical_rank(np.hstack([a.basis, b.basis]), tol)


def subspace_intersection_dim(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> int:
    return a.dim + b.dim - subspace_sum_dim(a, b, tol)


def quotient_dim(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> int:
    """dim A/(A n B)."""
    return a.dim - subspace_intersection_dim(a, b, tol)


def subspace_sum(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(np.hstack([a.basis, b.basis]), a.ambient_dim, tol)


def subspace_intersection(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Basis of A n B from the null space of [A | -B].

    Uses the same rank decision as :func:`subspace_sum_dim`, so the result
    always has dimension ``subspace_intersection_dim(a, b)``.
    """
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    null = kernel(Operator(np.hstack([a.basis, -b.basis])), tol)
    if null.dim == 0:
        return Subspace.zero(a.ambient_dim)
    return Subspace.span(a.basis @ null.basis[: a.dim], a.ambient_dim, tol)


def operator_norm(a) -> float:
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def compose(a: Operator, b: Operator) -> Operator:
    """a after b."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot compose {a.rows}x{a.cols} after {b.rows}x{b.cols}")
    return Operator(a.entries @ b.entries)


def add(a: Operator, b: Operator) -> Operator:
    _check_same_shape(a, b, "add")
    return Operator(a.entries + b.entries)


def scale(a: Operator, factor: complex) -> Operator:
    return Operator(factor * a.entries)


def direct_sum(blocks: Sequence[Operator]) -> Operator:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.complex128)
    i = j = 0
    for b in blocks:
        out[i:i + b.rows, j:j + b.cols] = b.entries
        i += b.rows
        j += b.cols
    return Operator(out)


def diagonal_blocks(a: Operator, row_sizes: Iterable[int], col_sizes: Iterable[int]) -> list[Operator]:
    """Inverse of :func:`direct_sum` given the block partition."""
    out = []
    i = j = 0
    for r, c in zip(row_sizes, col_sizes):
        out.append(Operator(a.entries[i:i + r, j:j + c]))
        i += r
        j += c
    return out


def block_2x2(a11: Operator, a12: Operator, a21: Operator, a22: Operator) -> Operator:
    """Assemble [[a11, a12], [a21, a22]]."""
    named = {"a11": a11, "a12": a12, "a21": a21, "a22": a22}
    for top, bottom in (("a11", "a21"), ("a12", "a22")):
        if named[top].cols != named[bottom].cols:
            raise DimensionError(
                f"blocks {top} and {bottom} disagree on column count "
                f"({named[top].cols} vs {named[bottom].cols})"
            )
    for left, right in (("a11", "a12"), ("a21", "a22")):
        if named[left].rows != named[right].rows:
            raise DimensionError(
                f"blocks {left} and {right} disagree on row count "
                f"({named[left].rows} vs {named[right].rows})"
            )
    r1, c1 = a11.shape
    out = np.zeros((r1 + a21.rows, c1 + a12.cols), dtype=np.complex128)
    out[:r1, :c1] = a11.entries
    out[:r1, c1:] = a12.entries
    out[r1:, :c1] = a21.entries
    out[r1:, c1:] = a22.entries
    return Operator(out)


def fredholm_index(a: Operator, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> int:
    """dim N(A) - codim R(A)."""
    return kernel(a, tol, reference).dim - (a.rows - range_(a, tol, reference).dim)


def kernel_dim(a: Operator, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> int:
    return a.cols - numerical_rank(a, tol, reference)


def cokernel_dim(a: Operator, tol: Tolerance = DEFAULT_TOL, reference: float | None = None) -> int:
    return a.rows - numerical_rank(a, tol, reference)


# Public spelling; defined last so the builtin stays usable above.
range = range_  # noqa: A001
