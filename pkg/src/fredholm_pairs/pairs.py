"""Fredholm pairs (S, T) with S: H1 -> H2 and T: H2 -> H1.

Covers the four quotient dimensions and the index, the compression onto
the orthocomplements of R(TS) and R(ST), the self-adjoint block operators
U, V and the Laplacian blocks, the product-zero decomposition, the Euler
operator S + T*, and the dual pair (T*, S*).

In finite dimensions every pair is Fredholm, so the useful output is
quantitative: dimensions, indices and residuals of the identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .checks import Check, InconsistencyError, equal_ints, within
from .hilbert import (
    DEFAULT_TOL,
    DimensionError,
    Operator,
    Subspace,
    Tolerance,
    adjoint,
    block_2x2,
    cokernel_dim,
    direct_sum,
    fredholm_index,
    kernel,
    kernel_dim,
    numerical_rank,
    operator_norm,
    orthogonal_complement,
    quotient_dim,
    range_,
    subspace_intersection,
    subspace_sum_dim,
)


class ProductNotZeroError(ValueError):
    def __init__(self, st_norm: float, ts_norm: float, bound: float):
        super().__init__(
            f"pair products do not vanish: ||ST|| = {st_norm:.3e}, "
            f"||TS|| = {ts_norm:.3e}, bound {bound:.3e}"
        )
        self.st_norm = st_norm
        self.ts_norm = ts_norm


@dataclass(frozen=True, eq=False)
class FredholmPair:
    S: Operator
    T: Operator

    def __post_init__(self):
        if self.S.cols != self.T.rows or self.S.rows != self.T.cols:
            raise DimensionError(
                f"S is {self.S.rows}x{self.S.cols} and T is {self.T.rows}x{self.T.cols}; "
                "need S: H1 -> H2 and T: H2 -> H1"
            )

    @property
    def dim_H1(self) -> int:
        return self.S.cols

    @property
    def dim_H2(self) -> int:
        return self.S.rows

    def __eq__(self, other):
        if not isinstance(other, FredholmPair):
            return NotImplemented
        return self.S == other.S and self.T == other.T

    def __hash__(self):
        return hash((self.S, self.T))


@dataclass(frozen=True)
class PairAnalysis:
    a: int
    b: int
    c: int
    d: int
    index: int
    rank_ST: int
    rank_TS: int
    dim_H1: int
    dim_H2: int
    residuals: dict = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "index": self.index,
            "rank_ST": self.rank_ST,
            "rank_TS": self.rank_TS,
            "dim_H1": self.dim_H1,
            "dim_H2": self.dim_H2,
            "residuals": dict(sorted(self.residuals.items())),
        }


@dataclass(frozen=True)
class CompressedPair:
    F1: Subspace
    F2: Subspace
    S_c: Operator
    T_c: Operator
    P1: Operator
    P2: Operator
    product_residual: float
    scale: float

    @property
    def pair(self) -> FredholmPair:
        return FredholmPair(self.S_c, self.T_c)


@dataclass(frozen=True)
class ProductZeroDecomposition:
    RT: Subspace
    N1: Subspace
    L1: Subspace
    RS: Subspace
    N2: Subspace
    L2: Subspace
    checks: tuple = ()


def pair_scale(p: FredholmPair) -> float:
    """max(||S||, ||T||): reference size for every rank decision on the pair."""
    return max(operator_norm(p.S), operator_norm(p.T))


def product_scale(p: FredholmPair) -> float:
    return 1.0 + operator_norm(p.S) * operator_norm(p.T)


def quadratic_scale(p: FredholmPair) -> float:
    return 1.0 + operator_norm(p.S) ** 2 + operator_norm(p.T) ** 2


def analyze_pair(p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> PairAnalysis:
    """Quotient dimensions a, b, c, d and index a - b - c + d.

    Ranks of S and T are judged against ``scale`` (default ``pair_scale``),
    ranks of ST and TS against its square.
    """
    scale = pair_scale(p) if scale is None else scale
    nS, rS = kernel(p.S, tol, scale), range_(p.S, tol, scale)
    nT, rT = kernel(p.T, tol, scale), range_(p.T, tol, scale)
    a = quotient_dim(nS, rT, tol)
    b = quotient_dim(rT, nS, tol)
    c = quotient_dim(nT, rS, tol)
    d = quotient_dim(rS, nT, tol)
    ST = p.S @ p.T
    TS = p.T @ p.S
    return PairAnalysis(
        a=a, b=b, c=c, d=d,
        index=a - b - c + d,
        rank_ST=numerical_rank(ST, tol, scale**2),
        rank_TS=numerical_rank(TS, tol, scale**2),
        dim_H1=p.dim_H1,
        dim_H2=p.dim_H2,
        residuals={"norm_ST": operator_norm(ST), "norm_TS": operator_norm(TS)},
    )


def pair_index(p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> int:
    return analyze_pair(p, tol, scale).index


def swap_pair(p: FredholmPair) -> FredholmPair:
    return FredholmPair(p.T, p.S)


def dual_pair(p: FredholmPair) -> FredholmPair:
    """(S, T) -> (T*, S*), acting on (H2, H1)."""
    return FredholmPair(adjoint(p.T), adjoint(p.S))


def compress_pair(p: FredholmPair, tol: Tolerance = DEFAULT_TOL) -> CompressedPair:
    """Restrict the pair to the orthocomplements of F1 = R(TS), F2 = R(ST).

    Compressed operators are expressed in orthonormal coordinates of the
    complements, so their products must vanish; a residual above
    ``residual_atol * (1 + ||S|| ||T||)`` raises InconsistencyError.
    """
    scale = pair_scale(p)
    F1 = range_(p.T @ p.S, tol, scale**2)
    F2 = range_(p.S @ p.T, tol, scale**2)
    Q1 = orthogonal_complement(F1).basis
    Q2 = orthogonal_complement(F2).basis
    P1 = Operator(Q1.conj().T)
    P2 = Operator(Q2.conj().T)
    S_c = Operator(Q2.conj().T @ p.S.entries @ Q1)
    T_c = Operator(Q1.conj().T @ p.T.entries @ Q2)
    residual = max(operator_norm(S_c @ T_c), operator_norm(T_c @ S_c))
    bound = tol.residual_atol * product_scale(p)
    if residual > bound:
        raise InconsistencyError(
            f"compressed products do not vanish: residual {residual:.3e} > {bound:.3e}",
            residual,
        )
    return CompressedPair(F1, F2, S_c, T_c, P1, P2, residual, scale)


def build_block_U(p: FredholmPair) -> Operator:
    """U = [[0, T], [S, 0]] on H1 + H2, H1 coordinates first."""
    n1, n2 = p.dim_H1, p.dim_H2
    return block_2x2(Operator.zeros(n1, n1), p.T, p.S, Operator.zeros(n2, n2))


def build_V(p: FredholmPair) -> Operator:
    U = build_block_U(p)
    return U + adjoint(U)


def build_laplacian_blocks(p: FredholmPair) -> tuple[Operator, Operator]:
    """(TT* + S*S on H1, SS* + T*T on H2)."""
    S, T = p.S, p.T
    return (T @ T.H + S.H @ S, S @ S.H + T.H @ T)


def block_identity_residuals(p: FredholmPair) -> dict[str, float]:
    U = build_block_U(p)
    Us = adjoint(U)
    V = U + Us
    lap1, lap2 = build_laplacian_blocks(p)
    UUs = (U @ Us + Us @ U).entries
    V2 = (V @ V).entries
    return {
        "V_self_adjoint": operator_norm(V.entries - V.entries.conj().T),
        "UU*+U*U=diag(laplacians)": operator_norm(UUs - direct_sum([lap1, lap2]).entries),
        "V^2=U^2+U*^2+UU*+U*U": operator_norm(
            V2 - ((U @ U).entries + (Us @ Us).entries + UUs)
        ),
    }


def euler_operators(p: FredholmPair) -> tuple[Operator, Operator]:
    """(S + T*: H1 -> H2, T + S*: H2 -> H1)."""
    return (p.S + adjoint(p.T), p.T + adjoint(p.S))


def euler_index(p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> tuple[int, int]:
    """(ind(S + T*), ind(T + S*)) by rank-nullity."""
    scale = pair_scale(p) if scale is None else scale
    forward, backward = euler_operators(p)
    return fredholm_index(forward, tol, scale), fredholm_index(backward, tol, scale)


def products_vanish(p: FredholmPair, tol: Tolerance = DEFAULT_TOL) -> bool:
    bound = tol.residual_atol * product_scale(p)
    return operator_norm(p.S @ p.T) <= bound and operator_norm(p.T @ p.S) <= bound


def product_zero_decomposition(
    p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None
) -> ProductZeroDecomposition:
    """Split H1 = (R(T) + N1) + L1 and H2 = (R(S) + N2) + L2.

    N1 is the part of N(S) orthogonal to R(T), L1 = N(S)^perp, and likewise
    on H2. Raises InconsistencyError when the computed pieces do not tile
    the spaces, which happens when the products are below the residual
    threshold but the rank decisions still see R(T) outside N(S).
    """
    bound = tol.residual_atol * product_scale(p)
    st, ts = operator_norm(p.S @ p.T), operator_norm(p.T @ p.S)
    if st > bound or ts > bound:
        raise ProductNotZeroError(st, ts, bound)

    scale = pair_scale(p) if scale is None else scale
    nS, rT = kernel(p.S, tol, scale), range_(p.T, tol, scale)
    nT, rS = kernel(p.T, tol, scale), range_(p.S, tol, scale)
    N1 = subspace_intersection(nS, orthogonal_complement(rT), tol)
    N2 = subspace_intersection(nT, orthogonal_complement(rS), tol)
    L1 = orthogonal_complement(nS)
    L2 = orthogonal_complement(nT)

    checks = [
        equal_ints("H1 = R(T) + N1 + L1", rT.dim + N1.dim + L1.dim, p.dim_H1),
        equal_ints("H2 = R(S) + N2 + L2", rS.dim + N2.dim + L2.dim, p.dim_H2),
        equal_ints("R(T) + N1 = N(S)", subspace_sum_dim(rT, N1, tol), nS.dim),
        equal_ints("R(S) + N2 = N(T)", subspace_sum_dim(rS, N2, tol), nT.dim),
    ]
    bad = [c for c in checks if not c.passed]
    if bad:
        raise InconsistencyError(
            "product-zero decomposition does not tile the spaces: "
            + "; ".join(f"{c.name} ({c.detail})" for c in bad),
            max(c.residual for c in bad),
        )

    forward, _ = euler_operators(p)
    checks += [
        equal_ints("dim N(S+T*) = dim N1", kernel_dim(forward, tol, scale), N1.dim),
        equal_ints(
            "codim R(S+T*) = dim N2", p.dim_H2 - numerical_rank(forward, tol, scale), N2.dim
        ),
    ]
    return ProductZeroDecomposition(rT, N1, L1, rS, N2, L2, tuple(checks))


def product_zero_characterizations(
    p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None
) -> list[Check]:
    """Kernel-dimension identities that hold when ST = 0 and TS = 0."""
    scale = pair_scale(p) if scale is None else scale
    an = analyze_pair(p, tol, scale)
    forward, backward = euler_operators(p)
    lap1, lap2 = build_laplacian_blocks(p)
    return [
        equal_ints("dim N(S+T*) = a", kernel_dim(forward, tol, scale), an.a),
        equal_ints("codim R(S+T*) = c", cokernel_dim(forward, tol, scale), an.c),
        equal_ints("dim N(T+S*) = c", kernel_dim(backward, tol, scale), an.c),
        equal_ints("dim N(V) = a + c", kernel_dim(build_V(p), tol, scale), an.a + an.c),
        equal_ints("dim N(TT*+S*S) = a", kernel_dim(lap1, tol, scale**2), an.a),
        equal_ints("dim N(SS*+T*T) = c", kernel_dim(lap2, tol, scale**2), an.c),
    ]


def verify_pair(p: FredholmPair, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> list[Check]:
    """Run every identity the pair should satisfy and report each one.

    Pass ``scale`` when the pair is itself derived (e.g. a compression) and
    its rank decisions should follow the parent pair.
    """
    scale = pair_scale(p) if scale is None else scale
    an = analyze_pair(p, tol, scale)
    ind_fwd, ind_bwd = euler_index(p, tol, scale)
    checks = [
        equal_ints("index = a - b - c + d", an.index, an.a - an.b - an.c + an.d),
        equal_ints("index = ind(S+T*)", an.index, ind_fwd),
        equal_ints("ind(S+T*) = -ind(T+S*)", ind_fwd, -ind_bwd),
        equal_ints("index = dim H1 - dim H2", an.index, p.dim_H1 - p.dim_H2),
        equal_ints("ind(T,S) = -ind(S,T)", pair_index(swap_pair(p), tol, scale), -an.index),
        equal_ints("ind(T*,S*) = ind(S,T)", pair_index(dual_pair(p), tol, scale), an.index),
    ]

    bound = tol.residual_atol * product_scale(p)
    try:
        comp = compress_pair(p, tol)
    except InconsistencyError as exc:
        checks.append(Check("compressed products vanish", False, float(exc.residual), str(exc)))
    else:
        checks.append(within("compressed products vanish", comp.product_residual, bound))
        checks.append(
            equal_ints(
                "ind(S,T) = ind(compressed) - rank ST + rank TS",
                an.index,
                pair_index(comp.pair, tol, comp.scale) - an.rank_ST + an.rank_TS,
            )
        )

    qbound = tol.residual_atol * quadratic_scale(p)
    for name, residual in block_identity_residuals(p).items():
        checks.append(within(name, residual, qbound))

    if products_vanish(p, tol):
        try:
            dec = product_zero_decomposition(p, tol, scale)
        except InconsistencyError as exc:
            checks.append(Check("product-zero decomposition", False, float(exc.residual), str(exc)))
        else:
            checks.extend(dec.checks)
            checks.extend(product_zero_characterizations(p, tol, scale))
    return checks
