"""Finite sections of classical operators on l^2.

A family is an infinite matrix given entrywise (shift, weighted shift,
diagonal, or a fixed block in the leading corner). ``realize`` cuts out the
top-left rows x cols corner, where the shape rule picks rows x cols from n:

    square     n x n
    rect-up    (n+1) x n     maps C^n -> C^(n+1), loses nothing for a right shift
    rect-down  n x (n+1)

Square sections of any family always have index 0, whatever the index of
the infinite operator; scan reports say so explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .hilbert import DEFAULT_TOL, DimensionError, Operator, Tolerance
from .pairs import FredholmPair, analyze_pair

KINDS = ("right-shift", "left-shift", "weighted-shift", "diagonal", "finite-rank-coupling", "zero")
SHAPES = ("square", "rect-up", "rect-down")
RULES = {
    "1/k": lambda k: 1.0 / k,
    "1/k^2": lambda k: 1.0 / k**2,
    "constant": lambda k: 1.0,
}

SQUARE_CAVEAT = (
    "square truncation: every n x n section has index = dim H1 - dim H2 = 0, "
    "so the index of the infinite-dimensional operator is not visible at any n"
)
ARTIFACT_NOTE = "finite-section probe; dimensions are those of the truncations, not of the limit operator"


@dataclass(frozen=True)
class OperatorFamily:
    kind: str
    shape: str = "square"
    rule: str = "1/k"
    value: float = 1.0
    block: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape rule {self.shape!r}; expected one of {', '.join(SHAPES)}")
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {', '.join(RULES)}")

    def shape_at(self, n: int) -> tuple[int, int]:
        if self.shape == "square":
            return n, n
        if self.shape == "rect-up":
            return n + 1, n
        return n, n + 1

    def weight(self, k: int) -> float:
        """k-th weight (1-based) of the named rule, times ``value``."""
        return self.value * RULES[self.rule](k)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "shape": self.shape}
        if self.kind in ("weighted-shift", "diagonal"):
            out.update(rule=self.rule, value=self.value)
        if self.kind == "finite-rank-coupling":
            out["block"] = [list(row) for row in self.block]
        return out


def realize_operator(fam: OperatorFamily, n: int, shape: tuple[int, int] | None = None) -> Operator:
    if n < 1:
        raise ValueError(f"truncation size must be >= 1, got {n}")
    rows, cols = fam.shape_at(n) if shape is None else shape
    m = np.zeros((rows, cols), dtype=np.complex128)
    if fam.kind == "right-shift":
        for i in range(min(rows - 1, cols)):
            m[i + 1, i] = 1.0
    elif fam.kind == "left-shift":
        for i in range(min(rows, cols - 1)):
            m[i, i + 1] = 1.0
    elif fam.kind == "weighted-shift":
        for i in range(min(rows - 1, cols)):
            m[i + 1, i] = fam.weight(i + 1)
    elif fam.kind == "diagonal":
        for i in range(min(rows, cols)):
            m[i, i] = fam.weight(i + 1)
    elif fam.kind == "finite-rank-coupling":
        block = np.array(fam.block, dtype=np.complex128).reshape(len(fam.block), -1) if fam.block else np.zeros((0, 0))
        r, c = min(rows, block.shape[0]), min(cols, block.shape[1])
        m[:r, :c] = block[:r, :c]
    return Operator(m)


def realize(fam: OperatorFamily, n: int, partner: OperatorFamily | None = None) -> FredholmPair:
    """The pair (S_n, T_n); a missing partner means T = 0."""
    S = realize_operator(fam, n)
    if partner is None or partner.kind == "zero":
        return FredholmPair(S, Operator.zeros(S.cols, S.rows))
    rows, cols = partner.shape_at(n)
    if (rows, cols) != (S.cols, S.rows):
        raise DimensionError(
            f"at n={n} the partner is {rows}x{cols} but must be {S.cols}x{S.rows} "
            f"to map back from the {S.rows}x{S.cols} operator"
        )
    return FredholmPair(S, realize_operator(partner, n))


@dataclass(frozen=True)
class StabilizationReport:
    family: OperatorFamily
    partner: OperatorFamily | None
    per_n: tuple[dict, ...]
    stable_window: int
    stabilized: bool
    limits: tuple[int, int, int, int, int] | None
    caveats: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "family": self.family.to_dict(),
            "partner": self.partner.to_dict() if self.partner else {"kind": "zero"},
            "shape_rule": self.family.shape,
            "per_n": list(self.per_n),
            "stable_window": self.stable_window,
            "stabilized": self.stabilized,
            "limits": dict(zip(("a", "b", "c", "d", "index"), self.limits)) if self.limits else None,
            "caveats": list(self.caveats),
        }


def stabilization_scan(
    fam: OperatorFamily,
    partner: OperatorFamily | None = None,
    n_range: Iterable[int] = range(1, 41),
    stable_window: int = 3,
    tol: Tolerance = DEFAULT_TOL,
) -> StabilizationReport:
    ns = list(n_range)
    if not ns:
        raise ValueError("empty n range")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n range must be strictly ascending")
    if stable_window < 2:
        raise ValueError(f"stable_window must be >= 2, got {stable_window}")

    per_n = []
    for n in ns:
        pair = realize(fam, n, partner)
        an = analyze_pair(pair, tol)
        per_n.append({
            "n": n, "rows": pair.dim_H2, "cols": pair.dim_H1,
            "a": an.a, "b": an.b, "c": an.c, "d": an.d, "index": an.index,
        })

    keys = ("a", "b", "c", "d", "index")
    tail = [tuple(e[k] for k in keys) for e in per_n[-stable_window:]]
    stabilized = len(tail) == stable_window and len(set(tail)) == 1
    caveats = [ARTIFACT_NOTE]
    if any(e["rows"] == e["cols"] for e in per_n):
        caveats.append(SQUARE_CAVEAT)
    return StabilizationReport(
        family=fam,
        partner=partner,
        per_n=tuple(per_n),
        stable_window=stable_window,
        stabilized=stabilized,
        limits=tail[0] if stabilized else None,
        caveats=tuple(caveats),
    )
