"""JSON encoding of operators, pairs and chains.

A matrix is ``{"rows": m, "cols": n, "entries": [[e, ...], ...]}`` with
row-major entries; each entry is ``[re, im]`` or a bare real number.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .chains import Chain
from .hilbert import Operator
from .pairs import FredholmPair


class MatrixParseError(ValueError):
    """Document does not match the schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class MatrixValidationError(MatrixParseError):
    """Schema is fine but a value is not acceptable (e.g. NaN)."""


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _real(x: Any, path: str) -> float:
    if not _is_number(x):
        raise MatrixParseError(path, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        raise MatrixValidationError(path, f"non-finite value {x!r}")
    return float(x)


def _count(doc: dict, key: str, path: str) -> int:
    if key not in doc:
        raise MatrixParseError(path, f"missing {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise MatrixParseError(f"{path}.{key}", f"expected a non-negative integer, got {v!r}")
    return v


def parse_matrix_json(doc: Any, path: str = "$") -> Operator:
    if not isinstance(doc, dict):
        raise MatrixParseError(path, "matrix must be an object with rows, cols, entries")
    rows = _count(doc, "rows", path)
    cols = _count(doc, "cols", path)
    if "entries" not in doc:
        raise MatrixParseError(path, "missing 'entries'")
    entries = doc["entries"]
    epath = f"{path}.entries"
    if not isinstance(entries, list) or len(entries) != rows:
        raise MatrixParseError(epath, f"expected a list of {rows} rows")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(entries):
        rpath = f"{epath}[{i}]"
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixParseError(rpath, f"expected a list of {cols} entries")
        for j, e in enumerate(row):
            cpath = f"{rpath}[{j}]"
            if isinstance(e, list):
                if len(e) != 2:
                    raise MatrixParseError(cpath, "complex entry must be [re, im]")
                out[i, j] = complex(_real(e[0], f"{cpath}[0]"), _real(e[1], f"{cpath}[1]"))
            else:
                out[i, j] = _real(e, cpath)
    return Operator(out)


def emit_matrix_json(a: Operator) -> dict:
    return {
        "rows": a.rows,
        "cols": a.cols,
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a.entries],
    }


def parse_pair_json(doc: Any) -> FredholmPair:
    if not isinstance(doc, dict):
        raise MatrixParseError("$", "pair file must be an object with keys S and T")
    for key in ("S", "T"):
        if key not in doc:
            raise MatrixParseError("$", f"missing {key!r}")
    return FredholmPair(parse_matrix_json(doc["S"], "$.S"), parse_matrix_json(doc["T"], "$.T"))


def emit_pair_json(p: FredholmPair) -> dict:
    return {"S": emit_matrix_json(p.S), "T": emit_matrix_json(p.T)}


def parse_chain_json(doc: Any) -> Chain:
    if not isinstance(doc, dict):
        raise MatrixParseError("$", "chain file must be an object with keys dims and deltas")
    dims = doc.get("dims")
    if not isinstance(dims, list) or not dims:
        raise MatrixParseError("$.dims", "expected a non-empty list of dimensions")
    for i, d in enumerate(dims):
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise MatrixParseError(f"$.dims[{i}]", f"expected a non-negative integer, got {d!r}")
    deltas = doc.get("deltas", [])
    if not isinstance(deltas, list):
        raise MatrixParseError("$.deltas", "expected a list of matrices")
    ops = [parse_matrix_json(m, f"$.deltas[{i}]") for i, m in enumerate(deltas)]
    return Chain(dims, ops)


def emit_chain_json(ch: Chain) -> dict:
    return {"dims": list(ch.dims), "deltas": [emit_matrix_json(d) for d in ch.deltas]}
