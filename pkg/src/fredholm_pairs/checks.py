"""Named theorem checks: a real residual plus a verdict."""

from __future__ import annotations

from dataclasses import dataclass


class InconsistencyError(RuntimeError):
    """A computed identity failed its residual bound."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "detail": self.detail,
        }


def equal_ints(name: str, lhs: int, rhs: int, detail: str = "") -> Check:
    lhs, rhs = int(lhs), int(rhs)
    return Check(name, lhs == rhs, float(abs(lhs - rhs)), detail or f"{lhs} == {rhs}")


def within(name: str, residual: float, bound: float, detail: str = "") -> Check:
    residual = float(residual)
    return Check(name, residual <= bound, residual, detail or f"<= {bound:.3e}")


def failed(checks) -> list[Check]:
    return [c for c in checks if not c.passed]
