"""Curvature-pinching regimes, seen only through the integer index bounds they force."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .iteration import average_index, index
from .normal_form import Decomposition, Violation

__all__ = ["PinchingRegime", "MainPinch", "WeakPinch", "regime_from_name", "gate"]


@dataclass(frozen=True)
class PinchingRegime:
    """``kind`` is "main" (bound [(2n-3)m/(n-1)](n-1)) or "weak" (bound [3m/2](n-1))."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("main", "weak"):
            raise ValueError(f"unknown regime {self.kind!r}; expected 'main' or 'weak'")
        if self.n < 4:
            raise ValueError(f"pinching regimes need n >= 4, got n={self.n}")

    def min_index(self, m: int) -> int:
        """Lower bound on i(c^m) for every prime closed geodesic c."""
        if m < 1:
            raise ValueError("m must be >= 1")
        n1 = self.n - 1
        if self.kind == "main":
            return ((2 * self.n - 3) * m // n1) * n1
        return (3 * m // 2) * n1

    def min_avg_index(self) -> Fraction:
        """Strict lower bound on the average index."""
        if self.kind == "main":
            return Fraction(2 * self.n - 3)
        return Fraction(3 * (self.n - 1), 2)

    def __str__(self):
        return f"{self.kind}(n={self.n})"


def MainPinch(n: int) -> PinchingRegime:
    return PinchingRegime("main", n)


def WeakPinch(n: int) -> PinchingRegime:
    return PinchingRegime("weak", n)


def regime_from_name(name: str, n: int) -> PinchingRegime:
    return PinchingRegime(name, n)


def gate(d: Decomposition, regime: PinchingRegime, m_max: int) -> list[Violation]:
    """Empty when the average index beats the strict bound and every i(c^m), m <= m_max, meets min_index."""
    out = []
    avg, bound = average_index(d), regime.min_avg_index()
    if not avg > bound:
        out.append(Violation("average_index", f"{d.name}: average index {avg} <= {bound}"))
    for m in range(1, m_max + 1):
        i_m, lo = index(d, m), regime.min_index(m)
        if i_m < lo:
            out.append(Violation("index", f"{d.name}: i(c^{m}) = {i_m} < {lo}"))
    return out
