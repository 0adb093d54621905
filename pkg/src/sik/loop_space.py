"""Betti numbers of the free loop space pair of S^n, critical-module supports and Morse inequalities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .iteration import index, nullity
from .normal_form import Decomposition

__all__ = [
    "betti",
    "betti_table",
    "poincare_series",
    "series_div",
    "Pattern",
    "CriticalSupport",
    "critical_support",
    "MorseViolation",
    "MorseReport",
    "morse_check",
]


def betti(n: int, q: int) -> int:
    """rank H_q of the quotient free loop space of S^n relative to constant loops."""
    if n < 2:
        raise ValueError(f"sphere dimension n={n} must be >= 2")
    if q < n - 1:
        return 0
    if n % 2:
        k = (n - 1) // 2
        # singles from 2k on even degrees, doubles at 4k + 2l with k | l
        if q % 2:
            return 0
        l = (q - 4 * k) // 2
        return 2 if q >= 4 * k and l % k == 0 else 1
    k = n // 2
    if q % 2 == 0:
        return 0
    p = 2 * k - 1
    l = (q - 3 * p) // 2
    return 2 if q >= 3 * p and l % p == 0 else 1


def betti_table(n: int, q_max: int) -> list[int]:
    return [betti(n, q) for q in range(q_max + 1)]


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list, b: list) -> list:
    size = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)]


def _mono(c: int, e: int) -> list:
    return [0] * e + [c]


def series_div(num: list, den: list, order: int) -> list[Fraction]:
    """Coefficients 0..order of num/den as a formal power series (den[0] != 0)."""
    if not den or den[0] == 0:
        raise ValueError("denominator must have a non-zero constant term")
    d0 = Fraction(den[0])
    out: list[Fraction] = []
    for q in range(order + 1):
        acc = Fraction(num[q] if q < len(num) else 0)
        for j in range(1, min(q, len(den) - 1) + 1):
            acc -= den[j] * out[q - j]
        out.append(acc / d0)
    return out


def _frac_sum(p1, q1, p2, q2):
    """p1/q1 + p2/q2 as (numerator, denominator) polynomials."""
    return _poly_add(_poly_mul(p1, q2), _poly_mul(p2, q1)), _poly_mul(q1, q2)


def poincare_series(n: int, q_max: int) -> list[Fraction]:
    """Truncated expansion of the closed-form Poincare series, by exact series division."""
    if n < 2:
        raise ValueError("n must be >= 2")
    one_minus = lambda e: _poly_add([1], _mono(-1, e))  # noqa: E731
    if n % 2:
        num, den = _frac_sum([1], one_minus(2), _mono(1, n - 1), one_minus(n - 1))
    else:
        mm = 1  # the multiplicity appearing in the even case is 1
        e = n * (mm + 1) - 2
        num, den = _frac_sum([1], one_minus(2), _mono(1, e), one_minus(e))
        num = _poly_mul(num, one_minus(n * mm))
        den = _poly_mul(den, one_minus(n))
    num = _poly_mul(_mono(1, n - 1), num)
    return series_div(num, den, q_max)


# -- critical modules -----------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """One admissible shape of the local homology k_0..k_nu.

    ``kind``: "zero" (nothing), "bottom" (k_0 = 1 only), "top" (k_nu = 1 only),
    "middle" (some k_j >= 1 with 0 < j < nu, k_0 = k_nu = 0).
    """

    kind: str

    def degrees(self, i: int, nu: int) -> tuple[int, ...]:
        if self.kind == "bottom":
            return (i,)
        if self.kind == "top":
            return (i + nu,)
        if self.kind == "middle":
            return tuple(range(i + 1, i + nu))
        return ()


@dataclass(frozen=True)
class CriticalSupport:
    name: str
    m: int
    i: int
    nu: int
    exact: bool
    parity_even: bool  # i(c^m) - i(c) even

    @property
    def interval(self) -> tuple[int, int]:
        return self.i, self.i + self.nu

    @property
    def support(self) -> frozenset[int]:
        """Degrees that can carry a non-zero critical module."""
        if self.exact:
            return frozenset({self.i}) if self.parity_even else frozenset()
        return frozenset(range(self.i, self.i + self.nu + 1))

    def patterns(self) -> list[Pattern]:
        """Admissible non-zero shapes (the exact case has at most one)."""
        if self.exact:
            return [Pattern("bottom")] if self.parity_even else []
        out = [Pattern("bottom"), Pattern("top")]
        if self.nu >= 2:
            out.append(Pattern("middle"))
        return out

    def admits(self, k: Mapping[int, int] | list[int]) -> bool:
        """Whether a local dimension vector k_0..k_nu is admissible."""
        ks = list(k) if not isinstance(k, Mapping) else [k.get(j, 0) for j in range(self.nu + 1)]
        if len(ks) != self.nu + 1 or any(v < 0 for v in ks):
            return False
        if self.exact:
            return ks == [0] or (ks == [1] and self.parity_even)
        if ks[0] > 1 or ks[-1] > 1:
            return False
        mid = any(ks[1:-1])
        if ks[0] and (ks[-1] or mid):
            return False
        if ks[-1] and mid:
            return False
        return True


def critical_support(d: Decomposition, m: int, i1: int | None = None) -> CriticalSupport:
    """Support data of the critical module of c^m; ``i1`` overrides d.i1 for the parity rule."""
    i_m, nu_m = index(d, m), nullity(d, m)
    base = d.i1 if i1 is None else i1
    return CriticalSupport(d.name, m, i_m, nu_m, nu_m == 0, (i_m - base) % 2 == 0)


# -- Morse inequalities -----------------------------------------------------------


@dataclass(frozen=True)
class MorseViolation:
    q: int
    kind: str  # "weak" (M_q >= b_q) or "strong" (alternating sums)
    lhs: int
    rhs: int

    def __str__(self):
        if self.kind == "weak":
            return f"M_{self.q}={self.lhs} < b={self.rhs}"
        return f"alternating sum at q={self.q}: {self.lhs} < {self.rhs}"


@dataclass
class MorseReport:
    """Per-degree results; falsy when any inequality fails."""

    rows: list[tuple[int, int, int, int, int]]  # (q, M_q, b_q, alt M, alt b)
    violations: list[MorseViolation]

    def __bool__(self):
        return not self.violations

    @property
    def first(self) -> MorseViolation | None:
        return self.violations[0] if self.violations else None

    def ok_at(self, q: int, strong: bool = False) -> bool:
        kinds = ("weak", "strong") if strong else ("weak",)
        return not any(v.q == q and v.kind in kinds for v in self.violations)


def morse_check(
    M: Mapping[int, int],
    n: int,
    q_range: tuple[int, int],
    betti_fn=None,
) -> MorseReport:
    """Check M_q >= b_q and the alternating-sum inequality at every q in q_range.

    The alternating sums always run down to degree 0 (M is read as 0 where
    absent); q_range only selects the degrees that are checked and reported.
    """
    lo, hi = q_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad degree range {q_range}")
    b = betti_fn or (lambda q: betti(n, q))
    rows, bad = [], []
    alt_m = alt_b = 0
    for q in range(0, hi + 1):
        mq, bq = int(M.get(q, 0)), b(q)
        alt_m = mq - alt_m
        alt_b = bq - alt_b
        if q < lo:
            continue
        rows.append((q, mq, bq, alt_m, alt_b))
        if mq < bq:
            bad.append(MorseViolation(q, "weak", mq, bq))
        if alt_m < alt_b:
            bad.append(MorseViolation(q, "strong", alt_m, alt_b))
    return MorseReport(rows, bad)
