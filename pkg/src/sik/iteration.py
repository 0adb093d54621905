"""Precise index iteration: m -> (i(c^m), nu(c^m)), average index and Bott-type bounds."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .arith import Scalar, Surd, ceil
from .normal_form import Decomposition, elliptic_height

__all__ = [
    "index",
    "nullity",
    "average_index",
    "BottViolation",
    "bott_check",
    "IterationProfile",
]


def _split(turns):
    """(integer pairs for rational turns, surds) so the hot loops avoid Fraction."""
    rat, irr = [], []
    for t in turns:
        if isinstance(t, Surd):
            irr.append(t)
        else:
            rat.append((t.numerator, t.denominator))
    return tuple(rat), tuple(irr)


def _prepared(d: Decomposition):
    cache = d.__dict__.get("_iter_prep")
    if cache is None:
        cache = (_split(d.rotations), _split(d.nontrivial), _split(d.trivial))
        d.__dict__["_iter_prep"] = cache
    return cache


def index(d: Decomposition, m: int) -> int:
    """Morse index i(c^m) of the m-th iterate."""
    if m < 1:
        raise ValueError(f"iterate m={m} must be >= 1")
    (rot_q, rot_s), (nt_q, nt_s), _ = _prepared(d)
    r = len(rot_q) + len(rot_s)
    r_star = len(nt_q) + len(nt_s)
    ceil_sum = sum(-((-m * a) // b) for a, b in rot_q)
    ceil_sum += sum(ceil(m * t) for t in rot_s)
    phi_sum = sum(1 for a, b in nt_q if (m * a) % b) + len(nt_s)
    even = 1 - (m & 1)
    return (
        m * (d.i1 + d.p_minus + d.p_zero - r)
        + 2 * ceil_sum
        - r - d.p_minus - d.p_zero
        - even * (d.q_zero + d.q_plus)
        + 2 * (phi_sum - r_star)
    )


def nullity(d: Decomposition, m: int) -> int:
    """Nullity nu(c^m) = dim ker(P^m - I)."""
    if m < 1:
        raise ValueError(f"iterate m={m} must be >= 1")
    (rot_q, rot_s), (nt_q, nt_s), (tr_q, tr_s) = _prepared(d)
    phi_sum = len(rot_s) + len(nt_s) + len(tr_s)
    for group in (rot_q, nt_q, tr_q):
        phi_sum += sum(1 for a, b in group if (m * a) % b)
    even = 1 - (m & 1)
    total_elliptic = len(rot_q) + len(rot_s) + len(nt_q) + len(nt_s) + len(tr_q) + len(tr_s)
    return (
        d.p_minus + 2 * d.p_zero + d.p_plus
        + even * (d.q_minus + 2 * d.q_zero + d.q_plus)
        + 2 * total_elliptic
        - 2 * phi_sum
    )


def average_index(d: Decomposition) -> Scalar:
    """lim i(c^m)/m = i1 + p- + p0 - r + sum theta_j/pi."""
    total: Scalar = Fraction(d.i1 + d.p_minus + d.p_zero - len(d.rotations))
    for t in d.rotations:
        total = total + 2 * t
    return total


class BottViolation(NamedTuple):
    m: int
    side: str  # "lower" or "upper"
    lhs: int
    rhs: int

    def __str__(self):
        op = "<=" if self.side == "lower" else ">="
        return f"Bott {self.side} bound fails at m={self.m}: need {self.lhs} {op} {self.rhs}"


def bott_check(d: Decomposition, m_max: int) -> BottViolation | None:
    """First m <= m_max breaking

        nu(m) - e/2 <= i(m+1) - i(m) - i(1) <= nu(1) - nu(m+1) + e/2,

    or None if both sides hold throughout.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    half_e = elliptic_height(d) // 2
    i_1, nu_1 = index(d, 1), nullity(d, 1)
    i_prev, nu_prev = i_1, nu_1
    for m in range(1, m_max + 1):
        i_next, nu_next = index(d, m + 1), nullity(d, m + 1)
        jump = i_next - i_prev - i_1
        if nu_prev - half_e > jump:
            return BottViolation(m, "lower", nu_prev - half_e, jump)
        if jump > nu_1 - nu_next + half_e:
            return BottViolation(m, "upper", nu_1 - nu_next + half_e, jump)
        i_prev, nu_prev = i_next, nu_next
    return None


@dataclass
class IterationProfile:
    """Lazily evaluated, memoized (i(c^m), nu(c^m)) for one decomposition."""

    source: Decomposition
    _memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def avg_index(self) -> Scalar:
        return average_index(self.source)

    def _get(self, m: int) -> tuple[int, int]:
        hit = self._memo.get(m)
        if hit is None:
            hit = (index(self.source, m), nullity(self.source, m))
            with self._lock:
                hit = self._memo.setdefault(m, hit)
        return hit

    def index_at(self, m: int) -> int:
        return self._get(m)[0]

    def nullity_at(self, m: int) -> int:
        return self._get(m)[1]

    def table(self, m_max: int) -> list[tuple[int, int, int]]:
        return [(m, *self._get(m)) for m in range(1, m_max + 1)]
