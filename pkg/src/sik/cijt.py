"""Common index jump tuples: exhaustive solver and exact verifier.

The solver sieves N over multiples of M0. For a rational average index
x = N/(bar_M * i_hat) = N*b/A has fractional part (N*b mod A)/A, so the
admissible residues of N modulo A are known in advance and are combined
modulus by modulus. Surd average indices are tested per candidate with a
floating prefilter whose margin is wide enough that every borderline case
falls through to the exact surd comparison.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .arith import Scalar, Surd, encode_scalar, decode_scalar, floor, frac, scalar, varphi
from .iteration import average_index, index, nullity
from .normal_form import (
    Decomposition,
    big_c,
    delta_of,
    dimension,
    elliptic_height,
    q_of_m,
    s_plus_one,
)

__all__ = [
    "JumpTuple",
    "CheckFailure",
    "SolveResult",
    "compute_bar_M",
    "iter_solve",
    "solve",
    "verify",
    "tuple_to_json",
    "tuple_from_json",
]


@dataclass(frozen=True)
class JumpTuple:
    N: int
    m: tuple[int, ...]
    chi: tuple[int, ...]
    bar_M: int
    epsilon: Scalar
    M0: int

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        object.__setattr__(self, "chi", tuple(self.chi))
        object.__setattr__(self, "epsilon", scalar(self.epsilon))


@dataclass(frozen=True)
class CheckFailure:
    """One failed identity or inequality, with both sides."""

    label: str
    k: int
    m: int | None
    lhs: object
    rhs: object
    relation: str = "=="

    def __str__(self):
        where = f"k={self.k}" + ("" if self.m is None else f", m={self.m}")
        return f"({self.label}) {where}: {self.lhs} {self.relation} {self.rhs} fails"


@dataclass
class SolveResult:
    tuples: list[JumpTuple]
    rejected: list[int]  # N that met the fractional condition but failed verify
    searched: tuple[int, int]  # inclusive N range actually scanned

    def __iter__(self):
        return iter(self.tuples)


def compute_bar_M(system: Sequence[Decomposition]) -> int:
    """Least B with B*theta/pi integral for every rational eigenvalue angle."""
    if not system:
        raise ValueError("system must be non-empty")
    B = 1
    for d in system:
        for t in d.angles():
            if not isinstance(t, Surd):
                B = math.lcm(B, (2 * t).denominator)
    return B


def _check_epsilon(epsilon) -> Fraction:
    eps = scalar(epsilon)
    if isinstance(eps, Surd) or not (0 < eps < Fraction(1, 2)):
        raise ValueError(f"epsilon={epsilon} must be a rational in (0, 1/2)")
    return eps


def _chi_for(x: Scalar, eps: Fraction) -> int | None:
    f = frac(x)
    if f < eps:
        return 0
    if 1 - f < eps:
        return 1
    return None


class _SurdTest:
    """Decides the chi condition for N/(bar_M*i_hat) with i_hat a surd."""

    __slots__ = ("inv", "approx", "eps", "eps_f")

    def __init__(self, bar_M: int, avg: Surd, eps: Fraction):
        self.inv = (avg * bar_M).reciprocal()
        self.approx = float(self.inv.a) + float(self.inv.b) * math.sqrt(self.inv.d)
        self.eps = eps
        self.eps_f = float(eps)

    def __call__(self, N: int) -> int | None:
        y = N * self.approx
        f = y - math.floor(y)
        margin = 1e-9 * (1.0 + abs(y))
        if self.eps_f + margin < f < 1.0 - self.eps_f - margin:
            return None
        return _chi_for(self.inv * N, self.eps)


def _rational_sieve(mods: list[tuple[int, int]], M0: int, eps: Fraction, N_limit: int):
    """Residue classes (modulus P, sorted residues) of N admissible at every rational k.

    ``mods`` holds (A, b) with N/(bar_M*i_hat) = N*b/A and gcd(A, b) = 1. Each
    modulus is folded in by solving the linear congruence (r + jP)*b = s mod A
    for every admissible target s. Once P exceeds N_limit only the residues
    below N_limit can matter, so later moduli act as plain filters.
    """
    P, residues = M0, [0]
    for A, b in sorted(mods):
        targets = {s for s in range(A) if s < eps * A or s > (1 - eps) * A}
        if P > N_limit:
            residues = [r for r in residues if (r * b) % A in targets]
            continue
        g = math.gcd(P, A)
        step = A // g
        inv = pow((P // g) * b % step, -1, step) if step > 1 else 0
        new = []
        for r in residues:
            rb = r * b
            for s in targets:
                diff = s - rb
                if diff % g:
                    continue
                j = (diff // g * inv) % step if step > 1 else 0
                new.append(r + j * P)
        P *= step
        residues = sorted(set(new))
        if P > N_limit:
            residues = [r for r in residues if r <= N_limit]
    return P, residues


def _candidates(system, bar_M, M0, eps, N_min, N_limit) -> Iterator[tuple[int, tuple[int, ...]]]:
    avgs = [average_index(d) for d in system]
    mods, surd_tests = [], []
    for k, a in enumerate(avgs):
        if isinstance(a, Surd):
            surd_tests.append((k, _SurdTest(bar_M, a, eps)))
        else:
            x = Fraction(1) / (bar_M * a)  # N*x = N*b/A
            mods.append((x.denominator, x.numerator))
    P, residues = _rational_sieve(mods, M0, eps, N_limit)
    rat_index = [k for k, a in enumerate(avgs) if not isinstance(a, Surd)]
    start_block = N_min // P
    for block in range(start_block, N_limit // P + 1):
        base = block * P
        for r in residues:
            N = base + r
            if N < max(N_min, 1) or N > N_limit:
                continue
            chi = [0] * len(system)
            for k in rat_index:
                c = _chi_for(N / (bar_M * avgs[k]), eps)
                if c is None:
                    break
                chi[k] = c
            else:
                for k, test in surd_tests:
                    c = test(N)
                    if c is None:
                        break
                    chi[k] = c
                else:
                    yield N, tuple(chi)


def _build(system, N, chi, bar_M, eps, M0) -> JumpTuple:
    m = tuple((floor(N / (bar_M * average_index(d))) + c) * bar_M for d, c in zip(system, chi))
    return JumpTuple(N=N, m=m, chi=chi, bar_M=bar_M, epsilon=eps, M0=M0)


def _check_one(args):
    system, N, chi, bar_M, eps, M0, bar_m, delta = args
    t = _build(system, N, chi, bar_M, eps, M0)
    return t, not verify(t, system, bar_m, delta=delta)


def _worker_count(workers: int | None) -> int:
    cap = os.environ.get("SIK_THREADS")
    w = workers if workers is not None else (int(cap) if cap else 1)
    if cap:
        w = min(w, int(cap))
    return max(1, w)


def iter_solve(
    system: Sequence[Decomposition],
    bar_m: int,
    M0: int,
    epsilon,
    N_limit: int,
    delta=None,
    bar_M: int | None = None,
    N_min: int = 1,
    rejected: list | None = None,
) -> Iterator[JumpTuple]:
    """Lazily yield verified tuples in increasing N (single worker)."""
    eps = _check_epsilon(epsilon)
    _check_solve_args(system, bar_m, M0)
    B = compute_bar_M(system) if bar_M is None else bar_M
    for N, chi in _candidates(system, B, M0, eps, N_min, N_limit):
        t, ok = _check_one((system, N, chi, B, eps, M0, bar_m, delta))
        if ok:
            yield t
        elif rejected is not None:
            rejected.append(N)


def _check_solve_args(system, bar_m, M0):
    if not system:
        raise ValueError("system must be non-empty")
    if bar_m < 1 or M0 < 1:
        raise ValueError("bar_m and M0 must be positive")
    for d in system:
        if average_index(d) <= 0:
            raise ValueError(f"{d.name}: average index {average_index(d)} must be > 0")


def solve(
    system: Sequence[Decomposition],
    bar_m: int,
    M0: int,
    epsilon,
    N_limit: int,
    delta=None,
    workers: int | None = None,
    bar_M: int | None = None,
) -> SolveResult:
    """Every N <= N_limit (multiple of M0) meeting the fractional condition, verified.

    Candidates whose tuple fails :func:`verify` are listed in ``rejected``
    instead of being emitted. The output does not depend on ``workers``.
    """
    eps = _check_epsilon(epsilon)
    _check_solve_args(system, bar_m, M0)
    B = compute_bar_M(system) if bar_M is None else bar_M
    jobs = [
        (tuple(system), N, chi, B, eps, M0, bar_m, delta)
        for N, chi in _candidates(system, B, M0, eps, 1, N_limit)
    ]
    w = _worker_count(workers)
    if w > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=w) as pool:
            results = list(pool.map(_check_one, jobs, chunksize=32))
    else:
        results = [_check_one(j) for j in jobs]
    good = [t for t, ok in results if ok]
    bad = [t.N for t, ok in results if not ok]
    return SolveResult(good, bad, (1, N_limit))


def verify(
    t: JumpTuple,
    system: Sequence[Decomposition],
    bar_m: int,
    delta=None,
    regime=None,
) -> list[CheckFailure]:
    """Exact check of the jump identities; an empty list means the tuple is good.

    Always checked for each k and 1 <= m <= bar_m: the defining relations of
    m_k and chi_k, the nullity equalities, the three index identities around
    2m_k (with Q and Delta taken from their definitions, delta defaulting to
    epsilon), the i+nu identity around 2m_k - m, and the general bounds
    2N - e/2 <= i(2m_k), i(2m_k) + nu(2m_k) <= 2N + e/2. Iterates 2m_k - m
    below 1 do not exist and are skipped. With a pinching
    ``regime`` the bounds involving n - 1 and the regime's minimal index are
    checked as well.
    """
    fails: list[CheckFailure] = []
    if len(t.m) != len(system) or len(t.chi) != len(system):
        fails.append(CheckFailure("shape", -1, None, len(t.m), len(system)))
        return fails
    if bar_m < 1:
        raise ValueError("bar_m must be >= 1")
    eps = scalar(t.epsilon)
    dl = eps if delta is None else scalar(delta)
    if t.M0 < 1 or t.N % t.M0:
        fails.append(CheckFailure("M0 | N", -1, None, t.M0, t.N, "divides"))
    B0 = compute_bar_M(system)
    if t.bar_M % B0:
        fails.append(CheckFailure("bar_M", -1, None, t.bar_M, B0, "multiple of"))
    N = t.N
    for k, (d, mk, chi) in enumerate(zip(system, t.m, t.chi)):
        x = N / (t.bar_M * average_index(d))
        if mk != (floor(x) + chi) * t.bar_M:
            fails.append(CheckFailure("3.29", k, None, mk, (floor(x) + chi) * t.bar_M))
        if chi not in (0, 1) or not (abs(frac(x) - chi) < eps):
            fails.append(CheckFailure("3.30", k, None, abs(frac(x) - chi), eps, "<"))
        if mk < 1:
            fails.append(CheckFailure("range", k, None, mk, 1, ">="))
            continue
        fails.extend(_identities(d, k, N, mk, bar_m, dl))
        if regime is not None:
            fails.extend(_pinched(d, k, N, mk, bar_m, regime))
    return fails


def _identities(d: Decomposition, k, N, mk, bar_m, dl) -> list[CheckFailure]:
    out = []
    sp1 = s_plus_one(d)
    for m in range(1, bar_m + 1):
        i_m, nu_m = index(d, m), nullity(d, m)
        lo, hi = 2 * mk - m, 2 * mk + m
        i_hi, nu_hi = index(d, hi), nullity(d, hi)
        if nu_hi != nu_m:
            out.append(CheckFailure("3.24+", k, m, nu_hi, nu_m))
        if i_hi != 2 * N + i_m:
            out.append(CheckFailure("3.25", k, m, i_hi, 2 * N + i_m))
        if lo < 1:
            continue  # no such iterate when m_k is tiny
        i_lo, nu_lo = index(d, lo), nullity(d, lo)
        if nu_lo != nu_m:
            out.append(CheckFailure("3.24-", k, m, nu_lo, nu_m))
        rhs = 2 * N - i_m - 2 * (sp1 + q_of_m(d, mk, m))
        if i_lo != rhs:
            out.append(CheckFailure("3.26", k, m, i_lo, rhs))
        # i + nu around 2m_k - m, with nontrivial rational N2 blocks counted
        # at both eigenvalues
        even = 1 - (m & 1)
        rhs14 = (
            2 * N - i_m - d.p_minus + d.p_plus + even * (d.q_minus - d.q_plus)
            + 2 * d.r5 - 2 * sum(varphi(m * b) for b in d.n2_trivial_rational)
            - 2 * d.r3 + 2 * sum(varphi(m * a) for a in d.n2_nontrivial_rational)
        )
        if i_lo + nu_lo != rhs14:
            out.append(CheckFailure("5.14", k, m, i_lo + nu_lo, rhs14))
    i2, nu2 = index(d, 2 * mk), nullity(d, 2 * mk)
    rhs = 2 * N - (sp1 + big_c(d) - 2 * delta_of(d, mk, dl))
    if i2 != rhs:
        out.append(CheckFailure("3.27", k, None, i2, rhs))
    half_e = elliptic_height(d) // 2
    if i2 < 2 * N - half_e:
        out.append(CheckFailure("5.7", k, None, i2, 2 * N - half_e, ">="))
    if i2 + nu2 > 2 * N + half_e:
        out.append(CheckFailure("5.8", k, None, i2 + nu2, 2 * N + half_e, "<="))
    return out


def _pinched(d: Decomposition, k, N, mk, bar_m, regime) -> list[CheckFailure]:
    out = []
    n1 = regime.n - 1
    if dimension(d) != n1:
        out.append(CheckFailure("dimension", k, None, dimension(d), n1))
        return out
    for m in range(1, bar_m + 1):
        floor_m = regime.min_index(m)
        lo = 2 * mk - m
        if lo >= 1:
            lhs = index(d, lo) + nullity(d, lo)
            if lhs > 2 * N + n1 - floor_m:
                out.append(CheckFailure("5.15", k, m, lhs, 2 * N + n1 - floor_m, "<="))
        i_hi = index(d, 2 * mk + m)
        if not (2 * N + floor_m <= 2 * N + index(d, m) == i_hi):
            out.append(CheckFailure("5.18", k, m, 2 * N + floor_m, i_hi, "<="))
    i2, nu2 = index(d, 2 * mk), nullity(d, 2 * mk)
    if i2 < 2 * N - n1:
        out.append(CheckFailure("5.16", k, None, i2, 2 * N - n1, ">="))
    if i2 + nu2 > 2 * N + n1:
        out.append(CheckFailure("5.17", k, None, i2 + nu2, 2 * N + n1, "<="))
    return out


def tuple_to_json(t: JumpTuple) -> dict:
    return {
        "N": t.N,
        "m": list(t.m),
        "chi": list(t.chi),
        "bar_M": t.bar_M,
        "epsilon": encode_scalar(t.epsilon),
        "M0": t.M0,
    }


def tuple_from_json(obj, where: str = "tuple") -> JumpTuple:
    keys = {"N", "m", "chi", "bar_M", "epsilon", "M0"}
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object")
    if set(obj) != keys:
        raise ValueError(
            f"{where}: fields must be exactly {sorted(keys)}; "
            f"missing {sorted(keys - set(obj))}, unknown {sorted(set(obj) - keys)}"
        )

    def _int(v, name):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{where}.{name}: expected an integer, got {v!r}")
        return v

    for name in ("m", "chi"):
        if not isinstance(obj[name], list):
            raise ValueError(f"{where}.{name}: expected a list")
    return JumpTuple(
        N=_int(obj["N"], "N"),
        m=tuple(_int(v, f"m[{i}]") for i, v in enumerate(obj["m"])),
        chi=tuple(_int(v, f"chi[{i}]") for i, v in enumerate(obj["chi"])),
        bar_M=_int(obj["bar_M"], "bar_M"),
        epsilon=decode_scalar(obj["epsilon"], f"{where}.epsilon"),
        M0=_int(obj["M0"], "M0"),
    )
