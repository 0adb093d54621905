"""Explicit-matrix nullity oracle.

Realizes a decomposition as a block-diagonal real matrix with the literal
normal-form entries (cos/sin for rotations), works in the cyclotomic ring
Z[zeta_L], and computes dim ker(M^m - I) by fraction-free Gaussian elimination.
It shares no code with the iteration formulae.

Scaling: every block is stored as A = 2M so entries are algebraic integers;
ker(M^m - I) = ker(A^m - 2^m I).

Concrete off-diagonal block b of N2(omega, b): b = [[0, s], [0, 0]] with
s = sign(sin theta) for trivial blocks and s = -sign(sin theta) for
nontrivial ones, so (b2 - b3) sin theta has the required sign.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .arith import Surd
from .normal_form import Decomposition

__all__ = [
    "cyclotomic_poly",
    "CyclotomicRing",
    "realize_blocks",
    "block_diagonal",
    "kernel_dim",
    "realize_and_nullity_oracle",
]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for k in range(1, n):
        if n % k == 0:
            num = _exact_div(num, list(cyclotomic_poly(k)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(out) - 1, -1, -1):
        c, rem = divmod(num[shift + len(den) - 1], lead)
        assert rem == 0
        out[shift] = c
        if c:
            for j, dc in enumerate(den):
                num[shift + j] -= c * dc
    assert not any(num[: len(den) - 1])
    return out


class CyclotomicRing:
    """Z[zeta_L] as integer vectors modulo the monic Phi_L."""

    def __init__(self, L: int):
        self.L = L
        self.phi = tuple(cyclotomic_poly(L))
        self.deg = len(self.phi) - 1
        self.zero = (0,) * self.deg

    def const(self, c: int):
        return (c,) + (0,) * (self.deg - 1)

    def zeta_pow(self, k: int):
        """zeta_L^k reduced."""
        k %= self.L
        coeffs = [0] * max(k + 1, self.deg)
        coeffs[k] = 1
        return self._reduce(coeffs)

    def _reduce(self, c: list[int]):
        deg, phi = self.deg, self.phi
        for top in range(len(c) - 1, deg - 1, -1):
            v = c[top]
            if v:
                base = top - deg
                for j in range(deg):
                    if phi[j]:
                        c[base + j] -= v * phi[j]
                c[top] = 0
        return tuple(c[:deg]) if len(c) >= deg else tuple(c) + (0,) * (deg - len(c))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, x, k: int):
        return tuple(k * a for a in x)

    def mul(self, x, y):
        if not any(x) or not any(y):
            return self.zero
        out = [0] * (2 * self.deg - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[i + j] += a * b
        return self._reduce(out)


def _turn_parts(t) -> tuple[int, int]:
    if isinstance(t, Surd):
        raise ValueError(
            "the matrix oracle needs rational turns: cos(2 pi t) is transcendental for surd t"
        )
    t = Fraction(t)
    return t.numerator, t.denominator


def _ring_for(d: Decomposition) -> int:
    L = 4
    for t in d.angles():
        L = math.lcm(L, _turn_parts(t)[1])
    return L


def _rot2(R: CyclotomicRing, num: int, den: int):
    """2*R(theta) for theta = 2 pi num/den."""
    k = num * (R.L // den)
    z, zi = R.zeta_pow(k), R.zeta_pow(-k)
    two_cos = R.add(z, zi)
    two_sin = R.mul(R.sub(z, zi), R.zeta_pow(3 * R.L // 4))  # (z - 1/z) / i
    return [[two_cos, R.scale(two_sin, -1)], [two_sin, two_cos]]


def _block_scaled(R: CyclotomicRing, kind: str, turn=None):
    c = R.const
    if kind == "N1":
        lam, b = turn
        return [[c(2 * lam), c(2 * b)], [c(0), c(2 * lam)]]
    if kind == "D":
        lam = turn
        return [[c(4 * lam), c(0)], [c(0), c(lam)]]  # 2*diag(2l, 1/(2l)) with l = +-1
    num, den = turn
    rot = _rot2(R, num, den)
    if kind == "R":
        return rot
    sgn = 1 if 2 * num < den else -1
    s = sgn if kind == "N2-" else -sgn
    z = c(0)
    return [
        [rot[0][0], rot[0][1], z, c(2 * s)],
        [rot[1][0], rot[1][1], z, z],
        [z, z, rot[0][0], rot[0][1]],
        [z, z, rot[1][0], rot[1][1]],
    ]


def realize_blocks(d: Decomposition) -> list[tuple[str, object]]:
    """Block list (kind, parameter) in the order of the normal-form product."""
    blocks = []
    blocks += [("N1", (1, 1))] * d.p_minus
    blocks += [("N1", (1, 0))] * d.p_zero
    blocks += [("N1", (1, -1))] * d.p_plus
    blocks += [("N1", (-1, 1))] * d.q_minus
    blocks += [("N1", (-1, 0))] * d.q_zero
    blocks += [("N1", (-1, -1))] * d.q_plus
    blocks += [("R", _turn_parts(t)) for t in d.rotations]
    blocks += [("N2+", _turn_parts(t)) for t in d.nontrivial]
    blocks += [("N2-", _turn_parts(t)) for t in d.trivial]
    blocks += [("D", 1)] * d.h_plus
    blocks += [("D", -1)] * d.h_minus
    return blocks


def block_diagonal(d: Decomposition):
    """(ring, 2M) for the full block-diagonal realization of ``d``."""
    R = CyclotomicRing(_ring_for(d))
    mats = [_block_scaled(R, kind, p) for kind, p in realize_blocks(d)]
    size = sum(len(b) for b in mats)
    full = [[R.zero] * size for _ in range(size)]
    off = 0
    for b in mats:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                full[off + i][off + j] = v
        off += len(b)
    return R, full


def _matmul(R: CyclotomicRing, X, Y):
    n, k, p = len(X), len(Y), len(Y[0])
    out = [[R.zero] * p for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = X[i][t]
            if not any(x):
                continue
            row = Y[t]
            for j in range(p):
                if any(row[j]):
                    out[i][j] = R.add(out[i][j], R.mul(x, row[j]))
    return out


def _matpow(R: CyclotomicRing, X, m: int):
    n = len(X)
    result = [[R.const(1) if i == j else R.zero for j in range(n)] for i in range(n)]
    base = X
    while m:
        if m & 1:
            result = _matmul(R, result, base)
        m >>= 1
        if m:
            base = _matmul(R, base, base)
    return result


def kernel_dim(R: CyclotomicRing, X) -> int:
    """dim ker X over Q(zeta_L), by fraction-free elimination (Z[zeta_L] is a domain)."""
    rows = [list(r) for r in X]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if any(rows[r][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, n_rows):
            a = rows[r][col]
            if any(a):
                rows[r] = [R.sub(R.mul(p, x), R.mul(a, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return n_cols - rank


def _shifted_power_kernel(R: CyclotomicRing, A, m: int) -> int:
    P = _matpow(R, A, m)
    shift = R.const(2 ** m)
    for i in range(len(P)):
        P[i][i] = R.sub(P[i][i], shift)
    return kernel_dim(R, P)


@lru_cache(maxsize=None)
def _block_nullity(kind: str, param, m: int) -> int:
    L = 4 if kind in ("N1", "D") else math.lcm(4, param[1])
    R = CyclotomicRing(L)
    return _shifted_power_kernel(R, _block_scaled(R, kind, param), m)


def realize_and_nullity_oracle(d: Decomposition, m: int, full_matrix: bool = False) -> int:
    """dim ker(M^m - I) for the explicit realization of ``d``.

    By default the block-diagonal kernel is assembled block by block (each block
    result is cached); ``full_matrix=True`` eliminates the whole matrix at once.
    """
    if m < 1:
        raise ValueError(f"iterate m={m} must be >= 1")
    if full_matrix:
        R, A = block_diagonal(d)
        if not A:
            return 0
        return _shifted_power_kernel(R, A, m)
    return sum(_block_nullity(kind, p, m) for kind, p in realize_blocks(d))
