"""Exact scalars: rationals (``fractions.Fraction``) and quadratic surds a + b*sqrt(d).

Every angle, fractional part and average index in the package is one of these.
Nothing here touches floating point.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

__all__ = [
    "Surd",
    "Scalar",
    "scalar",
    "surd",
    "floor",
    "ceil",
    "frac",
    "varphi",
    "is_integer",
    "is_rational",
    "sign",
    "encode_scalar",
    "decode_scalar",
    "to_decimal",
]


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign_pq(p: Fraction, q: Fraction, d: int) -> int:
    """Sign of p + q*sqrt(d), decided with integer comparisons only."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    lhs = p * p
    rhs = q * q * d
    if p > 0:
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


class Surd:
    """An irrational quadratic number a + b*sqrt(d) with b != 0 and d square-free.

    Build instances through :func:`surd`, which collapses b == 0 to a Fraction.
    Arithmetic is closed within one field Q(sqrt(d)); mixing fields raises.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            raise ValueError("Surd requires b != 0; use surd() to allow rationals")
        if not _squarefree(int(d)):
            raise ValueError(f"d={d} must be a square-free integer >= 2")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        sgn = "+" if self.b > 0 else "-"
        return f"{self.a} {sgn} {abs(self.b)}*sqrt({self.d})"

    # -- field plumbing -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Surd):
            if other.d != self.d:
                raise ValueError(
                    f"cannot combine sqrt({self.d}) and sqrt({other.d}): "
                    "only one quadratic extension is supported"
                )
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return surd(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __abs__(self):
        return -self if _sign_pq(self.a, self.b, self.d) < 0 else self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return surd(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return surd(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q = c
        return surd(self.a * p + self.b * q * self.d, self.a * q + self.b * p, self.d)

    __rmul__ = __mul__

    def reciprocal(self) -> "Surd":
        n = self.norm()
        return Surd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return surd(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    # -- ordering -------------------------------------------------------
    def _cmp(self, other) -> int:
        c = self._coerce(other)
        if c is None:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        return _sign_pq(self.a - c[0], self.b - c[1], self.d)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(("Surd", self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self):
        return floor(self)

    def __ceil__(self):
        return ceil(self)


Scalar = Union[Fraction, Surd]


def surd(a, b, d: int) -> Scalar:
    """a + b*sqrt(d), normalized to a Fraction when b == 0."""
    b = Fraction(b)
    if b == 0:
        return Fraction(a)
    return Surd(a, b, d)


def scalar(x) -> Scalar:
    if isinstance(x, Surd):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def sign(x: Scalar) -> int:
    if isinstance(x, Surd):
        return _sign_pq(x.a, x.b, x.d)
    return (x > 0) - (x < 0)


def floor(x: Scalar) -> int:
    """Greatest integer <= x, i.e. [x]."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    # estimate from isqrt, then settle by exact sign tests
    t = x.b * x.b * x.d
    u, v = t.numerator, t.denominator
    root = Fraction(math.isqrt(u * v), v)
    k = (x.a + root).__floor__() if x.b > 0 else (x.a - root).__floor__()
    while _sign_pq(x.a - k, x.b, x.d) < 0:
        k -= 1
    while _sign_pq(x.a - (k + 1), x.b, x.d) >= 0:
        k += 1
    return k


def ceil(x: Scalar) -> int:
    """Least integer >= x, written E(x) in the index formulae."""
    return -floor(-x)


def frac(x: Scalar) -> Scalar:
    """Fractional part x - [x], in [0, 1)."""
    return x - floor(x)


def is_integer(x: Scalar) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, Surd)


def varphi(x: Scalar) -> int:
    """0 when x is an integer, 1 otherwise."""
    return 0 if is_integer(x) else 1


def encode_scalar(x: Scalar):
    if isinstance(x, Surd):
        return {
            "a": [x.a.numerator, x.a.denominator],
            "b": [x.b.numerator, x.b.denominator],
            "d": x.d,
        }
    x = Fraction(x)
    return [x.numerator, x.denominator]


def _pair(obj, where: str) -> Fraction:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in obj)
    ):
        raise ValueError(f"{where}: expected [num, den] integer pair, got {obj!r}")
    if obj[1] <= 0:
        raise ValueError(f"{where}: denominator must be positive, got {obj[1]}")
    return Fraction(obj[0], obj[1])


def decode_scalar(obj, where: str = "scalar") -> Scalar:
    """Inverse of :func:`encode_scalar`; ``where`` names the field in errors."""
    if isinstance(obj, dict):
        extra = set(obj) - {"a", "b", "d"}
        if extra or set(obj) != {"a", "b", "d"}:
            raise ValueError(f"{where}: surd needs exactly keys a, b, d (got {sorted(obj)})")
        d = obj["d"]
        if not isinstance(d, int) or isinstance(d, bool) or not _squarefree(d):
            raise ValueError(f"{where}.d: must be a square-free integer >= 2, got {d!r}")
        b = _pair(obj["b"], f"{where}.b")
        if b == 0:
            raise ValueError(f"{where}.b: surd coefficient must be non-zero")
        return Surd(_pair(obj["a"], f"{where}.a"), b, d)
    return _pair(obj, where)


def to_decimal(x: Scalar, digits: int = 200) -> Decimal:
    """Decimal evaluation, for cross-checks only."""
    with localcontext() as ctx:
        ctx.prec = digits + 20
        if isinstance(x, Surd):
            a = Decimal(x.a.numerator) / Decimal(x.a.denominator)
            b = Decimal(x.b.numerator) / Decimal(x.b.denominator)
            return +(a + b * Decimal(x.d).sqrt())
        x = Fraction(x)
        return +(Decimal(x.numerator) / Decimal(x.denominator))
