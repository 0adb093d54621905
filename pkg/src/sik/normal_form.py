"""Basic-normal-form decompositions of a linearized Poincare map and their splitting numbers.

A :class:`Decomposition` records block counts and rotation angles of the
splitting

    N1(1,1)^p-  I2^p0  N1(1,-1)^p+  N1(-1,1)^q-  (-I2)^q0  N1(-1,-1)^q+
    R(theta)...  N2(omega, b)...  D(2)^h+  D(-2)^h-

together with the initial Morse index ``i1``.  Angles are stored as turns,
``theta / 2pi``, in (0, 1).

Per-block splitting numbers (S+, S-) at unit-circle points:

    block          point         (S+, S-)
    N1(1,1), I2    1             (1, 1)
    N1(1,-1)       1             (0, 0)
    N1(-1,1)       -1            (0, 0)
    -I2, N1(-1,-1) -1            (1, 1)
    R(theta)       e^{i theta}   (0, 1);  e^{-i theta}: (1, 0)
    N2 nontrivial  e^{+-i alpha} (1, 1) at both points
    N2 trivial     e^{+-i beta}  (0, 0)
    D(+-2)         none
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .arith import Scalar, Surd, decode_scalar, encode_scalar, frac, is_integer, scalar, varphi

__all__ = [
    "COUNT_FIELDS",
    "ANGLE_FIELDS",
    "Decomposition",
    "SplittingPair",
    "EigenEntry",
    "Violation",
    "validate",
    "dimension",
    "elliptic_height",
    "eigen_entries",
    "splitting",
    "s_plus_one",
    "big_c",
    "total_s_minus",
    "q_of_m",
    "q_closed_form",
    "q_closed_form_doubled",
    "delta_of",
    "decomposition_to_json",
    "decomposition_from_json",
]

HALF = Fraction(1, 2)

COUNT_FIELDS = ("p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus", "h_plus", "h_minus")
ANGLE_FIELDS = (
    "rot_rational",
    "rot_irrational",
    "n2_nontrivial_rational",
    "n2_nontrivial_irrational",
    "n2_trivial_rational",
    "n2_trivial_irrational",
)


@dataclass(frozen=True)
class Decomposition:
    name: str
    i1: int
    p_minus: int = 0
    p_zero: int = 0
    p_plus: int = 0
    q_minus: int = 0
    q_zero: int = 0
    q_plus: int = 0
    rot_rational: tuple = ()
    rot_irrational: tuple = ()
    n2_nontrivial_rational: tuple = ()
    n2_nontrivial_irrational: tuple = ()
    n2_trivial_rational: tuple = ()
    n2_trivial_irrational: tuple = ()
    h_plus: int = 0
    h_minus: int = 0

    def __post_init__(self):
        for name in ANGLE_FIELDS:
            object.__setattr__(self, name, tuple(scalar(t) for t in getattr(self, name)))

    # r_1 ... r_6 in the usual notation
    @property
    def r1(self) -> int:
        return len(self.rot_rational)

    @property
    def r2(self) -> int:
        return len(self.rot_irrational)

    @property
    def r3(self) -> int:
        return len(self.n2_nontrivial_rational)

    @property
    def r4(self) -> int:
        return len(self.n2_nontrivial_irrational)

    @property
    def r5(self) -> int:
        return len(self.n2_trivial_rational)

    @property
    def r6(self) -> int:
        return len(self.n2_trivial_irrational)

    @property
    def h(self) -> int:
        return self.h_plus + self.h_minus

    @property
    def rotations(self) -> tuple:
        return self.rot_rational + self.rot_irrational

    @property
    def nontrivial(self) -> tuple:
        return self.n2_nontrivial_rational + self.n2_nontrivial_irrational

    @property
    def trivial(self) -> tuple:
        return self.n2_trivial_rational + self.n2_trivial_irrational

    def angles(self) -> tuple:
        return self.rotations + self.nontrivial + self.trivial

    @cached_property
    def surd_field(self) -> int | None:
        """The d of Q(sqrt(d)) carrying the irrational angles, or None."""
        ds = {t.d for t in self.angles() if isinstance(t, Surd)}
        if len(ds) > 1:
            raise ValueError(f"{self.name}: irrational angles from several fields {sorted(ds)}")
        return ds.pop() if ds else None

    def replace(self, **changes) -> "Decomposition":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return Decomposition(**data)


class SplittingPair(NamedTuple):
    s_plus: int
    s_minus: int


class EigenEntry(NamedTuple):
    turn: Scalar  # eigenvalue e^{2 pi i turn}, turn in [0, 1)
    s_plus: int
    s_minus: int
    block: str


@dataclass(frozen=True)
class Violation:
    field: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"[{self.severity}] {self.field}: {self.message}"


def dimension(d: Decomposition) -> int:
    """Half the size of the realized symplectic matrix, i.e. n - 1."""
    return (
        d.p_minus + d.p_zero + d.p_plus + d.q_minus + d.q_zero + d.q_plus
        + d.r1 + d.r2 + 2 * (d.r3 + d.r4 + d.r5 + d.r6) + d.h
    )


def _odd_blocks(d: Decomposition) -> int:
    return d.p_minus + d.p_zero + d.q_minus + d.q_zero + d.q_plus + d.r1 + d.r2


def validate(d: Decomposition, n: int | None = None) -> list[Violation]:
    """Every violated invariant of ``d``; an empty list means valid.

    ``n`` is the sphere dimension; when given, the block dimensions must sum to n - 1.
    """
    out: list[Violation] = []
    if not isinstance(d.i1, int) or isinstance(d.i1, bool):
        out.append(Violation("i1", f"must be an integer, got {d.i1!r}"))
    for name in COUNT_FIELDS:
        v = getattr(d, name)
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            out.append(Violation(name, f"must be a non-negative integer, got {v!r}"))
    for name in ANGLE_FIELDS:
        want_rational = name.endswith("_rational")
        for k, t in enumerate(getattr(d, name)):
            where = f"{name}[{k}]"
            if want_rational and isinstance(t, Surd):
                out.append(Violation(where, "irrational turn in a rational list"))
                continue
            if not want_rational and not isinstance(t, Surd):
                out.append(Violation(where, "rational turn in an irrational list"))
                continue
            if not (0 < t < 1):
                out.append(Violation(where, f"turn {t} outside (0, 1)"))
            elif t == HALF:
                out.append(Violation(where, "turn 1/2 is excluded (eigenvalue -1 belongs to the q-blocks)"))
    try:
        d.surd_field
    except ValueError as exc:
        out.append(Violation("angles", str(exc)))
    if any(v.severity == "error" for v in out):
        return out
    if n is not None and dimension(d) != n - 1:
        out.append(Violation(
            "dimension",
            f"blocks sum to {dimension(d)} but n - 1 = {n - 1} "
            "(p-+p0+p++q-+q0+q++r1+r2+2(r3+r4+r5+r6)+h must equal n-1)",
        ))
    if (d.i1 - _odd_blocks(d)) % 2:
        msg = (
            f"i1={d.i1} has the wrong parity: expected i1 = {_odd_blocks(d)} mod 2 "
            "(one per N1(1,1), I2, N1(-1,+-1), -I2, R block)"
        )
        out.append(Violation("i1", msg, "warning" if d.h else "error"))
    return out


def elliptic_height(d: Decomposition) -> int:
    """Total multiplicity of unit-circle eigenvalues, 2(n-1) - 2h."""
    return 2 * dimension(d) - 2 * d.h


def eigen_entries(d: Decomposition) -> list[EigenEntry]:
    """Unit-circle eigenvalues of ``d`` with per-block splitting numbers (one row per block eigenvalue)."""
    zero, half = Fraction(0), HALF
    out = []
    out += [EigenEntry(zero, 1, 1, "N1(1,1)")] * d.p_minus
    out += [EigenEntry(zero, 1, 1, "I2")] * d.p_zero
    out += [EigenEntry(zero, 0, 0, "N1(1,-1)")] * d.p_plus
    out += [EigenEntry(half, 0, 0, "N1(-1,1)")] * d.q_minus
    out += [EigenEntry(half, 1, 1, "-I2")] * d.q_zero
    out += [EigenEntry(half, 1, 1, "N1(-1,-1)")] * d.q_plus
    for t in d.rotations:
        out.append(EigenEntry(t, 0, 1, "R"))
        out.append(EigenEntry(1 - t, 1, 0, "R"))
    for t in d.nontrivial:
        out.append(EigenEntry(t, 1, 1, "N2+"))
        out.append(EigenEntry(1 - t, 1, 1, "N2+"))
    for t in d.trivial:
        out.append(EigenEntry(t, 0, 0, "N2-"))
        out.append(EigenEntry(1 - t, 0, 0, "N2-"))
    return out


def _omega_turn(omega) -> Scalar:
    if omega == 1:
        return Fraction(0)
    if omega == -1:
        return HALF
    t = scalar(omega)
    if not (0 <= t < 1):
        raise ValueError(f"omega turn {t} outside [0, 1)")
    return t


def splitting(d: Decomposition, omega) -> SplittingPair:
    """(S+, S-) of the whole matrix at omega, by additivity over blocks.

    ``omega`` is 1, -1 or a turn t in [0, 1) standing for e^{2 pi i t}.
    """
    t = _omega_turn(omega)
    sp = sm = 0
    for e in eigen_entries(d):
        if e.turn == t:
            sp += e.s_plus
            sm += e.s_minus
    return SplittingPair(sp, sm)


def s_plus_one(d: Decomposition) -> int:
    """S+(1) = p- + p0."""
    return d.p_minus + d.p_zero


def big_c(d: Decomposition) -> int:
    """C(M) = q0 + q+ + r1 + r2 + 2 r3 + 2 r4."""
    return d.q_zero + d.q_plus + d.r1 + d.r2 + 2 * d.r3 + 2 * d.r4


def total_s_minus(d: Decomposition) -> int:
    """Sum of S- over all eigenvalues e^{i theta} with 0 < theta < 2 pi, from the table."""
    return sum(e.s_minus for e in eigen_entries(d) if e.turn != 0)


def q_of_m(d: Decomposition, m_k: int, m: int) -> int:
    """Q_k(m): S- summed over eigenvalue angles with {m_k theta/pi} = {m theta/2pi} = 0."""
    total = 0
    for e in eigen_entries(d):
        if e.turn == 0 or not e.s_minus:
            continue
        if is_integer(2 * m_k * e.turn) and is_integer(m * e.turn):
            total += e.s_minus
    return total


def q_closed_form(d: Decomposition, m: int) -> int:
    """Q(m) as printed in closed form: nontrivial rational N2 blocks counted once.

    Matches :func:`q_of_m` only when d has no rational nontrivial N2 block whose
    angle satisfies m*alpha/2pi in Z; see :func:`q_closed_form_doubled`.
    """
    even = 1 if m % 2 == 0 else 0
    return (
        even * (d.q_zero + d.q_plus)
        + d.r1 + d.r3
        - sum(varphi(m * t) for t in d.rot_rational)
        - sum(varphi(m * t) for t in d.n2_nontrivial_rational)
    )


def q_closed_form_doubled(d: Decomposition, m: int) -> int:
    """Q(m) with each nontrivial rational N2 counted at both of its eigenvalues."""
    even = 1 if m % 2 == 0 else 0
    return (
        even * (d.q_zero + d.q_plus)
        + d.r1 - sum(varphi(m * t) for t in d.rot_rational)
        + 2 * (d.r3 - sum(varphi(m * t) for t in d.n2_nontrivial_rational))
    )


def delta_of(d: Decomposition, m_k: int, delta: Scalar) -> int:
    """Delta_k: S- summed over eigenvalue angles with 0 < {m_k theta/pi} < delta."""
    delta = scalar(delta)
    if not (0 < delta < 1):
        raise ValueError(f"delta={delta} must lie in (0, 1)")
    total = 0
    for e in eigen_entries(d):
        if e.turn == 0 or not e.s_minus:
            continue
        f = frac(2 * m_k * e.turn)
        if 0 < f < delta:
            total += e.s_minus
    return total


# -- JSON ---------------------------------------------------------------------

_JSON_KEYS = ("name", "i1") + COUNT_FIELDS + ANGLE_FIELDS


def decomposition_to_json(d: Decomposition) -> dict:
    out = {"name": d.name, "i1": d.i1}
    for k in COUNT_FIELDS:
        out[k] = getattr(d, k)
    for k in ANGLE_FIELDS:
        out[k] = [encode_scalar(t) for t in getattr(d, k)]
    return out


def decomposition_from_json(obj: dict, where: str = "geodesic") -> Decomposition:
    """Strict decoding: every field present, nothing extra, no defaults."""
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(_JSON_KEYS))
    if unknown:
        raise ValueError(f"{where}: unknown field(s) {unknown}")
    missing = [k for k in _JSON_KEYS if k not in obj]
    if missing:
        raise ValueError(f"{where}: missing field(s) {missing}")
    if not isinstance(obj["name"], str) or not obj["name"]:
        raise ValueError(f"{where}.name: must be a non-empty string")
    kwargs = {"name": obj["name"]}
    for k in ("i1",) + COUNT_FIELDS:
        v = obj[k]
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{where}.{k}: must be an integer, got {v!r}")
        kwargs[k] = v
    for k in ANGLE_FIELDS:
        v = obj[k]
        if not isinstance(v, list):
            raise ValueError(f"{where}.{k}: must be a list of turns")
        kwargs[k] = tuple(decode_scalar(t, f"{where}.{k}[{i}]") for i, t in enumerate(v))
    return Decomposition(**kwargs)
