"""Proof-replay engine for hypothetical finite closed-geodesic configurations.

The analytic inputs enter as combinatorial axioms:

* every window degree 2i+n-1 (i in G1 or G2) carries a non-zero critical
  module of some iterate c_j^m, and distinct i use distinct pairs (j, m);
* the designated geodesic j0 has its 2m_{j0}-th iterate supported only in
  degree 2N+n-1;
* Morse-type numbers dominate the Betti numbers on the degree range
  D = [2N-3(n-1)+2, 2N+n-1].

Degenerate critical modules are never fixed: each iterate may take any shape
allowed by the support rules (nothing, bottom, top, or any middle degrees
with unbounded multiplicity). A Contradiction therefore holds for every
admissible choice; a Consistent verdict carries one concrete choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cijt import JumpTuple, verify
from .iteration import index, nullity
from .loop_space import CriticalSupport, betti, critical_support
from .normal_form import Decomposition, Violation, delta_of, dimension, elliptic_height, validate
from .pinching import PinchingRegime, gate

__all__ = [
    "GeodesicSystem",
    "Candidate",
    "AuditReport",
    "Lemma42Result",
    "validate_system",
    "lemma42_check",
    "window_assign",
    "audit_system",
    "recheck_witness",
    "CensusReport",
    "hyperbolic_census",
    "WeakCountReport",
    "weak_regime_count",
    "degree_label",
]

GATE_M_MAX = 60
INF = float("inf")


@dataclass(frozen=True)
class GeodesicSystem:
    n: int
    geodesics: tuple[Decomposition, ...]
    regime: PinchingRegime | None = None
    axiom_j0: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "geodesics", tuple(self.geodesics))

    @property
    def p(self) -> int:
        return len(self.geodesics)


def validate_system(system: GeodesicSystem, m_max: int = GATE_M_MAX) -> list[Violation]:
    out = []
    if system.n < 2:
        out.append(Violation("n", f"sphere dimension {system.n} must be >= 2"))
        return out
    if not system.geodesics:
        out.append(Violation("geodesics", "at least one geodesic is required"))
    names = [d.name for d in system.geodesics]
    if len(set(names)) != len(names):
        out.append(Violation("geodesics", "geodesic names must be unique"))
    for k, d in enumerate(system.geodesics):
        for v in validate(d, system.n):
            out.append(Violation(f"geodesics[{k}].{v.field}", v.message, v.severity))
    if system.regime is not None:
        if system.regime.n != system.n:
            out.append(Violation("regime", f"regime is for n={system.regime.n}, system has n={system.n}"))
        else:
            for k, d in enumerate(system.geodesics):
                for v in gate(d, system.regime, m_max):
                    out.append(Violation(f"geodesics[{k}].gate", v.message))
    j0 = system.axiom_j0
    if j0 is not None:
        if not 0 <= j0 < system.p:
            out.append(Violation("axiom_j0", f"index {j0} out of range"))
        else:
            d = system.geodesics[j0]
            zero = ("p_minus", "q_plus", "n2_nontrivial_rational", "n2_nontrivial_irrational",
                    "n2_trivial_irrational")
            for f in zero:
                v = getattr(d, f)
                if (len(v) if isinstance(v, tuple) else v) != 0:
                    out.append(Violation(f"axiom_j0.{f}", "must vanish for the designated geodesic"))
            if d.h:
                out.append(Violation("axiom_j0.h", "the designated geodesic has no hyperbolic blocks"))
            if d.r2 < 1:
                out.append(Violation("axiom_j0.rot_irrational", "needs at least one irrational rotation"))
    return out


def _errors(vs: list[Violation]) -> list[Violation]:
    return [v for v in vs if v.severity == "error"]


def degree_label(q: int, N: int, n: int) -> str:
    off = q - 2 * N
    if off == -(n - 1):
        return "2N-(n-1)"
    if off == n - 1:
        return "2N+n-1"
    if off == 0:
        return "2N"
    return f"2N{off:+d}"


# -- two-step index bounds -------------------------------------------------------


@dataclass
class Lemma42Result:
    failures: list[str]
    slack_first: int  # 2N-(n-1) minus i+nu at 2m_k-1
    slack_second: int  # 2N-3(n-1) minus i+nu at 2m_k-2
    avg_bound_lhs: int  # i1+p-+p0+r1+r2, must be >= 2n-2

    def __bool__(self):
        return not self.failures


def lemma42_check(d: Decomposition, t: JumpTuple, n: int, k: int = 0) -> Lemma42Result:
    """Evaluate both sides of the bounds on i+nu at 2m_k-1 and 2m_k-2 for geodesic k."""
    N, mk = t.N, t.m[k]
    fails = []
    lhs26 = d.i1 + d.p_minus + d.p_zero + d.r1 + d.r2
    if lhs26 < 2 * n - 2:
        fails.append(f"(5.26) i1+p-+p0+r1+r2 = {lhs26} < 2n-2 = {2 * n - 2}")
    if 2 * mk - 2 < 1:
        fails.append(f"m_k={mk} too small for the iterate 2m_k-2")
        return Lemma42Result(fails, 0, 0, lhs26)
    a = index(d, 2 * mk - 1) + nullity(d, 2 * mk - 1)
    b = index(d, 2 * mk - 2) + nullity(d, 2 * mk - 2)
    if a > 2 * N - (n - 1):
        fails.append(f"(5.23) i+nu at 2m_k-1 = {a} > 2N-(n-1) = {2 * N - (n - 1)}")
    # the value 2N-(3n-4) is excluded by the parity argument, so the bound drops by one more
    if b > 2 * N - (3 * n - 4):
        fails.append(f"(5.33) i+nu at 2m_k-2 = {b} > 2N-(3n-4) = {2 * N - (3 * n - 4)}")
    elif b == 2 * N - (3 * n - 4):
        fails.append(f"(5.36)-(5.37) parity obstruction violated: i+nu at 2m_k-2 = 2N-(3n-4)")
    if b > 2 * N - 3 * (n - 1):
        fails.append(f"(5.24) i+nu at 2m_k-2 = {b} > 2N-3(n-1) = {2 * N - 3 * (n - 1)}")
    return Lemma42Result(fails, 2 * N - (n - 1) - a, 2 * N - 3 * (n - 1) - b, lhs26)


# -- window assignment ----------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    j: int
    m: int
    offset: int  # m - 2m_j
    cs: CriticalSupport
    fixed: str | None = None  # forced shape ("top" for the designated geodesic)

    @property
    def i(self) -> int:
        return self.cs.i

    @property
    def nu(self) -> int:
        return self.cs.nu

    def shapes(self) -> list[str]:
        if self.fixed:
            return [self.fixed]
        return [p.kind for p in self.cs.patterns()]

    def shape_degrees(self, shape: str) -> tuple[int, ...]:
        if shape == "bottom":
            return (self.i,)
        if shape == "top":
            return (self.i + self.nu,)
        if shape == "middle":
            return tuple(range(self.i + 1, self.i + self.nu))
        return ()

    def label(self, names) -> str:
        off = "" if self.offset == 0 else f"{self.offset:+d}"
        return f"{names[self.j]}^(2m{off})"


@dataclass
class AuditReport:
    tuple: JumpTuple | None
    n: int
    window_G1: tuple[int, int]
    window_G2: tuple[int, int]
    degree_range: tuple[int, int]
    verdict: str  # Consistent | Contradiction | Inconclusive
    step: str = ""
    explanation: str = ""
    assignments: dict = field(default_factory=dict)  # i -> (j, m, shape)
    k_vectors: dict = field(default_factory=dict)  # (j, m) -> {degree: count}
    morse: list = field(default_factory=list)  # (q, M_q, b_q) on the degree range
    n_assignments: int = 0
    capped: bool = False
    trace: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.verdict == "Consistent"


def _candidates(system: GeodesicSystem, t: JumpTuple, bar_m: int, lo: int, hi: int,
                full_scan: bool, trace: list[str]) -> list[Candidate]:
    names = [d.name for d in system.geodesics]
    cands = []
    for j, d in enumerate(system.geodesics):
        mj = t.m[j]
        first, last = max(1, 2 * mj - bar_m + 1), 2 * mj + bar_m - 1
        closed = True
        below = 2 * mj - bar_m
        if below >= 1:
            top_below = index(d, below) + nullity(d, below)
            # i + nu is non-decreasing once i1 >= e/2, so this bounds every m <= 2m_j - bar_m
            if not (d.i1 >= elliptic_height(d) // 2 and top_below < lo):
                closed = False
        if not index(d, 2 * mj + bar_m) > hi:
            closed = False
        if not closed or full_scan:
            if not closed:
                trace.append(f"{names[j]}: iterate window not closed by the bounds; scanning")
            first, last = 1, 2 * mj + bar_m
            m = last
            while index(d, m) <= hi or m < 2 * mj + bar_m:
                m += 1
                last = m
        for m in range(first, last + 1):
            cs = critical_support(d, m)
            a, b = cs.interval
            if b < lo or a > hi:
                continue
            if full_scan and not (2 * mj - bar_m < m < 2 * mj + bar_m):
                trace.append(f"{names[j]}^{m}: support [{a},{b}] meets D outside |m-2m_j| < bar_m")
            fixed = "top" if (system.axiom_j0 == j and m == 2 * mj) else None
            cands.append(Candidate(j, m, m - 2 * mj, cs, fixed))
    return cands


def _cover_deficits(deficit: dict[int, int], free: list[Candidate], flexible: set[int]):
    """Choose shapes for unassigned candidates covering every positive deficit.

    Degrees in ``flexible`` are already coverable without limit. Returns
    {candidate index: (shape, {degree: count})} or None.
    """
    need = {q: v for q, v in deficit.items() if v > 0 and q not in flexible}
    if not need:
        return {}
    order = sorted(need)

    def rec(pos: int, need: dict, used: dict):
        while pos < len(order) and need[order[pos]] <= 0:
            pos += 1
        if pos == len(order):
            return dict(used)
        q = order[pos]
        for ci, c in enumerate(free):
            if ci in used:
                continue
            for shape in c.shapes():
                degs = c.shape_degrees(shape)
                if q not in degs:
                    continue
                if shape == "middle":
                    cover = {x: max(need.get(x, 0), 0) for x in degs if need.get(x, 0) > 0}
                    cover.setdefault(q, 1)
                else:
                    cover = {q: 1}
                for x, v in cover.items():
                    need[x] -= v
                used[ci] = (shape, cover)
                res = rec(pos, need, used)
                if res is not None:
                    return res
                del used[ci]
                for x, v in cover.items():
                    need[x] += v
        return None

    return rec(0, dict(need), {})


def window_assign(
    system: GeodesicSystem,
    t: JumpTuple,
    bar_m: int = 3,
    cap: int = 10_000,
    full_scan: bool = False,
    delta=None,
) -> AuditReport:
    """Replay the window bookkeeping for ``system`` at the jump tuple ``t``."""
    if bar_m < 3:
        raise ValueError(f"bar_m={bar_m}: the window argument needs bar_m >= 3")
    if len(t.m) != system.p:
        raise ValueError(f"tuple has {len(t.m)} iterates for {system.p} geodesics")
    errs = _errors(validate_system(system))
    if errs:
        raise ValueError("system rejected: " + "; ".join(map(str, errs)))
    bad = verify(t, system.geodesics, bar_m, delta=delta, regime=system.regime)
    if bad:
        raise ValueError("tuple fails verification: " + "; ".join(map(str, bad[:5])))

    n, N = system.n, t.N
    n1 = n - 1
    names = [d.name for d in system.geodesics]
    G1 = (N - (n - 2), N - 1)
    G2 = (N - (2 * n - 3), N - (n - 1))
    lo, hi = 2 * N - 3 * n1 + 2, 2 * N + n1
    report = AuditReport(t, n, G1, G2, (lo, hi), "Inconclusive")
    trace = report.trace
    trace.append(f"N={N}, G1=[{G1[0]},{G1[1]}], G2=[{G2[0]},{G2[1]}], degrees D=[{lo},{hi}]")

    # designated-geodesic flags against the tuple
    j0 = system.axiom_j0
    if j0 is not None:
        d0, m0 = system.geodesics[j0], t.m[j0]
        top = index(d0, 2 * m0) + nullity(d0, 2 * m0)
        dl = t.epsilon if delta is None else delta
        dj0 = delta_of(d0, m0, dl)
        if top != hi:
            report.verdict, report.step = "Contradiction", "Lemma 4.3 (5.38)"
            report.explanation = f"i+nu of {names[j0]}^(2m) is {top}, not 2N+n-1={hi}"
            trace.append(report.explanation)
            return report
        if dj0 != d0.r2:
            report.verdict, report.step = "Contradiction", "Lemma 4.3 (5.41)"
            report.explanation = f"Delta for {names[j0]} is {dj0}, but r2 = {d0.r2}"
            trace.append(report.explanation)
            return report
        trace.append(f"Lemma 4.3: {names[j0]}^(2m) supported only in degree {hi} = 2N+n-1")

    cands = _candidates(system, t, bar_m, lo, hi, full_scan, trace)
    windows = [i for i in range(G1[0], G1[1] + 1)] + [i for i in range(G2[0], G2[1] + 1)]
    windows = [i for i in windows if i >= 1]
    options: dict[int, list[tuple[int, str]]] = {}
    for i in windows:
        q = 2 * i + n1
        options[i] = [
            (ci, s)
            for ci, c in enumerate(cands)
            if not c.fixed
            for s in c.shapes()
            if q in c.shape_degrees(s)
        ]

    # trace in the order of the claims
    for i in windows:
        offs = sorted({cands[ci].offset for ci, _ in options[i]})
        grp = "G1" if G1[0] <= i <= G1[1] else "G2"
        who = ", ".join(sorted({cands[ci].label(names) for ci, _ in options[i]})) or "none"
        trace.append(f"{grp} i={i} degree {2 * i + n1}: possible offsets m-2m_j in {offs}; {who}")
    if all(cands[ci].offset == 0 for i in windows if G1[0] <= i <= G1[1] for ci, _ in options[i]):
        trace.append("Claim 1: every G1 window is met only by iterates 2m_j")
    if all(cands[ci].offset in (0, -1) for i in windows if G2[0] <= i <= G2[1] for ci, _ in options[i]):
        trace.append("G2 windows are met only by iterates 2m_j or 2m_j-1")

    base_b = {q: betti(n, q) for q in range(lo, hi + 1)}
    fixed_counts = {q: 0 for q in base_b}
    for c in cands:
        if c.fixed:
            for q in c.shape_degrees(c.fixed):
                fixed_counts[q] += 1

    empty = [i for i in windows if not options[i]]
    if empty:
        i = empty[0]
        report.verdict, report.step = "Contradiction", "windows"
        report.explanation = (
            f"window i={i}: degree {2 * i + n1} ({degree_label(2 * i + n1, N, n)}) "
            "has no admissible contributor"
        )
        trace.append(report.explanation)
        return report

    found = 0
    window_feasible = 0
    capped = False
    max_m = {q: 0 for q in base_b}
    witness = None
    order = sorted(windows, key=lambda i: len(options[i]))

    def leaf(assign: dict[int, tuple[int, str]]):
        nonlocal found, window_feasible, witness
        window_feasible += 1
        counts = dict(fixed_counts)
        flexible: set[int] = set()
        for i, (ci, s) in assign.items():
            c = cands[ci]
            if s == "middle":
                flexible.update(c.shape_degrees(s))
                counts[2 * i + n1] += 1
            else:
                for q in c.shape_degrees(s):
                    counts[q] += 1
        used = {ci for ci, _ in assign.values()}
        free = [c for ci, c in enumerate(cands) if ci not in used and not c.fixed]
        # best case per degree, for explaining a failure
        for q in base_b:
            if q in flexible:
                max_m[q] = INF
                continue
            extra = sum(
                1 for c in free if any(q in c.shape_degrees(s) for s in c.shapes())
            )
            if any(q in c.shape_degrees("middle") for c in free if "middle" in c.shapes()):
                max_m[q] = INF
            else:
                max_m[q] = max(max_m[q], counts.get(q, 0) + extra)
        deficit = {q: base_b[q] - counts.get(q, 0) for q in base_b}
        plan = _cover_deficits(deficit, free, flexible)
        if plan is None:
            return
        found += 1
        if witness is None:
            witness = (dict(assign), counts, flexible, plan, free, deficit)

    def rec(pos: int, assign: dict, used: set):
        nonlocal capped
        if found >= cap or window_feasible >= cap * 10:
            capped = True
            return
        if pos == len(order):
            leaf(assign)
            return
        i = order[pos]
        for ci, s in options[i]:
            if ci in used:
                continue
            assign[i] = (ci, s)
            used.add(ci)
            rec(pos + 1, assign, used)
            used.discard(ci)
            del assign[i]

    rec(0, {}, set())
    report.n_assignments, report.capped = found, capped

    if witness is not None:
        assign, counts, flexible, plan, free, deficit = witness
        k_vectors: dict = {}
        for c in cands:
            if c.fixed:
                k_vectors[(c.j, c.m)] = {q: 1 for q in c.shape_degrees(c.fixed)}
        for i, (ci, s) in assign.items():
            c = cands[ci]
            if s == "middle":
                k_vectors[(c.j, c.m)] = {2 * i + n1: 1}
            else:
                k_vectors[(c.j, c.m)] = {q: 1 for q in c.shape_degrees(s)}
        # fill deficits at flexible degrees from assigned middle iterates
        for q in sorted(flexible):
            short = deficit.get(q, 0)
            if short > 0:
                for i, (ci, s) in assign.items():
                    c = cands[ci]
                    if s == "middle" and q in c.shape_degrees(s):
                        kv = k_vectors[(c.j, c.m)]
                        kv[q] = kv.get(q, 0) + short
                        break
        for fi, (shape, cover) in plan.items():
            c = free[fi]
            k_vectors[(c.j, c.m)] = dict(cover)
        report.verdict, report.step = "Consistent", "all windows and Morse bounds met"
        report.assignments = {
            i: (cands[ci].j, cands[ci].m, s) for i, (ci, s) in sorted(assign.items())
        }
        report.k_vectors = k_vectors
        M = {q: 0 for q in base_b}
        for kv in k_vectors.values():
            for q, v in kv.items():
                if q in M:
                    M[q] += v
        report.morse = [(q, M[q], base_b[q]) for q in sorted(base_b)]
        for i, (j, m, s) in report.assignments.items():
            trace.append(f"witness: i={i} -> {names[j]}^{m} ({s})")
        report.explanation = f"{found}{'+' if capped else ''} admissible assignment(s)"
        return report

    if capped:
        report.verdict, report.step = "Inconclusive", "search cap"
        report.explanation = f"cap {cap} reached before the search space was exhausted"
        trace.append(report.explanation)
        return report

    report.verdict = "Contradiction"
    if window_feasible == 0:
        report.step = "windows"
        report.explanation = "no injective assignment of windows to distinct iterates exists"
        trace.append(report.explanation)
        return report
    report.step = "Morse"
    blocking = [q for q in sorted(base_b) if max_m[q] < base_b[q]]
    if blocking:
        # report the degree the window argument isolates when it blocks, otherwise the lowest
        q = 2 * N - n1 if (2 * N - n1) in blocking else blocking[0]
        lab = degree_label(q, N, n)
        mq = int(max_m[q])
        report.explanation = f"M_{{{lab}}}={mq} < b={base_b[q]} (degree {q})"
        cont = [c.label(names) for c in cands
                if any(q in c.shape_degrees(s) for s in c.shapes())]
        trace.append(f"Claim 3: degree {q} can only be met by {', '.join(cont) or 'nothing'}")
    else:
        report.explanation = "Morse bounds fail jointly; no single degree blocks"
    trace.append(report.explanation)
    return report


def audit_system(
    system: GeodesicSystem,
    bar_m: int,
    M0: int,
    epsilon,
    N_limit: int,
    max_tuples: int = 1000,
    cap: int = 10_000,
) -> AuditReport:
    """Run window_assign on the first jump tuple that agrees with the designated-geodesic flags.

    Tuples at which the designated geodesic does not jump as the axiom demands
    are noted in the trace and skipped, since the axiom only speaks about
    tuples where it holds. With no designated geodesic the first tuple is used.
    """
    from .cijt import iter_solve

    skipped: list[str] = []
    last = None
    for count, t in enumerate(iter_solve(system.geodesics, bar_m, M0, epsilon, N_limit)):
        if count >= max_tuples:
            break
        rep = window_assign(system, t, bar_m, cap=cap)
        last = rep
        if rep.step.startswith("Lemma 4.3"):
            skipped.append(f"skipped N={t.N}: {rep.explanation}")
            continue
        rep.trace[:0] = skipped
        return rep
    if last is not None:
        last.trace[:0] = skipped[:-1]
        return last
    return AuditReport(None, system.n, (0, 0), (0, 0), (0, 0), "Inconclusive", "no tuple",
                       f"no jump tuple with N <= {N_limit}",
                       trace=[f"no jump tuple with N <= {N_limit}"])


def recheck_witness(report: AuditReport, system: GeodesicSystem) -> list[str]:
    """Independent re-check of a Consistent report; returns a list of problems."""
    problems = []
    if not report.consistent:
        return ["report is not Consistent"]
    n, N = system.n, report.tuple.N
    n1 = n - 1
    seen = set()
    for i, (j, m, _shape) in report.assignments.items():
        d = system.geodesics[j]
        q = 2 * i + n1
        i_m, nu_m = index(d, m), nullity(d, m)
        if not (i_m <= q <= i_m + nu_m):
            problems.append(f"sandwich fails at i={i}: {i_m} <= {q} <= {i_m + nu_m}")
        if (j, m) in seen:
            problems.append(f"pair {(j, m)} used twice")
        seen.add((j, m))
        if report.k_vectors.get((j, m), {}).get(q, 0) < 1:
            problems.append(f"window i={i}: chosen module vanishes in degree {q}")
    for (j, m), kv in report.k_vectors.items():
        cs = critical_support(system.geodesics[j], m)
        ks = [kv.get(cs.i + r, 0) for r in range(cs.nu + 1)]
        if any(q < cs.i or q > cs.i + cs.nu for q in kv):
            problems.append(f"{(j, m)}: degrees outside [{cs.i},{cs.i + cs.nu}]")
        elif not cs.admits(ks):
            problems.append(f"{(j, m)}: k-vector {ks} is not admissible")
    lo, hi = report.degree_range
    M = {q: 0 for q in range(lo, hi + 1)}
    for kv in report.k_vectors.values():
        for q, v in kv.items():
            if q in M:
                M[q] += v
    for q in M:
        if M[q] < betti(n, q):
            problems.append(f"M_{q}={M[q]} < b={betti(n, q)}")
    if system.axiom_j0 is not None:
        j0 = system.axiom_j0
        kv = report.k_vectors.get((j0, 2 * report.tuple.m[j0]), {})
        if set(kv) != {2 * N + n1}:
            problems.append("designated geodesic not supported exactly at 2N+n-1")
    return problems


# -- non-hyperbolic census ----------------------------------------------------------


@dataclass
class CensusReport:
    count: int  # non-hyperbolic geodesics in the data
    forced: list[str]  # geodesics the window argument forces to be non-hyperbolic
    impossible: list[str]  # hyperbolic geodesics shut out of the G1 windows off 2N
    bound: int  # 2[n/2]-1
    assignment: dict

    @property
    def meets_bound(self) -> bool:
        return self.count >= self.bound and len(self.forced) >= self.bound


def hyperbolic_census(system: GeodesicSystem, t: JumpTuple, bar_m: int = 3) -> CensusReport:
    n, N = system.n, t.N
    n1 = n - 1
    names = [d.name for d in system.geodesics]
    hyper = [j for j, d in enumerate(system.geodesics) if elliptic_height(d) == 0]
    count = system.p - len(hyper)
    impossible = []
    for j in hyper:
        d = system.geodesics[j]
        m2 = 2 * t.m[j]
        i2, nu2 = index(d, m2), nullity(d, m2)
        if not (i2 == 2 * N == i2 + nu2):
            impossible.append(f"{names[j]}: expected i = i+nu = 2N at 2m_j, got {i2}, {i2 + nu2}")
        else:
            impossible.append(f"{names[j]}: supported at most in degree 2N, unusable off 2N")
    # G1 windows off 2N must use 2m_j iterates of distinct geodesics
    G1 = range(N - (n - 2), N)
    offs = [i for i in G1 if 2 * i + n1 != 2 * N]
    opts = {}
    for i in offs:
        q = 2 * i + n1
        opts[i] = [
            j for j, d in enumerate(system.geodesics)
            if j != system.axiom_j0 and q in critical_support(d, 2 * t.m[j]).support
        ]
    assignment = _match(offs, opts)
    forced = sorted({names[j] for j in assignment.values()})
    if system.axiom_j0 is not None:
        forced.append(names[system.axiom_j0])
    return CensusReport(count, forced, impossible, 2 * (n // 2) - 1,
                        {i: names[j] for i, j in assignment.items()})


def _match(items: list, opts: dict) -> dict:
    """Injective choice item -> option by backtracking (first found, fixed order)."""
    res: dict = {}

    def rec(k: int, used: set) -> bool:
        if k == len(items):
            return True
        it = items[k]
        for o in opts[it]:
            if o not in used:
                res[it] = o
                used.add(o)
                if rec(k + 1, used):
                    return True
                used.discard(o)
                del res[it]
        return False

    return res if rec(0, set()) else {}


# -- weak-pinching count ---------------------------------------------------------------


@dataclass
class WeakCountReport:
    lower_bound: int
    p: int
    verdict: str  # Consistent | Contradiction
    blocking: str
    assignment: dict  # degree -> geodesic name

    @property
    def consistent(self) -> bool:
        return self.verdict == "Consistent"


def weak_regime_count(system: GeodesicSystem, m_max: int = GATE_M_MAX) -> WeakCountReport:
    """Replay the weak-pinching count: n-1 low degrees need n-1 distinct first iterates."""
    reg = system.regime
    if reg is None or reg.kind != "weak":
        raise ValueError("weak_regime_count needs the weak pinching regime")
    errs = _errors(validate_system(system, m_max))
    if errs:
        raise ValueError("system rejected: " + "; ".join(map(str, errs)))
    n = system.n
    n1 = n - 1
    names = [d.name for d in system.geodesics]
    degrees = [2 * i + n1 for i in range(1, n - 1)]
    # no m >= 2 iterate reaches a window degree, since 2(n-2)+n-1 < 3(n-1)
    top = degrees[-1] if degrees else n1
    for j, d in enumerate(system.geodesics):
        for m in range(2, m_max + 1):
            if index(d, m) <= top:
                return WeakCountReport(n1, system.p, "Contradiction",
                                       f"(4.4) fails for {names[j]} at m={m}", {})
    opts: dict = {}
    for q in degrees:
        opts[q] = [j for j, d in enumerate(system.geodesics) if q in critical_support(d, 1).support]
    # b_{n-1} = 1 needs a first iterate with index exactly n-1, supported only there
    opts[n1] = [j for j, d in enumerate(system.geodesics)
                if index(d, 1) == n1 and n1 in critical_support(d, 1).support]
    items = [n1] + degrees
    if system.p < len(items):
        return WeakCountReport(
            n1, system.p, "Contradiction",
            f"(4.3)/(4.4): degrees {items} need m=1 support from {len(items)} distinct "
            f"geodesics (pigeonhole), only p={system.p} exist",
            {},
        )
    assignment = _match(items, opts)
    if not assignment:
        empty = [q for q in items if not opts[q]]
        why = (f"degree {empty[0]} has no admissible first iterate"
               if empty else "no injective choice of first iterates")
        rule = "(4.3)/(4.9.0)" if empty and empty[0] == n1 else "(4.3)/(4.4)"
        return WeakCountReport(n1, system.p, "Contradiction", f"{rule}: {why}", {})
    return WeakCountReport(n1, system.p, "Consistent", "",
                           {q: names[j] for q, j in assignment.items()})
