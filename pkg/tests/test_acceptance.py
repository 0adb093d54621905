"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the log) or directly with
``python3 tests/test_acceptance.py``. Time limits are pinned per criterion.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))
sys.path.insert(0, str(HERE.parent / "scripts"))

from conftest import DATA, SEEN, TURNS, record, with_parity  # noqa: E402
from sik.audit import (GeodesicSystem, lemma42_check, weak_regime_count,  # noqa: E402
                       window_assign)
from sik.cijt import compute_bar_M, iter_solve, solve, tuple_from_json, verify  # noqa: E402
from sik.config import load_json, parse_config  # noqa: E402
from sik.iteration import bott_check, index, nullity  # noqa: E402
from sik.loop_space import betti, poincare_series  # noqa: E402
from sik.normal_form import (COUNT_FIELDS, Decomposition, dimension, q_closed_form,  # noqa: E402
                             q_closed_form_doubled, q_of_m, s_plus_one, big_c, splitting,
                             total_s_minus, validate)
from sik.oracle import realize_and_nullity_oracle  # noqa: E402
from sik.pinching import MainPinch, WeakPinch, gate  # noqa: E402

LIMITS = {1: 60, 2: 10, 3: 1, 4: 300, 5: 5, 6: 120, 7: 60, 8: 30, 9: 120}
EPS = F(1, 100)

# every decomposition the criteria build, for the Bott sweep
CORPUS: list[Decomposition] = []


def _keep(d):
    CORPUS.append(d)
    return record(d)


def enumerate_blocks(turns, dims, with_hyperbolic=True):
    """All multisets of blocks with total dimension in ``dims`` (i1 left at 0)."""
    one = [(k, None) for k in COUNT_FIELDS if with_hyperbolic or not k.startswith("h_")]
    one += [("rot", t) for t in turns]
    two = [(k, t) for k in ("n2n", "n2t") for t in turns]
    menu = one + two
    width = lambda b: 2 if b[0] in ("n2n", "n2t") else 1  # noqa: E731
    for size in range(1, max(dims) + 1):
        for combo in itertools.combinations_with_replacement(range(len(menu)), size):
            blocks = [menu[i] for i in combo]
            if sum(width(b) for b in blocks) not in dims:
                continue
            counts = {k: 0 for k in COUNT_FIELDS}
            rot, n2n, n2t = [], [], []
            for kind, t in blocks:
                if kind in counts:
                    counts[kind] += 1
                else:
                    {"rot": rot, "n2n": n2n, "n2t": n2t}[kind].append(t)
            yield Decomposition(name="c", i1=0, rot_rational=tuple(rot), n2_nontrivial_rational=tuple(n2n),
                                n2_trivial_rational=tuple(n2t), **counts)


def _random_system_member(rng, dim, pool):
    while True:
        kinds = []
        left = dim
        while left:
            k = rng.choice(pool)
            w = 2 if k in ("n2n", "n2t") else 1
            if w <= left:
                kinds.append(k)
                left -= w
        counts = {k: kinds.count(k) for k in COUNT_FIELDS}
        draw = lambda key: tuple(rng.choice(TURNS[:5]) for _ in range(kinds.count(key)))  # noqa: E731
        d = Decomposition(name="c", i1=0, rot_rational=draw("rot"), n2_nontrivial_rational=draw("n2n"),
                          n2_trivial_rational=draw("n2t"), **counts)
        if dimension(d) == dim:
            return d


# -- criteria -----------------------------------------------------------------------


def criterion_1():
    """Nullity formula equals dim ker(M^m - I) from explicit matrices, dimension <= 4, m <= 60."""
    turns = (F(1, 3), F(1, 4), F(1, 5), F(2, 5))
    decs = list(enumerate_blocks(turns, {1, 2, 3, 4}))
    mism = 0
    for d in decs:
        _keep(with_parity(d))
        for m in range(1, 61):
            if nullity(d, m) != realize_and_nullity_oracle(d, m):
                mism += 1
    # whole-matrix elimination (no block bookkeeping) on every decomposition up to dimension 3
    full = [d for d in decs if dimension(d) <= 3]
    for d in full:
        for m in range(1, 61):
            if nullity(d, m) != realize_and_nullity_oracle(d, m, full_matrix=True):
                mism += 1
    return mism == 0, f"{len(decs)} decompositions x 60 iterates, {len(full)} also as full matrices, {mism} mismatches"


def criterion_2():
    """Splitting closed forms on 500 random decompositions; Q definition vs printed closed form, m <= 100."""
    rng = random.Random(2)
    from conftest import random_decomposition

    sp = sm = q_lit = q_dbl = other = 0
    for _ in range(500):
        d = _keep(random_decomposition(rng))
        sp += splitting(d, 1).s_plus != s_plus_one(d)
        sm += total_s_minus(d) != big_c(d)
        mk = compute_bar_M([d])
        bad_lit = any(q_of_m(d, mk, m) != q_closed_form(d, m) for m in range(1, 101))
        bad_dbl = any(q_of_m(d, mk, m) != q_closed_form_doubled(d, m) for m in range(1, 101))
        q_lit += bad_lit
        other += bad_lit and not d.n2_nontrivial_rational
        q_dbl += bad_dbl
    ok = sp == sm == q_lit == 0
    return ok, (f"S+(1) mismatches {sp}, total S- mismatches {sm}, printed Q closed form mismatches "
                f"{q_lit}/500 ({q_lit - other} of them with a rational nontrivial N2 block), doubled N2 count mismatches {q_dbl}/500")


def criterion_3():
    """Worked jump tuple for {D(2), i1=3; R(2pi/3), i1=1}."""
    d1 = _keep(Decomposition(name="c1", i1=3, h_plus=1))
    d2 = _keep(Decomposition(name="c2", i1=1, rot_rational=(F(1, 3),)))
    res = solve([d1, d2], 3, 1, EPS, 100)
    t = res.tuples[0] if res.tuples else None
    ok = (t is not None and (t.N, t.m, t.bar_M) == (18, (6, 27), 3) and not verify(t, [d1, d2], 3)
          and index(d2, 51) == 33 == 2 * 18 - 1 - 2 * q_of_m(d2, 27, 3) and q_of_m(d2, 27, 3) == 1)
    return ok, f"first tuple {t and (t.N, t.m, t.bar_M)}, i(c2^51)={index(d2, 51)}"


def criterion_4():
    """50 random rational gated systems: every tuple up to 10^6 verifies, with the pinched package."""
    rng = random.Random(4)
    pool = list(COUNT_FIELDS) + ["rot", "rot", "n2n", "n2t"]
    systems = 0
    tuples = bad = rejected = 0
    while systems < 50:
        dim = rng.randint(3, 5)
        n = dim + 1
        reg = MainPinch(n)
        p = rng.randint(1, 4)
        decs = []
        while len(decs) < p:
            d = _random_system_member(rng, dim, pool)
            d = with_parity(d.replace(i1=rng.randint(2 * n - 3, 2 * n + 6), name=f"c{len(decs)}"))
            if not [v for v in validate(d, n) if v.severity == "error"] and not gate(d, reg, 60):
                decs.append(_keep(d))
        systems += 1
        res = solve(decs, 3, 1, EPS, 10**6)
        tuples += len(res.tuples)
        rejected += len(res.rejected)
        bad += sum(1 for t in res.tuples if verify(t, decs, 3, regime=reg))
    return bad == 0, f"{systems} systems, {tuples} tuples, {bad} failing the identities or pinched bounds, {rejected} near-miss candidates withheld by verify"


def criterion_5():
    """Betti numbers against the series expansion; b(4, 2N-3) = 2 for N in 6..60 step 3."""
    mism = sum(1 for n in range(4, 10) if [betti(n, q) for q in range(61)] != poincare_series(n, 60))
    doubles = all(betti(4, 2 * N - 3) == 2 for N in range(6, 61, 3))
    return mism == 0 and doubles, f"{mism} mismatching tables, doubles at 2N-3: {doubles}"


def criterion_6():
    """lemma42_check on every gated n=4 decomposition over {1/3,1/4,1/5,1/8}, i1 <= 15."""
    turns = (F(1, 3), F(1, 4), F(1, 5), F(1, 8))
    reg = MainPinch(4)
    checked = fails = 0
    for base in enumerate_blocks(turns, {3}):
        for i1 in range(0, 16):
            d = base.replace(i1=i1)
            if [v for v in validate(d, 4) if v.severity == "error"] or gate(d, reg, 60):
                continue
            _keep(d)
            t = next(iter_solve([d], 3, 1, EPS, 10**6, N_min=30))
            res = lemma42_check(d, t, 4)
            checked += 1
            fails += not res
    return checked > 0 and fails == 0, f"{checked} gated decompositions, {fails} failures"


def criterion_7():
    """Step-2 replay: 3-geodesic gated n=4 system, N multiple of 3, Morse contradiction at 2N-3."""
    system = parse_config(DATA / "step2_contradiction.json")
    for d in system.geodesics:
        _keep(d)
    t = tuple_from_json(load_json(DATA / "step2_contradiction_tuple.json"))
    rep = window_assign(system, t)
    q = 2 * t.N - 3
    ok = (system.p == 3 and t.N % 3 == 0 and rep.verdict == "Contradiction" and rep.step == "Morse"
          and rep.explanation == f"M_{{2N-(n-1)}}=1 < b=2 (degree {q})")
    return ok, f"N={t.N}: {rep.verdict} / {rep.step}: {rep.explanation}"


def criterion_8():
    """Weak regime: every admissible system with fewer than n-1 geodesics hits the pigeonhole."""
    from find_witnesses import weak_system

    rejected = total = 0
    witnesses = []
    for n in (4, 5):
        reg = WeakPinch(n)
        pool = []
        for base in enumerate_blocks((F(3, 4), F(4, 5)), {n - 1}, with_hyperbolic=True):
            for i1 in range(n - 1, 3 * n - 3):
                d = base.replace(i1=i1)
                if not [v for v in validate(d, n) if v.severity == "error"] and not gate(d, reg, 60):
                    pool.append(_keep(d))
        for p in range(1, n - 1):
            for combo in itertools.combinations(range(len(pool)), p):
                if total >= 4000 * n:
                    break
                geo = tuple(pool[k].replace(name=f"c{j}") for j, k in enumerate(combo))
                rep = weak_regime_count(GeodesicSystem(n, geo, reg))
                total += 1
                rejected += rep.verdict == "Contradiction" and "(4.3)/(4.4)" in rep.blocking
        w = weak_regime_count(weak_system(n, n - 1))
        witnesses.append(w.consistent and w.lower_bound == n - 1)
    return rejected == total > 0 and all(witnesses), (
        f"{rejected}/{total} small systems rejected naming (4.3)/(4.4); n-1 witnesses consistent: {witnesses}")


def criterion_9():
    """Bott bounds for every profile built by the suite, m <= 100."""
    from conftest import _key

    pool = {_key(d): d for d in CORPUS}
    pool.update(SEEN)
    bad = [d for d in pool.values() if bott_check(d, 100) is not None]
    return not bad, f"{len(pool)} distinct decompositions, {len(bad)} violations"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run_one(k: int) -> tuple[bool, str]:
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k - 1]()
    dt = time.perf_counter() - t0
    in_time = dt < LIMITS[k]
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} criterion {k}: {CRITERIA[k - 1].__doc__.splitlines()[0]} [{detail}; {dt:.2f}s < {LIMITS[k]}s: {in_time}]"
    return ok and in_time, line


# criterion 2 asks the printed Q closed form to equal the definition; it does not
# for rational nontrivial N2 blocks, so that criterion is expected to fail
EXPECTED_FAIL = {2}


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, capsys):
    ok, line = run_one(k)
    with capsys.disabled():
        print("\n" + line)
    if k in EXPECTED_FAIL and not ok:
        pytest.xfail("printed Q closed form counts nontrivial N2 once; see decisions ledger")
    assert ok, line


if __name__ == "__main__":
    for k in range(1, 10):
        print(run_one(k)[1], flush=True)
