import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from conftest import DATA, record
from sik.audit import (GeodesicSystem, audit_system, hyperbolic_census, lemma42_check,
                       recheck_witness, validate_system, weak_regime_count, window_assign)
from sik.cijt import JumpTuple, iter_solve, tuple_from_json
from sik.config import load_json, parse_config
from sik.iteration import index, nullity
from sik.normal_form import Decomposition
from sik.pinching import MainPinch, WeakPinch

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))
from find_witnesses import A, B, C, D, weak_system  # noqa: E402


def load(name):
    system = parse_config(DATA / f"{name}.json")
    for d in system.geodesics:
        record(d)
    return system, tuple_from_json(load_json(DATA / f"{name}_tuple.json"))


@pytest.fixture(scope="module")
def step2():
    return load("step2_contradiction")


@pytest.fixture(scope="module")
def consistent():
    return load("main_consistent")


class TestWindowAssign:
    def test_step2_contradiction(self, step2):
        system, t = step2
        assert t.N % 3 == 0
        rep = window_assign(system, t)
        assert rep.verdict == "Contradiction" and rep.step == "Morse"
        assert rep.explanation == f"M_{{2N-(n-1)}}=1 < b=2 (degree {2 * t.N - 3})"

    def test_contradiction_survives_a_full_scan(self, step2):
        system, t = step2
        rep = window_assign(system, t, full_scan=True)
        assert rep.verdict == "Contradiction" and rep.step == "Morse"

    def test_consistent_witness_rechecks(self, consistent):
        system, t = consistent
        rep = window_assign(system, t)
        assert rep.consistent
        assert recheck_witness(rep, system) == []
        for i, (j, m, _) in rep.assignments.items():
            d = system.geodesics[j]
            assert index(d, m) <= 2 * i + 3 <= index(d, m) + nullity(d, m)
        assert len({(j, m) for j, m, _ in rep.assignments.values()}) == len(rep.assignments)
        assert all(mq >= bq for _, mq, bq in rep.morse)

    def test_deterministic(self, consistent):
        system, t = consistent
        a, b = window_assign(system, t), window_assign(system, t)
        assert a.trace == b.trace and a.assignments == b.assignments

    def test_gate_failure_is_rejected(self, step2):
        system, t = step2
        weak = Decomposition(name="X", i1=3, h_plus=3)
        bad = GeodesicSystem(4, (A, B, weak), MainPinch(4), None)
        assert validate_system(bad)
        with pytest.raises(ValueError, match="rejected"):
            window_assign(bad, t)

    def test_bar_m_below_three(self, step2):
        with pytest.raises(ValueError):
            window_assign(*step2, bar_m=2)

    def test_tuple_for_another_system(self, step2):
        system, _ = step2
        with pytest.raises(ValueError):
            window_assign(system, JumpTuple(18, (6, 6, 6), (0, 0, 0), 5, F(1, 100), 3))

    def test_lemma43_inconsistent_tuples_are_skipped(self):
        system = GeodesicSystem(4, (A, B, C), MainPinch(4), 2)
        first = next(iter_solve(system.geodesics, 3, 3, F(1, 100), 10**6))
        assert window_assign(system, first).step.startswith("Lemma 4.3")
        rep = audit_system(system, 3, 3, F(1, 100), 10**6)
        assert rep.step == "Morse"
        assert any(line.startswith("skipped N=") for line in rep.trace)


class TestCensus:
    def test_consistent_witness_meets_bound(self, consistent):
        system, t = consistent
        rep = hyperbolic_census(system, t)
        assert rep.meets_bound and len(rep.forced) >= 3

    def test_hyperbolic_geodesic_is_shut_out(self):
        H = record(Decomposition(name="H", i1=6, h_plus=3))
        system = GeodesicSystem(4, (A, B, C, H), MainPinch(4), 2)
        rep = audit_system(system, 3, 3, F(1, 100), 2 * 10**6)
        census = hyperbolic_census(system, rep.tuple)
        assert census.count == 3
        assert census.impossible == ["H: supported at most in degree 2N, unusable off 2N"]
        assert "H" not in census.assignment.values()


class TestLemma42:
    def test_pure_p_plus(self):
        d = record(Decomposition(name="c", i1=6, p_plus=3))
        t = next(iter_solve([d], 3, 1, F(1, 100), 1000, N_min=50))
        res = lemma42_check(d, t, 4)
        assert res and res.slack_first >= 0 and res.slack_second >= 0

    def test_ungated_decomposition_is_reported(self):
        d = record(Decomposition(name="c", i1=3, h_plus=1, p_minus=2))
        t = next(iter_solve([d], 3, 1, F(1, 100), 1000, N_min=50))
        res = lemma42_check(d, t, 4)
        assert not res and res.failures


class TestWeakCount:
    @pytest.mark.parametrize("n", [4, 5])
    def test_witness(self, n):
        rep = weak_regime_count(weak_system(n, n - 1))
        assert rep.consistent and rep.lower_bound == n - 1

    @pytest.mark.parametrize("n", [4, 5])
    def test_pigeonhole(self, n):
        rep = weak_regime_count(weak_system(n, n - 2))
        assert rep.verdict == "Contradiction" and "(4.3)/(4.4)" in rep.blocking

    def test_high_iterates_never_reach_the_windows(self):
        system = weak_system(5, 4)
        for d in system.geodesics:
            assert all(index(d, m) >= 12 for m in range(2, 40))

    def test_needs_weak_regime(self, step2):
        with pytest.raises(ValueError):
            weak_regime_count(step2[0])

    def test_missing_low_degree(self):
        geo = (Decomposition(name="W", i1=5, rot_rational=(F(4, 5),) * 3),
               Decomposition(name="V", i1=5, rot_rational=(F(3, 4),) * 3),
               Decomposition(name="U", i1=7, rot_rational=(F(4, 5),) * 3))
        rep = weak_regime_count(GeodesicSystem(4, geo, WeakPinch(4)))
        assert rep.verdict == "Contradiction" and "degree 3" in rep.blocking
