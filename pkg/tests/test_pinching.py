from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import decompositions, record
from sik.iteration import average_index, index
from sik.normal_form import Decomposition
from sik.pinching import MainPinch, WeakPinch, gate, regime_from_name


def test_min_index():
    assert MainPinch(4).min_index(1) == 3
    assert MainPinch(4).min_index(2) == 9
    assert WeakPinch(4).min_index(2) == 9


def test_min_avg_index():
    assert MainPinch(4).min_avg_index() == 5
    assert MainPinch(6).min_avg_index() == 9
    assert WeakPinch(4).min_avg_index() == F(9, 2)


def test_gate_examples():
    assert gate(record(Decomposition(name="c", i1=3, h_plus=3)), MainPinch(4), 20)
    ok = record(Decomposition(name="c", i1=7, rot_rational=(F(1, 8),), h_plus=2))
    assert gate(ok, MainPinch(4), 20) == []


def test_gate_with_no_iterates_checks_only_average():
    d = record(Decomposition(name="c", i1=3, h_plus=3))
    assert [v.field for v in gate(d, MainPinch(4), 0)] == ["average_index"]


def test_regime_errors():
    with pytest.raises(ValueError):
        regime_from_name("medium", 4)
    with pytest.raises(ValueError):
        MainPinch(3)


@given(st.integers(4, 9), st.integers(1, 200))
def test_weak_bound_never_exceeds_main(n, m):
    assert WeakPinch(n).min_index(m) <= MainPinch(n).min_index(m)


@given(decompositions(max_dim=3, min_i1=3, max_i1=15))
def test_gated_decompositions_grow_fast(d):
    # a gated decomposition keeps the average bound and the per-iterate bound together
    if gate(d, MainPinch(4), 30) == []:
        assert average_index(d) > 5
        assert all(index(d, m) >= MainPinch(4).min_index(m) for m in range(1, 31))
