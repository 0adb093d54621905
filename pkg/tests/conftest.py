"""Shared strategies, fixtures and the registry of every decomposition the suite builds."""

from __future__ import annotations

import random
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sik.arith import surd
from sik.normal_form import COUNT_FIELDS as COUNTS, Decomposition, _odd_blocks, dimension

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "sik", deadline=None, max_examples=60, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("sik")

# every decomposition built through these helpers ends up here; the Bott
# acceptance check sweeps the whole registry
SEEN: dict[tuple, Decomposition] = {}


def record(d: Decomposition) -> Decomposition:
    SEEN.setdefault(_key(d), d)
    return d


def _key(d):
    return tuple(str(getattr(d, f)) for f in d.__dataclass_fields__ if f != "name")


TURNS = (F(1, 3), F(1, 4), F(1, 5), F(2, 5), F(2, 3), F(3, 4), F(1, 8), F(3, 5), F(4, 5))
SURDS = (surd(F(0), F(1, 2), 2), surd(F(-1), F(1), 2), surd(F(1, 3), F(1, 4), 2))


def with_parity(d: Decomposition) -> Decomposition:
    """Shift i1 by one if needed so the parity rule holds."""
    if (d.i1 - _odd_blocks(d)) % 2:
        d = d.replace(i1=d.i1 + 1)
    return d


_BLOCKS = ("p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus", "h_plus", "h_minus",
           "rot", "irr", "n2n", "n2t")
_WIDTH = {"n2n": 2, "n2t": 2}


@st.composite
def decompositions(draw, max_dim=5, surds=True, hyperbolic=True, n2=True, min_i1=0, max_i1=12):
    """Valid decompositions of dimension 1..max_dim with parity-correct i1."""
    kinds = [k for k in _BLOCKS
             if (surds or k != "irr") and (hyperbolic or not k.startswith("h_"))
             and (n2 or not k.startswith("n2"))]
    blocks = draw(st.lists(st.sampled_from(kinds), min_size=1, max_size=max_dim)
                  .filter(lambda bs: sum(_WIDTH.get(b, 1) for b in bs) <= max_dim))
    counts = {k: blocks.count(k) for k in COUNTS}
    angles = {"rot": [], "irr": [], "n2n": [], "n2t": []}
    for b in blocks:
        if b in angles:
            angles[b].append(draw(st.sampled_from(SURDS if b == "irr" else TURNS)))
    d = Decomposition(name="c", i1=draw(st.integers(min_i1, max_i1)),
                      rot_rational=tuple(angles["rot"]), rot_irrational=tuple(angles["irr"]),
                      n2_nontrivial_rational=tuple(angles["n2n"]),
                      n2_trivial_rational=tuple(angles["n2t"]), **counts)
    return record(with_parity(d))


def random_decomposition(rng: random.Random, max_dim=5, surds=True) -> Decomposition:
    while True:
        counts = {k: rng.randint(0, 1) for k in
                  ("p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus", "h_minus")}
        counts["h_plus"] = rng.randint(0, 2)
        d = Decomposition(
            name="c", i1=rng.randint(0, 12),
            rot_rational=tuple(rng.choice(TURNS) for _ in range(rng.randint(0, 2))),
            rot_irrational=tuple(rng.choice(SURDS) for _ in range(rng.randint(0, 1) if surds else 0)),
            n2_nontrivial_rational=tuple(rng.choice(TURNS) for _ in range(rng.randint(0, 1))),
            n2_trivial_rational=tuple(rng.choice(TURNS) for _ in range(rng.randint(0, 1))),
            **counts,
        )
        if 1 <= dimension(d) <= max_dim:
            return record(with_parity(d))


def rot(turn, i1=1, name="c", **kw) -> Decomposition:
    return record(Decomposition(name=name, i1=i1, rot_rational=(F(turn),), **kw))


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def two_geodesics():
    """D(2) with i1 = 3 and R(2pi/3) with i1 = 1."""
    return (record(Decomposition(name="c1", i1=3, h_plus=1)), rot(F(1, 3), name="c2"))


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the Bott sweep sees everything the other tests built
    items.sort(key=lambda it: it.fspath.basename == "test_acceptance.py")
