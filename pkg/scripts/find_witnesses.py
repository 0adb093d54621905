"""Search for and freeze the audit witness systems used by the tests.

The main-regime witnesses at n = 4 share three geodesics:

* A (i1 = 7) and B (i1 = 5) are one rational rotation plus two hyperbolic
  directions; their iterates 2m-1 and 2m reach the low G2 and G1 windows;
* C (i1 = 3, designated) has two rational rotations and one rotation with
  turn 1/5 + sqrt(2)/2, so that 2m_C t stays just above an integer at the
  tuples found, as the designated geodesic requires.

A, B, C alone leave degree 2N-3 with a single contributor while b = 2 there.
Adding D (i1 = 9, three rational rotations) gives a second bottom at 2N-3
and the replay becomes Consistent.

Turns are picked so that bar_M = 5 and the rational averages give N/36 and
N/27, hence candidate N run over multiples of 108. The search then walks the
tuples and keeps the first one whose verdict is the wanted one.
"""

from __future__ import annotations

import argparse
import json
import time
from fractions import Fraction as F
from pathlib import Path

from sik.arith import surd
from sik.audit import GeodesicSystem, audit_system, weak_regime_count
from sik.cijt import tuple_to_json
from sik.config import emit_config
from sik.normal_form import Decomposition
from sik.pinching import MainPinch, WeakPinch

A = Decomposition(name="A", i1=7, rot_rational=(F(3, 5),), h_plus=2)
B = Decomposition(name="B", i1=5, rot_rational=(F(7, 10),), h_plus=2)
C = Decomposition(name="C", i1=3, rot_rational=(F(9, 10), F(9, 10)),
                  rot_irrational=(surd(F(1, 5), F(1, 2), 2),))
D = Decomposition(name="D", i1=9, rot_rational=(F(1, 5), F(1, 5), F(1, 5)))


def main_systems():
    reg = MainPinch(4)
    return {
        "step2_contradiction": GeodesicSystem(4, (A, B, C), reg, 2),
        "main_consistent": GeodesicSystem(4, (A, B, C, D), reg, 2),
    }


def weak_system(n: int, p: int) -> GeodesicSystem:
    """First indices n-1, n+1, ..., 3n-5; every block a rotation with turn 4/5."""
    k = n - 1
    geo = [Decomposition(name=f"W{j + 1}", i1=i1, rot_rational=(F(4, 5),) * k)
           for j, i1 in enumerate(range(n - 1, 3 * n - 4, 2))]
    return GeodesicSystem(n, tuple(geo[:p]), WeakPinch(n))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "data"))
    ap.add_argument("--n-limit", type=int, default=1_000_000)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name, system in main_systems().items():
        t0 = time.perf_counter()
        rep = audit_system(system, 3, 3, F(1, 100), args.n_limit)
        emit_config(system, out / f"{name}.json")
        if rep.tuple is not None:
            (out / f"{name}_tuple.json").write_text(json.dumps(tuple_to_json(rep.tuple), indent=2) + "\n")
        print(f"{name}: N={rep.tuple.N if rep.tuple else None} {rep.verdict} / {rep.step}: "
              f"{rep.explanation} ({time.perf_counter() - t0:.2f}s)")

    for n in (4, 5):
        for p in (n - 1, n - 2):
            system = weak_system(n, p)
            rep = weak_regime_count(system)
            emit_config(system, out / f"weak_n{n}_p{p}.json")
            print(f"weak n={n} p={p}: {rep.verdict} {rep.blocking}")


if __name__ == "__main__":
    main()
