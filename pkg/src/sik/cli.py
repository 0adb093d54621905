"""Command-line front end. Exit codes: 0 ok, 1 usage or input error, 2 contradiction or violation."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import SCHEMA
from .arith import encode_scalar
from .audit import audit_system, weak_regime_count
from .cijt import solve, tuple_from_json, tuple_to_json, verify
from .config import ConfigError, RunConfig, load_json, parse_config, parse_fraction
from .iteration import IterationProfile, bott_check
from .loop_space import betti, morse_check
from .normal_form import eigen_entries, splitting

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(doc: dict, fmt: str, rows=None, header=None, text=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({"schema": SCHEMA, **doc}, indent=2, default=str) + "\n")
    elif fmt == "tsv" and rows is not None:
        out.write("\t".join(header) + "\n")
        for r in rows:
            out.write("\t".join(str(x) for x in r) + "\n")
    else:
        out.write((text if text is not None else json.dumps(doc, default=str)) + "\n")


def _geodesic(system, name):
    for d in system.geodesics:
        if d.name == name:
            return d
    if name is None and len(system.geodesics) == 1:
        return system.geodesics[0]
    raise ConfigError(f"no geodesic named {name!r}; have {[d.name for d in system.geodesics]}")


def cmd_iterate(a) -> int:
    system = parse_config(a.config)
    d = _geodesic(system, a.name)
    rows = IterationProfile(d).table(a.m_max)
    bott = bott_check(d, a.m_max)
    doc = {"geodesic": d.name, "avg_index": encode_scalar(IterationProfile(d).avg_index),
           "rows": [{"m": m, "i": i, "nu": nu} for m, i, nu in rows],
           "bott": None if bott is None else str(bott)}
    text = "\n".join(f"{m}\t{i}\t{nu}" for m, i, nu in rows)
    _emit(doc, a.format, rows, ("m", "i", "nu"), text)
    return EXIT_OK if bott is None else EXIT_FAIL


def cmd_splitting(a) -> int:
    system = parse_config(a.config)
    d = _geodesic(system, a.name)
    if a.omega is not None:
        omega = {"1": 1, "-1": -1}.get(a.omega) or parse_fraction(a.omega)
        sp = splitting(d, omega)
        doc = {"geodesic": d.name, "omega": a.omega, "s_plus": sp.s_plus, "s_minus": sp.s_minus}
        _emit(doc, a.format, [(a.omega, sp.s_plus, sp.s_minus)], ("omega", "S+", "S-"),
              f"S+={sp.s_plus} S-={sp.s_minus}")
        return EXIT_OK
    ents = eigen_entries(d)
    rows = [(str(e.turn), e.s_plus, e.s_minus, e.block) for e in ents]
    doc = {"geodesic": d.name,
           "entries": [{"turn": encode_scalar(e.turn), "s_plus": e.s_plus, "s_minus": e.s_minus,
                        "block": e.block} for e in ents]}
    _emit(doc, a.format, rows, ("turn", "S+", "S-", "block"),
          "\n".join("\t".join(map(str, r)) for r in rows))
    return EXIT_OK


def cmd_cijt(a) -> int:
    system = parse_config(a.config, a.regime)
    if a.action == "solve":
        cfg = RunConfig("cijt", a.config, a.regime, a.bar_m, a.m0, a.epsilon, a.n_limit, a.format)
        res = solve(system.geodesics, cfg.bar_m, cfg.M0, cfg.epsilon, cfg.N_limit)
        tuples = res.tuples[: a.max_tuples] if a.max_tuples else res.tuples
        doc = {"range": list(res.searched), "tuples": [tuple_to_json(t) for t in tuples],
               "rejected": res.rejected}
        if not tuples:
            doc["note"] = f"no tuple with N in [{res.searched[0]}, {res.searched[1]}]"
        rows = [(t.N, " ".join(map(str, t.m)), " ".join(map(str, t.chi))) for t in tuples]
        _emit(doc, a.format, rows, ("N", "m", "chi"),
              "\n".join("\t".join(map(str, r)) for r in rows) or doc.get("note"))
        return EXIT_OK
    if a.tuple is None:
        raise ConfigError("cijt verify needs --tuple")
    t = tuple_from_json(load_json(a.tuple))
    bad = verify(t, system.geodesics, a.bar_m, regime=system.regime)
    doc = {"tuple": tuple_to_json(t), "ok": not bad, "failures": [str(f) for f in bad]}
    _emit(doc, a.format, [(str(f),) for f in bad], ("failure",),
          "ok" if not bad else "\n".join(map(str, bad)))
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_betti(a) -> int:
    rows = [(q, betti(a.n, q)) for q in range(a.q_max + 1)]
    _emit({"n": a.n, "betti": [b for _, b in rows]}, a.format, rows, ("q", "b"),
          "\n".join(f"{q}\t{b}" for q, b in rows))
    return EXIT_OK


def cmd_morse(a) -> int:
    raw = load_json(a.input)
    if isinstance(raw, dict) and "M" in raw:
        extra = set(raw) - {"schema", "M"}
        if extra:
            raise ConfigError(f"{a.input}: unknown field(s) {sorted(extra)}")
        raw = raw["M"]
    if not isinstance(raw, dict):
        raise ConfigError(f"{a.input}: expected a map degree -> count")
    try:
        M = {int(q): int(v) for q, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{a.input}: degrees and counts must be integers") from exc
    hi = a.q_max if a.q_max is not None else max(M, default=0)
    rep = morse_check(M, a.n, (a.q_min, hi))
    doc = {"n": a.n, "range": [a.q_min, hi], "ok": bool(rep),
           "rows": [dict(zip(("q", "M", "b", "alt_M", "alt_b"), r)) for r in rep.rows],
           "violations": [str(v) for v in rep.violations]}
    _emit(doc, a.format, rep.rows, ("q", "M", "b", "alt_M", "alt_b"),
          "ok" if rep else "\n".join(map(str, rep.violations)))
    return EXIT_OK if rep else EXIT_FAIL


def _report_json(rep) -> dict:
    return {
        "tuple": None if rep.tuple is None else tuple_to_json(rep.tuple),
        "n": rep.n,
        "window_G1": list(rep.window_G1),
        "window_G2": list(rep.window_G2),
        "degree_range": list(rep.degree_range),
        "verdict": rep.verdict,
        "step": rep.step,
        "explanation": rep.explanation,
        "assignments": {str(i): list(v) for i, v in rep.assignments.items()},
        "k_vectors": [{"j": j, "m": m, "k": {str(q): c for q, c in sorted(kv.items())}}
                      for (j, m), kv in sorted(rep.k_vectors.items())],
        "morse": [list(r) for r in rep.morse],
        "n_assignments": rep.n_assignments,
        "capped": rep.capped,
        "trace": rep.trace,
    }


def cmd_audit(a) -> int:
    system = parse_config(a.config, a.regime)
    M0 = a.m0 if a.m0 is not None else system.n - 1
    cfg = RunConfig("audit", a.config, a.regime, a.bar_m, M0, a.epsilon, a.n_limit, a.format)
    if a.tuple is not None:
        from .audit import window_assign

        rep = window_assign(system, tuple_from_json(load_json(a.tuple)), cfg.bar_m)
    else:
        rep = audit_system(system, cfg.bar_m, cfg.M0, cfg.epsilon, cfg.N_limit)
    _emit(_report_json(rep), a.format, [(line,) for line in rep.trace], ("trace",),
          "\n".join(rep.trace + [f"verdict: {rep.verdict} ({rep.step})"]))
    if a.format == "json" and a.trace:
        sys.stderr.write("\n".join(rep.trace) + "\n")
    return EXIT_FAIL if rep.verdict == "Contradiction" else EXIT_OK


def cmd_weak(a) -> int:
    system = parse_config(a.config, "weak")
    rep = weak_regime_count(system)
    doc = {"lower_bound": rep.lower_bound, "p": rep.p, "verdict": rep.verdict,
           "blocking": rep.blocking, "assignment": {str(q): v for q, v in rep.assignment.items()}}
    text = f"{rep.verdict}: p={rep.p}, need {rep.lower_bound}" + (f"; {rep.blocking}" if rep.blocking else "")
    _emit(doc, a.format, sorted(rep.assignment.items()), ("degree", "geodesic"), text)
    return EXIT_OK if rep.consistent else EXIT_FAIL


def _frac(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sik", description="Exact index iteration and proof-replay tools.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, help="system JSON file")
        sp.add_argument("--format", choices=("json", "tsv", "text"), default="json")

    sp = sub.add_parser("iterate", help="table of (m, i, nu)")
    common(sp)
    sp.add_argument("--name")
    sp.add_argument("--m-max", type=int, default=50)
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("splitting", help="splitting numbers")
    common(sp)
    sp.add_argument("--name")
    sp.add_argument("--omega", help="1, -1 or a turn a/b; omit for the full table")
    sp.set_defaults(func=cmd_splitting)

    sp = sub.add_parser("cijt", help="common index jump tuples")
    sp.add_argument("action", choices=("solve", "verify"))
    common(sp)
    sp.add_argument("--bar-m", type=int, default=3)
    sp.add_argument("--m0", type=int, default=1)
    sp.add_argument("--epsilon", type=_frac, default=Fraction(1, 100))
    sp.add_argument("--n-limit", type=int, default=100_000)
    sp.add_argument("--max-tuples", type=int, default=0, help="0 keeps all")
    sp.add_argument("--tuple", help="tuple JSON for verify")
    sp.add_argument("--regime", choices=("main", "weak"))
    sp.set_defaults(func=cmd_cijt)

    sp = sub.add_parser("betti", help="Betti numbers of the loop space pair")
    common(sp, config=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q-max", type=int, default=40)
    sp.set_defaults(func=cmd_betti)

    sp = sub.add_parser("morse-check", help="Morse inequalities for given M_q")
    common(sp, config=False)
    sp.add_argument("--input", required=True, help="JSON map degree -> M_q")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q-min", type=int, default=0)
    sp.add_argument("--q-max", type=int)
    sp.set_defaults(func=cmd_morse)

    sp = sub.add_parser("audit", help="window and Morse replay at a jump tuple")
    common(sp)
    sp.add_argument("--regime", choices=("main", "weak"))
    sp.add_argument("--bar-m", type=int, default=3)
    sp.add_argument("--m0", type=int, help="default n-1")
    sp.add_argument("--epsilon", type=_frac, default=Fraction(1, 100))
    sp.add_argument("--n-limit", type=int, default=1_000_000)
    sp.add_argument("--tuple", help="audit this tuple instead of searching")
    sp.add_argument("--trace", action="store_true", help="also print the trace to stderr")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("weak-count", help="first-iterate count in the weak regime")
    common(sp)
    sp.set_defaults(func=cmd_weak)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "n", None) is not None and a.n < 2:
        parser.error("--n must be >= 2")
    try:
        return a.func(a)
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
