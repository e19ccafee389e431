"""Acceptance criteria; each test prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cpnlogic.cli import main
from cpnlogic.countermodel import extract, verify
from cpnlogic.formula import Atom, Formula, atoms, parse
from cpnlogic.fuzz import random_formula, random_formulas, random_sequent
from cpnlogic.gseq import Sequent, g_cut_test, g_prove
from cpnlogic.hseq import HCeilingExceeded, h_prove
from cpnlogic.logics import (
    CALCULUS_LOGICS,
    AxiomSchema,
    LogicId as L,
    axiom_corpus,
    cpr_instances,
    frame_conditions,
    instantiate,
    separation_suite,
)
from cpnlogic.semantics import NeighbourhoodModel, bounded_validity_counterexample, forces

CO = "(p <= q) | (q <= p)"
ABC = [Atom(x) for x in "abc"]
FUZZ_COUNT = 1000


_capsys = None


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def _say(line):
    with _capsys.disabled():
        print(line)


def _report(n, title, ok, detail, t0):
    _say(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail}; {time.perf_counter() - t0:.2f}s)")
    assert ok, detail


def golden():
    out = []
    for args in itertools.product(ABC, repeat=3):
        out.append(instantiate(AxiomSchema.tr, args))
        out.append(instantiate(AxiomSchema.or_, args))
    out.extend(c for _, c in cpr_instances())
    return list(dict.fromkeys(out))


def test_1_example_reproduction():
    t0 = time.perf_counter()
    f = parse(CO)
    res = h_prove(f, L.N)
    m = extract(res.hypersequent, L.N)
    expected = NeighbourhoodModel(3, [[[1], [2]], [], []], {"p": [2], "q": [1]})
    rep = verify(res.hypersequent, m, L.N, f)
    code = main(["prove", "--logic", "n", "--calculus", "h", "--format", "json", CO])
    elapsed = time.perf_counter() - t0
    ok = not res.proved and m == expected and rep.ok and not forces(m, 0, f) and code == 1 and elapsed < 1
    _report(1, "co refuted with the 3-world model", ok, f"model {'matches' if m == expected else 'differs'}", t0)


def test_2_golden_derivations():
    t0 = time.perf_counter()
    slowest, failed = 0.0, []
    for f in golden():
        for engine in ("g", "h"):
            t = time.perf_counter()
            ok = g_prove(f, L.N) is not None if engine == "g" else h_prove(f, L.N).proved
            slowest = max(slowest, time.perf_counter() - t)
            if not ok:
                failed.append((engine, str(f)))
    # the modus ponens pattern behind cpr: cut the valid premiss into its use
    ab = parse("a & b")
    imp = parse("a & b -> a")
    cut_ok = g_cut_test(Sequent([], [imp]), Sequent([ab, imp], [ABC[0]]), imp, L.N)
    ok = not failed and cut_ok and slowest < 1
    _report(2, "tr, or, cpr over {a,b,c} in G and H", ok, f"{len(golden())} formulas, slowest {slowest * 1000:.1f} ms, failed {failed[:3]}", t0)


def test_3_axiom_corpus():
    t0 = time.perf_counter()
    total, failed = 0, []
    for logic in CALCULUS_LOGICS:
        for f in axiom_corpus(logic):
            total += 1
            if not (h_prove(f, logic).proved and g_prove(f, logic) is not None):
                failed.append((logic.name, str(f)))
    ok = not failed and time.perf_counter() - t0 < 60
    _report(3, "axiom corpora of all seven logics", ok, f"{total} instances, {len(failed)} failed", t0)


def test_4_separation_suite():
    t0 = time.perf_counter()
    items = separation_suite()
    bad = []
    for item in items:
        res = h_prove(item.formula, item.weaker)
        try:
            assert not res.proved
            verify(res.hypersequent, extract(res.hypersequent, item.weaker), item.weaker, item.formula)
            if item.stronger is not None:
                assert h_prove(item.formula, item.stronger).proved
        except AssertionError:
            bad.append((item.weaker.name, str(item.formula)))
    co_logics = {i.weaker for i in items if i.schema is AxiomSchema.co}
    ok = not bad and co_logics == set(CALCULUS_LOGICS) and time.perf_counter() - t0 < 30
    _report(4, "separation suite refuted with verified countermodels", ok, f"{len(items)} items, {len(bad)} failed", t0)


def _random_proofs(logic, want, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < want:
        f = random_formula(rng, rng.choice([3, 5, 7, 9]))
        if h_prove(f, logic).proved:
            out.append(f)
    return out


def test_5_soundness():
    t0 = time.perf_counter()
    checked, violations = 0, []
    for logic in CALCULUS_LOGICS:
        proved = [f for f in golden() if h_prove(f, logic).proved]
        proved += [f for f in axiom_corpus(logic) if h_prove(f, logic).proved]
        proved += [i.formula for i in separation_suite() if i.stronger is logic]
        proved += _random_proofs(logic, 500, seed=500 + CALCULUS_LOGICS.index(logic))
        groups: dict[frozenset, list[Formula]] = {}
        for f in proved:
            groups.setdefault(frozenset(atoms(f)), []).append(f)
        for fs in groups.values():
            checked += len(fs)
            hit = bounded_validity_counterexample(fs, frame_conditions(logic))
            if hit:
                violations.append((logic.name, str(hit[0])))
    ok = not violations
    _report(5, "proved formulas valid on bounded models", ok, f"{checked} formulas, {len(violations)} violations", t0)


def test_6_cross_calculus_agreement():
    t0 = time.perf_counter()
    dis = []
    for logic in CALCULUS_LOGICS:
        for f in random_formulas(FUZZ_COUNT, 8):
            if (g_prove(f, logic) is not None) != h_prove(f, logic).proved:
                dis.append((logic.name, str(f)))
    ok = not dis and time.perf_counter() - t0 < 600
    _report(6, "G and H agree on random formulas", ok, f"{FUZZ_COUNT} formulas x {len(CALCULUS_LOGICS)} logics, {len(dis)} disagreements", t0)


def _derivable_sequents(logic, want, rng):
    out = []
    while len(out) < want:
        s = random_sequent(rng, 5, 3)
        if g_prove(s, logic) is not None:
            out.append(s)
    return out


def _cut_instances(logic, want, rng):
    out = []
    while len(out) < want:
        a = random_formula(rng, rng.choice([1, 3, 5]))
        left = random_sequent(rng, 3, 2)
        right = random_sequent(rng, 3, 2)
        s1 = Sequent(left.ante, [a, *left.succ])
        s2 = Sequent([a, *right.ante], right.succ)
        if g_prove(s1, logic) is not None and g_prove(s2, logic) is not None:
            out.append((s1, s2, a))
    return out


def test_7_structural_rules():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = []
    n = 0
    for logic in CALCULUS_LOGICS:
        for s in _derivable_sequents(logic, 200, rng):
            extra = random_formula(rng, rng.choice([1, 3, 5]))
            x = rng.choice(list(s.ante + s.succ))
            dup = Sequent([*s.ante, x], s.succ) if x in s.ante else Sequent(s.ante, [*s.succ, x])
            for t, kind in (
                (Sequent([*s.ante, extra], s.succ), "weakening"),
                (Sequent(s.ante, [*s.succ, extra]), "weakening"),
                (dup, "contraction"),
            ):
                n += 1
                if g_prove(t, logic) is None:
                    bad.append((logic.name, kind, str(t)))
            if g_prove(dup.normal(), logic) is None:
                bad.append((logic.name, "contraction", str(dup)))
        for s1, s2, a in _cut_instances(logic, 200, rng):
            n += 1
            if not g_cut_test(s1, s2, a, logic):
                bad.append((logic.name, "cut", str(s1), str(s2)))
    _report(7, "weakening, contraction and cut", not bad, f"{n} instances, {len(bad)} violations", t0)


def test_8_termination():
    t0 = time.perf_counter()
    hits, most = [], 0
    for logic in CALCULUS_LOGICS:
        for f in random_formulas(FUZZ_COUNT, 8):
            try:
                most = max(most, h_prove(f, logic).steps)
            except HCeilingExceeded:
                hits.append((logic.name, str(f)))
    _report(8, "H search never hits the safety ceiling", not hits, f"max {most} steps, {len(hits)} ceiling hits", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
