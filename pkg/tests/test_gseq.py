import random

import pytest
from hypothesis import given, settings

from cpnlogic.formula import Atom, CmpPl, Imp, parse
from cpnlogic.fuzz import random_formulas, random_sequent
from cpnlogic.gseq import (
    BudgetExceeded,
    DerivationError,
    GDerivation,
    GRuleInstance,
    Sequent,
    check_derivation,
    g_applicable,
    g_cut_test,
    g_prove,
    premisses_of,
)
from cpnlogic.logics import CALCULUS_LOGICS, LogicId as L, NoCalculusError, g_rules
from cpnlogic.semantics import bounded_validity_counterexample
from cpnlogic.logics import frame_conditions

from conftest import CO, formulas

a, b, c, p, q = (Atom(x) for x in "abcpq")
ab, bc, ac = CmpPl(a, b), CmpPl(b, c), CmpPl(a, c)


def seq(left, right):
    return Sequent([parse(x) for x in left], [parse(x) for x in right])


def test_sequents_are_multisets():
    assert seq(["q", "p"], []) == seq(["p", "q"], [])
    assert seq(["p", "p"], []) != seq(["p"], [])


def test_cp0_premiss():
    s = seq(["r"], ["p <= q", "r"])
    assert premisses_of(s, GRuleInstance("CP", CmpPl(p, q)), L.N) == [seq(["q"], ["p"])]


def test_init_has_no_premisses():
    s = seq(["p", "r"], ["p", "q"])
    assert premisses_of(s, GRuleInstance("init", p), L.N) == []
    with pytest.raises(DerivationError):
        premisses_of(s, GRuleInstance("init", Atom("r")), L.N)


def test_tr_cp2_premisses_in_order():
    s = Sequent([ab, bc], [ac])
    inst = GRuleInstance("CP", ac, (ab, bc))
    assert premisses_of(s, inst, L.N) == [
        Sequent([a], [a]),
        Sequent([b], [a, b]),
        Sequent([c], [a, b, c]),
    ]
    assert (inst, premisses_of(s, inst, L.N)) in g_applicable(s, L.N)
    # the other order exposes different formulas
    swapped = premisses_of(s, GRuleInstance("CP", ac, (bc, ab)), L.N)
    assert swapped[0] == Sequent([b], [a])


def test_applicable_counts_ordered_selections():
    s = Sequent([ab, bc], [ac])
    cps = [i for i, _ in g_applicable(s, L.N) if i.rule == "CP"]
    assert len(cps) == 1 + 2 + 2  # empty, singletons, both orders


def test_absoluteness_premisses_keep_only_plausibility_formulas():
    s = Sequent([ab, p], [ac, q])
    prem = premisses_of(s, GRuleInstance("A", ac, (ab,)), L.NA)
    assert prem == [Sequent([ab, a], [ac, a]), Sequent([ab, c], [ac, a, b])]
    prem = premisses_of(s, GRuleInstance("NA", None, (ab,)), L.NNA)
    assert prem == [Sequent([ab, a], [ac]), Sequent([ab], [ac, b])]


def test_indexed_rules_need_one_principal():
    s = Sequent([ab], [])
    with pytest.raises(DerivationError):
        premisses_of(s, GRuleInstance("T", None, ()), L.NT)
    with pytest.raises(DerivationError):
        premisses_of(s, GRuleInstance("T", None, (ab,)), L.N)


def test_examples():
    d = g_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N)
    assert d is not None and "CP_2" in d.rules_used()
    check_derivation(d, L.N)
    assert g_prove(parse(CO), L.N) is None
    d = g_prove(seq(["p"], ["p"]), L.N)
    assert d.rule.rule == "init" and d.premisses == []


def test_replay_detects_tampering():
    d = g_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N)
    node = d
    while node.rule.rule != "CP":
        node = node.premisses[0]
    node.premisses[0] = GDerivation(Sequent([b], [b]), GRuleInstance("init", b))
    with pytest.raises(DerivationError):
        check_derivation(d, L.N)


def test_no_calculus_and_budget():
    with pytest.raises(NoCalculusError):
        g_prove(p, L.NU)
    with pytest.raises(BudgetExceeded):
        g_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N, budget=2)


def test_rules_used_belong_to_logic():
    for logic in CALCULUS_LOGICS:
        allowed = set(g_rules(logic))
        for f in random_formulas(60, 9, seed=5):
            d = g_prove(f, logic)
            if d is not None:
                assert {x.split("_")[0] for x in d.rules_used()} <= allowed
                check_derivation(d, logic)


@given(formulas(8))
@settings(max_examples=60)
def test_general_identity_derivable(f):
    for logic in CALCULUS_LOGICS:
        assert g_prove(Sequent([f], [f]), logic) is not None


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_greedy_agrees_with_exhaustive_enumeration(logic):
    for f in random_formulas(150, 9, seed=11):
        assert (g_prove(f, logic) is None) == (g_prove(f, logic, strategy="exhaustive") is None), str(f)


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_weakening_and_contraction(logic):
    rng = random.Random(3)
    checked = 0
    while checked < 40:
        s = random_sequent(rng, 5)
        if g_prove(s, logic) is None:
            continue
        checked += 1
        extra = next(random_formulas(1, 5, seed=rng.randrange(10**9)))
        assert g_prove(Sequent([*s.ante, extra], s.succ), logic) is not None
        assert g_prove(Sequent(s.ante, [*s.succ, extra]), logic) is not None
        for x in set(s.ante):
            assert g_prove(Sequent([*s.ante, x], s.succ), logic) is not None
            if s.ante.count(x) > 1:
                rest = list(s.ante)
                rest.remove(x)
                assert g_prove(Sequent(rest, s.succ), logic) is not None


def test_cut_on_cpr_pattern():
    # from => a & b -> a and the sequent a & b, (a & b -> a) => a, cut gives a & b => a; CP_0 then yields => a <= a & b
    ab_ = parse("a & b")
    imp = Imp(ab_, a)
    assert g_cut_test(Sequent([], [imp]), Sequent([ab_, imp], [a]), imp, L.N)
    assert g_prove(CmpPl(a, ab_), L.N) is not None


def test_cut_precondition():
    with pytest.raises(ValueError):
        g_cut_test(seq([], ["p -> p"]), seq(["q"], ["q"]), parse("p -> p"), L.N)
    with pytest.raises(ValueError):
        g_cut_test(seq([], ["p"]), seq(["p"], ["p"]), p, L.N)


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_derivable_sequents_are_valid(logic):
    proved = [s.formula() for s in (random_sequent(random.Random(i), 5) for i in range(150)) if g_prove(s, logic)]
    assert proved
    assert bounded_validity_counterexample(proved, frame_conditions(logic), samples=2000) is None
