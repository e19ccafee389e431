import random

import pytest
from hypothesis import given, settings

from cpnlogic.formula import BOT, TOP, Atom, CmpPl, Imp, parse
from cpnlogic.fuzz import random_formulas
from cpnlogic.gseq import g_prove
from cpnlogic.hseq import (
    Block,
    Component,
    HCeilingExceeded,
    HDerivation,
    HDerivationError,
    HRuleInstance,
    Hypersequent,
    check_h_derivation,
    h_applicable,
    h_prove,
    is_saturated,
    premisses_of,
    unsatisfied_instances,
)
from cpnlogic.logics import CALCULUS_LOGICS, LogicId as L, NoCalculusError, axiom_corpus

from conftest import CO, formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")
pq, qp = CmpPl(p, q), CmpPl(q, p)


def one(f):
    return Hypersequent([Component((), [parse(f) if isinstance(f, str) else f])])


def example_h():
    co = parse(CO)
    return Hypersequent(
        [
            Component([Imp(pq, BOT)], [co, pq, qp], [Block([p], q), Block([q], p)]),
            Component([q], [p]),
            Component([p], [q]),
        ]
    )


def test_cmp_right_adds_block():
    h = Hypersequent([Component([r], [pq, r])])
    (prem,) = premisses_of(h, HRuleInstance("cmpR", 0, pq), L.N)
    assert prem[0] == Component([r], [pq, r], [Block([p], q)])


def test_jump_creates_component():
    h = Hypersequent([Component((), [pq], [Block([p], q)])])
    (prem,) = premisses_of(h, HRuleInstance("jp", 0, Block([p], q)), L.N)
    assert len(prem) == 2 and prem[1] == Component([q], [p])


def test_init_and_errors():
    h = Hypersequent([Component([p], [p, q])])
    assert premisses_of(h, HRuleInstance("init", 0, p), L.N) == []
    with pytest.raises(HDerivationError):
        premisses_of(h, HRuleInstance("init", 0, q), L.N)
    with pytest.raises(HDerivationError):
        premisses_of(h, HRuleInstance("T", 0, pq), L.N)
    with pytest.raises(HDerivationError):
        premisses_of(h, HRuleInstance("impR", 3, pq), L.N)


def test_cmp_left_shapes():
    h = Hypersequent([Component([pq], [], [Block([r], r)])])
    first, second = premisses_of(h, HRuleInstance("cmpL", 0, pq, Block([r], r)), L.N)
    assert first[0].blocks == (Block([q, r], r),)
    assert set(second[0].blocks) == {Block([r], r), Block([r], p)}


def test_absoluteness_propagates():
    h = Hypersequent([Component([pq], [qp]), Component([r], [])])
    (prem,) = premisses_of(h, HRuleInstance("AL", 0, pq, target=1), L.NA)
    assert pq in prem[1].ante_set
    (prem,) = premisses_of(h, HRuleInstance("AR", 0, qp, target=1), L.NA)
    assert qp in prem[1].succ_set
    with pytest.raises(HDerivationError):
        premisses_of(h, HRuleInstance("AL", 0, pq, target=1), L.N)


def test_applicable_lists_all_rules():
    h = one("p <= q")
    rules = {i.rule for i, _ in h_applicable(h, L.NN)}
    assert rules == {"cmpR", "N"}


def test_example_refutation():
    res = h_prove(parse(CO), L.N)
    assert not res.proved
    assert res.hypersequent.multiset_key() == example_h().multiset_key()
    assert res.hypersequent == example_h()
    assert [t.split()[0] for t in res.trace].count("jp") == 2


def test_saturation_examples():
    assert is_saturated(example_h(), L.N)
    assert not is_saturated(one("p <= q"), L.N)
    assert "cmpR" in {i.rule for i in unsatisfied_instances(one("p <= q"), L.N)}
    # the example leaf is not saturated for NN: N has no block <bot | top>
    assert not is_saturated(example_h(), L.NN)


def test_simple_proofs():
    res = h_prove(parse("p -> p"), L.N)
    assert res.proved
    d = res.derivation
    assert d.rule.rule == "impR" and d.premisses[0].rule.rule == "init"
    check_h_derivation(d, L.N)


def test_no_calculus_and_ceiling():
    with pytest.raises(NoCalculusError):
        h_prove(p, L.NU)
    with pytest.raises(HCeilingExceeded):
        h_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N, ceiling=2)


def test_replay_detects_tampering():
    d = h_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N).derivation
    node = d
    while len(node.premisses) == 1:
        node = node.premisses[0]
    node.premisses = node.premisses[:1]
    with pytest.raises(HDerivationError):
        check_h_derivation(d, L.N)


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_corpus_and_refutations_are_well_formed(logic):
    for f in list(axiom_corpus(logic))[:40]:
        res = h_prove(f, logic)
        assert res.proved, str(f)
        check_h_derivation(res.derivation, logic)
    for f in random_formulas(120, 8, seed=4):
        res = h_prove(f, logic)
        if not res.proved:
            assert is_saturated(res.hypersequent, logic)


def _saturate(h, logic, limit=500):
    """Naive fixpoint: follow the first premiss of the first unsatisfied instance."""
    for _ in range(limit):
        todo = [i for i in unsatisfied_instances(h, logic) if i.rule not in ("init", "botL")]
        if not todo:
            return h
        h = premisses_of(h, todo[0], logic)[-1]
    raise AssertionError("no fixpoint")


@pytest.mark.parametrize("logic", [L.N, L.NT, L.NC, L.NA])
def test_fixpoint_harness(logic):
    for f in random_formulas(60, 7, seed=9):
        h = _saturate(one(f), logic)
        if not unsatisfied_instances(h, logic):
            assert is_saturated(h, logic)


def test_determinism():
    for f in random_formulas(30, 8, seed=2):
        a, b = h_prove(f, L.NW), h_prove(f, L.NW)
        assert a.proved == b.proved and a.steps == b.steps
        if not a.proved:
            assert a.hypersequent == b.hypersequent and a.trace == b.trace


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_invertibility(logic):
    for f in random_formulas(150, 8, seed=21):
        h = one(f)
        if not h_prove(h, logic).proved:
            continue
        for inst, prems in h_applicable(h, logic):
            for pr in prems:
                assert h_prove(pr, logic).proved, (str(f), inst.describe())


def _weakenings(h, extra):
    c = h[0]
    yield Hypersequent([Component([*c.ante, extra], c.succ, c.blocks)])
    yield Hypersequent([Component(c.ante, [*c.succ, extra], c.blocks)])
    yield Hypersequent([c, Component([extra], [])])
    yield Hypersequent([Component(c.ante, c.succ, [*c.blocks, Block([extra], r)])])


@pytest.mark.parametrize("logic", CALCULUS_LOGICS)
def test_structural_rules(logic):
    rng = random.Random(13)
    for f in random_formulas(100, 8, seed=31):
        h = one(f)
        if not h_prove(h, logic).proved:
            continue
        extra = next(random_formulas(1, 5, seed=rng.randrange(10**9)))
        for w in _weakenings(h, extra):
            assert h_prove(w, logic).proved, (str(f), str(w))
        assert h_prove(Hypersequent([h[0], h[0]]), logic).proved


@given(formulas(6))
@settings(max_examples=50)
def test_agrees_with_sequent_calculus(f):
    for logic in CALCULUS_LOGICS:
        assert h_prove(f, logic).proved == (g_prove(f, logic) is not None)


def test_derivation_metrics():
    d = h_prove(parse("(a <= b) & (b <= c) -> (a <= c)"), L.N).derivation
    assert isinstance(d, HDerivation)
    assert d.height() <= d.size()
    assert d.conclusion == one("(a <= b) & (b <= c) -> (a <= c)")


def test_top_block_clause():
    h = Hypersequent([Component((), [], [Block([BOT, p], TOP)])])
    assert "N" not in {i.rule for i in unsatisfied_instances(h, L.NN)}
