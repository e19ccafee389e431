import pytest
from hypothesis import given

from cpnlogic.formula import (
    BOT,
    TOP,
    Atom,
    Bot,
    CmpPl,
    Imp,
    ParseError,
    atoms,
    block_complexity,
    complexity,
    conj,
    disj,
    neg,
    parse,
    render,
    subformulas,
)

from conftest import CO, formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")


def depth(f):
    if isinstance(f, (Imp, CmpPl)):
        return 1 + max(depth(f.left), depth(f.right))
    return 0


def test_example_formula_desugars_to_disjunction():
    assert parse(CO) == Imp(Imp(CmpPl(p, q), BOT), CmpPl(q, p))
    assert parse(CO) == disj(CmpPl(p, q), CmpPl(q, p))


def test_literals_and_sugar():
    assert parse("bot") == Bot()
    assert parse("top") == Imp(BOT, BOT)
    assert parse("~p") == neg(p)
    assert parse("p & q") == conj(p, q)
    assert parse("p | q") == Imp(neg(p), q)


def test_precedence_and_associativity():
    assert parse("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse("p <= q -> r") == Imp(CmpPl(p, q), r)
    assert parse("p | q <= r") == CmpPl(disj(p, q), r)
    assert parse("p & q | r") == disj(conj(p, q), r)
    assert parse("p | q | r") == disj(disj(p, q), r)
    assert parse("~p & q") == conj(neg(p), q)
    assert parse("~p <= q") == CmpPl(neg(p), q)


def test_unicode_input():
    assert parse("(p ≼ q) ∨ (q ≼ p)") == parse(CO)
    assert parse("¬p ∧ ⊤ → ⊥") == parse("~p & top -> bot")


@pytest.mark.parametrize(
    "text, pos",
    [("p <= q <= r", 7), ("p ->", 4), ("(p", 2), ("p q", 2), ("P", 0), ("p $ q", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.pos == pos


def test_empty_input_rejected():
    with pytest.raises(ParseError):
        parse("  ")


def test_render_examples():
    assert render(CmpPl(p, q)) == "p <= q"
    assert render(Imp(BOT, BOT)) == "bot -> bot"
    assert render(parse(CO), resugar=True) == CO
    assert render(parse("a & b -> c"), resugar=True) == "a & b -> c"
    assert render(CmpPl(p, q), "unicode") == "p ≼ q"
    assert render(CmpPl(p, q), "latex") == r"p \preccurlyeq q"


def test_render_minimal_parentheses():
    assert render(Imp(Imp(p, q), r)) == "(p -> q) -> r"
    assert render(Imp(p, Imp(q, r))) == "p -> q -> r"
    assert render(CmpPl(CmpPl(p, q), r)) == "(p <= q) <= r"
    assert render(CmpPl(Imp(p, q), r)) == "(p -> q) <= r"


@given(formulas(40))
def test_roundtrip_ascii(f):
    assert parse(render(f)) == f


@given(formulas(40))
def test_roundtrip_resugared_and_unicode(f):
    assert parse(render(f, resugar=True)) == f
    assert parse(render(f, "unicode", resugar=True)) == f


def test_roundtrip_reaches_depth_eight():
    f = p
    for i in range(8):
        f = CmpPl(f, q) if i % 2 else Imp(r, f)
    assert depth(f) == 8
    assert parse(render(f)) == f
    assert parse(render(f, resugar=True)) == f


def test_complexity_examples():
    assert complexity(p) == 1
    assert complexity(BOT) == 1
    assert complexity(CmpPl(p, q)) == 3
    assert block_complexity([p, q], r) == 3
    assert complexity(TOP) == 3


@given(formulas())
def test_complexity_decreases_to_proper_subformulas(f):
    for g in subformulas(f):
        if g != f:
            assert complexity(g) < complexity(f)


def brute_subformulas(f):
    out = [f]
    if isinstance(f, (Imp, CmpPl)):
        out += brute_subformulas(f.left) + brute_subformulas(f.right)
    return out


def test_subformulas():
    assert subformulas(CmpPl(p, q)) == {CmpPl(p, q), p, q}
    assert subformulas(BOT) == {BOT}
    f = parse(CO)
    # ~(p<=q) -> q<=p : itself, ~(p<=q), p<=q, bot, q<=p, p, q
    assert len(subformulas(f)) == len(set(brute_subformulas(f))) == 7


def test_atoms_and_identifier_rule():
    assert atoms(parse("x_1 <= bot -> top")) == {"x_1"}
    assert parse("bottom") == Atom("bottom")


def test_formulas_hashable_and_ordered():
    fs = [parse("q"), parse("p <= q"), parse("p")]
    assert sorted(fs) == [parse("p"), parse("p <= q"), parse("q")]
    assert len({parse(CO), parse(CO)}) == 1
